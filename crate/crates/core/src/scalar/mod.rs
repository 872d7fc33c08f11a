//! Exact scalars: Gaussian rationals and elements of cyclotomic fields.
//!
//! A cyclotomic element lives in Q(zeta_L) with 4 | L, so that i is always
//! available. Elements lying in Q(i) are demoted back to [`Gaussian`], which
//! keeps equality structural.

mod cyclo;

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub use cyclo::{cyclotomic_poly, rational_nth_root, totient, CyclotomicField};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Gaussian {
    pub re: BigRational,
    pub im: BigRational,
}

#[derive(Clone, Debug)]
pub struct Cyclotomic {
    field: Arc<CyclotomicField>,
    coords: Vec<BigRational>,
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        self.field.order() == other.field.order() && self.coords == other.coords
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Scalar {
    Gaussian(Gaussian),
    Cyclotomic(Cyclotomic),
}

fn field(order: u32) -> Arc<CyclotomicField> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<CyclotomicField>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().expect("field cache poisoned");
    guard
        .entry(order)
        .or_insert_with(|| Arc::new(CyclotomicField::new(order)))
        .clone()
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Gaussian(Gaussian { re: BigRational::zero(), im: BigRational::zero() })
    }

    pub fn one() -> Self {
        Scalar::from_int(1)
    }

    pub fn i() -> Self {
        Scalar::Gaussian(Gaussian { re: BigRational::zero(), im: BigRational::one() })
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::from_rational(rat(n))
    }

    pub fn from_rational(q: BigRational) -> Self {
        Scalar::Gaussian(Gaussian { re: q, im: BigRational::zero() })
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        Scalar::from_rational(BigRational::new(n.into(), d.into()))
    }

    pub fn gaussian(re: BigRational, im: BigRational) -> Self {
        Scalar::Gaussian(Gaussian { re, im })
    }

    /// The primitive root exp(2 pi i / r).
    pub fn zeta(r: u32) -> Self {
        assert!(r >= 1, "zeta order must be positive");
        let l = r.lcm(&4);
        let f = field(l);
        let coords = f.zeta_power(l / r);
        Scalar::from_coords(f, coords)
    }

    fn from_coords(field: Arc<CyclotomicField>, coords: Vec<BigRational>) -> Self {
        // demote if the element lies in span{1, i}
        let ic = field.i_coords();
        let k = ic
            .iter()
            .enumerate()
            .skip(1)
            .find(|(_, c)| !c.is_zero())
            .map(|(k, _)| k)
            .expect("i is irrational");
        let b = &coords[k] / &ic[k];
        let a = &coords[0] - &b * &ic[0];
        let matches = coords.iter().enumerate().all(|(t, c)| {
            let expect = if t == 0 { &a + &b * &ic[0] } else { &b * &ic[t] };
            *c == expect
        });
        if matches {
            Scalar::Gaussian(Gaussian { re: a, im: b })
        } else {
            Scalar::Cyclotomic(Cyclotomic { field, coords })
        }
    }

    fn lift_to(&self, f: &Arc<CyclotomicField>) -> Vec<BigRational> {
        match self {
            Scalar::Cyclotomic(c) => c.coords.clone(),
            Scalar::Gaussian(g) => {
                let mut v: Vec<BigRational> = f.i_coords().iter().map(|c| c * &g.im).collect();
                v[0] += &g.re;
                v
            }
        }
    }

    /// The cyclotomic order L of the ambient field, or None for Q(i).
    pub fn field_order(&self) -> Option<u32> {
        match self {
            Scalar::Gaussian(_) => None,
            Scalar::Cyclotomic(c) => Some(c.field.order()),
        }
    }

    fn common_field(&self, other: &Scalar) -> Result<Option<Arc<CyclotomicField>>> {
        match (self, other) {
            (Scalar::Gaussian(_), Scalar::Gaussian(_)) => Ok(None),
            (Scalar::Cyclotomic(a), Scalar::Gaussian(_)) => Ok(Some(a.field.clone())),
            (Scalar::Gaussian(_), Scalar::Cyclotomic(b)) => Ok(Some(b.field.clone())),
            (Scalar::Cyclotomic(a), Scalar::Cyclotomic(b)) => {
                if a.field.order() == b.field.order() {
                    Ok(Some(a.field.clone()))
                } else {
                    Err(Error::IncompatibleFields { left: a.field.order(), right: b.field.order() })
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Gaussian(g) => g.re.is_zero() && g.im.is_zero(),
            Scalar::Cyclotomic(_) => false,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Gaussian(g) => g.re.is_one() && g.im.is_zero(),
            Scalar::Cyclotomic(_) => false,
        }
    }

    /// The value as a rational number, if it is one.
    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Gaussian(g) if g.im.is_zero() => Some(&g.re),
            _ => None,
        }
    }

    pub fn checked_add(&self, other: &Scalar) -> Result<Scalar> {
        if let (Scalar::Gaussian(a), Scalar::Gaussian(b)) = (self, other) {
            return Ok(Scalar::gaussian(&a.re + &b.re, &a.im + &b.im));
        }
        let f = self.common_field(other)?.expect("cyclotomic operand");
        let x = self.lift_to(&f);
        let y = other.lift_to(&f);
        let s = x.iter().zip(&y).map(|(a, b)| a + b).collect();
        Ok(Scalar::from_coords(f, s))
    }

    pub fn checked_sub(&self, other: &Scalar) -> Result<Scalar> {
        self.checked_add(&-other)
    }

    pub fn checked_mul(&self, other: &Scalar) -> Result<Scalar> {
        if let (Scalar::Gaussian(a), Scalar::Gaussian(b)) = (self, other) {
            if a.im.is_zero() && b.im.is_zero() {
                return Ok(Scalar::from_rational(&a.re * &b.re));
            }
            let re = &a.re * &b.re - &a.im * &b.im;
            let im = &a.re * &b.im + &a.im * &b.re;
            return Ok(Scalar::gaussian(re, im));
        }
        if self.is_zero() || other.is_zero() {
            return Ok(Scalar::zero());
        }
        let f = self.common_field(other)?.expect("cyclotomic operand");
        let p = f.mul(&self.lift_to(&f), &other.lift_to(&f));
        Ok(Scalar::from_coords(f, p))
    }

    pub fn inv(&self) -> Result<Scalar> {
        match self {
            Scalar::Gaussian(g) => {
                if g.im.is_zero() {
                    if g.re.is_zero() {
                        return Err(Error::DivisionByZero);
                    }
                    return Ok(Scalar::from_rational(g.re.recip()));
                }
                let n = &g.re * &g.re + &g.im * &g.im;
                Ok(Scalar::gaussian(&g.re / &n, -&g.im / &n))
            }
            Scalar::Cyclotomic(c) => {
                let v = c.field.inv(&c.coords)?;
                Ok(Scalar::from_coords(c.field.clone(), v))
            }
        }
    }

    pub fn checked_div(&self, other: &Scalar) -> Result<Scalar> {
        self.checked_mul(&other.inv()?)
    }

    pub fn pow(&self, n: u32) -> Scalar {
        let mut base = self.clone();
        let mut acc = Scalar::one();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Integer power; negative exponents require an invertible base.
    pub fn powi(&self, n: i64) -> Result<Scalar> {
        if n >= 0 {
            Ok(self.pow(n as u32))
        } else {
            Ok(self.inv()?.pow((-n) as u32))
        }
    }

    /// Complex conjugate.
    pub fn conj(&self) -> Scalar {
        match self {
            Scalar::Gaussian(g) => Scalar::gaussian(g.re.clone(), -&g.im),
            Scalar::Cyclotomic(c) => Scalar::from_coords(c.field.clone(), c.field.conj(&c.coords)),
        }
    }

    /// |x|^2 as an element of the same field.
    pub fn norm_sq(&self) -> Scalar {
        self * &self.conj()
    }

    /// Compares |x| with 1 exactly.
    pub fn modulus_compare(&self) -> Result<Ordering> {
        match self {
            Scalar::Gaussian(g) => Ok((&g.re * &g.re + &g.im * &g.im).cmp(&BigRational::one())),
            Scalar::Cyclotomic(_) => {
                if self.root_of_unity_order().is_some() {
                    return Ok(Ordering::Equal);
                }
                match self.norm_sq().as_rational() {
                    Some(q) => Ok(q.cmp(&BigRational::one())),
                    None => Err(Error::Unsupported(format!(
                        "cannot compare |{self}| with 1: |x|^2 is not rational"
                    ))),
                }
            }
        }
    }

    /// The least r >= 1 with x^r = 1, if x is a root of unity.
    pub fn root_of_unity_order(&self) -> Option<u32> {
        match self {
            Scalar::Gaussian(g) => {
                let one = BigRational::one();
                let neg = -BigRational::one();
                if g.im.is_zero() {
                    if g.re == one {
                        Some(1)
                    } else if g.re == neg {
                        Some(2)
                    } else {
                        None
                    }
                } else if g.re.is_zero() && (g.im == one || g.im == neg) {
                    Some(4)
                } else {
                    None
                }
            }
            Scalar::Cyclotomic(c) => {
                let l = c.field.order();
                if !self.pow(l).is_one() {
                    return None;
                }
                (1..=l).filter(|d| l % d == 0).find(|&d| self.pow(d).is_one())
            }
        }
    }

    /// Exact test of x^n = d.
    pub fn power_equals(&self, n: u32, d: &Scalar) -> bool {
        self.pow(n) == *d
    }

    /// Roots of unity available in the ambient field of `self`.
    fn roots_in_field(&self) -> Vec<Scalar> {
        match self {
            Scalar::Gaussian(_) => vec![Scalar::one(), Scalar::i(), Scalar::from_int(-1), -Scalar::i()],
            Scalar::Cyclotomic(c) => {
                let f = c.field.clone();
                (0..f.order()).map(|k| Scalar::from_coords(f.clone(), f.zeta_power(k))).collect()
            }
        }
    }

    /// An exact k-th root in the ambient field, when one is found.
    ///
    /// Handles roots of unity and values q*u with q a positive rational and u a
    /// fourth root of unity. Anything else returns None.
    pub fn nth_root(&self, k: u32) -> Option<Scalar> {
        if k == 0 {
            return None;
        }
        if k == 1 || self.is_zero() {
            return Some(self.clone());
        }
        if self.root_of_unity_order().is_some() {
            return self.roots_in_field().into_iter().find(|y| y.pow(k) == *self);
        }
        if let Scalar::Gaussian(g) = self {
            let (q, unit) = if g.im.is_zero() {
                (g.re.abs(), Scalar::from_rational(g.re.signum()))
            } else if g.re.is_zero() {
                (g.im.abs(), Scalar::gaussian(BigRational::zero(), g.im.signum()))
            } else {
                return None;
            };
            let r = rational_nth_root(&q, k)?;
            let v = unit.roots_in_field().into_iter().find(|y| y.pow(k) == unit)?;
            return Some(&Scalar::from_rational(r) * &v);
        }
        None
    }

    /// Whether the printed form needs parentheses when used as a coefficient.
    pub fn is_compound(&self) -> bool {
        match self {
            Scalar::Gaussian(g) => !g.re.is_zero() && !g.im.is_zero(),
            Scalar::Cyclotomic(c) => c.coords.iter().filter(|x| !x.is_zero()).count() > 1,
        }
    }

    /// True when the printed form starts with a minus sign and is otherwise simple.
    pub fn is_negative_simple(&self) -> bool {
        match self {
            Scalar::Gaussian(g) => {
                (g.im.is_zero() && g.re.is_negative()) || (g.re.is_zero() && g.im.is_negative())
            }
            Scalar::Cyclotomic(c) => {
                let nz: Vec<_> = c.coords.iter().filter(|x| !x.is_zero()).collect();
                nz.len() == 1 && nz[0].is_negative()
            }
        }
    }
}

fn fmt_imag(f: &mut fmt::Formatter<'_>, im: &BigRational) -> fmt::Result {
    if im.is_one() {
        write!(f, "i")
    } else if *im == -BigRational::one() {
        write!(f, "-i")
    } else {
        write!(f, "{im}i")
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Gaussian(g) => {
                if g.im.is_zero() {
                    write!(f, "{}", g.re)
                } else if g.re.is_zero() {
                    fmt_imag(f, &g.im)
                } else {
                    write!(f, "{}", g.re)?;
                    if g.im.is_positive() {
                        write!(f, "+")?;
                    }
                    fmt_imag(f, &g.im)
                }
            }
            Scalar::Cyclotomic(c) => {
                let l = c.field.order();
                let mut first = true;
                for (k, x) in c.coords.iter().enumerate() {
                    if x.is_zero() {
                        continue;
                    }
                    let mag = x.abs();
                    if x.is_negative() {
                        write!(f, "{}", if first { "-" } else { " - " })?;
                    } else if !first {
                        write!(f, " + ")?;
                    }
                    first = false;
                    let z = match k {
                        0 => String::new(),
                        1 => format!("zeta({l})"),
                        _ => format!("zeta({l})^{k}"),
                    };
                    if k == 0 {
                        write!(f, "{mag}")?;
                    } else if mag.is_one() {
                        write!(f, "{z}")?;
                    } else {
                        write!(f, "{mag}*{z}")?;
                    }
                }
                Ok(())
            }
        }
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl From<BigRational> for Scalar {
    fn from(q: BigRational) -> Self {
        Scalar::from_rational(q)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Gaussian(g) => Scalar::gaussian(-&g.re, -&g.im),
            Scalar::Cyclotomic(c) => Scalar::Cyclotomic(Cyclotomic {
                field: c.field.clone(),
                coords: c.coords.iter().map(|x| -x).collect(),
            }),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&Scalar> for &Scalar {
            type Output = Scalar;
            /// Panics on operands from different cyclotomic fields.
            fn $method(self, rhs: &Scalar) -> Scalar {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $trait<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
        impl $trait<Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                self.$method(&rhs)
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);
binop!(Div, div, checked_div);
