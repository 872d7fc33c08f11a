//! Real quadratic surds `p + q sqrt(D)` with exact ordering.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

/// `p + q sqrt(d)` with `d` square-free; `d = 0` exactly when `q = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadraticSurd {
    p: BigRational,
    q: BigRational,
    d: BigInt,
}

/// Splits `n > 0` as `k^2 * m` with m square-free.
fn square_free_split(n: &BigInt) -> (BigInt, BigInt) {
    let mut rest = n.clone();
    let mut k = BigInt::one();
    let mut p = BigInt::from(2);
    while &p * &p <= rest {
        let sq = &p * &p;
        while (&rest % &sq).is_zero() {
            rest /= &sq;
            k *= &p;
        }
        p += 1;
    }
    (k, rest)
}

impl QuadraticSurd {
    pub fn rational(p: BigRational) -> Self {
        QuadraticSurd { p, q: BigRational::zero(), d: BigInt::zero() }
    }

    pub fn from_int(n: i64) -> Self {
        QuadraticSurd::rational(BigRational::from_integer(n.into()))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        QuadraticSurd::rational(BigRational::new(n.into(), d.into()))
    }

    /// `p + q sqrt(d)` for any nonnegative integer d, canonicalized.
    pub fn new(p: BigRational, q: BigRational, d: BigInt) -> Self {
        assert!(!d.is_negative(), "radicand must be nonnegative");
        if q.is_zero() || d.is_zero() {
            return QuadraticSurd::rational(p);
        }
        let (k, m) = square_free_split(&d);
        let q = q * BigRational::from_integer(k);
        if m.is_one() {
            return QuadraticSurd::rational(p + q);
        }
        QuadraticSurd { p, q, d: m }
    }

    /// Square root of a nonnegative rational.
    pub fn sqrt(r: &BigRational) -> Self {
        assert!(!r.is_negative(), "square root of a negative rational");
        // sqrt(a/b) = sqrt(a b) / b
        let n = r.numer() * r.denom();
        QuadraticSurd::new(BigRational::zero(), BigRational::new(BigInt::one(), r.denom().clone()), n)
    }

    pub fn p(&self) -> &BigRational {
        &self.p
    }

    pub fn q(&self) -> &BigRational {
        &self.q
    }

    pub fn radicand(&self) -> &BigInt {
        &self.d
    }

    pub fn is_rational(&self) -> bool {
        self.q.is_zero()
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        if self.is_rational() {
            Some(&self.p)
        } else {
            None
        }
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_zero() && self.q.is_zero()
    }

    fn common_d(&self, o: &QuadraticSurd) -> BigInt {
        match (self.d.is_zero(), o.d.is_zero()) {
            (true, _) => o.d.clone(),
            (_, true) => self.d.clone(),
            _ => {
                assert_eq!(self.d, o.d, "surds with different radicands");
                self.d.clone()
            }
        }
    }

    /// Whether both operands share a radicand (or one is rational).
    pub fn compatible(&self, o: &QuadraticSurd) -> bool {
        self.d.is_zero() || o.d.is_zero() || self.d == o.d
    }

    /// Sign of the value: -1, 0 or 1.
    pub fn signum(&self) -> i32 {
        let sp = sign(&self.p);
        let sq = sign(&self.q);
        if sq == 0 {
            return sp;
        }
        if sp == 0 || sp == sq {
            return sq;
        }
        // opposite signs: compare p^2 with q^2 d
        let lhs = &self.p * &self.p;
        let rhs = &self.q * &self.q * BigRational::from_integer(self.d.clone());
        match lhs.cmp(&rhs) {
            Ordering::Greater => sp,
            Ordering::Less => sq,
            Ordering::Equal => 0,
        }
    }

    pub fn inv(&self) -> QuadraticSurd {
        // (p - q sqrt d) / (p^2 - q^2 d)
        let n = &self.p * &self.p - &self.q * &self.q * BigRational::from_integer(self.d.clone());
        assert!(!n.is_zero(), "inverse of zero surd");
        QuadraticSurd::new(&self.p / &n, -&self.q / &n, self.d.clone())
    }

    pub fn pow(&self, n: u32) -> QuadraticSurd {
        let mut acc = QuadraticSurd::from_int(1);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    pub fn min(a: QuadraticSurd, b: QuadraticSurd) -> QuadraticSurd {
        if a <= b {
            a
        } else {
            b
        }
    }

    /// Approximate value, for display only.
    pub fn to_f64(&self) -> f64 {
        use num_traits::ToPrimitive;
        let p = self.p.to_f64().unwrap_or(f64::NAN);
        let q = self.q.to_f64().unwrap_or(f64::NAN);
        let d = self.d.to_f64().unwrap_or(f64::NAN);
        p + q * d.sqrt()
    }
}

fn sign(x: &BigRational) -> i32 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

impl PartialOrd for QuadraticSurd {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QuadraticSurd {
    /// Panics when both sides carry different radicands.
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).signum().cmp(&0)
    }
}

impl fmt::Display for QuadraticSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.q.is_zero() {
            return write!(f, "{}", self.p);
        }
        let root = if self.q.is_one() {
            format!("sqrt({})", self.d)
        } else if self.q == -BigRational::one() {
            format!("-sqrt({})", self.d)
        } else {
            format!("{}*sqrt({})", self.q, self.d)
        };
        if self.p.is_zero() {
            write!(f, "{root}")
        } else if self.q.is_negative() {
            write!(f, "{} - {}", self.p, root.trim_start_matches('-'))
        } else {
            write!(f, "{} + {}", self.p, root)
        }
    }
}

impl Serialize for QuadraticSurd {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl Add for &QuadraticSurd {
    type Output = QuadraticSurd;
    fn add(self, o: &QuadraticSurd) -> QuadraticSurd {
        let d = self.common_d(o);
        QuadraticSurd::new(&self.p + &o.p, &self.q + &o.q, d)
    }
}

impl Sub for &QuadraticSurd {
    type Output = QuadraticSurd;
    fn sub(self, o: &QuadraticSurd) -> QuadraticSurd {
        self + &(-o)
    }
}

impl Neg for &QuadraticSurd {
    type Output = QuadraticSurd;
    fn neg(self) -> QuadraticSurd {
        QuadraticSurd { p: -&self.p, q: -&self.q, d: self.d.clone() }
    }
}

impl Mul for &QuadraticSurd {
    type Output = QuadraticSurd;
    fn mul(self, o: &QuadraticSurd) -> QuadraticSurd {
        let d = self.common_d(o);
        let dr = BigRational::from_integer(d.clone());
        let p = &self.p * &o.p + &self.q * &o.q * dr;
        let q = &self.p * &o.q + &self.q * &o.p;
        QuadraticSurd::new(p, q, d)
    }
}

impl Div for &QuadraticSurd {
    type Output = QuadraticSurd;
    fn div(self, o: &QuadraticSurd) -> QuadraticSurd {
        self * &o.inv()
    }
}

macro_rules! owned {
    ($tr:ident, $m:ident) => {
        impl $tr for QuadraticSurd {
            type Output = QuadraticSurd;
            fn $m(self, o: QuadraticSurd) -> QuadraticSurd {
                (&self).$m(&o)
            }
        }
    };
}
owned!(Add, add);
owned!(Sub, sub);
owned!(Mul, mul);
owned!(Div, div);

/// Integer square root test used by callers that need exact roots.
pub fn exact_isqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    if &r * &r == *n {
        Some(r)
    } else {
        None
    }
}
