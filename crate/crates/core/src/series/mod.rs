//! Truncated power series in one and two variables with exact coefficients.
//!
//! A series stores its coefficients up to a truncation order `N` (total
//! degree); nothing is claimed above it. Binary operations take the smaller
//! truncation of their operands.

mod poly;
mod uni;

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub use poly::UniPoly;
pub use uni::UniSeries;

/// Truncation used for exact polynomials such as blow-up charts.
pub const POLY_TRUNC: u32 = 1 << 20;

/// Vanishing order of a truncated series.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Order {
    Finite(u32),
    /// No nonzero coefficient up to the truncation order carried here.
    AboveTruncation(u32),
}

impl Order {
    pub fn finite(self) -> Option<u32> {
        match self {
            Order::Finite(n) => Some(n),
            Order::AboveTruncation(_) => None,
        }
    }

    pub fn is_above_truncation(self) -> bool {
        matches!(self, Order::AboveTruncation(_))
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(n) => write!(f, "{n}"),
            Order::AboveTruncation(n) => write!(f, ">{n}"),
        }
    }
}

/// A monomial times a unit: `z^a w^b * unit`.
#[derive(Clone, Debug, PartialEq)]
pub struct MonomialFactor {
    pub a: u32,
    pub b: u32,
    pub unit: BiSeries,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BiSeries {
    terms: BTreeMap<(u32, u32), Scalar>,
    trunc: u32,
}

fn clamp(t: u64) -> u32 {
    t.min(POLY_TRUNC as u64) as u32
}

impl BiSeries {
    pub fn zero(trunc: u32) -> Self {
        BiSeries { terms: BTreeMap::new(), trunc }
    }

    pub fn constant(c: Scalar, trunc: u32) -> Self {
        BiSeries::monomial(c, 0, 0, trunc)
    }

    pub fn one(trunc: u32) -> Self {
        BiSeries::constant(Scalar::one(), trunc)
    }

    pub fn monomial(c: Scalar, i: u32, j: u32, trunc: u32) -> Self {
        let mut s = BiSeries::zero(trunc);
        s.add_term(i, j, c);
        s
    }

    pub fn z(trunc: u32) -> Self {
        BiSeries::monomial(Scalar::one(), 1, 0, trunc)
    }

    pub fn w(trunc: u32) -> Self {
        BiSeries::monomial(Scalar::one(), 0, 1, trunc)
    }

    pub fn from_terms<I: IntoIterator<Item = ((u32, u32), Scalar)>>(terms: I, trunc: u32) -> Self {
        let mut s = BiSeries::zero(trunc);
        for ((i, j), c) in terms {
            s.add_term(i, j, c);
        }
        s
    }

    /// An exact polynomial, carried with the large [`POLY_TRUNC`] order.
    pub fn polynomial<I: IntoIterator<Item = ((u32, u32), Scalar)>>(terms: I) -> Self {
        BiSeries::from_terms(terms, POLY_TRUNC)
    }

    /// Adds `c z^i w^j`, dropping it when above the truncation.
    pub fn add_term(&mut self, i: u32, j: u32, c: Scalar) {
        if c.is_zero() || i as u64 + j as u64 > self.trunc as u64 {
            return;
        }
        match self.terms.entry((i, j)) {
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let v = e.get() + &c;
                if v.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
        }
    }

    pub fn trunc(&self) -> u32 {
        self.trunc
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &Scalar)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// True when every stored coefficient vanishes.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, i: u32, j: u32) -> Scalar {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn constant_term(&self) -> Scalar {
        self.coeff(0, 0)
    }

    /// Drops everything above total degree `n` (never raises the truncation).
    pub fn truncated(&self, n: u32) -> BiSeries {
        let t = n.min(self.trunc);
        BiSeries {
            terms: self.terms.iter().filter(|((i, j), _)| i + j <= t).map(|(k, v)| (*k, v.clone())).collect(),
            trunc: t,
        }
    }

    /// Replaces the truncation order. Only sound when the caller knows the
    /// coefficients are exact up to `n`.
    pub fn with_trunc(&self, n: u32) -> BiSeries {
        let mut s = self.truncated(n);
        s.trunc = n;
        s
    }

    pub fn order(&self) -> Order {
        match self.terms.keys().map(|(i, j)| i + j).min() {
            Some(d) => Order::Finite(d),
            None => Order::AboveTruncation(self.trunc),
        }
    }

    /// Least power of z across the support.
    pub fn z_order(&self) -> Option<u32> {
        self.terms.keys().map(|k| k.0).min()
    }

    /// Least power of w across the support.
    pub fn w_order(&self) -> Option<u32> {
        self.terms.keys().map(|k| k.1).min()
    }

    pub fn map_coeffs<F: FnMut(&Scalar) -> Scalar>(&self, mut f: F) -> BiSeries {
        BiSeries::from_terms(self.terms.iter().map(|(k, v)| (*k, f(v))), self.trunc)
    }

    pub fn scale(&self, c: &Scalar) -> BiSeries {
        if c.is_zero() {
            return BiSeries::zero(self.trunc);
        }
        self.map_coeffs(|v| v * c)
    }

    pub fn add(&self, other: &BiSeries) -> BiSeries {
        let t = self.trunc.min(other.trunc);
        let mut s = self.truncated(t);
        for ((i, j), c) in &other.terms {
            s.add_term(*i, *j, c.clone());
        }
        s
    }

    pub fn sub(&self, other: &BiSeries) -> BiSeries {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> BiSeries {
        self.map_coeffs(|v| -v)
    }

    pub fn mul(&self, other: &BiSeries) -> BiSeries {
        self.mul_to(other, self.trunc.min(other.trunc))
    }

    /// Product computed up to total degree `t`; the caller vouches for `t`.
    fn mul_to(&self, other: &BiSeries, t: u32) -> BiSeries {
        let mut acc: BTreeMap<(u32, u32), Scalar> = BTreeMap::new();
        for ((i1, j1), a) in &self.terms {
            let d1 = i1 + j1;
            if d1 > t {
                continue;
            }
            for ((i2, j2), b) in &other.terms {
                if d1 + i2 + j2 > t {
                    continue;
                }
                let p = a * b;
                let e = acc.entry((i1 + i2, j1 + j2)).or_insert_with(Scalar::zero);
                *e = &*e + &p;
            }
        }
        acc.retain(|_, v| !v.is_zero());
        BiSeries { terms: acc, trunc: t }
    }

    pub fn pow(&self, n: u32) -> BiSeries {
        let mut acc = BiSeries::one(self.trunc);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// `self(g1, g2)` for g1, g2 in the maximal ideal.
    ///
    /// The result is known up to `min(N_g1, N_g2, (N_self + 1) m - 1)` where m
    /// is the least order of g1, g2.
    pub fn compose(&self, g1: &BiSeries, g2: &BiSeries) -> Result<BiSeries> {
        if !g1.constant_term().is_zero() || !g2.constant_term().is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        let m = [g1.order().finite(), g2.order().finite()].into_iter().flatten().min();
        let mut t = g1.trunc.min(g2.trunc) as u64;
        if let Some(m) = m {
            t = t.min((self.trunc as u64 + 1) * m as u64 - 1);
        }
        let t = clamp(t);
        let g1 = g1.truncated(t);
        let g2 = g2.truncated(t);
        let max_i = self.terms.keys().map(|k| k.0).max().unwrap_or(0);
        let max_j = self.terms.keys().map(|k| k.1).max().unwrap_or(0);
        let mut p1 = vec![BiSeries::one(t)];
        for k in 1..=max_i as usize {
            let next = p1[k - 1].mul_to(&g1, t);
            p1.push(next);
        }
        // Horner in g2 over the coefficient series A_j = sum_i c_ij g1^i
        let mut acc = BiSeries::zero(t);
        for j in (0..=max_j).rev() {
            if j < max_j {
                acc = acc.mul_to(&g2, t);
            }
            for ((i, jj), c) in &self.terms {
                if *jj == j {
                    let term = p1[*i as usize].scale(c);
                    acc = acc.add(&term);
                }
            }
        }
        acc.trunc = t;
        Ok(acc)
    }

    /// Multiplicative inverse of a unit.
    pub fn unit_reciprocal(&self) -> Result<BiSeries> {
        let c0 = self.constant_term();
        if c0.is_zero() {
            return Err(Error::NotAUnit);
        }
        let inv0 = c0.inv()?;
        let n = self.trunc;
        let mut r: BTreeMap<(u32, u32), Scalar> = BTreeMap::new();
        r.insert((0, 0), inv0.clone());
        let rest: Vec<_> = self.terms.iter().filter(|(k, _)| **k != (0, 0)).collect();
        for d in 1..=n {
            for i in 0..=d {
                let j = d - i;
                let mut s = Scalar::zero();
                for ((k, l), u) in &rest {
                    if *k <= i && *l <= j {
                        if let Some(rv) = r.get(&(i - k, j - l)) {
                            s = &s + &(*u * rv);
                        }
                    }
                }
                if !s.is_zero() {
                    r.insert((i, j), -(&s * &inv0));
                }
            }
        }
        Ok(BiSeries { terms: r, trunc: n })
    }

    /// Writes the series as `z^a w^b * unit` if the lowest z- and w-powers meet
    /// at a nonzero coefficient. The unit is known to order `N - a - b`.
    pub fn monomial_factor(&self) -> Option<MonomialFactor> {
        let a = self.z_order()?;
        let b = self.w_order()?;
        if self.coeff(a, b).is_zero() {
            return None;
        }
        let unit = self.div_monomial(a, b)?;
        Some(MonomialFactor { a, b, unit })
    }

    /// Exact division by `z^a w^b`, if every stored term is divisible.
    pub fn div_monomial(&self, a: u32, b: u32) -> Option<BiSeries> {
        if self.terms.keys().any(|(i, j)| *i < a || *j < b) {
            return None;
        }
        let t = self.trunc.saturating_sub(a + b);
        Some(BiSeries::from_terms(
            self.terms.iter().map(|((i, j), c)| ((i - a, j - b), c.clone())),
            t,
        ))
    }

    /// Multiplication by `z^a w^b`.
    pub fn mul_monomial(&self, a: u32, b: u32) -> BiSeries {
        BiSeries::from_terms(
            self.terms.iter().map(|((i, j), c)| ((i + a, j + b), c.clone())),
            clamp(self.trunc as u64 + a as u64 + b as u64),
        )
    }

    /// `self / den` when `den = z^a w^b * unit` and `self` is divisible by the monomial.
    pub fn exact_div(&self, den: &BiSeries) -> Result<BiSeries> {
        let mf = den.monomial_factor().ok_or_else(|| {
            Error::IndeterminateLift("denominator is not a monomial times a unit".into())
        })?;
        let num = self.div_monomial(mf.a, mf.b).ok_or_else(|| {
            Error::IndeterminateLift(format!("numerator is not divisible by z^{} w^{}", mf.a, mf.b))
        })?;
        Ok(num.mul(&mf.unit.unit_reciprocal()?))
    }

    /// `phi(z, theta(z))` for a curve `w = theta(z)` through the origin.
    pub fn eval_along_curve(&self, theta: &UniSeries) -> Result<UniSeries> {
        if !theta.coeff(0).is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        let t = self.trunc.min(theta.trunc());
        let theta = theta.truncated(t);
        let max_j = self.terms.keys().map(|k| k.1).max().unwrap_or(0);
        let mut powers = vec![UniSeries::one(t)];
        for k in 1..=max_j as usize {
            let next = powers[k - 1].mul(&theta);
            powers.push(next);
        }
        let mut out = UniSeries::zero(t);
        for ((i, j), c) in &self.terms {
            let term = powers[*j as usize].mul_monomial(*i).scale(c);
            out = out.add(&term);
        }
        Ok(out.truncated(t))
    }

    /// `phi(z, 0)`.
    pub fn restrict_w_zero(&self) -> UniSeries {
        UniSeries::from_terms(
            self.terms.iter().filter(|(k, _)| k.1 == 0).map(|(k, c)| (k.0, c.clone())),
            self.trunc,
        )
    }

    /// `phi(0, w)`.
    pub fn restrict_z_zero(&self) -> UniSeries {
        UniSeries::from_terms(
            self.terms.iter().filter(|(k, _)| k.0 == 0).map(|(k, c)| (k.1, c.clone())),
            self.trunc,
        )
    }

    pub fn partial_z(&self) -> BiSeries {
        BiSeries::from_terms(
            self.terms
                .iter()
                .filter(|(k, _)| k.0 > 0)
                .map(|((i, j), c)| ((i - 1, *j), c * &Scalar::from_int(*i as i64))),
            self.trunc.saturating_sub(1),
        )
    }

    pub fn partial_w(&self) -> BiSeries {
        BiSeries::from_terms(
            self.terms
                .iter()
                .filter(|(k, _)| k.1 > 0)
                .map(|((i, j), c)| ((*i, j - 1), c * &Scalar::from_int(*j as i64))),
            self.trunc.saturating_sub(1),
        )
    }

    /// Coefficients of the homogeneous part of degree `d` as a polynomial in
    /// `theta`, i.e. `P(1, theta)`.
    pub fn homogeneous_part(&self, d: u32) -> UniPoly {
        let mut coeffs = vec![Scalar::zero(); d as usize + 1];
        for ((i, j), c) in &self.terms {
            if i + j == d {
                coeffs[*j as usize] = c.clone();
            }
        }
        UniPoly::new(coeffs)
    }

    /// Terms of total degree exactly `d`, as `(i, coefficient)`.
    pub fn degree_terms(&self, d: u32) -> Vec<(u32, Scalar)> {
        self.terms.iter().filter(|((i, j), _)| i + j == d).map(|((i, _), c)| (*i, c.clone())).collect()
    }

    /// Whether the stored coefficients agree with `other` up to degree `n`.
    pub fn agrees_to(&self, other: &BiSeries, n: u32) -> bool {
        self.truncated(n).terms == other.truncated(n).terms
    }
}

fn fmt_monomial(i: u32, j: u32) -> String {
    let mut parts = Vec::new();
    match i {
        0 => {}
        1 => parts.push("z".to_string()),
        _ => parts.push(format!("z^{i}")),
    }
    match j {
        0 => {}
        1 => parts.push("w".to_string()),
        _ => parts.push(format!("w^{j}")),
    }
    parts.join("*")
}

/// Formats a coefficient-monomial term; `mono` may be empty.
pub(crate) fn fmt_term(c: &Scalar, mono: &str) -> String {
    if mono.is_empty() {
        return if c.is_compound() { format!("({c})") } else { c.to_string() };
    }
    if c.is_one() {
        return mono.to_string();
    }
    if *c == Scalar::from_int(-1) {
        return format!("-{mono}");
    }
    if c.is_compound() {
        format!("({c})*{mono}")
    } else {
        format!("{c}*{mono}")
    }
}

/// Joins signed terms into a sum with ` + ` / ` - ` separators.
pub(crate) fn fmt_sum(items: Vec<(Scalar, String)>) -> String {
    if items.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, (c, mono)) in items.into_iter().enumerate() {
        if k == 0 {
            out.push_str(&fmt_term(&c, &mono));
        } else if c.is_negative_simple() {
            out.push_str(" - ");
            out.push_str(&fmt_term(&-c, &mono));
        } else {
            out.push_str(" + ");
            out.push_str(&fmt_term(&c, &mono));
        }
    }
    out
}

impl fmt::Display for BiSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut keys: Vec<_> = self.terms.iter().collect();
        keys.sort_by_key(|((i, j), _)| (i + j, *i));
        let items = keys.into_iter().map(|((i, j), c)| (c.clone(), fmt_monomial(*i, *j))).collect();
        write!(f, "{}", fmt_sum(items))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    #[test]
    fn product_respects_truncation() {
        let a = BiSeries::from_terms([((1, 0), s(1)), ((0, 1), s(1))], 4);
        let p = a.pow(5);
        assert!(p.is_zero());
        let q = a.pow(2);
        assert_eq!(q.coeff(1, 1), s(2));
        assert_eq!(q.trunc(), 4);
    }

    #[test]
    fn compose_monomials() {
        let f = BiSeries::monomial(s(1), 0, 2, 20);
        let g1 = BiSeries::monomial(s(1), 0, 2, 20);
        let g2 = BiSeries::monomial(s(1), 3, 0, 20);
        let c = f.compose(&g1, &g2).unwrap();
        assert_eq!(c, BiSeries::monomial(s(1), 6, 0, 20));
    }

    #[test]
    fn compose_truncation_grows_with_multiplicity() {
        let f = BiSeries::monomial(s(1), 1, 0, 5);
        let g = BiSeries::monomial(s(1), 2, 0, 100);
        let c = f.compose(&g, &g).unwrap();
        assert_eq!(c.trunc(), 11);
    }

    #[test]
    fn reciprocal() {
        let u = BiSeries::from_terms([((0, 0), s(2)), ((1, 0), s(1)), ((1, 1), s(-3))], 8);
        let r = u.unit_reciprocal().unwrap();
        assert_eq!(u.mul(&r), BiSeries::one(8));
    }

    #[test]
    fn monomial_factor_basic() {
        let p = BiSeries::from_terms([((2, 1), s(3)), ((3, 1), s(1)), ((2, 4), s(1))], 10);
        let mf = p.monomial_factor().unwrap();
        assert_eq!((mf.a, mf.b), (2, 1));
        assert_eq!(mf.unit.constant_term(), s(3));
        assert_eq!(mf.unit.trunc(), 7);
        let q = BiSeries::from_terms([((2, 0), s(1)), ((0, 2), s(1))], 10);
        assert!(q.monomial_factor().is_none());
    }

    #[test]
    fn display_canonical() {
        let p = BiSeries::from_terms(
            [((2, 1), Scalar::ratio(3, 2)), ((1, 0), s(-1)), ((0, 2), s(1)), ((2, 0), Scalar::i())],
            10,
        );
        assert_eq!(p.to_string(), "-z + w^2 + i*z^2 + 3/2*z^2*w");
    }
}
