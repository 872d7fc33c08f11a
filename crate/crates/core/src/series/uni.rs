use std::collections::BTreeMap;
use std::fmt;

use super::{clamp, fmt_sum, BiSeries, Order};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Truncated power series in one variable.
#[derive(Clone, Debug, PartialEq)]
pub struct UniSeries {
    terms: BTreeMap<u32, Scalar>,
    trunc: u32,
}

impl UniSeries {
    pub fn zero(trunc: u32) -> Self {
        UniSeries { terms: BTreeMap::new(), trunc }
    }

    pub fn one(trunc: u32) -> Self {
        UniSeries::monomial(Scalar::one(), 0, trunc)
    }

    pub fn monomial(c: Scalar, k: u32, trunc: u32) -> Self {
        let mut s = UniSeries::zero(trunc);
        s.add_term(k, c);
        s
    }

    /// The identity series `z`.
    pub fn var(trunc: u32) -> Self {
        UniSeries::monomial(Scalar::one(), 1, trunc)
    }

    pub fn from_terms<I: IntoIterator<Item = (u32, Scalar)>>(terms: I, trunc: u32) -> Self {
        let mut s = UniSeries::zero(trunc);
        for (k, c) in terms {
            s.add_term(k, c);
        }
        s
    }

    pub fn add_term(&mut self, k: u32, c: Scalar) {
        if c.is_zero() || k > self.trunc {
            return;
        }
        let v = match self.terms.get(&k) {
            Some(old) => old + &c,
            None => c,
        };
        if v.is_zero() {
            self.terms.remove(&k);
        } else {
            self.terms.insert(k, v);
        }
    }

    pub fn set_coeff(&mut self, k: u32, c: Scalar) {
        if c.is_zero() {
            self.terms.remove(&k);
        } else if k <= self.trunc {
            self.terms.insert(k, c);
        }
    }

    pub fn trunc(&self) -> u32 {
        self.trunc
    }

    pub fn terms(&self) -> impl Iterator<Item = (&u32, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, k: u32) -> Scalar {
        self.terms.get(&k).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn order(&self) -> Order {
        match self.terms.keys().next() {
            Some(k) => Order::Finite(*k),
            None => Order::AboveTruncation(self.trunc),
        }
    }

    pub fn truncated(&self, n: u32) -> UniSeries {
        let t = n.min(self.trunc);
        UniSeries { terms: self.terms.range(..=t).map(|(k, v)| (*k, v.clone())).collect(), trunc: t }
    }

    /// Replaces the truncation order; the caller vouches for exactness.
    pub fn with_trunc(&self, n: u32) -> UniSeries {
        let mut s = self.truncated(n);
        s.trunc = n;
        s
    }

    pub fn scale(&self, c: &Scalar) -> UniSeries {
        UniSeries::from_terms(self.terms.iter().map(|(k, v)| (*k, v * c)), self.trunc)
    }

    pub fn neg(&self) -> UniSeries {
        self.scale(&Scalar::from_int(-1))
    }

    pub fn add(&self, other: &UniSeries) -> UniSeries {
        let mut s = self.truncated(other.trunc);
        for (k, c) in other.terms.range(..=s.trunc) {
            s.add_term(*k, c.clone());
        }
        s
    }

    pub fn sub(&self, other: &UniSeries) -> UniSeries {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &UniSeries) -> UniSeries {
        self.mul_to(other, self.trunc.min(other.trunc))
    }

    fn mul_to(&self, other: &UniSeries, t: u32) -> UniSeries {
        let mut acc: BTreeMap<u32, Scalar> = BTreeMap::new();
        for (a, x) in self.terms.range(..=t) {
            for (b, y) in other.terms.range(..=(t - a)) {
                let e = acc.entry(a + b).or_insert_with(Scalar::zero);
                *e = &*e + &(x * y);
            }
        }
        acc.retain(|_, v| !v.is_zero());
        UniSeries { terms: acc, trunc: t }
    }

    pub fn pow(&self, n: u32) -> UniSeries {
        let mut acc = UniSeries::one(self.trunc);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn mul_monomial(&self, k: u32) -> UniSeries {
        UniSeries::from_terms(
            self.terms.iter().map(|(e, c)| (e + k, c.clone())),
            clamp(self.trunc as u64 + k as u64),
        )
    }

    /// Exact division by `z^k`.
    pub fn div_monomial(&self, k: u32) -> Option<UniSeries> {
        if self.terms.keys().any(|e| *e < k) {
            return None;
        }
        Some(UniSeries::from_terms(
            self.terms.iter().map(|(e, c)| (e - k, c.clone())),
            self.trunc.saturating_sub(k),
        ))
    }

    /// `self(inner)` for `inner` in the maximal ideal.
    pub fn compose(&self, inner: &UniSeries) -> Result<UniSeries> {
        if !inner.coeff(0).is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        let mut t = inner.trunc as u64;
        if let Some(m) = inner.order().finite() {
            t = t.min((self.trunc as u64 + 1) * m as u64 - 1);
        }
        let t = clamp(t);
        let inner = inner.truncated(t);
        let max = self.terms.keys().last().copied().unwrap_or(0);
        let mut acc = UniSeries::zero(t);
        for k in (0..=max).rev() {
            if k < max {
                acc = acc.mul_to(&inner, t);
            }
            if let Some(c) = self.terms.get(&k) {
                acc.add_term(0, c.clone());
            }
        }
        acc.trunc = t;
        Ok(acc)
    }

    /// Multiplicative inverse of a unit.
    pub fn reciprocal(&self) -> Result<UniSeries> {
        let c0 = self.coeff(0);
        if c0.is_zero() {
            return Err(Error::NotAUnit);
        }
        let inv0 = c0.inv()?;
        let mut r = UniSeries::monomial(inv0.clone(), 0, self.trunc);
        for n in 1..=self.trunc {
            let mut s = Scalar::zero();
            for (k, u) in self.terms.range(1..=n) {
                if let Some(rv) = r.terms.get(&(n - k)) {
                    s = &s + &(u * rv);
                }
            }
            r.add_term(n, -(&s * &inv0));
        }
        Ok(r)
    }

    pub fn derivative(&self) -> UniSeries {
        UniSeries::from_terms(
            self.terms
                .iter()
                .filter(|(k, _)| **k > 0)
                .map(|(k, c)| (k - 1, c * &Scalar::from_int(*k as i64))),
            self.trunc.saturating_sub(1),
        )
    }

    /// The same series as a function of z in two variables.
    pub fn in_z(&self) -> BiSeries {
        BiSeries::from_terms(self.terms.iter().map(|(k, c)| ((*k, 0), c.clone())), self.trunc)
    }

    /// The same series as a function of w in two variables.
    pub fn in_w(&self) -> BiSeries {
        BiSeries::from_terms(self.terms.iter().map(|(k, c)| ((0, *k), c.clone())), self.trunc)
    }

    /// Display in a named variable.
    pub fn display_in(&self, var: &str) -> String {
        let items = self
            .terms
            .iter()
            .map(|(k, c)| {
                let m = match k {
                    0 => String::new(),
                    1 => var.to_string(),
                    _ => format!("{var}^{k}"),
                };
                (c.clone(), m)
            })
            .collect();
        fmt_sum(items)
    }
}

impl fmt::Display for UniSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_in("z"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    #[test]
    fn compose_geometric() {
        // 1/(1-z) evaluated at 2z
        let g = UniSeries::from_terms((0..=10).map(|k| (k, s(1))), 10);
        let inner = UniSeries::monomial(s(2), 1, 10);
        let c = g.compose(&inner).unwrap();
        for k in 0..=10 {
            assert_eq!(c.coeff(k), s(1 << k));
        }
    }

    #[test]
    fn reciprocal_of_one_minus_z() {
        let u = UniSeries::from_terms([(0, s(1)), (1, s(-1))], 12);
        let r = u.reciprocal().unwrap();
        assert!((0..=12).all(|k| r.coeff(k) == s(1)));
    }

    #[test]
    fn display() {
        let u = UniSeries::from_terms([(1, s(2)), (3, s(-1))], 5);
        assert_eq!(u.display_in("t"), "2*t - t^3");
    }
}
