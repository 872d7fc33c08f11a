//! Exact eigen-weights for germs whose components are monomials times units.

use num_rational::BigRational;
use serde::Serialize;

use super::{eval_monomial, rat, MonomialWeights, QuadraticSurd, ValValue};
use crate::error::{Error, Result};
use crate::germ::{Axis, Germ};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum EigenDirection {
    /// A normalized monomial valuation.
    Quasimonomial(MonomialWeights),
    /// The eigen-direction is an axis: weight infinity on the named coordinate.
    CurveEnd(Axis),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EigenWeight {
    /// Exponent matrix of the monomial parts, rows from f1 and f2.
    pub matrix: [[u32; 2]; 2],
    /// The Perron root of the matrix.
    pub c_inf: QuadraticSurd,
    pub direction: EigenDirection,
}

/// Eigen-weight of `f = (z^a w^b u1, z^c w^d u2)` with units u1, u2.
pub fn eigen_weight(f: &Germ) -> Result<EigenWeight> {
    let m1 = f.f1.monomial_factor();
    let m2 = f.f2.monomial_factor();
    let (m1, m2) = match (m1, m2) {
        (Some(x), Some(y)) => (x, y),
        _ => {
            return Err(Error::Unsupported(
                "eigen-weights are computed only when both components are monomials times units".into(),
            ))
        }
    };
    let (a, b, c, d) = (m1.a as i64, m1.b as i64, m2.a as i64, m2.b as i64);
    let disc = (a - d) * (a - d) + 4 * b * c;
    let root = QuadraticSurd::sqrt(&rat(disc));
    let half = QuadraticSurd::ratio(1, 2);
    let kappa = &(&QuadraticSurd::from_int(a + d) + &root) * &half;
    let sa = QuadraticSurd::from_int(a);
    let sd = QuadraticSurd::from_int(d);
    // eigenvector of M acting on (s, t)
    let (x, y) = if b != 0 {
        (QuadraticSurd::from_int(b), &kappa - &sa)
    } else if c != 0 {
        (&kappa - &sd, QuadraticSurd::from_int(c))
    } else if a > d {
        (QuadraticSurd::from_int(1), QuadraticSurd::from_int(0))
    } else if d > a {
        (QuadraticSurd::from_int(0), QuadraticSurd::from_int(1))
    } else {
        (QuadraticSurd::from_int(1), QuadraticSurd::from_int(1))
    };
    let direction = if x.is_zero() {
        EigenDirection::CurveEnd(Axis::W)
    } else if y.is_zero() {
        EigenDirection::CurveEnd(Axis::Z)
    } else {
        EigenDirection::Quasimonomial(MonomialWeights::new(x, y)?.normalize()?)
    };
    Ok(EigenWeight { matrix: [[m1.a, m1.b], [m2.a, m2.b]], c_inf: kappa, direction })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EigenBracket {
    /// Skewness iterates `t_k` of the normalized skeleton map started at `nu_m`.
    pub iterates: Vec<String>,
    pub lo: String,
    pub hi: String,
}

/// Iterates the monomial skeleton map on weights `(1, t)` starting from `nu_m`
/// and reports the interval spanned by the last two iterates.
///
/// Used only as a diagnostic when no exact eigen-weight is available.
pub fn bracket_eigen_weight(f: &Germ, steps: usize) -> Result<EigenBracket> {
    let mut t = rat(1);
    let mut seq = vec![t.clone()];
    let mut prev = t.clone();
    for _ in 0..steps {
        let nu = MonomialWeights::rational(rat(1), t.clone())?;
        let v1 = eval_monomial(&nu, &f.f1);
        let v2 = eval_monomial(&nu, &f.f2);
        let (x, y) = match (v1, v2) {
            (ValValue::Exact(x), ValValue::Exact(y)) => (x, y),
            _ => return Err(Error::TruncationExhausted("skeleton iterate left the stored support".into())),
        };
        let (xr, yr) = match (x.as_rational(), y.as_rational()) {
            (Some(x), Some(y)) => (x.clone(), y.clone()),
            _ => unreachable!("rational weights give rational values"),
        };
        if xr == rat(0) {
            return Err(Error::Unsupported("first component has zero weight".into()));
        }
        let next: BigRational = yr / xr;
        if next < rat(1) {
            break;
        }
        prev = t;
        t = next;
        seq.push(t.clone());
    }
    let (lo, hi) = if prev <= t { (prev, t) } else { (t, prev) };
    Ok(EigenBracket { iterates: seq.iter().map(|x| x.to_string()).collect(), lo: lo.to_string(), hi: hi.to_string() })
}
