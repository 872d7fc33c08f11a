//! Monomial and curve valuations in fixed coordinates and their dynamics.

mod eigen;
mod segment;
mod surd;

use std::fmt;

use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::germ::{Axis, Germ};
use crate::series::{BiSeries, Order, UniSeries, POLY_TRUNC};

pub use eigen::{bracket_eigen_weight, eigen_weight, EigenBracket, EigenDirection, EigenWeight};
pub(crate) use segment::prepared_cofactor;
pub use segment::{segment_map, EndBehaviour, Family, FamilyPoint, PiecewiseAffine, SegmentMap};
pub use surd::{exact_isqrt, QuadraticSurd};

/// Weights `(s, t)` of the monomial valuation `z^i w^j -> s i + t j`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MonomialWeights {
    pub s: QuadraticSurd,
    pub t: QuadraticSurd,
    /// Set when `min(s, t) = 1`.
    pub normalized: bool,
}

impl MonomialWeights {
    pub fn new(s: QuadraticSurd, t: QuadraticSurd) -> Result<Self> {
        let zero = QuadraticSurd::from_int(0);
        if s < zero || t < zero || (s.is_zero() && t.is_zero()) {
            return Err(Error::Precondition("weights must be nonnegative and not both zero".into()));
        }
        let one = QuadraticSurd::from_int(1);
        let normalized = QuadraticSurd::min(s.clone(), t.clone()) == one;
        Ok(MonomialWeights { s, t, normalized })
    }

    pub fn rational(s: BigRational, t: BigRational) -> Result<Self> {
        MonomialWeights::new(QuadraticSurd::rational(s), QuadraticSurd::rational(t))
    }

    pub fn ints(s: i64, t: i64) -> Self {
        MonomialWeights::new(QuadraticSurd::from_int(s), QuadraticSurd::from_int(t)).expect("valid weights")
    }

    /// `nu_m`, the multiplicity valuation.
    pub fn multiplicity() -> Self {
        MonomialWeights::ints(1, 1)
    }

    /// Rescales so that `min(s, t) = 1`; requires both weights positive.
    pub fn normalize(&self) -> Result<Self> {
        let m = QuadraticSurd::min(self.s.clone(), self.t.clone());
        if m.is_zero() {
            return Err(Error::Precondition("cannot normalize weights with a zero entry".into()));
        }
        MonomialWeights::new(&self.s / &m, &self.t / &m)
    }

    /// Skewness `t` for a member `(1, t)` of the segment towards `{w = 0}`.
    pub fn skewness(&self) -> Option<QuadraticSurd> {
        let one = QuadraticSurd::from_int(1);
        if self.s == one {
            Some(self.t.clone())
        } else if self.t == one {
            Some(self.s.clone())
        } else {
            None
        }
    }

    /// Thinness `s + t`; equals `1 + t` on the family `(1, t)`.
    pub fn thinness(&self) -> QuadraticSurd {
        &self.s + &self.t
    }

    fn weight(&self, i: u32, j: u32) -> QuadraticSurd {
        let a = &self.s * &QuadraticSurd::from_int(i as i64);
        let b = &self.t * &QuadraticSurd::from_int(j as i64);
        &a + &b
    }
}

impl fmt::Display for MonomialWeights {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.s, self.t)
    }
}

/// A valuation value, exact or a lower bound coming from the truncation.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum ValValue {
    Exact(QuadraticSurd),
    /// Every stored term lies above the truncation bound given here.
    AtLeast(QuadraticSurd),
    /// The series is an exact polynomial equal to zero.
    Infinite,
}

impl ValValue {
    pub fn exact(&self) -> Option<&QuadraticSurd> {
        match self {
            ValValue::Exact(v) => Some(v),
            _ => None,
        }
    }

    pub fn min(a: ValValue, b: ValValue) -> ValValue {
        use ValValue::*;
        match (a, b) {
            (Infinite, x) | (x, Infinite) => x,
            (Exact(x), Exact(y)) => Exact(QuadraticSurd::min(x, y)),
            (Exact(x), AtLeast(y)) | (AtLeast(y), Exact(x)) => {
                if x <= y {
                    Exact(x)
                } else {
                    AtLeast(y)
                }
            }
            (AtLeast(x), AtLeast(y)) => AtLeast(QuadraticSurd::min(x, y)),
        }
    }
}

impl fmt::Display for ValValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValValue::Exact(v) => write!(f, "{v}"),
            ValValue::AtLeast(v) => write!(f, ">= {v}"),
            ValValue::Infinite => write!(f, "inf"),
        }
    }
}

/// `nu(phi) = min { s i + t j : phi_ij != 0 }`.
pub fn eval_monomial(nu: &MonomialWeights, phi: &BiSeries) -> ValValue {
    let least = phi.terms().map(|((i, j), _)| nu.weight(*i, *j)).min();
    if phi.is_zero() && phi.trunc() >= POLY_TRUNC {
        return ValValue::Infinite;
    }
    // any unknown term has total degree > N, hence value >= (N + 1) min(s, t)
    let m = QuadraticSurd::min(nu.s.clone(), nu.t.clone());
    let bound = &m * &QuadraticSurd::from_int(phi.trunc() as i64 + 1);
    match least {
        Some(v) if v <= bound || phi.trunc() >= POLY_TRUNC => ValValue::Exact(v),
        Some(_) | None => ValValue::AtLeast(bound),
    }
}

/// A smooth curve germ: an axis or a graph `w = theta(z)`.
#[derive(Clone, Debug, PartialEq)]
pub enum CurveApprox {
    /// `{z = 0}`.
    AxisZ,
    /// `{w = 0}`.
    AxisW,
    Graph(UniSeries),
}

/// Intersection multiplicity of the smooth curve with `{phi = 0}`.
///
/// A result above the truncation means `phi` may contain the curve.
pub fn eval_curve(c: &CurveApprox, phi: &BiSeries) -> Result<Order> {
    Ok(match c {
        CurveApprox::AxisW => phi.restrict_w_zero().order(),
        CurveApprox::AxisZ => phi.restrict_z_zero().order(),
        CurveApprox::Graph(theta) => phi.eval_along_curve(theta)?.order(),
    })
}

/// Largest power of the axis coordinate dividing `phi`.
pub fn divisibility_order(axis: Axis, phi: &BiSeries) -> Order {
    let k = match axis {
        Axis::Z => phi.z_order(),
        Axis::W => phi.w_order(),
    };
    match k {
        Some(k) => Order::Finite(k),
        None => Order::AboveTruncation(phi.trunc()),
    }
}

/// `(nu(f1), nu(f2))`; the attraction rate `c(f, nu)` is the smaller one.
pub fn pushforward_on_coordinates(f: &Germ, nu: &MonomialWeights) -> (ValValue, ValValue) {
    (eval_monomial(nu, &f.f1), eval_monomial(nu, &f.f2))
}

pub fn attraction_rate(f: &Germ, nu: &MonomialWeights) -> ValValue {
    let (a, b) = pushforward_on_coordinates(f, nu);
    ValValue::min(a, b)
}

pub(crate) fn rat(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

pub(crate) fn is_nonneg(q: &BigRational) -> bool {
    *q >= BigRational::zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_series;

    fn w(s: (i64, i64), t: (i64, i64)) -> MonomialWeights {
        MonomialWeights::rational(BigRational::new(s.0.into(), s.1.into()), BigRational::new(t.0.into(), t.1.into()))
            .unwrap()
    }

    #[test]
    fn monomial_examples() {
        let phi = parse_series("z^2 w", 10).unwrap();
        assert_eq!(eval_monomial(&w((1, 1), (3, 2)), &phi), ValValue::Exact(QuadraticSurd::ratio(7, 2)));
        let psi = parse_series("z^3 + w^2", 10).unwrap();
        assert_eq!(eval_monomial(&w((1, 1), (2, 1)), &psi), ValValue::Exact(QuadraticSurd::from_int(3)));
    }

    #[test]
    fn zero_series_gives_bound() {
        let z = BiSeries::zero(8);
        assert_eq!(eval_monomial(&MonomialWeights::multiplicity(), &z), ValValue::AtLeast(QuadraticSurd::from_int(9)));
    }

    #[test]
    fn curve_examples() {
        let theta = UniSeries::monomial(crate::Scalar::one(), 2, 10);
        let phi = parse_series("w - z^2", 10).unwrap();
        assert!(eval_curve(&CurveApprox::Graph(theta), &phi).unwrap().is_above_truncation());
        let theta = UniSeries::var(10);
        let phi = parse_series("z w + w^3", 10).unwrap();
        assert_eq!(eval_curve(&CurveApprox::Graph(theta), &phi).unwrap(), Order::Finite(2));
        let m = parse_series("z^2 w^3", 10).unwrap();
        assert_eq!(divisibility_order(Axis::W, &m), Order::Finite(3));
        assert_eq!(eval_curve(&CurveApprox::AxisW, &parse_series("z^2 + w", 10).unwrap()).unwrap(), Order::Finite(2));
    }

    #[test]
    fn pushforward_examples() {
        let f = Germ::parse("(w^2, z^3)", 10).unwrap();
        let (a, b) = pushforward_on_coordinates(&f, &w((1, 1), (5, 3)));
        assert_eq!(a, ValValue::Exact(QuadraticSurd::ratio(10, 3)));
        assert_eq!(b, ValValue::Exact(QuadraticSurd::from_int(3)));
        let g = Germ::parse("(z^2, w^2)", 10).unwrap();
        assert_eq!(attraction_rate(&g, &MonomialWeights::multiplicity()), ValValue::Exact(QuadraticSurd::from_int(2)));
    }
}
