//! The min-plus weight map induced by a prepared germ on two monomial families.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::{is_nonneg, rat, QuadraticSurd};
use crate::error::{Error, Result};
use crate::germ::Germ;

/// `t -> min_j (a_j t + b_j)` on `t >= 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct PiecewiseAffine {
    pairs: Vec<(u32, BigRational)>,
}

impl PiecewiseAffine {
    /// Builds the lower envelope, dropping pairs that are never the minimum.
    pub fn new(mut raw: Vec<(u32, BigRational)>) -> Result<Self> {
        if raw.is_empty() {
            return Err(Error::Precondition("piecewise affine map needs at least one pair".into()));
        }
        if raw.iter().any(|(_, b)| !is_nonneg(b)) {
            return Err(Error::Precondition("intercepts must be nonnegative".into()));
        }
        // by slope, then intercept; keep the smallest intercept per slope
        raw.sort_by(|x, y| x.0.cmp(&y.0).then(x.1.cmp(&y.1)));
        raw.dedup_by(|later, earlier| later.0 == earlier.0);
        // a line with a larger slope survives only with a smaller intercept
        let mut filtered: Vec<(u32, BigRational)> = Vec::new();
        for p in raw {
            if filtered.last().is_some_and(|q| q.1 <= p.1) {
                continue;
            }
            filtered.push(p);
        }
        let mut hull: Vec<(u32, BigRational)> = Vec::new();
        for p in filtered {
            while hull.len() >= 2 {
                let l1 = &hull[hull.len() - 2];
                let l2 = &hull[hull.len() - 1];
                // l2 is redundant if l1 and p cross at or below it
                let x13 = (&l1.1 - &p.1) / rat(p.0 as i64 - l1.0 as i64);
                let y1 = rat(l1.0 as i64) * &x13 + &l1.1;
                let y2 = rat(l2.0 as i64) * &x13 + &l2.1;
                if y2 >= y1 {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push(p);
        }
        Ok(PiecewiseAffine { pairs: hull })
    }

    pub fn pairs(&self) -> &[(u32, BigRational)] {
        &self.pairs
    }

    pub fn eval(&self, t: &BigRational) -> BigRational {
        self.pairs.iter().map(|(a, b)| rat(*a as i64) * t + b).min().expect("nonempty")
    }

    pub fn eval_surd(&self, t: &QuadraticSurd) -> QuadraticSurd {
        self.pairs
            .iter()
            .map(|(a, b)| &(t * &QuadraticSurd::from_int(*a as i64)) + &QuadraticSurd::rational(b.clone()))
            .min()
            .expect("nonempty")
    }
}

impl fmt::Display for PiecewiseAffine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .pairs
            .iter()
            .map(|(a, b)| match (*a, b.is_zero()) {
                (0, _) => format!("{b}"),
                (1, true) => "t".to_string(),
                (1, false) => format!("t + {b}"),
                (_, true) => format!("{a}t"),
                (_, false) => format!("{a}t + {b}"),
            })
            .collect();
        if parts.len() == 1 {
            write!(f, "{}", parts[0])
        } else {
            write!(f, "min({})", parts.join(", "))
        }
    }
}

impl Serialize for PiecewiseAffine {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<(u32, String)> = self.pairs.iter().map(|(a, b)| (*a, b.to_string())).collect();
        v.serialize(s)
    }
}

/// The two monomial families through `nu_m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Family {
    /// `nu(z) = 1, nu(w) = t`: the segment towards `{w = 0}`.
    ZW,
    /// `nu(z) = t, nu(w) = 1`: the segment towards `{z = 0}`.
    Infinity,
}

/// A normalized point on one of the two families, `t >= 1`.
#[derive(Clone, Debug, PartialEq)]
pub enum FamilyPoint {
    ZW(BigRational),
    Infinity(BigRational),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum EndBehaviour {
    /// The curve valuation of `{z = 0}` is fixed.
    Fixed,
    /// `{z = 0}` is contracted to the origin.
    Contracted,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SegmentMap {
    pub family: Family,
    /// Value of the image valuation on `w`, as a function of `t`.
    pub value_map: PiecewiseAffine,
    /// `g(t) > t` on ZW, `g(t) < t` on Infinity, for every `t >= 1`.
    pub drift_verified: bool,
    pub infinity_end: Option<EndBehaviour>,
}

impl SegmentMap {
    /// The induced parameter map: `G(t)` on ZW and `t / G(t)` on Infinity.
    pub fn parameter_map(&self, t: &BigRational) -> BigRational {
        let g = self.value_map.eval(t);
        match self.family {
            Family::ZW => g,
            Family::Infinity => t / g,
        }
    }

    /// The image of the family point with parameter `t`, renormalized.
    pub fn image(&self, t: &BigRational) -> FamilyPoint {
        let g = self.value_map.eval(t);
        match self.family {
            Family::ZW => FamilyPoint::ZW(g),
            Family::Infinity => {
                if &g <= t {
                    FamilyPoint::Infinity(t / g)
                } else {
                    FamilyPoint::ZW(g / t)
                }
            }
        }
    }
}

/// Checks the prepared shape `(lambda z (1 + g1), w g2)` with `g1, g2` in the maximal ideal.
pub(crate) fn prepared_cofactor(f: &Germ) -> Result<crate::series::BiSeries> {
    f.f1
        .div_monomial(1, 0)
        .filter(|u| !u.constant_term().is_zero())
        .ok_or_else(|| Error::NotPrepared("first component is not lambda z (1 + g1)".into()))?;
    let q = f
        .f2
        .div_monomial(0, 1)
        .ok_or_else(|| Error::NotPrepared("second component is not divisible by w".into()))?;
    if !q.constant_term().is_zero() {
        return Err(Error::NotPrepared("second component has a linear w term".into()));
    }
    if q.is_zero() {
        return Err(Error::NotPrepared("second component vanishes up to truncation".into()));
    }
    Ok(q)
}

/// The weight map of a prepared germ on the chosen family.
pub fn segment_map(f: &Germ, family: Family) -> Result<SegmentMap> {
    let q = prepared_cofactor(f)?;
    let raw: Vec<(u32, BigRational)> = q
        .terms()
        .map(|((i, j), _)| match family {
            Family::ZW => (j + 1, rat(*i as i64)),
            Family::Infinity => (*i, rat(*j as i64 + 1)),
        })
        .collect();
    let value_map = PiecewiseAffine::new(raw)?;
    let one = BigRational::one();
    // on t >= 1 each affine piece a t + b is compared against t (ZW) or 1 (Infinity)
    let drift_verified = value_map.pairs().iter().all(|(a, b)| match family {
        Family::ZW => *a >= 2 || b > &BigRational::zero(),
        Family::Infinity => rat(*a as i64) + b > one,
    });
    let infinity_end = match family {
        Family::ZW => None,
        Family::Infinity => Some(if value_map.pairs().iter().any(|(a, _)| *a == 0) {
            EndBehaviour::Fixed
        } else {
            EndBehaviour::Contracted
        }),
    };
    Ok(SegmentMap { family, value_map, drift_verified, infinity_end })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::valuations::{eval_monomial, MonomialWeights, ValValue};
    use proptest::prelude::*;

    fn g(src: &str) -> Germ {
        Germ::parse(src, 12).unwrap()
    }

    #[test]
    fn zw_examples() {
        let m = segment_map(&g("(2z(1+w), z w)"), Family::ZW).unwrap();
        assert_eq!(m.value_map.to_string(), "t + 1");
        assert!(m.drift_verified);
        let m = segment_map(&g("(2z, z w^2)"), Family::ZW).unwrap();
        assert_eq!(m.value_map.to_string(), "2t + 1");
    }

    #[test]
    fn infinity_examples() {
        let m = segment_map(&g("(2z, z w)"), Family::Infinity).unwrap();
        assert_eq!(m.value_map.pairs(), &[(1, rat(1))]);
        assert_eq!(m.infinity_end, Some(EndBehaviour::Contracted));
        assert!(m.drift_verified);
        let m = segment_map(&g("(2z, z w + w^3)"), Family::Infinity).unwrap();
        assert_eq!(m.infinity_end, Some(EndBehaviour::Fixed));
    }

    #[test]
    fn rejects_unprepared() {
        assert!(matches!(segment_map(&g("(2z + w^2, z w)"), Family::ZW), Err(Error::NotPrepared(_))));
    }

    #[test]
    fn envelope_drops_dominated_lines() {
        let p = PiecewiseAffine::new(vec![(1, rat(3)), (2, rat(2)), (3, rat(0)), (2, rat(5)), (4, rat(0))]).unwrap();
        // t + 3 and 3t cross at t = 3/2 below 2t + 2
        assert_eq!(p.pairs(), &[(1, rat(3)), (3, rat(0))]);
    }

    fn germ_from(terms: &[(u32, u32)]) -> Germ {
        let mut src = String::from("(3z, ");
        let parts: Vec<String> = terms.iter().map(|(i, j)| format!("z^{i} w^{}", j + 1)).collect();
        src.push_str(&parts.join(" + "));
        src.push(')');
        Germ::parse(&src, 30).unwrap()
    }

    proptest! {
        #[test]
        fn matches_brute_force(
            terms in proptest::collection::vec((0u32..5, 0u32..5), 1..6),
            tn in 10i64..40, td in 10i64..14,
        ) {
            let terms: Vec<(u32, u32)> = terms.into_iter().filter(|(i, j)| i + j > 0).collect();
            prop_assume!(!terms.is_empty());
            let f = germ_from(&terms);
            let t = BigRational::new(tn.into(), td.into());
            prop_assume!(t >= BigRational::one());
            let zw = segment_map(&f, Family::ZW).unwrap();
            let nu = MonomialWeights::rational(rat(1), t.clone()).unwrap();
            prop_assert_eq!(eval_monomial(&nu, &f.f2), ValValue::Exact(QuadraticSurd::rational(zw.value_map.eval(&t))));
            let inf = segment_map(&f, Family::Infinity).unwrap();
            let nu = MonomialWeights::rational(t.clone(), rat(1)).unwrap();
            prop_assert_eq!(eval_monomial(&nu, &f.f2), ValValue::Exact(QuadraticSurd::rational(inf.value_map.eval(&t))));
            prop_assert!(zw.parameter_map(&t) > t);
            prop_assert!(inf.parameter_map(&t) < t);
        }
    }
}
