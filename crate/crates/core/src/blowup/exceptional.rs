//! The map induced on the exceptional line of the blow-up of the origin.

use std::fmt;

use crate::error::{Error, Result};
use crate::germ::Germ;
use crate::scalar::Scalar;
use crate::series::{Order, UniPoly};

/// A point of `E = P^1`, written in the affine coordinate `theta = w / z`.
#[derive(Clone, Debug, PartialEq)]
pub enum PointOnE {
    Finite(Scalar),
    /// `[0 : 1]`.
    Infinity,
}

impl fmt::Display for PointOnE {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PointOnE::Finite(t) => write!(f, "[1:{t}]"),
            PointOnE::Infinity => write!(f, "[0:1]"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ExceptionalImage {
    /// `theta -> num(theta) / den(theta)`.
    SelfMap { num: UniPoly, den: UniPoly, degree: u32 },
    ContractedTo(PointOnE),
}

impl fmt::Display for ExceptionalImage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExceptionalImage::SelfMap { num, den, .. } => {
                if den.degree() == Some(0) && den.coeff(0).is_one() {
                    write!(f, "theta -> {}", num.display_in("theta"))
                } else {
                    write!(f, "theta -> ({}) / ({})", num.display_in("theta"), den.display_in("theta"))
                }
            }
            ExceptionalImage::ContractedTo(p) => write!(f, "contracted to {p}"),
        }
    }
}

fn lowest_degree(s: &crate::series::BiSeries) -> Result<u32> {
    match s.order() {
        Order::Finite(d) => Ok(d),
        Order::AboveTruncation(n) => Err(Error::ZeroSeries(n)),
    }
}

/// Reads off `f|_E` from the lowest homogeneous parts of the components.
pub fn exceptional_image(f: &Germ) -> Result<ExceptionalImage> {
    f.require_dominant()?;
    let c1 = lowest_degree(&f.f1)?;
    let c2 = lowest_degree(&f.f2)?;
    if c1 < c2 {
        return Ok(ExceptionalImage::ContractedTo(PointOnE::Finite(Scalar::zero())));
    }
    if c2 < c1 {
        return Ok(ExceptionalImage::ContractedTo(PointOnE::Infinity));
    }
    let c = c1;
    let a = f.f1.homogeneous_part(c);
    let b = f.f2.homogeneous_part(c);
    let deg = |p: &UniPoly| p.degree().unwrap_or(0) as u32;
    if deg(&a) < c && deg(&b) < c {
        return Err(Error::CommonZero("theta = infinity".into()));
    }
    let g = a.gcd(&b);
    if g.degree().unwrap_or(0) > 0 {
        return Err(Error::CommonZero(format!("roots of {}", g.display_in("theta"))));
    }
    if let Some(k) = b.ratio_to(&a) {
        return Ok(ExceptionalImage::ContractedTo(PointOnE::Finite(k)));
    }
    // normalize so the leading coefficient of the denominator is one
    let lead = a.coeff(a.degree().expect("nonzero") as usize);
    let k = lead.inv()?;
    Ok(ExceptionalImage::SelfMap { num: b.scale(&k), den: a.scale(&k), degree: c })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn img(src: &str) -> ExceptionalImage {
        exceptional_image(&Germ::parse(src, 10).unwrap()).unwrap()
    }

    #[test]
    fn power_maps() {
        assert_eq!(img("(z^2 + w^2, w^2)").to_string(), "theta -> (theta^2) / (1 + theta^2)");
        assert_eq!(img("(z^2, w^2)").to_string(), "theta -> theta^2");
        assert_eq!(img("(z^3 + w^3, w^3)").to_string(), "theta -> (theta^3) / (1 + theta^3)");
    }

    #[test]
    fn contracted_line() {
        assert_eq!(img("(2z + w^2, z w)"), ExceptionalImage::ContractedTo(PointOnE::Finite(Scalar::zero())));
        assert_eq!(img("(w^2, z^3)"), ExceptionalImage::ContractedTo(PointOnE::Finite(Scalar::zero())));
        assert_eq!(img("(z^3, w^2 + z^3)"), ExceptionalImage::ContractedTo(PointOnE::Infinity));
    }

    #[test]
    fn common_zero() {
        let f = Germ::parse("(z^2 + z w, w^2 + z w)", 10).unwrap();
        assert!(matches!(exceptional_image(&f), Err(Error::CommonZero(_))));
        let f = Germ::parse("(z^2, z w)", 10).unwrap();
        assert!(matches!(exceptional_image(&f), Err(Error::CommonZero(_))));
    }
}
