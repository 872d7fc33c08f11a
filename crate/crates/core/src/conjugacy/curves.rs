//! The two invariant curves of a semi-superattracting germ and the
//! preparation `(lambda z (1 + f1), w f2)`.

use super::{conjugate, diagonalize, ConjugationRecord};
use crate::error::{Error, Result};
use crate::germ::Germ;
use crate::scalar::Scalar;
use crate::series::{BiSeries, Order, UniSeries};

/// A solved curve with its independently recomputed residual.
#[derive(Clone, Debug, PartialEq)]
pub struct CurveCertificate {
    pub curve: UniSeries,
    /// Order of the invariance residual; above truncation on success.
    pub residual: Order,
}

/// `f2(z, theta) - theta(f1(z, theta))`.
fn unstable_residual(f: &Germ, theta: &UniSeries) -> Result<UniSeries> {
    let a = f.f2.eval_along_curve(theta)?;
    let b = theta.compose(&f.f1.eval_along_curve(theta)?)?;
    Ok(a.sub(&b))
}

/// `f1(eta, w) - eta(f2(eta, w))`.
fn stable_residual(f: &Germ, eta: &UniSeries) -> Result<UniSeries> {
    let swapped = swap(f);
    let a = swapped.f2.eval_along_curve(eta)?;
    let b = eta.compose(&swapped.f1.eval_along_curve(eta)?)?;
    Ok(a.sub(&b))
}

/// Exchanges the roles of z and w.
fn swap(f: &Germ) -> Germ {
    let s = |p: &BiSeries| BiSeries::from_terms(p.terms().map(|((i, j), c)| ((*j, *i), c.clone())), p.trunc());
    Germ { f1: s(&f.f2), f2: s(&f.f1), provenance: f.provenance }
}

/// Nonzero eigenvalue of `df_0`, or a precondition error.
fn lambda_of(f: &Germ) -> Result<Scalar> {
    let m = f.linear_part();
    if !m.det().is_zero() || m.trace().is_zero() {
        return Err(Error::Precondition("df_0 must have eigenvalues {lambda, 0} with lambda != 0".into()));
    }
    Ok(m.trace())
}

/// The invariant graph `w = theta(z)` tangent to the lambda-eigendirection.
///
/// Requires the second row of `df_0` to vanish.
pub fn solve_unstable_curve(f: &Germ) -> Result<CurveCertificate> {
    let lambda = lambda_of(f)?;
    let m = f.linear_part();
    if !m.c.is_zero() || !m.d.is_zero() {
        return Err(Error::Precondition("second row of df_0 must vanish; diagonalize first".into()));
    }
    let n = f.trunc();
    let mut theta = UniSeries::zero(n);
    for k in 2..=n {
        let r = unstable_residual(f, &theta)?.coeff(k);
        if !r.is_zero() {
            // only theta(f1) sees theta_k at order k, with coefficient lambda^k
            let step = r.checked_div(&lambda.pow(k))?;
            theta.add_term(k, step);
        }
    }
    let residual = unstable_residual(f, &theta)?.order();
    Ok(CurveCertificate { curve: theta, residual })
}

/// The invariant graph `z = eta(w)` tangent to the kernel of `df_0`.
///
/// Requires the second column of `df_0` to vanish.
pub fn solve_stable_curve(f: &Germ) -> Result<CurveCertificate> {
    let lambda = lambda_of(f)?;
    let m = f.linear_part();
    if !m.b.is_zero() || !m.d.is_zero() {
        return Err(Error::Precondition("second column of df_0 must vanish; diagonalize first".into()));
    }
    let n = f.trunc();
    let mut eta = UniSeries::zero(n);
    for k in 2..=n {
        let r = stable_residual(f, &eta)?.coeff(k);
        if !r.is_zero() {
            // only f1(eta, w) sees eta_k at order k, through lambda eta_k
            let step = -r.checked_div(&lambda)?;
            eta.add_term(k, step);
        }
    }
    let residual = stable_residual(f, &eta)?.order();
    Ok(CurveCertificate { curve: eta, residual })
}

/// Output of `prepare`.
#[derive(Clone, Debug, PartialEq)]
pub struct Prepared {
    pub germ: Germ,
    pub record: ConjugationRecord,
    pub lambda: Scalar,
    /// The unstable curve in diagonal coordinates.
    pub theta: UniSeries,
    /// The stable curve after the unstable one was straightened.
    pub eta: UniSeries,
}

/// Conjugates a semi-superattracting germ to `(lambda z (1 + f1), w f2)`.
pub fn prepare(f: &Germ) -> Result<Prepared> {
    let lambda = f.semisuper_lambda()?;
    let n = f.trunc();
    let (pinv, p) = diagonalize(&f.linear_part())?;
    let (lin, lin_inv) = (pinv.as_germ(n), p.as_germ(n));
    let g0 = conjugate(f, &lin, &lin_inv)?;

    let theta = solve_unstable_curve(&g0)?;
    if !theta.residual.is_above_truncation() {
        return Err(Error::TruncationExhausted("unstable curve residual does not vanish".into()));
    }
    let t = theta.curve.in_z();
    let z = BiSeries::z(n);
    let w = BiSeries::w(n);
    let phi1 = Germ::new(z.clone(), w.sub(&t))?;
    let phi1_inv = Germ::new(z.clone(), w.add(&t))?;
    let g1 = conjugate(&g0, &phi1, &phi1_inv)?;

    let eta = solve_stable_curve(&g1)?;
    if !eta.residual.is_above_truncation() {
        return Err(Error::TruncationExhausted("stable curve residual does not vanish".into()));
    }
    let e = eta.curve.in_w();
    let phi2 = Germ::new(z.sub(&e), w.clone())?;
    let phi2_inv = Germ::new(z.add(&e), w)?;
    let g2 = conjugate(&g1, &phi2, &phi2_inv)?;

    let change = phi2.compose(&phi1.compose(&lin)?)?;
    let record = ConjugationRecord::certify(f, &g2, change, true)?;
    record.require_verified()?;
    crate::valuations::prepared_cofactor(&g2)?;
    Ok(Prepared { germ: g2, record, lambda, theta: theta.curve, eta: eta.curve })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(src: &str) -> Germ {
        Germ::parse(src, 12).unwrap()
    }

    #[test]
    fn trivial_curves() {
        let f = g("(2z, w (z + w))");
        assert!(solve_stable_curve(&f).unwrap().curve.is_zero());
        assert!(solve_unstable_curve(&f).unwrap().curve.is_zero());
        let f = g("(2z (1 + w), z w)");
        assert!(solve_stable_curve(&f).unwrap().curve.is_zero());
    }

    #[test]
    fn stable_curve_of_standard_example() {
        let f = g("(2z + w^2, z w)");
        let c = solve_stable_curve(&f).unwrap();
        assert_eq!(c.curve.coeff(2), Scalar::ratio(-1, 2));
        assert!(c.residual.is_above_truncation());
        // independent check: substitute z = eta(w) through bivariate composition
        let eta = c.curve.in_w();
        let w = BiSeries::w(12);
        let lhs = f.f1.compose(&eta, &w).unwrap();
        let img = eta.compose(&BiSeries::zero(12), &f.f2.compose(&eta, &w).unwrap()).unwrap();
        assert!(lhs.sub(&img).order().is_above_truncation());
    }

    #[test]
    fn unstable_curve_examples() {
        let f = g("(2z, z^3 + w^2)");
        let c = solve_unstable_curve(&f).unwrap();
        // theta_3 (2^3) = 1
        assert_eq!(c.curve.coeff(3), Scalar::ratio(1, 8));
        assert!(c.residual.is_above_truncation());
        let f = g("(2z + z w, z^2 + w^2)");
        assert!(solve_unstable_curve(&f).unwrap().residual.is_above_truncation());
    }

    #[test]
    fn prepare_examples() {
        let f = g("(2z, z w)");
        let p = prepare(&f).unwrap();
        assert_eq!(p.germ, f.clone().with_provenance(crate::germ::Provenance::Conjugated));
        for src in ["(2z + w^2, z w)", "(2z + z w, w^2 + z w)", "(z + w, z + w + z^2)"] {
            let f = g(src);
            let p = prepare(&f).unwrap();
            assert!(p.record.verified(), "{src}");
            assert!(p.germ.f2.div_monomial(0, 1).is_some(), "{src}");
            assert!(p.germ.f1.div_monomial(1, 0).is_some(), "{src}");
        }
    }

    #[test]
    fn raw_input_needs_diagonal_form() {
        let f = g("(z + w, z + w)");
        assert!(matches!(solve_stable_curve(&f), Err(Error::Precondition(_))));
    }
}
