//! Order-by-order formal coordinate changes: invariant curves, preparation,
//! the first action, the second conjugacy and normal forms.
//!
//! Throughout, a change `Phi` conjugates `f` to `g` when `Phi ∘ f = g ∘ Phi`.

mod curves;
mod divergence;
mod first;
mod oned;
mod second;

use crate::error::{Error, Result};
use crate::germ::{Germ, Matrix2, Provenance};
use crate::series::Order;

pub use curves::{prepare, solve_stable_curve, solve_unstable_curve, CurveCertificate, Prepared};
pub use divergence::{divergence_report, series_growth, DivergenceReport, GrowthVerdict, Line, LineGrowth};
pub use first::{first_action_conjugacy, FirstAction};
pub use oned::{normal_form_1d, OneDClass, OneDNormalForm};
pub use second::{normal_form, second_conjugacy, NormalForm, NormalFormReport, SecondConjugacy};

/// A coordinate change together with its verified residual.
#[derive(Clone, Debug, PartialEq)]
pub struct ConjugationRecord {
    pub change: Germ,
    pub inverse_known: bool,
    /// Truncation up to which the two sides were compared.
    pub order: u32,
    /// First degree where `Phi ∘ f - g ∘ Phi` is nonzero; `order + 1` on success.
    pub residual_order: u32,
}

impl ConjugationRecord {
    /// Builds a record by checking `change ∘ f = g ∘ change` directly.
    pub fn certify(f: &Germ, g: &Germ, change: Germ, inverse_known: bool) -> Result<Self> {
        let order = change.compose(f)?.trunc().min(g.compose(&change)?.trunc());
        let residual_order = match verify_conjugacy(f, g, &change)? {
            Order::Finite(k) => k,
            Order::AboveTruncation(n) => n + 1,
        };
        Ok(ConjugationRecord { change, inverse_known, order, residual_order })
    }

    pub fn identity(f: &Germ) -> Result<Self> {
        ConjugationRecord::certify(f, f, Germ::identity(f.trunc()), true)
    }

    pub fn verified(&self) -> bool {
        self.residual_order > self.order
    }

    /// Fails unless the residual vanishes up to the checked order.
    pub fn require_verified(&self) -> Result<()> {
        if self.verified() {
            Ok(())
        } else {
            Err(Error::TruncationExhausted(format!(
                "conjugation residual is nonzero in degree {}",
                self.residual_order
            )))
        }
    }
}

/// First total degree where `change ∘ f` and `g ∘ change` differ, or the
/// truncation up to which they agree.
pub fn verify_conjugacy(f: &Germ, g: &Germ, change: &Germ) -> Result<Order> {
    let lhs = change.compose(f)?;
    let rhs = g.compose(change)?;
    let n = lhs.trunc().min(rhs.trunc());
    Ok(lhs.truncated(n).difference_order(&rhs.truncated(n)))
}

/// `Phi ∘ f ∘ Phi^{-1}` given both maps explicitly.
pub(crate) fn conjugate(f: &Germ, phi: &Germ, phi_inv: &Germ) -> Result<Germ> {
    Ok(phi.compose(&f.compose(phi_inv)?)?.with_provenance(Provenance::Conjugated))
}

/// A linear change bringing `df_0` with eigenvalues `{lambda, 0}` to `diag(lambda, 0)`.
///
/// Returns `(P^{-1}, P)` as matrices, where the columns of `P` are an
/// eigenvector for `lambda` and a kernel vector.
pub fn diagonalize(m: &Matrix2) -> Result<(Matrix2, Matrix2)> {
    if !m.det().is_zero() || m.trace().is_zero() {
        return Err(Error::Precondition(format!("{m} does not have eigenvalues {{lambda, 0}} with lambda != 0")));
    }
    if m.b.is_zero() && m.c.is_zero() {
        return Ok((Matrix2::identity(), Matrix2::identity()));
    }
    let (v1, v2) = if !m.a.is_zero() || !m.c.is_zero() { (m.a.clone(), m.c.clone()) } else { (m.b.clone(), m.d.clone()) };
    let (k1, k2) = if !m.a.is_zero() || !m.b.is_zero() {
        (-m.b.clone(), m.a.clone())
    } else {
        (-m.d.clone(), m.c.clone())
    };
    let p = Matrix2::new(v1, k1, v2, k2);
    Ok((p.inverse()?, p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Scalar;

    #[test]
    fn identity_record_verifies() {
        let f = Germ::parse("(2z + w^2, z w)", 10).unwrap();
        let r = ConjugationRecord::identity(&f).unwrap();
        assert!(r.verified());
        assert_eq!(r.residual_order, r.order + 1);
    }

    #[test]
    fn corrupted_record_fails_at_the_corruption() {
        let f = Germ::parse("(2z, z w (1 + w))", 12).unwrap();
        let sc = second_conjugacy(&f).unwrap();
        assert!(sc.record.verified());
        let mut bad = sc.record.change.clone();
        bad.f1.add_term(3, 2, Scalar::one());
        let r = ConjugationRecord::certify(&f, &sc.target, bad, false).unwrap();
        assert!(!r.verified());
        assert_eq!(r.residual_order, 5);
    }

    #[test]
    fn diagonalize_rank_one() {
        let m = Matrix2::new(Scalar::from_int(1), Scalar::from_int(2), Scalar::from_int(1), Scalar::from_int(2));
        let (pinv, p) = diagonalize(&m).unwrap();
        let d = pinv.mul(&m).mul(&p);
        assert_eq!(d, Matrix2::new(Scalar::from_int(3), Scalar::zero(), Scalar::zero(), Scalar::zero()));
    }
}
