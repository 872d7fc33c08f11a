//! Conjugating the first component to the first action `h(z)`.

use super::{conjugate, normal_form_1d, ConjugationRecord, OneDNormalForm};
use crate::error::{Error, Result};
use crate::germ::Germ;
use crate::series::BiSeries;

#[derive(Clone, Debug, PartialEq)]
pub struct FirstAction {
    /// `(h(z), g(z, w))`.
    pub germ: Germ,
    pub first_action: OneDNormalForm,
    pub record: ConjugationRecord,
    /// The change is `(z (1 + phi), w)`.
    pub phi: BiSeries,
}

/// For a prepared germ, finds `Phi = (z (1 + phi), w)` with `Phi ∘ f = (h, g) ∘ Phi`.
pub fn first_action_conjugacy(f: &Germ) -> Result<FirstAction> {
    let lambda = f.semisuper_lambda()?;
    crate::valuations::prepared_cofactor(f)?;
    let n = f.trunc();
    let one_d = normal_form_1d(&f.f1.restrict_w_zero())?;
    let x0 = one_d
        .change
        .clone()
        .ok_or_else(|| Error::Unsupported(one_d.note.clone().unwrap_or_else(|| "no one-variable change".into())))?;
    let h = one_d.target.in_z();
    let w = BiSeries::w(n);

    // rows m >= 1: the (n, m) coefficient of X ∘ f - h ∘ X is lower order minus lambda X_{n,m}
    let mut x = x0.in_z().with_trunc(n);
    for d in 2..=n {
        let r = x.compose(&f.f1, &f.f2)?.sub(&h.compose(&x, &w)?);
        for (i, c) in r.degree_terms(d) {
            let j = d - i;
            if j >= 1 && !c.is_zero() {
                x.add_term(i, j, c.checked_div(&lambda)?);
            }
        }
    }

    let change = Germ::new(x.clone(), w)?;
    let inverse = change.inverse()?;
    let germ = conjugate(f, &change, &inverse)?;
    if !germ.f1.sub(&h).truncated(germ.trunc()).is_zero() {
        return Err(Error::TruncationExhausted("first component does not reduce to the first action".into()));
    }
    let record = ConjugationRecord::certify(f, &germ, change, true)?;
    record.require_verified()?;
    let phi = x.div_monomial(1, 0).expect("z divides the change").sub(&BiSeries::one(n - 1));
    Ok(FirstAction { germ, first_action: one_d, record, phi })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Scalar;

    #[test]
    fn counterexample_growth() {
        let f = Germ::parse("(2z(1+w), z w)", 12).unwrap();
        let fa = first_action_conjugacy(&f).unwrap();
        assert_eq!(fa.germ.f1, BiSeries::monomial(Scalar::from_int(2), 1, 0, fa.germ.f1.trunc()));
        // phi_{0,1} = 1, then each step multiplies by lambda^n
        for k in 0..=8u32 {
            assert_eq!(fa.phi.coeff(k, 1), Scalar::from_int(2).pow(k * k.saturating_sub(1) / 2), "n = {k}");
        }
    }

    #[test]
    fn already_in_form() {
        let f = Germ::parse("(2z, w^2)", 10).unwrap();
        let fa = first_action_conjugacy(&f).unwrap();
        assert!(fa.phi.is_zero());
        assert!(fa.record.verified());
    }

    #[test]
    fn irrational_rotation() {
        let f = Germ::parse("((3+4i)/5 z (1 + z), z w)", 10).unwrap();
        let fa = first_action_conjugacy(&f).unwrap();
        assert!(fa.record.verified());
        assert_eq!(fa.germ.f1.terms().count(), 1);
    }
}
