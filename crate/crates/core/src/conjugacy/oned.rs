//! Formal classification of germs of one variable.

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::series::{Order, UniSeries};

#[derive(Clone, Debug, PartialEq)]
pub enum OneDClass {
    /// Conjugate to `z^p`.
    SuperattractingP { p: u32 },
    /// Conjugate to `lambda z`.
    Linearizable { lambda: Scalar },
    /// Conjugate to `lambda z (1 + z^s + beta z^{2s})` with `lambda^r = 1`.
    Parabolic { r: u32, s: u32, beta: Scalar },
}

impl fmt::Display for OneDClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OneDClass::SuperattractingP { p } => write!(f, "z^{p}"),
            OneDClass::Linearizable { lambda } => write!(f, "linearizable, lambda = {lambda}"),
            OneDClass::Parabolic { r, s, beta } => write!(f, "parabolic, r = {r}, s = {s}, beta = {beta}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OneDNormalForm {
    pub class: OneDClass,
    /// The germ actually reached by `change`.
    pub target: UniSeries,
    /// `X` with `X ∘ h = target ∘ X`, when it could be computed.
    pub change: Option<UniSeries>,
    pub residual: Option<Order>,
    pub note: Option<String>,
}

fn residual(h: &UniSeries, target: &UniSeries, x: &UniSeries) -> Result<Order> {
    let lhs = x.compose(h)?;
    let rhs = target.compose(x)?;
    let n = lhs.trunc().min(rhs.trunc());
    Ok(lhs.truncated(n).sub(&rhs.truncated(n)).order())
}

fn finish(
    h: &UniSeries,
    class: OneDClass,
    target: UniSeries,
    change: UniSeries,
    note: Option<String>,
) -> Result<OneDNormalForm> {
    let r = residual(h, &target, &change)?;
    if !r.is_above_truncation() {
        return Err(Error::TruncationExhausted(format!("one-variable conjugacy residual has order {r}")));
    }
    Ok(OneDNormalForm { class, target, change: Some(change), residual: Some(r), note })
}

/// Computes the formal normal form of `h` and a conjugating change.
pub fn normal_form_1d(h: &UniSeries) -> Result<OneDNormalForm> {
    if h.is_zero() {
        return Err(Error::ZeroSeries(h.trunc()));
    }
    if !h.coeff(0).is_zero() {
        return Err(Error::NonzeroConstantTerm);
    }
    let lambda = h.coeff(1);
    if lambda.is_zero() {
        return superattracting(h);
    }
    match lambda.root_of_unity_order() {
        None => linearize(h, &lambda),
        Some(r) => parabolic(h, &lambda, r),
    }
}

fn superattracting(h: &UniSeries) -> Result<OneDNormalForm> {
    let n = h.trunc();
    let p = h.order().finite().expect("nonzero");
    let class = OneDClass::SuperattractingP { p };
    let target = UniSeries::monomial(Scalar::one(), p, n);
    let a = h.coeff(p);
    let Some(mu) = a.nth_root(p - 1) else {
        let note = format!("a {}-th root of {a} is needed and does not exist in the working field", p - 1);
        return Ok(OneDNormalForm { class, target, change: None, residual: None, note: Some(note) });
    };
    // X with X ∘ h = X^p; X_k enters X^p at degree p + k - 1 through p mu^{p-1} X_k
    let pivot = &Scalar::from_int(p as i64) * &mu.pow(p - 1);
    let mut x = UniSeries::monomial(mu, 1, n);
    let top = n + 1 - p;
    for k in 2..=top {
        let r = x.compose(h)?.sub(&x.pow(p)).coeff(p + k - 1);
        if !r.is_zero() {
            x.add_term(k, r.checked_div(&pivot)?);
        }
    }
    finish(h, class, target, x.with_trunc(top), None)
}

fn linearize(h: &UniSeries, lambda: &Scalar) -> Result<OneDNormalForm> {
    let n = h.trunc();
    let target = UniSeries::monomial(lambda.clone(), 1, n);
    let mut x = UniSeries::var(n);
    for k in 2..=n {
        let r = x.compose(h)?.sub(&target.compose(&x)?).coeff(k);
        if !r.is_zero() {
            let pivot = &lambda.pow(k) - lambda;
            x.add_term(k, -r.checked_div(&pivot)?);
        }
    }
    finish(h, OneDClass::Linearizable { lambda: lambda.clone() }, target, x, None)
}

fn parabolic(h: &UniSeries, lambda: &Scalar, r: u32) -> Result<OneDNormalForm> {
    let n = h.trunc();
    let resonant = |k: u32| (k - 1).is_multiple_of(r);

    // remove every non-resonant term
    let mut x1 = UniSeries::var(n);
    let mut g = UniSeries::monomial(lambda.clone(), 1, n);
    for k in 2..=n {
        let res = x1.compose(h)?.sub(&g.compose(&x1)?).coeff(k);
        if res.is_zero() {
            continue;
        }
        if resonant(k) {
            g.add_term(k, res);
        } else {
            let pivot = &lambda.pow(k) - lambda;
            x1.add_term(k, -res.checked_div(&pivot)?);
        }
    }
    let Some(s) = (2..=n).find(|&k| !g.coeff(k).is_zero()).map(|k| k - 1) else {
        let note = format!("no resonant term survives up to order {n}");
        return finish(h, OneDClass::Linearizable { lambda: lambda.clone() }, g, x1, Some(note));
    };
    let a = g.coeff(s + 1).checked_div(lambda)?;

    // keep a z^s and one term at 2s; a resonant z^j moves degree j + s by lambda a (j - s - 1)
    let mut x2 = UniSeries::var(n);
    let mut beta_raw = Scalar::zero();
    let mut big_g = normal_poly(lambda, &a, &beta_raw, s, n);
    for d in (s + 2)..=n {
        if !resonant(d) {
            continue;
        }
        let res = x2.compose(&g)?.sub(&big_g.compose(&x2)?).coeff(d);
        if res.is_zero() {
            continue;
        }
        if d == 2 * s + 1 {
            beta_raw = &beta_raw + &res.checked_div(lambda)?;
            big_g = normal_poly(lambda, &a, &beta_raw, s, n);
        } else {
            let j = d - s;
            let pivot = &(lambda * &a) * &Scalar::from_int(j as i64 - s as i64 - 1);
            x2.add_term(j, -res.checked_div(&pivot)?);
        }
    }
    let beta = beta_raw.checked_div(&a.pow(2))?;
    let class = OneDClass::Parabolic { r, s, beta: beta.clone() };
    let x = x2.compose(&x1)?;
    let beta_note = (2 * s + 1 > n).then(|| format!("beta is not determined below order {n}"));
    match a.nth_root(s) {
        Some(nu) => {
            // z -> nu z turns a z^s into z^s and beta_raw into beta_raw / a^2
            let target = normal_poly(lambda, &Scalar::one(), &beta, s, n);
            let change = x.scale(&nu);
            finish(h, class, target, change, beta_note)
        }
        None => {
            let note = format!("normalizing the coefficient {a} of z^s needs an s-th root outside the working field");
            finish(h, class, big_g, x, Some(note))
        }
    }
}

/// `lambda z (1 + a z^s + b z^{2s})`.
fn normal_poly(lambda: &Scalar, a: &Scalar, b: &Scalar, s: u32, n: u32) -> UniSeries {
    UniSeries::from_terms(
        [(1, lambda.clone()), (s + 1, lambda * a), (2 * s + 1, lambda * b)],
        n,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_series;

    fn uni(src: &str, n: u32) -> UniSeries {
        parse_series(src, n).unwrap().restrict_w_zero()
    }

    #[test]
    fn linear_map_is_its_own_form() {
        let nf = normal_form_1d(&uni("2z", 10)).unwrap();
        assert_eq!(nf.class, OneDClass::Linearizable { lambda: Scalar::from_int(2) });
        assert_eq!(nf.change.unwrap(), UniSeries::var(10));
    }

    #[test]
    fn koenigs_change() {
        let h = uni("1/2 z + z^2 - z^3", 12);
        let nf = normal_form_1d(&h).unwrap();
        assert!(nf.residual.unwrap().is_above_truncation());
    }

    #[test]
    fn tangent_to_identity() {
        let nf = normal_form_1d(&uni("z + z^2", 12)).unwrap();
        assert_eq!(nf.class, OneDClass::Parabolic { r: 1, s: 1, beta: Scalar::zero() });
        // conjugating by z + c z^j shifts degree j + 1 by c (j - 2), so the z^3 term is invariant
        let nf2 = normal_form_1d(&uni("z + z^2 + z^3", 12)).unwrap();
        assert_eq!(nf2.class, OneDClass::Parabolic { r: 1, s: 1, beta: Scalar::one() });
    }

    #[test]
    fn minus_identity_with_cubic_term() {
        let nf = normal_form_1d(&uni("-z(1 + z^2)", 12)).unwrap();
        match nf.class {
            OneDClass::Parabolic { r, s, .. } => assert_eq!((r, s), (2, 2)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn boettcher_needs_root() {
        let nf = normal_form_1d(&uni("4 z^3 + z^4", 10)).unwrap();
        assert_eq!(nf.class, OneDClass::SuperattractingP { p: 3 });
        assert!(nf.residual.unwrap().is_above_truncation());
        let nf = normal_form_1d(&uni("2 z^3", 10)).unwrap();
        assert!(nf.change.is_none() && nf.note.is_some());
    }

    #[test]
    fn beta_after_scaling() {
        let h = uni("z + 2 z^2 + 5 z^3", 8);
        let nf = normal_form_1d(&h).unwrap();
        let OneDClass::Parabolic { beta, .. } = nf.class else { panic!() };
        // after z -> 2z the map becomes z + z^2 + 5/4 z^3; conjugating by
        // z + c z^2 leaves the z^3 coefficient unchanged, so beta = 5/4
        assert_eq!(beta, Scalar::ratio(5, 4));
    }
}
