//! The second conjugacy `(z, w (1 + psi))` and the assembled normal forms.

use std::fmt;

use super::{conjugate, first_action_conjugacy, prepare, ConjugationRecord, FirstAction, Prepared};
use crate::error::{Error, Result};
use crate::germ::{disk_position, DiskPosition, Germ, Matrix2, Rotation};
use crate::scalar::Scalar;
use crate::series::{BiSeries, UniPoly, UniSeries};

#[derive(Clone, Debug, PartialEq)]
pub enum NormalForm {
    /// `(lambda z, z^c w^d)`.
    CaseI { lambda: Scalar, c: u32, d: u32 },
    /// `(lambda z, z^c w^d (1 + epsilon z^l))`; `l` is the resonant exponent, if any.
    CaseII { lambda: Scalar, c: u32, d: u32, l: Option<u32>, epsilon: Scalar },
    /// `(lambda z (1 + z^s + beta z^{2s}), z^c w^d (1 + epsilon(z^r)))`.
    ///
    /// `s` is absent when the first action is linear up to the truncation.
    CaseIII { lambda: Scalar, r: u32, s: Option<u32>, beta: Option<Scalar>, c: u32, d: u32, epsilon: UniSeries },
    /// `(lambda z, z^q w + P(z))`.
    AttractingClass2 { lambda: Scalar, q: u32, p: UniPoly },
}

impl NormalForm {
    pub fn case_name(&self) -> &'static str {
        match self {
            NormalForm::CaseI { .. } => "CaseI",
            NormalForm::CaseII { .. } => "CaseII",
            NormalForm::CaseIII { .. } => "CaseIII",
            NormalForm::AttractingClass2 { .. } => "AttractingClass2",
        }
    }

    pub fn lambda(&self) -> &Scalar {
        match self {
            NormalForm::CaseI { lambda, .. }
            | NormalForm::CaseII { lambda, .. }
            | NormalForm::CaseIII { lambda, .. }
            | NormalForm::AttractingClass2 { lambda, .. } => lambda,
        }
    }
}

/// `lambda z`, with signs and parentheses as a reader would write it.
fn linear(lambda: &Scalar) -> String {
    if lambda.is_one() {
        "z".into()
    } else if (-lambda.clone()).is_one() {
        "-z".into()
    } else if lambda.is_compound() {
        format!("({lambda}) z")
    } else {
        format!("{lambda} z")
    }
}

impl fmt::Display for NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mono = |c: u32, d: u32| {
            let z = match c {
                0 => String::new(),
                1 => "z ".to_string(),
                _ => format!("z^{c} "),
            };
            let w = if d == 1 { "w".to_string() } else { format!("w^{d}") };
            format!("{z}{w}")
        };
        match self {
            NormalForm::CaseI { lambda, c, d } => write!(f, "({}, {})", linear(lambda), mono(*c, *d)),
            NormalForm::CaseII { lambda, c, d, l, epsilon } => match l {
                Some(l) if !epsilon.is_zero() => {
                    let zl = if *l == 1 { "z".to_string() } else { format!("z^{l}") };
                    let term = if epsilon.is_one() { zl } else { format!("{epsilon} {zl}") };
                    write!(f, "({}, {} (1 + {term}))", linear(lambda), mono(*c, *d))
                }
                _ => write!(f, "({}, {})", linear(lambda), mono(*c, *d)),
            },
            NormalForm::CaseIII { lambda, s, beta, c, d, epsilon, .. } => {
                let first = match (s, beta) {
                    (Some(s), Some(b)) if b.is_zero() => format!("{} (1 + z^{s})", linear(lambda)),
                    (Some(s), Some(b)) => format!("{} (1 + z^{s} + ({b}) z^{})", linear(lambda), 2 * s),
                    _ => linear(lambda),
                };
                if epsilon.is_zero() {
                    write!(f, "({first}, {})", mono(*c, *d))
                } else {
                    let e = epsilon.display_in("z");
                    match e.strip_prefix('-') {
                        Some(rest) => write!(f, "({first}, {} (1 - {rest}))", mono(*c, *d)),
                        None => write!(f, "({first}, {} (1 + {e}))", mono(*c, *d)),
                    }
                }
            }
            NormalForm::AttractingClass2 { lambda, q, p } => {
                let t = p.display_in("z");
                match t.strip_prefix('-') {
                    Some(rest) => write!(f, "({}, {} - {rest})", linear(lambda), mono(*q, 1)),
                    None => write!(f, "({}, {} + {t})", linear(lambda), mono(*q, 1)),
                }
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SecondConjugacy {
    pub normal_form: NormalForm,
    /// The germ reached by the record, including the final linear scaling.
    pub target: Germ,
    pub record: ConjugationRecord,
    /// `psi` of `(z, w (1 + psi))`, before the linear scaling.
    pub psi: BiSeries,
    /// Exponents `n` with `lambda^n = d` inside the solved range.
    pub resonances: Vec<u32>,
    /// Coefficient of `z^c w^d` in the target; one when it could be normalized.
    pub coefficient: Scalar,
    pub notes: Vec<String>,
}

fn depends_only_on_z(s: &BiSeries) -> bool {
    s.terms().all(|((_, j), _)| *j == 0)
}

/// Recognizes `(lambda z, z^q w + P(z))` with `|lambda| < 1`, `P in z C[z]`, `deg P <= q`.
fn attracting_class2(f: &Germ, lambda: &Scalar) -> Result<Option<SecondConjugacy>> {
    if disk_position(lambda)? != DiskPosition::Less || f.f1.terms().count() != 1 {
        return Ok(None);
    }
    let p_part = f.f2.restrict_w_zero();
    let rest = f.f2.sub(&p_part.in_z());
    let Some(mf) = rest.monomial_factor() else { return Ok(None) };
    let unit_is_one = mf.unit.sub(&BiSeries::one(mf.unit.trunc())).is_zero();
    let deg_ok = p_part.terms().all(|(k, _)| *k >= 1 && *k <= mf.a);
    if mf.b != 1 || mf.a == 0 || !unit_is_one || p_part.is_zero() || !deg_ok {
        return Ok(None);
    }
    let coeffs: Vec<Scalar> = (0..=mf.a).map(|k| p_part.coeff(k)).collect();
    let normal_form = NormalForm::AttractingClass2 { lambda: lambda.clone(), q: mf.a, p: UniPoly::new(coeffs) };
    Ok(Some(SecondConjugacy {
        normal_form,
        target: f.clone(),
        record: ConjugationRecord::identity(f)?,
        psi: BiSeries::zero(f.trunc()),
        resonances: Vec::new(),
        coefficient: Scalar::one(),
        notes: Vec::new(),
    }))
}

/// Solves for `Psi = (z, w (1 + psi))` conjugating `(h(z), z^c w^d (1 + g))` to
/// `(h(z), z^c w^d (1 + epsilon(z)))`, then normalizes by a linear map.
pub fn second_conjugacy(f: &Germ) -> Result<SecondConjugacy> {
    if !depends_only_on_z(&f.f1) {
        return Err(Error::NotPrepared("first component must depend on z only".into()));
    }
    let lambda = f.f1.coeff(1, 0);
    if lambda.is_zero() || !f.f2.coeff(1, 0).is_zero() || !f.f2.coeff(0, 1).is_zero() {
        return Err(Error::Precondition("germ is not semi-superattracting with df_0 = diag(lambda, 0)".into()));
    }
    let mf = match f.f2.monomial_factor() {
        Some(mf) if mf.b >= 1 => mf,
        _ => {
            if let Some(sc) = attracting_class2(f, &lambda)? {
                return Ok(sc);
            }
            return Err(Error::NotPrepared("second component is not z^c w^d times a unit".into()));
        }
    };
    let (c, d) = (mf.a, mf.b);
    if d == 0 || c + d < 2 {
        return Err(Error::Precondition(format!("need d >= 1 and c + d >= 2, got c = {c}, d = {d}")));
    }
    let n = f.trunc();
    let m = n.saturating_sub(c + d);
    if m == 0 {
        return Err(Error::TruncationExhausted(format!("z^{c} w^{d} leaves no order to solve at N = {n}")));
    }
    let gamma = mf.unit.constant_term();
    let unit = mf.unit.scale(&gamma.inv()?);
    let dd = Scalar::from_int(d as i64);
    let resonances: Vec<u32> = (1..=m).filter(|&k| lambda.power_equals(k, &dd)).collect();

    // U Q(h, f2) = Q^d (1 + epsilon(z)), Q = 1 + psi
    let mut q = BiSeries::one(m);
    let mut eps = UniSeries::zero(m);
    for deg in 1..=m {
        let lhs = unit.mul(&q.compose(&f.f1, &f.f2)?);
        let rhs = q.pow(d).mul(&UniSeries::one(m).add(&eps).in_z());
        let s = lhs.sub(&rhs).truncated(m);
        for (i, coeff) in s.degree_terms(deg) {
            let j = deg - i;
            if j >= 1 {
                q.add_term(i, j, coeff.checked_div(&dd)?);
            } else if resonances.contains(&deg) {
                eps.add_term(deg, coeff);
            } else {
                let pivot = &lambda.pow(deg) - &dd;
                q.add_term(deg, 0, -coeff.checked_div(&pivot)?);
            }
        }
    }
    let psi = q.sub(&BiSeries::one(m));
    let y = q.mul_monomial(0, 1);
    let psi_change = Germ::new(BiSeries::z(n), y)?;
    let e2 = UniSeries::one(m).add(&eps).in_z().scale(&gamma).mul_monomial(c, d);
    let e = Germ::new(f.f1.clone(), e2)?;

    let mut notes = Vec::new();
    let position = disk_position(&lambda)?;
    let h_poly = f.f1.restrict_w_zero();
    let (mu, kappa) = scaling(&position, &gamma, c, d, &resonances, &eps, &h_poly, &mut notes);
    let lin = Matrix2::new(mu.clone(), Scalar::zero(), Scalar::zero(), kappa.clone());
    let target = conjugate(&e, &lin.as_germ(n), &lin.inverse()?.as_germ(n))?;
    let change = lin.as_germ(n).compose(&psi_change)?;
    let record = ConjugationRecord::certify(f, &target, change, false)?;
    record.require_verified()?;

    let coefficient = target.f2.coeff(c, d);
    let eps_final = target
        .f2
        .div_monomial(c, d)
        .expect("target has the monomial shape")
        .scale(&coefficient.inv()?)
        .restrict_w_zero()
        .sub(&UniSeries::one(m));
    let normal_form = match position {
        DiskPosition::Less | DiskPosition::Equal(Rotation::Irrational) => NormalForm::CaseI { lambda, c, d },
        DiskPosition::Greater => {
            let l = resonances.first().copied();
            let epsilon = l.map(|l| eps_final.coeff(l)).unwrap_or_else(Scalar::zero);
            NormalForm::CaseII { lambda, c, d, l, epsilon }
        }
        DiskPosition::Equal(Rotation::RootOfUnity(r)) => {
            let (s, beta) = parabolic_data(&target.f1.restrict_w_zero(), &lambda)?;
            NormalForm::CaseIII { lambda, r, s, beta, c, d, epsilon: eps_final }
        }
    };
    Ok(SecondConjugacy { normal_form, target, record, psi, resonances, coefficient, notes })
}

/// `s` and `beta` read from `lambda z (1 + a z^s + b z^{2s} + ...)` as `beta = b / a^2`.
fn parabolic_data(h: &UniSeries, lambda: &Scalar) -> Result<(Option<u32>, Option<Scalar>)> {
    let Some(k) = h.terms().map(|(k, _)| *k).find(|k| *k >= 2) else {
        return Ok((None, None));
    };
    let s = k - 1;
    let a = h.coeff(k).checked_div(lambda)?;
    if 2 * s + 1 > h.trunc() {
        return Ok((Some(s), None));
    }
    let b = h.coeff(2 * s + 1).checked_div(lambda)?;
    Ok((Some(s), Some(b.checked_div(&a.pow(2))?)))
}

/// Chooses `(mu, kappa)` so that `(mu z, kappa w)` normalizes the target.
///
/// The coefficient of `z^c w^d` becomes `gamma kappa^{1-d} mu^{-c}` and
/// `epsilon_l` becomes `epsilon_l mu^{-l}`.
#[allow(clippy::too_many_arguments)]
fn scaling(
    position: &DiskPosition,
    gamma: &Scalar,
    c: u32,
    d: u32,
    resonances: &[u32],
    eps: &UniSeries,
    h: &UniSeries,
    notes: &mut Vec<String>,
) -> (Scalar, Scalar) {
    let one = Scalar::one();
    // the first action is linear unless a parabolic term survives
    let z_free = !matches!(position, DiskPosition::Equal(Rotation::RootOfUnity(_))) || h.terms().all(|(k, _)| *k == 1);
    let mut mu = one.clone();
    if let (DiskPosition::Greater, Some(&l)) = (position, resonances.first()) {
        let e = eps.coeff(l);
        if !e.is_zero() {
            match e.nth_root(l) {
                Some(r) => mu = r,
                None => notes.push(format!("epsilon_{l} = {e} has no {l}-th root in the working field; left unnormalized")),
            }
        }
    }
    // remaining coefficient gamma mu^{-c} is absorbed by kappa^{d-1}, or by mu^c when d = 1
    let rest = gamma * &mu.powi(-(c as i64)).expect("mu is nonzero");
    if rest.is_one() {
        return (mu, one);
    }
    if d >= 2 {
        if let Some(k) = rest.nth_root(d - 1) {
            return (mu, k);
        }
    }
    if mu.is_one() && z_free && c >= 1 {
        if let Some(m) = gamma.nth_root(c) {
            return (m, one);
        }
    }
    notes.push(format!("the coefficient {rest} of z^{c} w^{d} could not be normalized to 1 in the working field"));
    (mu, one)
}

/// The full chain: preparation, first action, second conjugacy.
#[derive(Clone, Debug, PartialEq)]
pub struct NormalFormReport {
    pub prepared: Prepared,
    pub first: FirstAction,
    pub second: SecondConjugacy,
    /// Composite change from the input germ to the normal form.
    pub total: ConjugationRecord,
}

/// Normal form of a semi-superattracting germ that is rigid once prepared.
pub fn normal_form(f: &Germ) -> Result<NormalFormReport> {
    let prepared = prepare(f)?;
    let first = first_action_conjugacy(&prepared.germ)?;
    let second = second_conjugacy(&first.germ).map_err(|e| match e {
        Error::NotPrepared(msg) => {
            Error::Precondition(format!("not rigid in prepared coordinates ({msg}); rigidify first"))
        }
        other => other,
    })?;
    let change = second.record.change.compose(&first.record.change.compose(&prepared.record.change)?)?;
    let total = ConjugationRecord::certify(f, &second.target, change, false)?;
    total.require_verified()?;
    Ok(NormalFormReport { prepared, first, second, total })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(src: &str, n: u32) -> Germ {
        Germ::parse(src, n).unwrap()
    }

    #[test]
    fn counterexample_two() {
        let f = g("(2z, z w (1 + w))", 14);
        let sc = second_conjugacy(&f).unwrap();
        assert_eq!(sc.normal_form, NormalForm::CaseII { lambda: Scalar::from_int(2), c: 1, d: 1, l: None, epsilon: Scalar::zero() });
        for k in 1..=10u32 {
            assert_eq!(sc.psi.coeff(k, 1), Scalar::from_int(2).pow(k * (k - 1) / 2));
        }
        assert_eq!(sc.psi.coeff(0, 1), Scalar::one());
    }

    #[test]
    fn monomial_maps_are_fixed() {
        let f = g("(1/2 z, z^2 w^3)", 10);
        let sc = second_conjugacy(&f).unwrap();
        assert!(sc.psi.is_zero());
        assert_eq!(sc.normal_form, NormalForm::CaseI { lambda: Scalar::ratio(1, 2), c: 2, d: 3 });
    }

    #[test]
    fn resonance_at_first_order() {
        let f = g("(2z, z w^2 (1 + z))", 12);
        let sc = second_conjugacy(&f).unwrap();
        assert_eq!(sc.resonances, vec![1]);
        match &sc.normal_form {
            NormalForm::CaseII { l, epsilon, d, .. } => {
                assert_eq!((*l, *d), (Some(1), 2));
                assert_eq!(*epsilon, Scalar::one());
            }
            other => panic!("{other:?}"),
        }
        assert!(sc.record.verified());
    }

    #[test]
    fn root_of_unity_case() {
        let f = g("(-z (1 + z^2), z w^2 (1 + z + w))", 12);
        let sc = second_conjugacy(&f).unwrap();
        match &sc.normal_form {
            NormalForm::CaseIII { r, s, epsilon, .. } => {
                assert_eq!(*r, 2);
                assert_eq!(s.unwrap() % r, 0);
                assert!(epsilon.is_zero());
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn gamma_normalization() {
        let f = g("(2z, 4 z^2 w)", 10);
        let sc = second_conjugacy(&f).unwrap();
        assert_eq!(sc.coefficient, Scalar::one());
        assert!(sc.record.verified());
    }

    #[test]
    fn attracting_class_two_shape() {
        let f = g("(1/2 z, z^2 w + z^2)", 10);
        let sc = second_conjugacy(&f).unwrap();
        assert_eq!(sc.normal_form.case_name(), "AttractingClass2");
    }

    #[test]
    fn full_pipeline() {
        let f = g("(2z + w^2 z, z w (1 + z + w^2))", 12);
        let r = normal_form(&f).unwrap();
        assert!(r.total.verified());
        assert_eq!(r.second.normal_form.case_name(), "CaseII");
    }
}
