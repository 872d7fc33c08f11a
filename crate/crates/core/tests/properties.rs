use num_rational::BigRational;
use proptest::prelude::*;

use germdyn::blowup::{lift_once, rigidify_semisuper, verify_lift, BlowupStep, ChartKind};
use germdyn::conjugacy::{normal_form, second_conjugacy, NormalForm};
use germdyn::germ::{attraction_rates, classify_rigid, Matrix2, RigidData};
use germdyn::valuations::{eval_monomial, pushforward_on_coordinates, MonomialWeights, ValValue};
use germdyn::{BiSeries, Germ, Order, Scalar, UniSeries};

const N: u32 = 10;

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn gaussian() -> impl Strategy<Value = Scalar> {
    (-6i64..=6, 1i64..=4, -6i64..=6, 1i64..=4).prop_map(|(a, b, c, d)| Scalar::gaussian(q(a, b), q(c, d)))
}

fn nonzero_gaussian() -> impl Strategy<Value = Scalar> {
    gaussian().prop_filter("nonzero", |x| !x.is_zero())
}

/// Sparse polynomials with small integer coefficients and no constant term.
fn poly(max_deg: u32) -> impl Strategy<Value = BiSeries> {
    prop::collection::vec(((0..=max_deg), (0..=max_deg), -3i64..=3), 0..6).prop_map(move |terms| {
        BiSeries::from_terms(
            terms
                .into_iter()
                .filter(|(i, j, _)| i + j >= 1 && i + j <= max_deg)
                .map(|(i, j, c)| ((i, j), Scalar::from_int(c))),
            N,
        )
    })
}

fn series_eq(a: &BiSeries, b: &BiSeries) -> bool {
    let n = a.trunc().min(b.trunc());
    a.agrees_to(b, n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn field_axioms(a in gaussian(), b in gaussian(), c in gaussian()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        if !a.is_zero() {
            prop_assert!((&a * &a.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn modulus_of_inverse_is_opposite(a in nonzero_gaussian()) {
        let m = a.modulus_compare().unwrap();
        let mi = a.inv().unwrap().modulus_compare().unwrap();
        prop_assert_eq!(m, mi.reverse());
    }

    #[test]
    fn multiplicity_is_additive(a in poly(4), b in poly(4)) {
        if let (Order::Finite(x), Order::Finite(y)) = (a.order(), b.order()) {
            if x + y <= N {
                prop_assert_eq!(a.mul(&b).order(), Order::Finite(x + y));
            }
        }
    }

    #[test]
    fn identity_substitution(a in poly(5)) {
        prop_assert_eq!(a.compose(&BiSeries::z(N), &BiSeries::w(N)).unwrap(), a);
    }

    #[test]
    fn reciprocal_is_an_involution(a in poly(4)) {
        let u = BiSeries::one(N).add(&a);
        let back = u.unit_reciprocal().unwrap().unit_reciprocal().unwrap();
        prop_assert!(series_eq(&back, &u));
    }

    #[test]
    fn restriction_to_a_curve_is_multiplicative(a in poly(4), b in poly(4), t2 in -3i64..=3, t3 in -3i64..=3) {
        let theta = UniSeries::from_terms([(1, Scalar::one()), (2, Scalar::from_int(t2)), (3, Scalar::from_int(t3))], N);
        let lhs = a.mul(&b).eval_along_curve(&theta).unwrap();
        let rhs = a.eval_along_curve(&theta).unwrap().mul(&b.eval_along_curve(&theta).unwrap());
        let n = lhs.trunc().min(rhs.trunc());
        prop_assert_eq!(lhs.truncated(n), rhs.truncated(n));
    }

    #[test]
    fn germ_type_survives_linear_conjugation(
        p1 in poly(3), p2 in poly(3), la in -2i64..=2,
        m in (gaussian(), gaussian(), gaussian(), gaussian()),
    ) {
        let a = Matrix2::new(m.0, m.1, m.2, m.3);
        prop_assume!(!a.det().is_zero());
        let mut f1 = p1.truncated(N);
        f1.add_term(1, 0, Scalar::from_int(la));
        let f = Germ::new(f1, p2).unwrap();
        prop_assume!(f.classify().is_ok());
        let g = a.inverse().unwrap().as_germ(N).compose(&f.compose(&a.as_germ(N)).unwrap()).unwrap();
        prop_assert_eq!(f.classify().unwrap(), g.classify().unwrap());
    }

    #[test]
    fn rates_are_supermultiplicative(p1 in poly(3), p2 in poly(3)) {
        let f = Germ::new(p1.mul_monomial(0, 1).add(&BiSeries::monomial(Scalar::one(), 0, 2, N)), p2.mul_monomial(1, 0).add(&BiSeries::monomial(Scalar::one(), 2, 0, N))).unwrap();
        let f = f.truncated(24).with_provenance(f.provenance);
        if let Ok(r) = attraction_rates(&Germ::new(f.f1.with_trunc(40), f.f2.with_trunc(40)).unwrap(), 3) {
            prop_assert!(r.supermultiplicative);
            let nu = MonomialWeights::multiplicity();
            let (a, b) = pushforward_on_coordinates(&f, &nu);
            let c1 = ValValue::min(a, b);
            prop_assert_eq!(c1, ValValue::Exact(germdyn::valuations::QuadraticSurd::from_int(r.rates[0] as i64)));
        }
    }

    #[test]
    fn valuation_of_a_product_and_a_sum(a in poly(4), b in poly(4), s in 1i64..=4, t in 1i64..=4) {
        let a = BiSeries::polynomial(a.terms().map(|(k, c)| (*k, c.clone())));
        let b = BiSeries::polynomial(b.terms().map(|(k, c)| (*k, c.clone())));
        prop_assume!(!a.is_zero() && !b.is_zero());
        let nu = MonomialWeights::ints(s, t);
        let (va, vb) = (eval_monomial(&nu, &a), eval_monomial(&nu, &b));
        let (ea, eb) = (va.exact().unwrap().clone(), vb.exact().unwrap().clone());
        prop_assert_eq!(eval_monomial(&nu, &a.mul(&b)), ValValue::Exact(&ea + &eb));
        match eval_monomial(&nu, &a.add(&b)) {
            ValValue::Exact(v) => prop_assert!(v >= std::cmp::min(ea, eb)),
            ValValue::Infinite => {}
            other => prop_assert!(false, "{other}"),
        }
    }

    #[test]
    fn accepted_lifts_satisfy_the_blow_down_identity(p1 in poly(4), p2 in poly(4), theta in -2i64..=2) {
        let f = Germ::new(
            p1.add(&BiSeries::monomial(Scalar::one(), 2, 0, N)),
            p2.add(&BiSeries::monomial(Scalar::from_int(theta), 2, 0, N)),
        ).unwrap();
        let th = Scalar::from_int(theta);
        if let Ok(g) = lift_once(&f, &th, ChartKind::Z) {
            prop_assert!(verify_lift(&f, &g, &[BlowupStep::new(ChartKind::Z, th)]).unwrap());
        }
    }
}

#[test]
fn resonances_match_exponentiation() {
    let lambdas = [Scalar::from_int(2), Scalar::from_int(-2), Scalar::from_int(3), Scalar::ratio(1, 2)];
    for lambda in &lambdas {
        for d in 1..=4u32 {
            let src = format!("({lambda} z, z w^{d} (1 + z + z^2))");
            let f = Germ::parse(&src, 14).unwrap();
            let sc = second_conjugacy(&f).unwrap();
            let m = 14 - 1 - d;
            let brute: Vec<u32> = (1..=m).filter(|&n| lambda.pow(n) == Scalar::from_int(d as i64)).collect();
            assert_eq!(sc.resonances, brute, "{src}");
        }
    }
}

#[test]
fn non_resonant_forms_read_c_d_from_the_rigid_matrix() {
    for src in ["(1/2 z (1 + z), z^2 w^3 (1 + w))", "(3z (1 + w), z w^2 (1 + z w))", "(2z, z^3 w^2 (1 + z^2))"] {
        let f = Germ::parse(src, 14).unwrap();
        let report = normal_form(&f).unwrap();
        let m = match classify_rigid(&report.first.germ).unwrap().rigid().unwrap().data.clone() {
            RigidData::Reducible { m } => m,
            other => panic!("{src}: {other:?}"),
        };
        let (c, d) = match report.second.normal_form {
            NormalForm::CaseI { c, d, .. } => (c, d),
            NormalForm::CaseII { c, d, epsilon, .. } => {
                assert!(epsilon.is_zero(), "{src}");
                (c, d)
            }
            ref other => panic!("{src}: {other}"),
        };
        assert_eq!([c, d], m[1], "{src}");
    }
}

#[test]
fn gauge_is_pinned() {
    // psi has no constant term and Q = 1 + psi has no resonant pure-z coefficient
    let f = Germ::parse("(2z, z w^2 (1 + z + z^3))", 12).unwrap();
    let sc = second_conjugacy(&f).unwrap();
    assert!(sc.psi.coeff(0, 0).is_zero());
    for n in &sc.resonances {
        assert!(sc.psi.coeff(*n, 0).is_zero());
    }
    let again = second_conjugacy(&f).unwrap();
    assert_eq!(sc.psi, again.psi);
}

#[test]
fn pipeline_modifications_are_free_paths() {
    for src in ["(2z, w (z^2 + w))", "(1/2 z + w^2, w (z^4 + w) + z^5)", "(-z, w (z^3 + w^2))"] {
        let f = Germ::parse(src, 20).unwrap();
        let r = rigidify_semisuper(&f, 10).unwrap();
        let g = r.modification.dual_graph();
        assert!(g.is_path(), "{src}");
        assert!(g.vertices.iter().skip(1).all(|v| v.parents.len() == 1), "{src}");
    }
}
