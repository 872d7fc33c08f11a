//! Germs of maps (C^2, 0) -> (C^2, 0) as pairs of truncated series.

mod rates;
mod rigid;

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::parse::parse_germ_components;
use crate::scalar::Scalar;
use crate::series::{BiSeries, Order};

pub use rates::{attraction_rates, BoundCheck, RatesReport};
pub use rigid::{classify_rigid, Axis, NotRigidEvidence, NotRigidReason, RigidClassification, RigidData, RigidOutcome};

/// Where a germ came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    Input,
    Lift,
    Conjugated,
}

/// A 2x2 matrix of scalars, row major.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix2 {
    pub a: Scalar,
    pub b: Scalar,
    pub c: Scalar,
    pub d: Scalar,
}

impl Matrix2 {
    pub fn new(a: Scalar, b: Scalar, c: Scalar, d: Scalar) -> Self {
        Matrix2 { a, b, c, d }
    }

    pub fn identity() -> Self {
        Matrix2::new(Scalar::one(), Scalar::zero(), Scalar::zero(), Scalar::one())
    }

    pub fn trace(&self) -> Scalar {
        &self.a + &self.d
    }

    pub fn det(&self) -> Scalar {
        &(&self.a * &self.d) - &(&self.b * &self.c)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero() && self.c.is_zero() && self.d.is_zero()
    }

    pub fn mul(&self, o: &Matrix2) -> Matrix2 {
        Matrix2::new(
            &(&self.a * &o.a) + &(&self.b * &o.c),
            &(&self.a * &o.b) + &(&self.b * &o.d),
            &(&self.c * &o.a) + &(&self.d * &o.c),
            &(&self.c * &o.b) + &(&self.d * &o.d),
        )
    }

    pub fn inverse(&self) -> Result<Matrix2> {
        let det = self.det();
        if det.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let k = det.inv()?;
        Ok(Matrix2::new(&self.d * &k, -(&self.b * &k), -(&self.c * &k), &self.a * &k))
    }

    /// The linear germ `x -> M x` at truncation `trunc`.
    pub fn as_germ(&self, trunc: u32) -> Germ {
        let row = |p: &Scalar, q: &Scalar| {
            BiSeries::from_terms([((1, 0), p.clone()), ((0, 1), q.clone())], trunc)
        };
        Germ::new(row(&self.a, &self.b), row(&self.c, &self.d)).expect("linear map fixes origin")
    }
}

impl fmt::Display for Matrix2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

/// Rotation type of a unimodular eigenvalue.
#[derive(Clone, Debug, PartialEq)]
pub enum Rotation {
    RootOfUnity(u32),
    Irrational,
}

#[derive(Clone, Debug, PartialEq)]
pub enum DiskPosition {
    Less,
    Equal(Rotation),
    Greater,
}

#[derive(Clone, Debug, PartialEq)]
pub enum GermType {
    /// df_0 invertible; rigidification is trivial.
    Invertible,
    Superattracting,
    NilpotentNonSuper,
    SemiSuper { lambda: Scalar, position: DiskPosition },
}

impl GermType {
    pub fn name(&self) -> &'static str {
        match self {
            GermType::Invertible => "Invertible",
            GermType::Superattracting => "Superattracting",
            GermType::NilpotentNonSuper => "NilpotentNonSuper",
            GermType::SemiSuper { .. } => "SemiSuper",
        }
    }
}

/// Position of a scalar relative to the unit circle.
pub fn disk_position(lambda: &Scalar) -> Result<DiskPosition> {
    Ok(match lambda.modulus_compare()? {
        Ordering::Less => DiskPosition::Less,
        Ordering::Greater => DiskPosition::Greater,
        Ordering::Equal => match lambda.root_of_unity_order() {
            Some(r) => DiskPosition::Equal(Rotation::RootOfUnity(r)),
            None => DiskPosition::Equal(Rotation::Irrational),
        },
    })
}

#[derive(Clone, Debug, PartialEq)]
pub enum Dominance {
    /// The Jacobian determinant has a nonzero coefficient of this degree.
    Dominant(u32),
    NonDominantUpToOrder(u32),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Germ {
    pub f1: BiSeries,
    pub f2: BiSeries,
    pub provenance: Provenance,
}

impl Germ {
    pub fn new(f1: BiSeries, f2: BiSeries) -> Result<Germ> {
        if !f1.constant_term().is_zero() || !f2.constant_term().is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        Ok(Germ { f1, f2, provenance: Provenance::Input })
    }

    pub fn parse(src: &str, trunc: u32) -> Result<Germ> {
        let (f1, f2) = parse_germ_components(src, trunc)?;
        Germ::new(f1, f2)
    }

    pub fn identity(trunc: u32) -> Germ {
        Germ::new(BiSeries::z(trunc), BiSeries::w(trunc)).expect("identity")
    }

    pub fn with_provenance(mut self, p: Provenance) -> Germ {
        self.provenance = p;
        self
    }

    pub fn trunc(&self) -> u32 {
        self.f1.trunc().min(self.f2.trunc())
    }

    pub fn truncated(&self, n: u32) -> Germ {
        Germ { f1: self.f1.truncated(n), f2: self.f2.truncated(n), provenance: self.provenance }
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &Germ) -> Result<Germ> {
        let f1 = self.f1.compose(&inner.f1, &inner.f2)?;
        let f2 = self.f2.compose(&inner.f1, &inner.f2)?;
        Ok(Germ { f1, f2, provenance: self.provenance })
    }

    /// The n-fold composition.
    pub fn iterate(&self, n: u32) -> Result<Germ> {
        if n == 0 {
            return Err(Error::Precondition("iterate needs n >= 1".into()));
        }
        let mut g = self.clone();
        for _ in 1..n {
            g = self.compose(&g)?;
        }
        Ok(g)
    }

    /// Compositional inverse of a germ with invertible linear part.
    pub fn inverse(&self) -> Result<Germ> {
        let m = self.linear_part();
        let li = m.inverse().map_err(|_| Error::Precondition("linear part is not invertible".into()))?;
        let n = self.trunc();
        let lin = m.as_germ(n);
        let r1 = self.f1.sub(&lin.f1);
        let r2 = self.f2.sub(&lin.f2);
        let linv = li.as_germ(n);
        // g = L^{-1} (id - R(g)) gains one correct order per pass
        let mut g = linv.clone();
        for _ in 0..n {
            let a = BiSeries::z(n).sub(&r1.compose(&g.f1, &g.f2)?);
            let b = BiSeries::w(n).sub(&r2.compose(&g.f1, &g.f2)?);
            g = linv.compose(&Germ { f1: a, f2: b, provenance: self.provenance })?;
        }
        Ok(g)
    }

    /// df_0.
    pub fn linear_part(&self) -> Matrix2 {
        Matrix2::new(self.f1.coeff(1, 0), self.f1.coeff(0, 1), self.f2.coeff(1, 0), self.f2.coeff(0, 1))
    }

    pub fn jacobian_det(&self) -> BiSeries {
        let a = self.f1.partial_z().mul(&self.f2.partial_w());
        let b = self.f1.partial_w().mul(&self.f2.partial_z());
        a.sub(&b)
    }

    pub fn dominance(&self) -> Dominance {
        match self.jacobian_det().order() {
            Order::Finite(d) => Dominance::Dominant(d),
            Order::AboveTruncation(n) => Dominance::NonDominantUpToOrder(n),
        }
    }

    pub fn require_dominant(&self) -> Result<()> {
        match self.dominance() {
            Dominance::Dominant(_) => Ok(()),
            Dominance::NonDominantUpToOrder(n) => Err(Error::NotDominant(n)),
        }
    }

    pub fn classify(&self) -> Result<GermType> {
        self.require_dominant()?;
        let m = self.linear_part();
        if m.is_zero() {
            return Ok(GermType::Superattracting);
        }
        let det = m.det();
        if !det.is_zero() {
            return Ok(GermType::Invertible);
        }
        let tr = m.trace();
        if tr.is_zero() {
            return Ok(GermType::NilpotentNonSuper);
        }
        let position = disk_position(&tr)?;
        Ok(GermType::SemiSuper { lambda: tr, position })
    }

    /// The nonzero eigenvalue of a semi-superattracting germ.
    pub fn semisuper_lambda(&self) -> Result<Scalar> {
        match self.classify()? {
            GermType::SemiSuper { lambda, .. } => Ok(lambda),
            other => Err(Error::Precondition(format!("germ is {}, not SemiSuper", other.name()))),
        }
    }

    /// Total order of the difference with `other`, used by comparison checks.
    pub fn difference_order(&self, other: &Germ) -> Order {
        let a = self.f1.sub(&other.f1).order();
        let b = self.f2.sub(&other.f2).order();
        match (a, b) {
            (Order::Finite(x), Order::Finite(y)) => Order::Finite(x.min(y)),
            (Order::Finite(x), _) | (_, Order::Finite(x)) => Order::Finite(x),
            (Order::AboveTruncation(x), Order::AboveTruncation(y)) => Order::AboveTruncation(x.min(y)),
        }
    }
}

impl fmt::Display for Germ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.f1, self.f2)
    }
}
