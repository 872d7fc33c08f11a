//! Point blow-ups in charts, lifts of germs through modifications and the
//! induced action on the first exceptional line.

mod exceptional;
mod modification;
mod rigidify;

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::germ::{Germ, Provenance};
use crate::scalar::Scalar;
use crate::series::{BiSeries, POLY_TRUNC};

pub use exceptional::{exceptional_image, ExceptionalImage, PointOnE};
pub use modification::{DualGraph, Modification, PointKind, Vertex};
pub use rigidify::{rigidify_semisuper, Rigidification, DEFAULT_MAX_STEPS};

/// The two standard charts of the blow-up of the origin.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum ChartKind {
    /// `(z, w) = (u, u (theta + v))`, centered at `[1 : theta]`.
    Z,
    /// `(z, w) = ((theta + v) s, s)`, centered at `[theta : 1]`.
    W,
}

impl fmt::Display for ChartKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChartKind::Z => write!(f, "z"),
            ChartKind::W => write!(f, "w"),
        }
    }
}

/// Blow up the current origin and recenter at `theta` in the given chart.
#[derive(Clone, Debug, PartialEq)]
pub struct BlowupStep {
    pub chart: ChartKind,
    pub theta: Scalar,
}

impl BlowupStep {
    pub fn new(chart: ChartKind, theta: Scalar) -> Self {
        BlowupStep { chart, theta }
    }

    /// The chart map as exact polynomials in the new coordinates.
    pub fn chart_map(&self) -> (BiSeries, BiSeries) {
        let t = &self.theta;
        match self.chart {
            ChartKind::Z => (
                BiSeries::z(POLY_TRUNC),
                BiSeries::polynomial([((1, 0), t.clone()), ((1, 1), Scalar::one())]),
            ),
            ChartKind::W => (
                BiSeries::polynomial([((0, 1), t.clone()), ((1, 1), Scalar::one())]),
                BiSeries::w(POLY_TRUNC),
            ),
        }
    }

    /// The point on the new exceptional line, `[1:theta]` or `[theta:1]`.
    pub fn point_label(&self) -> String {
        point_label(self.chart, &self.theta)
    }
}

impl fmt::Display for BlowupStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.chart, self.theta)
    }
}

fn point_label(chart: ChartKind, theta: &Scalar) -> String {
    match chart {
        ChartKind::Z => format!("[1:{theta}]"),
        ChartKind::W => format!("[{theta}:1]"),
    }
}

/// Applies the inverse of one chart map to a pair `(x, y)` of series in the
/// final coordinates, checking that the result vanishes at the origin.
fn invert_chart(step: &BlowupStep, x: &BiSeries, y: &BiSeries) -> Result<(BiSeries, BiSeries)> {
    let (num, den) = match step.chart {
        ChartKind::Z => (y, x),
        ChartKind::W => (x, y),
    };
    let ratio = match num.exact_div(den) {
        Ok(r) => r,
        Err(e) => {
            // the point may land at the far end of this chart
            if den.exact_div(num).is_ok_and(|r| r.constant_term().is_zero()) {
                let other = match step.chart {
                    ChartKind::Z => ChartKind::W,
                    ChartKind::W => ChartKind::Z,
                };
                return Err(Error::PointNotFixed { image: point_label(other, &Scalar::zero()) });
            }
            return Err(e);
        }
    };
    let c = ratio.constant_term();
    if c != step.theta {
        return Err(Error::PointNotFixed { image: point_label(step.chart, &c) });
    }
    let shifted = ratio.sub(&BiSeries::constant(step.theta.clone(), ratio.trunc()));
    Ok(match step.chart {
        ChartKind::Z => (x.clone(), shifted),
        ChartKind::W => (shifted, y.clone()),
    })
}

/// `pi^{-1} ∘ f ∘ pi` in the coordinates at the last center of `steps`.
pub fn lift_through(f: &Germ, steps: &[BlowupStep]) -> Result<Germ> {
    let (p1, p2) = projection(steps)?;
    let mut x = f.f1.compose(&p1, &p2)?;
    let mut y = f.f2.compose(&p1, &p2)?;
    for step in steps {
        let (nx, ny) = invert_chart(step, &x, &y)?;
        x = nx;
        y = ny;
    }
    let t = x.trunc().min(y.trunc());
    if t == 0 {
        return Err(Error::TruncationExhausted("no coefficients survive the lift".into()));
    }
    Ok(Germ::new(x.with_trunc(t), y.with_trunc(t))?.with_provenance(Provenance::Lift))
}

/// Lift at the point `theta` of the exceptional line of a single blow-up.
pub fn lift_once(f: &Germ, theta: &Scalar, chart: ChartKind) -> Result<Germ> {
    lift_through(f, &[BlowupStep::new(chart, theta.clone())])
}

/// The composite `pi = pi_1 ∘ ... ∘ pi_k` as exact polynomials.
pub fn projection(steps: &[BlowupStep]) -> Result<(BiSeries, BiSeries)> {
    let mut p1 = BiSeries::z(POLY_TRUNC);
    let mut p2 = BiSeries::w(POLY_TRUNC);
    for step in steps {
        let (c1, c2) = step.chart_map();
        let n1 = p1.compose(&c1, &c2)?;
        let n2 = p2.compose(&c1, &c2)?;
        p1 = n1;
        p2 = n2;
    }
    Ok((p1, p2))
}

/// Checks `f ∘ pi = pi ∘ g` up to the truncation of `g`.
pub fn verify_lift(f: &Germ, g: &Germ, steps: &[BlowupStep]) -> Result<bool> {
    let (p1, p2) = projection(steps)?;
    let lhs1 = f.f1.compose(&p1, &p2)?;
    let lhs2 = f.f2.compose(&p1, &p2)?;
    let rhs1 = p1.compose(&g.f1, &g.f2)?;
    let rhs2 = p2.compose(&g.f1, &g.f2)?;
    let n = lhs1.trunc().min(lhs2.trunc()).min(rhs1.trunc()).min(rhs2.trunc()).min(g.trunc());
    Ok(lhs1.agrees_to(&rhs1, n) && lhs2.agrees_to(&rhs2, n))
}
