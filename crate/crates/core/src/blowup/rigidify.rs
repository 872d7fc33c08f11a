//! Rigidification of semi-superattracting germs by blowing up along the
//! unstable direction.

use super::{lift_once, BlowupStep, ChartKind, Modification};
use crate::conjugacy::{prepare, ConjugationRecord};
use crate::error::{Error, Result};
use crate::germ::{classify_rigid, Germ, RigidClassification, RigidOutcome};
use crate::scalar::Scalar;

pub const DEFAULT_MAX_STEPS: u32 = 8;

/// Extra coefficients kept beyond one per blow-up.
const TRUNC_MARGIN: u32 = 8;

#[derive(Clone, Debug, PartialEq)]
pub struct Rigidification {
    pub modification: Modification,
    /// The rigid germ at the last center.
    pub germ: Germ,
    pub classification: RigidClassification,
    /// Change from the input germ to its prepared form.
    pub prepared: ConjugationRecord,
    /// Every lift, in order; the last is `germ`.
    pub lifts: Vec<Germ>,
}

fn is_rigid(g: &Germ) -> Result<Option<RigidClassification>> {
    match classify_rigid(g) {
        Ok(RigidOutcome::Rigid(c)) => Ok(Some(c)),
        Ok(RigidOutcome::NotRigid(_)) | Err(Error::Undecidable(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Prepares `f`, then blows up `[1:0]` in the z-chart until the lift is rigid.
pub fn rigidify_semisuper(f: &Germ, max_steps: u32) -> Result<Rigidification> {
    let lambda = f.semisuper_lambda()?;
    if f.trunc() < max_steps + TRUNC_MARGIN {
        return Err(Error::TruncationExhausted(format!(
            "N = {} is below {} needed for {max_steps} blow-ups",
            f.trunc(),
            max_steps + TRUNC_MARGIN
        )));
    }
    let prepared = prepare(f)?;
    let mut germ = prepared.germ.clone();
    let mut modification = Modification::new();
    let mut lifts = Vec::new();
    let zero = Scalar::zero();
    for _ in 0..=max_steps {
        if let Some(classification) = is_rigid(&germ)? {
            return Ok(Rigidification { modification, germ, classification, prepared: prepared.record, lifts });
        }
        if modification.len() as u32 == max_steps {
            break;
        }
        let lifted = lift_once(&germ, &zero, ChartKind::Z)?;
        let m = lifted.linear_part();
        if m.trace() != lambda || !m.det().is_zero() {
            return Err(Error::Precondition(format!("lift has df_0 = {m}, expected eigenvalues {{{lambda}, 0}}")));
        }
        modification.push(BlowupStep::new(ChartKind::Z, zero.clone()));
        lifts.push(lifted.clone());
        germ = lifted;
    }
    Err(Error::MaxStepsExceeded { steps: max_steps as usize })
}
