//! Rigidity test in the given coordinates and the seven-class table.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use super::Germ;
use crate::error::{Error, Result};

/// A coordinate axis: `Z` is `{z = 0}`, `W` is `{w = 0}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Axis {
    Z,
    W,
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Axis::Z => write!(f, "{{z=0}}"),
            Axis::W => write!(f, "{{w=0}}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum RigidData {
    Regular,
    /// `p = f_*(1)`.
    Irreducible { p: u32 },
    /// `M(f)`, rows from the first and second component.
    Reducible { m: [[u32; 2]; 2] },
}

#[derive(Clone, Debug, PartialEq)]
pub struct RigidClassification {
    pub class_id: u8,
    pub data: RigidData,
    pub tr_zero: bool,
    /// Components of the generalized critical set.
    pub critical_set: Vec<Axis>,
    /// Exponents of the Jacobian monomial.
    pub jacobian_monomial: (u32, u32),
}

#[derive(Clone, Debug, PartialEq)]
pub enum NotRigidReason {
    PreimageLeavesAxes(Axis),
    NotForwardInvariant(Axis),
}

#[derive(Clone, Debug, PartialEq)]
pub struct NotRigidEvidence {
    pub reason: NotRigidReason,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq)]
pub enum RigidOutcome {
    Rigid(RigidClassification),
    NotRigid(NotRigidEvidence),
}

impl RigidOutcome {
    pub fn rigid(&self) -> Option<&RigidClassification> {
        match self {
            RigidOutcome::Rigid(c) => Some(c),
            RigidOutcome::NotRigid(_) => None,
        }
    }
}

fn component_factor(f: &Germ, axis: Axis) -> Option<(u32, u32)> {
    let comp = match axis {
        Axis::Z => &f.f1,
        Axis::W => &f.f2,
    };
    comp.monomial_factor().map(|m| (m.a, m.b))
}

/// Decides rigidity when the generalized critical set lies in the axes.
pub fn classify_rigid(f: &Germ) -> Result<RigidOutcome> {
    f.require_dominant()?;
    let jac = f.jacobian_det();
    let jm = jac.monomial_factor().ok_or_else(|| {
        Error::Undecidable(format!(
            "Jacobian determinant {jac} is not a monomial times a unit; rigid only after a coordinate change, if at all"
        ))
    })?;
    let tr_zero = f.linear_part().trace().is_zero();
    let mut set: BTreeSet<Axis> = BTreeSet::new();
    if jm.a > 0 {
        set.insert(Axis::Z);
    }
    if jm.b > 0 {
        set.insert(Axis::W);
    }
    if set.is_empty() {
        return Ok(RigidOutcome::Rigid(RigidClassification {
            class_id: 1,
            data: RigidData::Regular,
            tr_zero,
            critical_set: Vec::new(),
            jacobian_monomial: (0, 0),
        }));
    }

    // close under preimages: f^{-1}{z=0} = {f1 = 0}, f^{-1}{w=0} = {f2 = 0}
    let mut work: Vec<Axis> = set.iter().copied().collect();
    while let Some(ax) = work.pop() {
        let (a, b) = match component_factor(f, ax) {
            Some(ab) => ab,
            None => {
                return Ok(RigidOutcome::NotRigid(NotRigidEvidence {
                    reason: NotRigidReason::PreimageLeavesAxes(ax),
                    detail: format!("preimage of {ax} is not contained in the axes"),
                }))
            }
        };
        for (e, new) in [(a, Axis::Z), (b, Axis::W)] {
            if e > 0 && set.insert(new) {
                work.push(new);
            }
        }
    }

    for &ax in &set {
        let (x, y) = match ax {
            Axis::Z => (f.f1.restrict_z_zero(), f.f2.restrict_z_zero()),
            Axis::W => (f.f1.restrict_w_zero(), f.f2.restrict_w_zero()),
        };
        let ok = match (x.is_zero(), y.is_zero()) {
            (true, true) => true,
            (true, false) => set.contains(&Axis::Z),
            (false, true) => set.contains(&Axis::W),
            (false, false) => false,
        };
        if !ok {
            return Ok(RigidOutcome::NotRigid(NotRigidEvidence {
                reason: NotRigidReason::NotForwardInvariant(ax),
                detail: format!("the image of {ax} is not contained in the critical set"),
            }));
        }
    }

    let critical_set: Vec<Axis> = set.iter().copied().collect();
    let jacobian_monomial = (jm.a, jm.b);
    let class = if critical_set.len() == 1 {
        let ax = critical_set[0];
        let (a, b) = component_factor(f, ax).expect("checked during closure");
        let p = if ax == Axis::Z { a } else { b };
        let class_id = if tr_zero {
            4
        } else if p == 1 {
            2
        } else {
            3
        };
        RigidClassification { class_id, data: RigidData::Irreducible { p }, tr_zero, critical_set, jacobian_monomial }
    } else {
        let (a, b) = component_factor(f, Axis::Z).expect("checked during closure");
        let (c, d) = component_factor(f, Axis::W).expect("checked during closure");
        let det = a as i64 * d as i64 - b as i64 * c as i64;
        let class_id = if !tr_zero {
            5
        } else if det != 0 {
            6
        } else {
            7
        };
        RigidClassification {
            class_id,
            data: RigidData::Reducible { m: [[a, b], [c, d]] },
            tr_zero,
            critical_set,
            jacobian_monomial,
        }
    };
    Ok(RigidOutcome::Rigid(class))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn class_of(src: &str) -> RigidOutcome {
        classify_rigid(&Germ::parse(src, 12).unwrap()).unwrap()
    }

    fn id(src: &str) -> u8 {
        class_of(src).rigid().unwrap_or_else(|| panic!("{src} not rigid")).class_id
    }

    #[test]
    fn one_witness_per_class() {
        assert_eq!(id("(2z + w^2, 3w)"), 1);
        assert_eq!(id("(2z, z w + z^2)"), 2);
        assert_eq!(id("(z^2, 2w)"), 3);
        assert_eq!(id("(z^2, z w)"), 4);
        assert_eq!(id("(3z, z w^2)"), 5);
        assert_eq!(id("(z^2 w, z w^2)"), 6);
        assert_eq!(id("(z w (1+z), z w)"), 7);
    }

    #[test]
    fn class_seven_data() {
        let c = class_of("(z w (1+z), z w)");
        let r = c.rigid().unwrap();
        assert_eq!(r.data, RigidData::Reducible { m: [[1, 1], [1, 1]] });
        assert_eq!(r.jacobian_monomial, (2, 1));
    }

    #[test]
    fn linear_in_w_with_monomial_z_part() {
        // (lambda z, z^c w) has critical set {z=0} only
        assert_eq!(id("(2z, z^3 w)"), 2);
        assert_eq!(id("(2z, z^2 w + z^5)"), 2);
    }

    #[test]
    fn non_invariant_critical_set() {
        let o = class_of("(2z^2, z(1+w^2))");
        assert!(matches!(
            o,
            RigidOutcome::NotRigid(NotRigidEvidence { reason: NotRigidReason::NotForwardInvariant(_), .. })
        ));
    }

    #[test]
    fn undecidable_when_jacobian_not_monomial() {
        let f = Germ::parse("(z + w^2, z w)", 10).unwrap();
        assert!(matches!(classify_rigid(&f), Err(Error::Undecidable(_))));
    }
}
