//! Ordered lists of blow-ups together with their dual graph.

use std::collections::BTreeSet;

use serde::Serialize;

use super::{BlowupStep, ChartKind};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// How the center of a blow-up sits on the earlier exceptional set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PointKind {
    /// The first blow-up, at the origin.
    Origin,
    /// The center lies on exactly one exceptional component.
    Free,
    /// The center is the intersection of two exceptional components.
    Satellite,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Vertex {
    pub index: usize,
    pub kind: PointKind,
    /// Components containing the center of this blow-up.
    pub parents: Vec<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct DualGraph {
    pub vertices: Vec<Vertex>,
    pub edges: BTreeSet<(usize, usize)>,
}

impl DualGraph {
    pub fn neighbours(&self, v: usize) -> Vec<usize> {
        self.edges
            .iter()
            .filter_map(|&(a, b)| if a == v { Some(b) } else if b == v { Some(a) } else { None })
            .collect()
    }

    pub fn is_tree(&self) -> bool {
        let n = self.vertices.len();
        if n == 0 {
            return true;
        }
        if self.edges.len() != n - 1 {
            return false;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for u in self.neighbours(v) {
                if !seen[u] {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn is_path(&self) -> bool {
        self.is_tree() && (0..self.vertices.len()).all(|v| self.neighbours(v).len() <= 2)
    }

    /// Vertices on the path from `E_0` to `v`, both ends included.
    pub fn path_from_root(&self, v: usize) -> Vec<usize> {
        let n = self.vertices.len();
        let mut parent = vec![usize::MAX; n];
        let mut stack = vec![0];
        parent[0] = 0;
        while let Some(x) = stack.pop() {
            for u in self.neighbours(x) {
                if parent[u] == usize::MAX {
                    parent[u] = x;
                    stack.push(u);
                }
            }
        }
        let mut path = vec![v];
        let mut x = v;
        while x != 0 {
            x = parent[x];
            path.push(x);
        }
        path.reverse();
        path
    }

    /// The order `E_i <= E_j`: `E_i` lies on the segment from `E_0` to `E_j`.
    pub fn le(&self, i: usize, j: usize) -> bool {
        self.path_from_root(j).contains(&i)
    }
}

/// A composition of point blow-ups, each centered on the newest component.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Modification {
    steps: Vec<BlowupStep>,
    graph: DualGraph,
    /// Exceptional components through `{x = 0}` and `{y = 0}` of the current chart.
    through: [Option<usize>; 2],
}

impl Modification {
    pub fn new() -> Self {
        Modification::default()
    }

    pub fn from_steps(steps: impl IntoIterator<Item = BlowupStep>) -> Self {
        let mut m = Modification::new();
        for s in steps {
            m.push(s);
        }
        m
    }

    pub fn steps(&self) -> &[BlowupStep] {
        &self.steps
    }

    pub fn dual_graph(&self) -> &DualGraph {
        &self.graph
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Kind of the current center, the point the next blow-up would use.
    pub fn next_center_kind(&self) -> PointKind {
        match self.through {
            [None, None] => PointKind::Origin,
            [Some(_), Some(_)] => PointKind::Satellite,
            _ => PointKind::Free,
        }
    }

    pub fn push(&mut self, step: BlowupStep) {
        let k = self.steps.len();
        let parents: Vec<usize> = self.through.iter().flatten().copied().collect();
        let kind = self.next_center_kind();
        if let [a, b] = parents[..] {
            self.graph.edges.remove(&(a.min(b), a.max(b)));
        }
        for &p in &parents {
            self.graph.edges.insert((p, k));
        }
        self.graph.vertices.push(Vertex { index: k, kind, parents });
        let at_origin = step.theta.is_zero();
        self.through = match step.chart {
            ChartKind::Z => [Some(k), if at_origin { self.through[1] } else { None }],
            ChartKind::W => [if at_origin { self.through[0] } else { None }, Some(k)],
        };
        self.steps.push(step);
    }

    /// Checks the recorded graph against its structural invariants.
    pub fn validate(&self) -> Result<()> {
        if !self.graph.is_tree() {
            return Err(Error::Precondition("dual graph is not a tree".into()));
        }
        for v in &self.graph.vertices {
            if v.parents.iter().any(|&p| p >= v.index) {
                return Err(Error::Precondition(format!("component {} has a later parent", v.index)));
            }
        }
        Ok(())
    }

    /// The modification record as `(chart, theta)` pairs.
    pub fn step_list(&self) -> Vec<(ChartKind, Scalar)> {
        self.steps.iter().map(|s| (s.chart, s.theta.clone())).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn step(c: ChartKind, t: i64) -> BlowupStep {
        BlowupStep::new(c, Scalar::from_int(t))
    }

    #[test]
    fn satellite_walk() {
        let m = Modification::from_steps([step(ChartKind::Z, 0), step(ChartKind::W, 0), step(ChartKind::W, 0)]);
        let kinds: Vec<PointKind> = m.dual_graph().vertices.iter().map(|v| v.kind).collect();
        assert_eq!(kinds, vec![PointKind::Origin, PointKind::Free, PointKind::Satellite]);
        // E_2 separates E_0 and E_1
        let edges: Vec<(usize, usize)> = m.dual_graph().edges.iter().copied().collect();
        assert_eq!(edges, vec![(0, 2), (1, 2)]);
        assert!(m.validate().is_ok());
        assert!(m.dual_graph().le(2, 1));
        assert!(!m.dual_graph().le(1, 2));
    }

    #[test]
    fn free_chain_is_a_path() {
        let m = Modification::from_steps((0..5).map(|_| step(ChartKind::Z, 0)));
        let g = m.dual_graph();
        assert!(g.is_path());
        assert!(g.vertices.iter().skip(1).all(|v| v.kind == PointKind::Free));
        assert!(g.le(0, 4) && g.le(2, 3));
    }

    #[test]
    fn nonzero_center_leaves_older_components() {
        let m = Modification::from_steps([step(ChartKind::Z, 0), step(ChartKind::Z, 0), step(ChartKind::W, 1)]);
        assert_eq!(m.next_center_kind(), PointKind::Free);
        let m = Modification::from_steps([step(ChartKind::Z, 0), step(ChartKind::W, 0)]);
        assert_eq!(m.next_center_kind(), PointKind::Satellite);
    }
}
