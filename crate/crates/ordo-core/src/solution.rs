//! Bound specifications, solver outcomes and infeasibility witnesses.

use serde::{Deserialize, Serialize};

use crate::digraph::{ArcFamilyKind, DegreeProfile, Digraph, VertexOrder};
use crate::ext::ExtendedValue;

/// Per-vertex lower (`f`) and upper (`g`) bounds on the weighted left-outdegree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundSpec {
    pub f: Vec<ExtendedValue>,
    pub g: Vec<ExtendedValue>,
}

impl BoundSpec {
    pub fn unbounded(n: usize) -> Self {
        Self { f: vec![ExtendedValue::NEG_INF; n], g: vec![ExtendedValue::POS_INF; n] }
    }

    pub fn upper(g: Vec<ExtendedValue>) -> Self {
        Self { f: vec![ExtendedValue::NEG_INF; g.len()], g }
    }

    pub fn lower(f: Vec<ExtendedValue>) -> Self {
        Self { g: vec![ExtendedValue::POS_INF; f.len()], f }
    }

    pub fn len(&self) -> usize {
        self.g.len()
    }

    pub fn is_empty(&self) -> bool {
        self.g.is_empty()
    }

    pub fn admits(&self, v: usize, left_weight: ExtendedValue) -> bool {
        self.f[v] <= left_weight && left_weight <= self.g[v]
    }

    /// Vertices whose weighted left-outdegree in `profile` violates a bound.
    pub fn violations(&self, profile: &DegreeProfile) -> Vec<usize> {
        (0..self.len()).filter(|&v| !self.admits(v, profile.delta_left_w[v])).collect()
    }
}

/// Certificate that no feasible order exists.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Witness {
    /// A vertex set every member of which violates its bound when placed
    /// rightmost among the set.
    InducedSet { vertices: Vec<usize> },
    /// Fewer than `k` vertices meeting every S-T dipath.
    CutSet { vertices: Vec<usize>, k: usize },
    /// The unfixed vertices at the point a greedy got stuck.
    StuckSet { vertices: Vec<usize> },
    /// Required left-arc totals disagree.
    SumMismatch { lhs: u64, rhs: u64 },
    /// A non-root vertex with no entering arc.
    DegreeDeficit { vertex: usize },
}

impl Witness {
    pub fn induced(mut vertices: Vec<usize>) -> Self {
        vertices.sort_unstable();
        Self::InducedSet { vertices }
    }

    pub fn stuck(mut vertices: Vec<usize>) -> Self {
        vertices.sort_unstable();
        Self::StuckSet { vertices }
    }

    pub fn type_name(&self) -> &'static str {
        match self {
            Self::InducedSet { .. } => "induced-set",
            Self::CutSet { .. } => "cut-set",
            Self::StuckSet { .. } => "stuck-set",
            Self::SumMismatch { .. } => "sum-mismatch",
            Self::DegreeDeficit { .. } => "degree-deficit",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SolveResult {
    Feasible { order: VertexOrder, profile: DegreeProfile },
    /// `witness` is `None` when infeasibility comes from exhaustive search.
    Infeasible { witness: Option<Witness> },
}

impl SolveResult {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Self::Feasible { .. })
    }

    pub fn order(&self) -> Option<&VertexOrder> {
        match self {
            Self::Feasible { order, .. } => Some(order),
            Self::Infeasible { .. } => None,
        }
    }

    pub fn profile(&self) -> Option<&DegreeProfile> {
        match self {
            Self::Feasible { profile, .. } => Some(profile),
            Self::Infeasible { .. } => None,
        }
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Self::Infeasible { witness } => witness.as_ref(),
            Self::Feasible { .. } => None,
        }
    }

    pub(crate) fn infeasible(w: Witness) -> Self {
        Self::Infeasible { witness: Some(w) }
    }
}

/// A split of all arcs into a family member and an acyclic remainder.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArcPartition {
    pub kind: ArcFamilyKind,
    pub family_arcs: Vec<usize>,
    pub acyclic_arcs: Vec<usize>,
}

impl ArcPartition {
    pub fn from_mask(d: &Digraph, family: &[bool], kind: ArcFamilyKind) -> Self {
        let (f, r): (Vec<usize>, Vec<usize>) = (0..d.m()).partition(|&a| family[a]);
        Self { kind, family_arcs: f, acyclic_arcs: r }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SolveError {
    #[error("{what} has {got} entries, expected {expected}")]
    LengthMismatch { what: &'static str, expected: usize, got: usize },
    #[error("{param} = {value} exceeds the configured cap {cap}")]
    CapExceeded { param: &'static str, value: usize, cap: usize },
    #[error("precedence constraints contain a cycle through {cycle:?}")]
    PrecedenceCycle { cycle: Vec<usize> },
    #[error("invalid specification: {0}")]
    SpecViolation(String),
}

pub(crate) fn check_len<T>(what: &'static str, v: &[T], n: usize) -> Result<(), SolveError> {
    if v.len() == n {
        Ok(())
    } else {
        Err(SolveError::LengthMismatch { what, expected: n, got: v.len() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn witness_json_shape() {
        let w = Witness::induced(vec![2, 0, 1]);
        let j = serde_json::to_value(&w).unwrap();
        assert_eq!(j, serde_json::json!({"type": "induced-set", "vertices": [0, 1, 2]}));
        let c: Witness = serde_json::from_str(r#"{"type":"cut-set","vertices":[],"k":1}"#).unwrap();
        assert_eq!(c, Witness::CutSet { vertices: vec![], k: 1 });
    }

    #[test]
    fn bound_admission() {
        let b = BoundSpec { f: vec![ExtendedValue::ONE], g: vec![ExtendedValue::from(2)] };
        assert!(!b.admits(0, ExtendedValue::ZERO));
        assert!(b.admits(0, ExtendedValue::from(2)));
        assert!(!b.admits(0, ExtendedValue::POS_INF));
    }
}
