//! Loop-free multidigraphs with optional extended arc weights, vertex orders,
//! degree profiles, acyclicity and arc-family membership.

mod acyclic;
pub(crate) mod classify;
pub mod io;
pub(crate) mod profile;

pub use acyclic::{is_acyclic, is_acyclic_subset, topological_order, CycleWitness};
pub use classify::{classify_arc_set, ArcFamilyKind, ClassifyError};
pub use profile::{
    degree_profile, induced_min_outdegree, left_arcs, DegreeProfile, OrderError, VertexOrder,
};

use crate::ext::ExtendedValue;

/// One arc. A missing weight means weight 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Arc {
    pub tail: usize,
    pub head: usize,
    pub weight: Option<ExtendedValue>,
}

impl Arc {
    pub fn new(tail: usize, head: usize) -> Self {
        Self { tail, head, weight: None }
    }

    pub fn weighted(tail: usize, head: usize, weight: ExtendedValue) -> Self {
        Self { tail, head, weight: Some(weight) }
    }

    pub fn weight_or_one(&self) -> ExtendedValue {
        self.weight.unwrap_or(ExtendedValue::ONE)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DigraphError {
    #[error("arc {arc} is a loop at vertex {vertex}")]
    Loop { arc: usize, vertex: usize },
    #[error("arc {arc} has endpoint {vertex} outside 0..{n}")]
    EndpointOutOfRange { arc: usize, vertex: usize, n: usize },
    #[error("arc {arc} has negative weight")]
    NegativeWeight { arc: usize },
}

/// Vertices are `0..n`; an arc's identity is its index.
#[derive(Debug, Clone, PartialEq)]
pub struct Digraph {
    n: usize,
    arcs: Vec<Arc>,
    out_adj: Vec<Vec<usize>>,
    in_adj: Vec<Vec<usize>>,
}

impl Digraph {
    pub fn new(n: usize, arcs: Vec<Arc>) -> Result<Self, DigraphError> {
        let mut out_adj = vec![Vec::new(); n];
        let mut in_adj = vec![Vec::new(); n];
        for (i, a) in arcs.iter().enumerate() {
            for v in [a.tail, a.head] {
                if v >= n {
                    return Err(DigraphError::EndpointOutOfRange { arc: i, vertex: v, n });
                }
            }
            if a.tail == a.head {
                return Err(DigraphError::Loop { arc: i, vertex: a.tail });
            }
            if a.weight.is_some_and(|w| w < ExtendedValue::ZERO) {
                return Err(DigraphError::NegativeWeight { arc: i });
            }
            out_adj[a.tail].push(i);
            in_adj[a.head].push(i);
        }
        Ok(Self { n, arcs, out_adj, in_adj })
    }

    /// Unweighted digraph from `(tail, head)` pairs.
    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Result<Self, DigraphError> {
        Self::new(n, pairs.iter().map(|&(t, h)| Arc::new(t, h)).collect())
    }

    pub fn empty(n: usize) -> Self {
        Self::new(n, Vec::new()).expect("empty digraph is valid")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.arcs.len()
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn arc(&self, a: usize) -> &Arc {
        &self.arcs[a]
    }

    /// Indices of arcs leaving `v`, increasing.
    pub fn out_arcs(&self, v: usize) -> &[usize] {
        &self.out_adj[v]
    }

    /// Indices of arcs entering `v`, increasing.
    pub fn in_arcs(&self, v: usize) -> &[usize] {
        &self.in_adj[v]
    }

    pub fn weight(&self, a: usize) -> ExtendedValue {
        self.arcs[a].weight_or_one()
    }

    pub fn weights(&self) -> Vec<ExtendedValue> {
        self.arcs.iter().map(Arc::weight_or_one).collect()
    }

    pub fn has_explicit_weights(&self) -> bool {
        self.arcs.iter().any(|a| a.weight.is_some())
    }

    pub fn outdegree(&self, v: usize) -> usize {
        self.out_adj[v].len()
    }

    pub fn indegree(&self, v: usize) -> usize {
        self.in_adj[v].len()
    }

    pub fn weighted_outdegree(&self, v: usize) -> ExtendedValue {
        self.out_adj[v].iter().map(|&a| self.weight(a)).sum()
    }

    /// Same arcs with every weight dropped.
    pub fn unweighted(&self) -> Self {
        let arcs = self.arcs.iter().map(|a| Arc::new(a.tail, a.head)).collect();
        Self::new(self.n, arcs).expect("same endpoints")
    }

    /// Every arc reversed; arc indices are preserved.
    pub fn reversed(&self) -> Self {
        let arcs = self
            .arcs
            .iter()
            .map(|a| Arc { tail: a.head, head: a.tail, weight: a.weight })
            .collect();
        Self::new(self.n, arcs).expect("reversal preserves validity")
    }

    /// No two arcs share the same ordered pair.
    pub fn is_simple(&self) -> bool {
        let mut seen = std::collections::HashSet::new();
        self.arcs.iter().all(|a| seen.insert((a.tail, a.head)))
    }

    /// Every arc has its opposite with the same multiplicity.
    pub fn is_symmetric(&self) -> bool {
        let mut count = std::collections::HashMap::<(usize, usize), i64>::new();
        for a in &self.arcs {
            *count.entry((a.tail, a.head)).or_default() += 1;
            *count.entry((a.head, a.tail)).or_default() -= 1;
        }
        count.values().all(|&c| c == 0)
    }

    /// Simple complement: `u -> v` for every ordered pair of distinct vertices
    /// not joined by an arc `u -> v`, in lexicographic pair order.
    pub fn complement(&self) -> Self {
        let mut present = vec![false; self.n * self.n];
        for a in &self.arcs {
            present[a.tail * self.n + a.head] = true;
        }
        let mut pairs = Vec::new();
        for u in 0..self.n {
            for v in 0..self.n {
                if u != v && !present[u * self.n + v] {
                    pairs.push((u, v));
                }
            }
        }
        Self::from_pairs(self.n, &pairs).expect("complement is loop-free")
    }

    /// Number of arcs from `v` into the vertices flagged in `set`, `v` excluded.
    pub fn count_into(&self, v: usize, set: &[bool]) -> usize {
        self.out_adj[v]
            .iter()
            .filter(|&&a| {
                let h = self.arcs[a].head;
                h != v && set[h]
            })
            .count()
    }

    /// Number of arcs into `v` from the vertices flagged in `set`, `v` excluded.
    pub fn count_from(&self, v: usize, set: &[bool]) -> usize {
        self.in_adj[v]
            .iter()
            .filter(|&&a| {
                let t = self.arcs[a].tail;
                t != v && set[t]
            })
            .count()
    }

    /// Weighted sum of arcs from `v` into `set`, summed in arc-index order.
    pub fn weight_into(&self, v: usize, set: &[bool], weights: &[ExtendedValue]) -> ExtendedValue {
        self.out_adj[v]
            .iter()
            .filter(|&&a| set[self.arcs[a].head])
            .map(|&a| weights[a])
            .sum()
    }
}

/// Membership mask of length `n` for a vertex list.
pub fn mask_of(n: usize, vertices: &[usize]) -> Vec<bool> {
    let mut m = vec![false; n];
    for &v in vertices {
        m[v] = true;
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_loops_and_bad_endpoints() {
        assert_eq!(
            Digraph::from_pairs(2, &[(1, 1)]),
            Err(DigraphError::Loop { arc: 0, vertex: 1 })
        );
        assert!(matches!(
            Digraph::from_pairs(2, &[(0, 2)]),
            Err(DigraphError::EndpointOutOfRange { vertex: 2, .. })
        ));
        let neg = Digraph::new(2, vec![Arc::weighted(0, 1, ExtendedValue::finite(-1.0))]);
        assert_eq!(neg, Err(DigraphError::NegativeWeight { arc: 0 }));
    }

    #[test]
    fn parallel_arcs_keep_identity() {
        let d = Digraph::from_pairs(2, &[(0, 1), (0, 1)]).unwrap();
        assert_eq!(d.out_arcs(0), &[0, 1]);
        assert!(!d.is_simple());
        assert_eq!(d.weighted_outdegree(0), ExtendedValue::from(2));
    }

    #[test]
    fn complement_of_triangle() {
        let d = Digraph::from_pairs(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        let c = d.complement();
        assert_eq!(c.m(), 3);
        assert!(c.arcs().iter().all(|a| (a.head + 1) % 3 == a.tail));
    }

    #[test]
    fn symmetric_detection_counts_multiplicity() {
        let d = Digraph::from_pairs(2, &[(0, 1), (1, 0)]).unwrap();
        assert!(d.is_symmetric());
        let e = Digraph::from_pairs(2, &[(0, 1), (0, 1), (1, 0)]).unwrap();
        assert!(!e.is_symmetric());
    }
}
