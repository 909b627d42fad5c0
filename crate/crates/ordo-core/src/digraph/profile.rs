use serde::{Deserialize, Serialize};

use super::{mask_of, Digraph};
use crate::ext::ExtendedValue;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OrderError {
    #[error("order has length {got}, digraph has {expected} vertices")]
    LengthMismatch { expected: usize, got: usize },
    #[error("order is not a permutation: vertex {0} repeats or is out of range")]
    NotPermutation(usize),
}

/// A permutation of `0..n`; `sigma[i]` is the vertex at position `i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexOrder(Vec<usize>);

impl VertexOrder {
    pub fn new(sigma: Vec<usize>, n: usize) -> Result<Self, OrderError> {
        if sigma.len() != n {
            return Err(OrderError::LengthMismatch { expected: n, got: sigma.len() });
        }
        let mut seen = vec![false; n];
        for &v in &sigma {
            if v >= n || seen[v] {
                return Err(OrderError::NotPermutation(v));
            }
            seen[v] = true;
        }
        Ok(Self(sigma))
    }

    pub fn identity(n: usize) -> Self {
        Self((0..n).collect())
    }

    /// Builds an order from vertices fixed right to left.
    pub(crate) fn from_right_to_left(mut fixed: Vec<usize>) -> Self {
        fixed.reverse();
        Self(fixed)
    }

    pub(crate) fn from_vec_unchecked(sigma: Vec<usize>) -> Self {
        Self(sigma)
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `positions()[v]` is the index of `v` in the order.
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.0.len()];
        for (i, &v) in self.0.iter().enumerate() {
            pos[v] = i;
        }
        pos
    }

    pub fn reversed(&self) -> Self {
        Self(self.0.iter().rev().copied().collect())
    }
}

/// Per-vertex left/right out/in degrees of an order.
///
/// `delta_left[v] + delta_right[v]` is the outdegree of `v`,
/// `rho_left[v] + rho_right[v]` its indegree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegreeProfile {
    pub delta_left: Vec<usize>,
    pub delta_right: Vec<usize>,
    pub rho_left: Vec<usize>,
    pub rho_right: Vec<usize>,
    pub delta_left_w: Vec<ExtendedValue>,
    pub rho_right_w: Vec<ExtendedValue>,
}

impl DegreeProfile {
    pub fn left_arc_count(&self) -> usize {
        self.delta_left.iter().sum()
    }

    pub fn max_delta_left_w(&self) -> ExtendedValue {
        self.delta_left_w.iter().copied().max().unwrap_or(ExtendedValue::ZERO)
    }
}

/// Degree profile of `order` under the digraph's own weights.
pub fn degree_profile(d: &Digraph, order: &VertexOrder) -> Result<DegreeProfile, OrderError> {
    degree_profile_weighted(d, order, &d.weights())
}

pub(crate) fn degree_profile_weighted(
    d: &Digraph,
    order: &VertexOrder,
    weights: &[ExtendedValue],
) -> Result<DegreeProfile, OrderError> {
    let checked = VertexOrder::new(order.as_slice().to_vec(), d.n())?;
    let pos = checked.positions();
    let n = d.n();
    let mut p = DegreeProfile {
        delta_left: vec![0; n],
        delta_right: vec![0; n],
        rho_left: vec![0; n],
        rho_right: vec![0; n],
        delta_left_w: vec![ExtendedValue::ZERO; n],
        rho_right_w: vec![ExtendedValue::ZERO; n],
    };
    for (i, a) in d.arcs().iter().enumerate() {
        if pos[a.head] < pos[a.tail] {
            p.delta_left[a.tail] += 1;
            p.rho_right[a.head] += 1;
            p.delta_left_w[a.tail] = p.delta_left_w[a.tail] + weights[i];
            p.rho_right_w[a.head] = p.rho_right_w[a.head] + weights[i];
        } else {
            p.delta_right[a.tail] += 1;
            p.rho_left[a.head] += 1;
        }
    }
    Ok(p)
}

/// Indices of arcs whose head precedes their tail.
pub fn left_arcs(d: &Digraph, order: &VertexOrder) -> Vec<usize> {
    let pos = order.positions();
    (0..d.m())
        .filter(|&i| {
            let a = d.arc(i);
            pos[a.head] < pos[a.tail]
        })
        .collect()
}

/// For every vertex `v`, the weighted number of arcs from `v` into
/// `members \ {v}`, summed in arc-index order.
pub fn induced_min_outdegree(
    d: &Digraph,
    weights: &[ExtendedValue],
    members: &[usize],
) -> Vec<ExtendedValue> {
    let mask = mask_of(d.n(), members);
    (0..d.n()).map(|v| d.weight_into(v, &mask, weights)).collect()
}
