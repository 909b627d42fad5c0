use serde::{Deserialize, Serialize};

use super::{Digraph, VertexOrder};

/// A directed cycle as a sequence of arc indices, each arc's head being the
/// next arc's tail and the last head the first tail.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleWitness {
    pub arcs: Vec<usize>,
}

/// Peels sinks among the arcs flagged in `active`. Returns the vertices in
/// peeling order and, per vertex, the residual outdegree (zero iff peeled).
fn peel(d: &Digraph, active: &[bool]) -> (Vec<usize>, Vec<usize>) {
    let n = d.n();
    let mut outdeg = vec![0usize; n];
    for (i, a) in d.arcs().iter().enumerate() {
        if active[i] {
            outdeg[a.tail] += 1;
        }
    }
    let mut heap: std::collections::BinaryHeap<std::cmp::Reverse<usize>> =
        (0..n).filter(|&v| outdeg[v] == 0).map(std::cmp::Reverse).collect();
    let mut peeled = Vec::with_capacity(n);
    while let Some(std::cmp::Reverse(v)) = heap.pop() {
        peeled.push(v);
        for &a in d.in_arcs(v) {
            if active[a] {
                let t = d.arc(a).tail;
                outdeg[t] -= 1;
                if outdeg[t] == 0 {
                    heap.push(std::cmp::Reverse(t));
                }
            }
        }
    }
    (peeled, outdeg)
}

pub fn is_acyclic(d: &Digraph) -> bool {
    is_acyclic_subset(d, &vec![true; d.m()])
}

/// Acyclicity of the sub-multidigraph formed by the arcs flagged in `active`.
pub fn is_acyclic_subset(d: &Digraph, active: &[bool]) -> bool {
    peel(d, active).0.len() == d.n()
}

/// An order with no left-going arc, or a directed cycle. Among available
/// sinks the lowest id is placed rightmost.
pub fn topological_order(d: &Digraph) -> Result<VertexOrder, CycleWitness> {
    let active = vec![true; d.m()];
    let (peeled, outdeg) = peel(d, &active);
    if peeled.len() == d.n() {
        return Ok(VertexOrder::from_right_to_left(peeled));
    }
    // Every unpeeled vertex keeps an out-arc to another unpeeled vertex.
    let start = (0..d.n()).find(|&v| outdeg[v] > 0).expect("unpeeled vertex");
    let mut step_of = vec![usize::MAX; d.n()];
    let mut walk = Vec::new();
    let mut v = start;
    while step_of[v] == usize::MAX {
        step_of[v] = walk.len();
        let a = *d
            .out_arcs(v)
            .iter()
            .find(|&&a| outdeg[d.arc(a).head] > 0)
            .expect("residual out-arc");
        walk.push(a);
        v = d.arc(a).head;
    }
    Err(CycleWitness { arcs: walk[step_of[v]..].to_vec() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::degree_profile;

    #[test]
    fn triangle_is_cyclic_with_three_arc_witness() {
        let d = Digraph::from_pairs(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        assert!(!is_acyclic(&d));
        let w = topological_order(&d).unwrap_err();
        assert_eq!(w.arcs.len(), 3);
        for (i, &a) in w.arcs.iter().enumerate() {
            let next = w.arcs[(i + 1) % w.arcs.len()];
            assert_eq!(d.arc(a).head, d.arc(next).tail);
        }
    }

    #[test]
    fn chain_orders_topologically() {
        let d = Digraph::from_pairs(3, &[(0, 1), (1, 2)]).unwrap();
        assert!(is_acyclic(&d));
        assert_eq!(topological_order(&d).unwrap().as_slice(), &[0, 1, 2]);
    }

    #[test]
    fn parallel_arcs_are_acyclic() {
        let d = Digraph::from_pairs(2, &[(0, 1), (0, 1)]).unwrap();
        assert!(is_acyclic(&d));
    }

    #[test]
    fn cycle_witness_inside_larger_graph() {
        let d = Digraph::from_pairs(5, &[(0, 1), (1, 2), (2, 3), (3, 1), (3, 4)]).unwrap();
        let w = topological_order(&d).unwrap_err();
        assert_eq!(w.arcs.len(), 3);
    }

    #[test]
    fn topological_order_has_no_left_arcs() {
        let d = Digraph::from_pairs(4, &[(3, 0), (0, 2), (3, 2), (1, 0)]).unwrap();
        let o = topological_order(&d).unwrap();
        let p = degree_profile(&d, &o).unwrap();
        assert!(p.delta_left.iter().all(|&x| x == 0));
    }

    #[test]
    fn subset_acyclicity() {
        let d = Digraph::from_pairs(2, &[(0, 1), (1, 0)]).unwrap();
        assert!(!is_acyclic_subset(&d, &[true, true]));
        assert!(is_acyclic_subset(&d, &[true, false]));
    }
}
