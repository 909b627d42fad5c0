//! Incremental degree bookkeeping for greedy solvers that fix one vertex at a
//! time. "Unfixed" is the set `V'`; "fixed" is its complement.

use crate::digraph::Digraph;
use crate::ext::ExtendedValue;

pub(crate) struct Sweep<'a> {
    d: &'a Digraph,
    weights: &'a [ExtendedValue],
    unfixed: Vec<bool>,
    out_w_unfixed: Vec<ExtendedValue>,
    out_w_fixed: Vec<ExtendedValue>,
    out_c_unfixed: Vec<usize>,
    in_c_unfixed: Vec<usize>,
    fixed: Vec<usize>,
}

impl<'a> Sweep<'a> {
    pub(crate) fn new(d: &'a Digraph, weights: &'a [ExtendedValue]) -> Self {
        let n = d.n();
        let unfixed = vec![true; n];
        let out_w_unfixed = (0..n).map(|v| d.weight_into(v, &unfixed, weights)).collect();
        Self {
            d,
            weights,
            out_w_fixed: vec![ExtendedValue::ZERO; n],
            out_c_unfixed: (0..n).map(|v| d.outdegree(v)).collect(),
            in_c_unfixed: (0..n).map(|v| d.indegree(v)).collect(),
            unfixed,
            out_w_unfixed,
            fixed: Vec::with_capacity(n),
        }
    }

    pub(crate) fn is_unfixed(&self, v: usize) -> bool {
        self.unfixed[v]
    }

    pub(crate) fn unfixed_vertices(&self) -> Vec<usize> {
        (0..self.d.n()).filter(|&v| self.unfixed[v]).collect()
    }

    pub(crate) fn all_fixed(&self) -> bool {
        self.fixed.len() == self.d.n()
    }

    /// `δ_w(v, V' \ {v})`.
    pub(crate) fn out_w_unfixed(&self, v: usize) -> ExtendedValue {
        self.out_w_unfixed[v]
    }

    /// `δ_w(v, V \ V')`.
    pub(crate) fn out_w_fixed(&self, v: usize) -> ExtendedValue {
        self.out_w_fixed[v]
    }

    /// `δ(v, V' \ {v})`.
    pub(crate) fn out_unfixed(&self, v: usize) -> usize {
        self.out_c_unfixed[v]
    }

    /// `δ(v, V \ V')`.
    pub(crate) fn out_fixed(&self, v: usize) -> usize {
        self.d.outdegree(v) - self.out_c_unfixed[v]
    }

    /// `ϱ(v, V' \ {v})`.
    pub(crate) fn in_unfixed(&self, v: usize) -> usize {
        self.in_c_unfixed[v]
    }

    /// `ϱ(v, V \ V')`.
    pub(crate) fn in_fixed(&self, v: usize) -> usize {
        self.d.indegree(v) - self.in_c_unfixed[v]
    }

    pub(crate) fn fix(&mut self, x: usize) {
        debug_assert!(self.unfixed[x]);
        self.unfixed[x] = false;
        self.fixed.push(x);
        for &a in self.d.out_arcs(x) {
            self.in_c_unfixed[self.d.arc(a).head] -= 1;
        }
        for &a in self.d.in_arcs(x) {
            let t = self.d.arc(a).tail;
            self.out_c_unfixed[t] -= 1;
        }
        // Weighted sums are recomputed in arc order so they match
        // `induced_min_outdegree` and `degree_profile` bit for bit.
        let mut touched: Vec<usize> = self.d.in_arcs(x).iter().map(|&a| self.d.arc(a).tail).collect();
        touched.dedup();
        for t in touched {
            if self.unfixed[t] {
                let (mut inside, mut outside) = (ExtendedValue::ZERO, ExtendedValue::ZERO);
                for &a in self.d.out_arcs(t) {
                    if self.unfixed[self.d.arc(a).head] {
                        inside = inside + self.weights[a];
                    } else {
                        outside = outside + self.weights[a];
                    }
                }
                self.out_w_unfixed[t] = inside;
                self.out_w_fixed[t] = outside;
            }
        }
    }

    /// Vertices in the order they were fixed.
    pub(crate) fn into_fixed(self) -> Vec<usize> {
        self.fixed
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_track_fixing() {
        let d = Digraph::from_pairs(3, &[(0, 1), (1, 2), (2, 0), (0, 2)]).unwrap();
        let w = d.weights();
        let mut s = Sweep::new(&d, &w);
        assert_eq!(s.out_unfixed(0), 2);
        s.fix(2);
        assert_eq!(s.out_unfixed(0), 1);
        assert_eq!(s.out_fixed(0), 1);
        assert_eq!(s.out_w_fixed(1), ExtendedValue::ONE);
        assert_eq!(s.in_fixed(0), 1);
        assert_eq!(s.in_unfixed(1), 1);
        assert_eq!(s.unfixed_vertices(), vec![0, 1]);
    }
}
