//! Orders with per-vertex bounds on the weighted left-outdegree.
//!
//! Upper bounds are handled by fixing vertices from right to left, lower
//! bounds by fixing them from left to right. A vertex placed rightmost among
//! the unfixed set `V'` has left-outdegree exactly `δ_w(v, V' \ {v})`.

use std::collections::HashSet;

use crate::digraph::profile::degree_profile_weighted;
use crate::digraph::{is_acyclic, topological_order, Digraph, VertexOrder};
use crate::ext::ExtendedValue;
use crate::solution::{check_len, BoundSpec, SolveError, SolveResult, Witness};
use crate::sweep::Sweep;

pub(crate) fn feasible(d: &Digraph, weights: &[ExtendedValue], order: VertexOrder) -> SolveResult {
    let profile = degree_profile_weighted(d, &order, weights).expect("solver emits permutations");
    SolveResult::Feasible { order, profile }
}

/// Upper bounds `δℓ_w(v) <= g(v)`; lowest-id tie-break.
pub fn solve_upper(d: &Digraph, g: &[ExtendedValue]) -> Result<SolveResult, SolveError> {
    solve_upper_by(d, g, |q| q[0])
}

/// [`solve_upper`] with a caller-chosen pick among the qualified vertices
/// (given in increasing id order); `pick` returns one of them.
pub fn solve_upper_by(
    d: &Digraph,
    g: &[ExtendedValue],
    mut pick: impl FnMut(&[usize]) -> usize,
) -> Result<SolveResult, SolveError> {
    check_len("g", g, d.n())?;
    let weights = d.weights();
    let mut sw = Sweep::new(d, &weights);
    while !sw.all_fixed() {
        let qualified: Vec<usize> =
            (0..d.n()).filter(|&v| sw.is_unfixed(v) && sw.out_w_unfixed(v) <= g[v]).collect();
        if qualified.is_empty() {
            return Ok(SolveResult::infeasible(Witness::induced(sw.unfixed_vertices())));
        }
        let v = pick(&qualified);
        assert!(qualified.contains(&v), "pick must return a qualified vertex");
        sw.fix(v);
    }
    Ok(feasible(d, &weights, VertexOrder::from_right_to_left(sw.into_fixed())))
}

/// Lower bounds `δℓ_w(v) >= f(v)`; left-to-right greedy, lowest-id tie-break.
pub fn solve_lower(d: &Digraph, f: &[ExtendedValue]) -> Result<SolveResult, SolveError> {
    check_len("f", f, d.n())?;
    let weights = d.weights();
    let mut sw = Sweep::new(d, &weights);
    while !sw.all_fixed() {
        let Some(v) = (0..d.n()).find(|&v| sw.is_unfixed(v) && sw.out_w_fixed(v) >= f[v]) else {
            return Ok(SolveResult::infeasible(Witness::induced(sw.unfixed_vertices())));
        };
        sw.fix(v);
    }
    let order = VertexOrder::from_vec_unchecked(sw.into_fixed());
    Ok(feasible(d, &weights, order))
}

/// An order minimizing the largest weighted left-outdegree, and that value.
pub fn solve_minmax(d: &Digraph) -> (VertexOrder, ExtendedValue) {
    let weights = d.weights();
    let mut sw = Sweep::new(d, &weights);
    let mut value = ExtendedValue::ZERO;
    while !sw.all_fixed() {
        let v = (0..d.n())
            .filter(|&v| sw.is_unfixed(v))
            .min_by_key(|&v| (sw.out_w_unfixed(v), v))
            .expect("unfixed vertex");
        value = value.max(sw.out_w_unfixed(v));
        sw.fix(v);
    }
    (VertexOrder::from_right_to_left(sw.into_fixed()), value)
}

/// Upper bounds plus precedence pairs `(u, v)`: `u` must precede `v`.
///
/// A vertex may be fixed rightmost only when none of its required
/// successors is still unfixed. When bound-qualified vertices exist but all
/// are blocked by precedence, the unfixed set is reported as a stuck set.
pub fn solve_upper_with_precedence(
    d: &Digraph,
    g: &[ExtendedValue],
    prec: &[(usize, usize)],
) -> Result<SolveResult, SolveError> {
    check_len("g", g, d.n())?;
    let n = d.n();
    if let Some(&(u, v)) = prec.iter().find(|&&(u, v)| u >= n || v >= n || u == v) {
        return Err(SolveError::SpecViolation(format!("invalid precedence pair ({u}, {v})")));
    }
    let prec_graph = Digraph::from_pairs(n, prec).expect("pairs validated");
    if let Err(cycle) = topological_order(&prec_graph) {
        let vertices = cycle.arcs.iter().map(|&a| prec_graph.arc(a).tail).collect();
        return Err(SolveError::PrecedenceCycle { cycle: vertices });
    }
    let mut pending_successors: Vec<usize> = (0..n).map(|v| prec_graph.outdegree(v)).collect();
    let weights = d.weights();
    let mut sw = Sweep::new(d, &weights);
    while !sw.all_fixed() {
        let bound_ok: Vec<usize> =
            (0..n).filter(|&v| sw.is_unfixed(v) && sw.out_w_unfixed(v) <= g[v]).collect();
        let Some(&v) = bound_ok.iter().find(|&&v| pending_successors[v] == 0) else {
            let w = sw.unfixed_vertices();
            return Ok(SolveResult::infeasible(if bound_ok.is_empty() {
                Witness::induced(w)
            } else {
                Witness::stuck(w)
            }));
        };
        sw.fix(v);
        for &a in prec_graph.in_arcs(v) {
            pending_successors[prec_graph.arc(a).tail] -= 1;
        }
    }
    Ok(feasible(d, &weights, VertexOrder::from_right_to_left(sw.into_fixed())))
}

/// One bound per vertex for the mixed problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MixedBound {
    Lower(ExtendedValue),
    Upper(ExtendedValue),
}

impl MixedBound {
    fn admits(self, x: ExtendedValue) -> bool {
        match self {
            Self::Lower(f) => x >= f,
            Self::Upper(g) => x <= g,
        }
    }
}

/// Converts a [`BoundSpec`] to mixed form; each vertex must carry exactly one
/// non-trivial bound (`f != -inf` xor `g != inf`).
pub fn mixed_from_spec(spec: &BoundSpec) -> Result<Vec<MixedBound>, SolveError> {
    (0..spec.len())
        .map(|v| match (spec.f[v].is_neg_inf(), spec.g[v].is_pos_inf()) {
            (false, true) => Ok(MixedBound::Lower(spec.f[v])),
            (true, false) => Ok(MixedBound::Upper(spec.g[v])),
            _ => Err(SolveError::SpecViolation(format!(
                "vertex {v} must carry exactly one of f and g"
            ))),
        })
        .collect()
}

/// Largest vertex count the mixed search accepts (one bit per vertex).
pub const MIXED_MAX_VERTICES: usize = 64;

/// Mixed per-vertex bounds by exact search over right-to-left fixings with
/// memoization of failed unfixed sets. Exponential in the worst case.
/// Infeasibility carries the smallest unfixed set at which the search
/// found no admissible vertex; it is not a validated certificate.
pub fn solve_mixed_per_vertex(d: &Digraph, spec: &[MixedBound]) -> Result<SolveResult, SolveError> {
    check_len("mixed bounds", spec, d.n())?;
    let n = d.n();
    if n > MIXED_MAX_VERTICES {
        return Err(SolveError::CapExceeded { param: "n", value: n, cap: MIXED_MAX_VERTICES });
    }
    let weights = d.weights();
    let mut search = MixedSearch {
        d,
        weights: &weights,
        spec,
        failed: HashSet::new(),
        deepest: (0..n).collect(),
        fixed: Vec::with_capacity(n),
    };
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    if search.run(all) {
        let order = VertexOrder::from_right_to_left(search.fixed);
        Ok(feasible(d, &weights, order))
    } else {
        Ok(SolveResult::infeasible(Witness::stuck(search.deepest)))
    }
}

struct MixedSearch<'a> {
    d: &'a Digraph,
    weights: &'a [ExtendedValue],
    spec: &'a [MixedBound],
    failed: HashSet<u64>,
    deepest: Vec<usize>,
    fixed: Vec<usize>,
}

impl MixedSearch<'_> {
    fn inner_weight(&self, v: usize, unfixed: u64) -> ExtendedValue {
        self.d
            .out_arcs(v)
            .iter()
            .filter(|&&a| unfixed >> self.d.arc(a).head & 1 == 1)
            .map(|&a| self.weights[a])
            .sum()
    }

    fn run(&mut self, unfixed: u64) -> bool {
        if unfixed == 0 {
            return true;
        }
        if self.failed.contains(&unfixed) {
            return false;
        }
        let members: Vec<usize> = (0..self.d.n()).filter(|&v| unfixed >> v & 1 == 1).collect();
        let candidates: Vec<usize> = members
            .iter()
            .copied()
            .filter(|&v| self.spec[v].admits(self.inner_weight(v, unfixed & !(1 << v))))
            .collect();
        if candidates.is_empty() && members.len() < self.deepest.len() {
            self.deepest = members;
        }
        for v in candidates {
            self.fixed.push(v);
            if self.run(unfixed & !(1u64 << v)) {
                return true;
            }
            self.fixed.pop();
        }
        self.failed.insert(unfixed);
        false
    }
}

/// Default cap on `k` for [`solve_d_distance_large`].
pub const D_DISTANCE_DEFAULT_CAP: usize = 2;

/// Weighted arcs from `order[i]` into its `min(window, i)` immediate predecessors.
pub fn window_left_weight(
    d: &Digraph,
    weights: &[ExtendedValue],
    pos: &[usize],
    order: &[usize],
    i: usize,
    window: usize,
) -> ExtendedValue {
    let v = order[i];
    let lo = i.saturating_sub(window);
    d.out_arcs(v)
        .iter()
        .filter(|&&a| {
            let p = pos[d.arc(a).head];
            p >= lo && p < i
        })
        .map(|&a| weights[a])
        .sum()
}

/// Window-bounded upper bounds with window `d = n - k`: the vertex at each
/// position `i` (0-based) may send weight at most `g` into its `min(d, i)`
/// immediate predecessors. Every fixing of the first `k` and last `k`
/// positions is tried in lexicographic order; the middle is solved as an
/// ordinary upper-bounded problem with `g` reduced by the weight into the
/// first `k` vertices.
pub fn solve_d_distance_large(
    d: &Digraph,
    g: &[ExtendedValue],
    k: usize,
    cap: usize,
) -> Result<SolveResult, SolveError> {
    check_len("g", g, d.n())?;
    let n = d.n();
    if k > cap {
        return Err(SolveError::CapExceeded { param: "k", value: k, cap });
    }
    if 2 * k > n {
        return Err(SolveError::SpecViolation(format!("2k = {} exceeds n = {n}", 2 * k)));
    }
    if k == 0 {
        return solve_upper(d, g);
    }
    let window = n - k;
    let weights = d.weights();
    let mut ends = EndFixings::new(n, k);
    while let Some((first, last)) = ends.next() {
        if let Some(order) = complete_d_distance(d, &weights, g, window, &first, &last) {
            return Ok(feasible(d, &weights, order));
        }
    }
    Ok(SolveResult::Infeasible { witness: None })
}

fn complete_d_distance(
    d: &Digraph,
    weights: &[ExtendedValue],
    g: &[ExtendedValue],
    window: usize,
    first: &[usize],
    last: &[usize],
) -> Option<VertexOrder> {
    let n = d.n();
    let k = first.len();
    let mut in_first = vec![false; n];
    let mut in_ends = vec![false; n];
    for &v in first {
        in_first[v] = true;
        in_ends[v] = true;
    }
    for &v in last {
        in_ends[v] = true;
    }
    let middle: Vec<usize> = (0..n).filter(|&v| !in_ends[v]).collect();
    // Positions of the end vertices; middle vertices occupy k..n-k in some order,
    // which does not affect any end vertex's window.
    let mut sigma = Vec::with_capacity(n);
    sigma.extend_from_slice(first);
    sigma.extend_from_slice(&middle);
    sigma.extend_from_slice(last);
    let mut pos = vec![0; n];
    for (i, &v) in sigma.iter().enumerate() {
        pos[v] = i;
    }
    let end_positions = (0..k).chain(n - k..n);
    for i in end_positions {
        if window_left_weight(d, weights, &pos, &sigma, i, window) > g[sigma[i]] {
            return None;
        }
    }
    let mut local = vec![usize::MAX; n];
    for (i, &v) in middle.iter().enumerate() {
        local[v] = i;
    }
    let mut arcs = Vec::new();
    let mut local_weights = Vec::new();
    for (a, arc) in d.arcs().iter().enumerate() {
        if local[arc.tail] != usize::MAX && local[arc.head] != usize::MAX {
            arcs.push((local[arc.tail], local[arc.head]));
            local_weights.push(weights[a]);
        }
    }
    let sub = Digraph::new(
        middle.len(),
        arcs.iter()
            .zip(&local_weights)
            .map(|(&(t, h), &w)| crate::digraph::Arc::weighted(t, h, w))
            .collect(),
    )
    .expect("induced subdigraph");
    let reduced: Vec<ExtendedValue> =
        middle.iter().map(|&v| g[v].minus(d.weight_into(v, &in_first, weights))).collect();
    let sub_order = solve_upper(&sub, &reduced).ok()?.order()?.clone();
    sigma.truncate(k);
    sigma.extend(sub_order.as_slice().iter().map(|&i| middle[i]));
    sigma.extend_from_slice(last);
    Some(VertexOrder::from_vec_unchecked(sigma))
}

/// Lexicographic enumeration of (first k-tuple, disjoint last k-tuple).
struct EndFixings {
    n: usize,
    k: usize,
    tuple: Vec<usize>,
    started: bool,
}

impl EndFixings {
    fn new(n: usize, k: usize) -> Self {
        Self { n, k, tuple: Vec::new(), started: false }
    }

    fn valid(&self, t: &[usize]) -> bool {
        let mut seen = vec![false; self.n];
        t.iter().all(|&v| !std::mem::replace(&mut seen[v], true))
    }

    /// Next tuple of `2k` distinct vertices in lexicographic order.
    fn next(&mut self) -> Option<(Vec<usize>, Vec<usize>)> {
        let len = 2 * self.k;
        if !self.started {
            self.started = true;
            self.tuple = (0..len).collect();
        } else {
            loop {
                let mut i = len;
                loop {
                    if i == 0 {
                        return None;
                    }
                    i -= 1;
                    if self.tuple[i] + 1 < self.n {
                        self.tuple[i] += 1;
                        for j in i + 1..len {
                            self.tuple[j] = 0;
                        }
                        break;
                    }
                }
                if self.valid(&self.tuple) {
                    break;
                }
            }
        }
        Some((self.tuple[..self.k].to_vec(), self.tuple[self.k..].to_vec()))
    }
}

/// Outcome of the disjoint in-arborescence feasibility check.
#[derive(Debug, Clone, PartialEq)]
pub struct InArborescenceResult {
    pub result: SolveResult,
    /// For `k = 1`, arc indices of an `r`-in-arborescence among the left-going arcs.
    pub arborescence: Option<Vec<usize>>,
}

/// Whether `k` arc-disjoint `root`-in-arborescences with acyclic union exist:
/// lower bounds `f(root) = 0` and `f(v) = k` elsewhere on arc counts.
pub fn solve_k_arc_disjoint_in_arbs(
    d: &Digraph,
    root: usize,
    k: usize,
) -> Result<InArborescenceResult, SolveError> {
    if root >= d.n() {
        return Err(SolveError::SpecViolation(format!("root {root} out of range")));
    }
    if k == 0 {
        return Err(SolveError::SpecViolation("k must be at least 1".into()));
    }
    let unit = d.unweighted();
    let f: Vec<ExtendedValue> = (0..d.n())
        .map(|v| if v == root { ExtendedValue::ZERO } else { ExtendedValue::from_count(k) })
        .collect();
    let result = solve_lower(&unit, &f)?;
    let arborescence = match (&result, k) {
        (SolveResult::Feasible { order, .. }, 1) => {
            let pos = order.positions();
            let arcs: Vec<usize> = (0..d.n())
                .filter(|&v| v != root)
                .map(|v| {
                    *d.out_arcs(v)
                        .iter()
                        .find(|&&a| pos[d.arc(a).head] < pos[v])
                        .expect("every non-root vertex has a left arc")
                })
                .collect();
            Some(arcs)
        }
        _ => None,
    };
    // Recompute the profile on the original digraph so weights are reported consistently.
    let result = match result {
        SolveResult::Feasible { order, .. } => feasible(d, &d.weights(), order),
        other => other,
    };
    Ok(InArborescenceResult { result, arborescence })
}

/// Whether any order respects the precedence pairs alone.
pub fn precedence_is_acyclic(n: usize, prec: &[(usize, usize)]) -> bool {
    Digraph::from_pairs(n, prec).map(|p| is_acyclic(&p)).unwrap_or(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::{induced_min_outdegree, Arc};

    fn inf() -> ExtendedValue {
        ExtendedValue::POS_INF
    }

    fn c(x: i32) -> ExtendedValue {
        ExtendedValue::from(x)
    }

    fn triangle() -> Digraph {
        Digraph::from_pairs(3, &[(0, 1), (1, 2), (2, 0)]).unwrap()
    }

    #[test]
    fn triangle_upper_one_is_feasible() {
        let r = solve_upper(&triangle(), &[c(1); 3]).unwrap();
        assert_eq!(r.profile().unwrap().max_delta_left_w(), c(1));
    }

    #[test]
    fn triangle_upper_zero_returns_whole_set() {
        let r = solve_upper(&triangle(), &[c(0); 3]).unwrap();
        assert_eq!(r.witness(), Some(&Witness::induced(vec![0, 1, 2])));
    }

    #[test]
    fn heavy_arc_forces_direction() {
        let d = Digraph::new(2, vec![Arc::weighted(0, 1, c(5))]).unwrap();
        let r = solve_upper(&d, &[c(4), inf()]).unwrap();
        assert_eq!(r.order().unwrap().as_slice(), &[0, 1]);
    }

    #[test]
    fn lower_examples() {
        let d = Digraph::from_pairs(2, &[(1, 0)]).unwrap();
        let r = solve_lower(&d, &[c(0), c(1)]).unwrap();
        assert_eq!(r.order().unwrap().as_slice(), &[0, 1]);
        let r = solve_lower(&d, &[c(1), c(1)]).unwrap();
        assert_eq!(r.witness(), Some(&Witness::induced(vec![0, 1])));
    }

    #[test]
    fn lower_witness_is_self_blocking() {
        let d = Digraph::from_pairs(4, &[(1, 0), (2, 3), (3, 2)]).unwrap();
        let f = [c(0), c(1), c(1), c(1)];
        let r = solve_lower(&d, &f).unwrap();
        let Some(Witness::InducedSet { vertices }) = r.witness() else { panic!() };
        assert_eq!(vertices, &vec![2, 3]);
        let outside: Vec<usize> = (0..4).filter(|v| !vertices.contains(v)).collect();
        let deg = induced_min_outdegree(&d, &d.weights(), &outside);
        assert!(vertices.iter().all(|&v| deg[v] < f[v]));
    }

    #[test]
    fn minmax_examples() {
        assert_eq!(solve_minmax(&triangle()).1, c(1));
        assert_eq!(solve_minmax(&Digraph::empty(3)).1, c(0));
        let k3 = Digraph::from_pairs(3, &[(0, 1), (1, 0), (0, 2), (2, 0), (1, 2), (2, 1)]).unwrap();
        // Any order of a complete symmetric digraph gives the last vertex n-1 left arcs.
        assert_eq!(solve_minmax(&k3).1, c(2));
    }

    #[test]
    fn precedence_examples() {
        let free = Digraph::empty(2);
        let r = solve_upper_with_precedence(&free, &[inf(); 2], &[(0, 1)]).unwrap();
        assert_eq!(r.order().unwrap().as_slice(), &[0, 1]);
        let arc = Digraph::from_pairs(2, &[(0, 1)]).unwrap();
        let r = solve_upper_with_precedence(&arc, &[c(0), inf()], &[(1, 0)]).unwrap();
        assert!(!r.is_feasible());
        let r = solve_upper_with_precedence(&triangle(), &[c(1); 3], &[(2, 0)]).unwrap();
        let pos = r.order().unwrap().positions();
        assert!(pos[2] < pos[0]);
        assert!(matches!(
            solve_upper_with_precedence(&free, &[inf(); 2], &[(0, 1), (1, 0)]),
            Err(SolveError::PrecedenceCycle { .. })
        ));
    }

    #[test]
    fn infinite_weight_is_not_admitted_by_infinite_bound_via_precedence() {
        // Precedence is structural: an unbounded vertex still obeys it.
        let d = Digraph::empty(3);
        let r = solve_upper_with_precedence(&d, &[inf(); 3], &[(2, 1), (1, 0)]).unwrap();
        assert_eq!(r.order().unwrap().as_slice(), &[2, 1, 0]);
    }

    #[test]
    fn mixed_three_vertex_example() {
        // Arcs w->v, v->z with w=0, v=1, z=2.
        let d = Digraph::from_pairs(3, &[(0, 1), (1, 2)]).unwrap();
        let spec = [MixedBound::Lower(c(1)), MixedBound::Lower(c(1)), MixedBound::Upper(c(0))];
        let r = solve_mixed_per_vertex(&d, &spec).unwrap();
        assert_eq!(r.order().unwrap().as_slice(), &[2, 1, 0]);
    }

    #[test]
    fn mixed_spec_conversion() {
        let ok = BoundSpec { f: vec![c(1), ExtendedValue::NEG_INF], g: vec![inf(), c(0)] };
        assert_eq!(
            mixed_from_spec(&ok).unwrap(),
            vec![MixedBound::Lower(c(1)), MixedBound::Upper(c(0))]
        );
        assert!(mixed_from_spec(&BoundSpec::unbounded(1)).is_err());
    }

    #[test]
    fn d_distance_examples() {
        let t = triangle();
        assert_eq!(
            solve_d_distance_large(&t, &[c(1); 3], 0, 2).unwrap().is_feasible(),
            solve_upper(&t, &[c(1); 3]).unwrap().is_feasible()
        );
        assert!(!solve_d_distance_large(&t, &[c(0); 3], 1, 2).unwrap().is_feasible());
        let sym = Digraph::from_pairs(3, &[(0, 2), (2, 0)]).unwrap();
        assert!(!solve_d_distance_large(&sym, &[c(0); 3], 1, 2).unwrap().is_feasible());
        assert!(matches!(
            solve_d_distance_large(&t, &[c(0); 3], 3, 2),
            Err(SolveError::CapExceeded { .. })
        ));
    }

    #[test]
    fn end_fixings_are_lexicographic_and_complete() {
        let mut e = EndFixings::new(4, 2);
        let mut all = Vec::new();
        while let Some((a, b)) = e.next() {
            all.push([a, b].concat());
        }
        assert_eq!(all.len(), 24);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn in_arborescence_examples() {
        // a=1 -> r=0, b=2 -> r=0
        let star = Digraph::from_pairs(3, &[(1, 0), (2, 0)]).unwrap();
        let r = solve_k_arc_disjoint_in_arbs(&star, 0, 1).unwrap();
        assert_eq!(r.result.order().unwrap().as_slice(), &[0, 1, 2]);
        assert_eq!(r.arborescence, Some(vec![0, 1]));
        let single = Digraph::from_pairs(2, &[(1, 0)]).unwrap();
        assert!(!solve_k_arc_disjoint_in_arbs(&single, 0, 2).unwrap().result.is_feasible());
        let path = Digraph::from_pairs(3, &[(2, 1), (1, 0), (2, 0)]).unwrap();
        assert!(solve_k_arc_disjoint_in_arbs(&path, 0, 1).unwrap().result.is_feasible());
        assert!(solve_k_arc_disjoint_in_arbs(&path, 0, 2).unwrap().result.witness().is_some());
    }
}
