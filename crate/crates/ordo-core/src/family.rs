//! Orders whose left-going arcs form a prescribed family, and the arc
//! partitions they induce.

use crate::bounded::{feasible, solve_upper};
use crate::digraph::{classify_arc_set, is_acyclic_subset, left_arcs, ArcFamilyKind, Digraph, VertexOrder};
use crate::ext::ExtendedValue;
use crate::simultaneous::solve_exact;
use crate::solution::{ArcPartition, SolveError, SolveResult, Witness};
use crate::sweep::Sweep;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FamilyError {
    #[error("left-going arcs {arcs:?} do not form a {kind}")]
    FamilyViolation { kind: ArcFamilyKind, arcs: Vec<usize> },
    #[error("right-going arcs contain a directed cycle")]
    CyclicRemainder,
    #[error("order does not fit the digraph: {0}")]
    Order(#[from] crate::digraph::OrderError),
}

/// Splits arcs into left-going (family side) and right-going (acyclic side).
pub fn partition_from_order(d: &Digraph, order: &VertexOrder, kind: ArcFamilyKind) -> Result<ArcPartition, FamilyError> {
    let order = VertexOrder::new(order.as_slice().to_vec(), d.n())?;
    let left = left_arcs(d, &order);
    if !classify_arc_set(d, &left, kind).expect("indices from left_arcs") {
        return Err(FamilyError::FamilyViolation { kind, arcs: left });
    }
    let mut mask = vec![false; d.m()];
    left.iter().for_each(|&a| mask[a] = true);
    let rest: Vec<bool> = mask.iter().map(|x| !x).collect();
    // Right-going arcs always respect the order, so this holds for every order.
    debug_assert!(is_acyclic_subset(d, &rest));
    Ok(ArcPartition::from_mask(d, &mask, kind))
}

/// A family-ordering outcome with the induced partition when feasible.
#[derive(Debug, Clone, PartialEq)]
pub struct FamilyOutcome {
    pub result: SolveResult,
    pub partition: Option<ArcPartition>,
}

impl FamilyOutcome {
    fn new(d: &Digraph, result: SolveResult, kind: ArcFamilyKind) -> Self {
        let partition = result
            .order()
            .map(|o| partition_from_order(d, o, kind).expect("solver output satisfies its family"));
        Self { result, partition }
    }
}

/// Left-going arcs form an in-branching in which every vertex of `roots` is a
/// root: upper bounds 0 on `roots` and 1 elsewhere, on arc counts.
pub fn order_in_branching(d: &Digraph, roots: &[usize]) -> Result<FamilyOutcome, SolveError> {
    check_vertices(d, roots)?;
    let unit = d.unweighted();
    let mut g = vec![ExtendedValue::ONE; d.n()];
    roots.iter().for_each(|&r| g[r] = ExtendedValue::ZERO);
    let result = match solve_upper(&unit, &g)? {
        SolveResult::Feasible { order, .. } => feasible(d, &d.weights(), order),
        other => other,
    };
    Ok(FamilyOutcome::new(d, result, ArcFamilyKind::InBranching))
}

fn check_vertices(d: &Digraph, vs: &[usize]) -> Result<(), SolveError> {
    match vs.iter().find(|&&v| v >= d.n()) {
        Some(v) => Err(SolveError::SpecViolation(format!("vertex {v} out of range"))),
        None => Ok(()),
    }
}

/// Left-going arcs form `|sources|` vertex-disjoint dipaths, each from a
/// source to a sink. Vertices are fixed right to left; a frontier `X` holds the
/// unfixed sources and the non-sink vertices with a fixed in-neighbour, and
/// `Y` the sinks with a fixed in-neighbour. `X ∪ Y` meets every
/// source-sink dipath throughout.
///
/// Infeasible results carry either a cut set of fewer than `k` vertices or
/// the unfixed set at a stuck step.
pub fn order_k_disjoint_st_dipaths(d: &Digraph, sources: &[usize], sinks: &[usize]) -> Result<SolveResult, SolveError> {
    check_vertices(d, sources)?;
    check_vertices(d, sinks)?;
    let n = d.n();
    let k = sources.len();
    let mut role = vec![0u8; n];
    for &s in sources {
        if std::mem::replace(&mut role[s], 1) != 0 {
            return Err(SolveError::SpecViolation(format!("source {s} repeated")));
        }
    }
    for &t in sinks {
        if std::mem::replace(&mut role[t], 2) != 0 {
            return Err(SolveError::SpecViolation(format!("sink {t} repeated or also a source")));
        }
    }
    if sinks.len() != k {
        return Err(SolveError::SpecViolation(format!("{k} sources but {} sinks", sinks.len())));
    }
    let is_sink = |v: usize| role[v] == 2;
    let unit = vec![ExtendedValue::ONE; d.m()];
    let mut sw = Sweep::new(d, &unit);
    let mut in_x = vec![false; n];
    sources.iter().for_each(|&s| in_x[s] = true);
    let mut in_y = vec![false; n];
    while !sw.all_fixed() {
        if let Some(v) = (0..n).find(|&v| in_x[v] && sw.out_unfixed(v) <= 1) {
            sw.fix(v);
            in_x[v] = false;
            let next = d.out_arcs(v).iter().map(|&a| d.arc(a).head).find(|&h| sw.is_unfixed(h));
            if let Some(u) = next {
                if is_sink(u) {
                    in_y[u] = true;
                } else {
                    in_x[u] = true;
                }
            }
            let frontier: Vec<usize> = (0..n).filter(|&v| in_x[v] || in_y[v]).collect();
            if frontier.len() < k {
                return Ok(SolveResult::infeasible(Witness::CutSet { vertices: frontier, k }));
            }
        } else if let Some(v) = (0..n).find(|&v| {
            sw.is_unfixed(v) && !in_x[v] && (!is_sink(v) || in_y[v]) && sw.out_unfixed(v) == 0
        }) {
            sw.fix(v);
        } else {
            return Ok(SolveResult::infeasible(Witness::stuck(sw.unfixed_vertices())));
        }
    }
    Ok(feasible(d, &d.weights(), VertexOrder::from_right_to_left(sw.into_fixed())))
}

/// Left-going arcs form a Hamiltonian dipath from `s` to `t` (`s` ends up
/// last, `t` first). Without endpoints every ordered pair is tried in
/// lexicographic order.
pub fn order_hamiltonian_dipath(d: &Digraph, endpoints: Option<(usize, usize)>) -> Result<SolveResult, SolveError> {
    let n = d.n();
    if let Some((s, t)) = endpoints {
        check_vertices(d, &[s, t])?;
        if s == t {
            return Err(SolveError::SpecViolation("endpoints must differ".into()));
        }
        let mut m_delta = vec![1; n];
        let mut m_rho = vec![1; n];
        m_delta[t] = 0;
        m_rho[s] = 0;
        return solve_exact(d, &m_delta, &m_rho);
    }
    if n <= 1 {
        return Ok(feasible(d, &d.weights(), VertexOrder::identity(n)));
    }
    for s in 0..n {
        for t in (0..n).filter(|&t| t != s) {
            let r = order_hamiltonian_dipath(d, Some((s, t)))?;
            if r.is_feasible() {
                return Ok(r);
            }
        }
    }
    Ok(SolveResult::Infeasible { witness: None })
}

/// Default cap on the number of dipaths with free endpoints.
pub const DIPATH_DEFAULT_CAP: usize = 2;

/// Left-going arcs form exactly `k` vertex-disjoint dipaths, each with at
/// least one arc. Disjoint source and sink `k`-sets are tried in
/// lexicographic order.
pub fn order_disjoint_dipaths_free_endpoints(d: &Digraph, k: usize, cap: usize) -> Result<SolveResult, SolveError> {
    if k > cap {
        return Err(SolveError::CapExceeded { param: "k", value: k, cap });
    }
    if k == 0 || 2 * k > d.n() {
        return Err(SolveError::SpecViolation(format!("need 1 <= k and 2k <= n, got k = {k}, n = {}", d.n())));
    }
    for sources in combinations(d.n(), k) {
        let rest: Vec<usize> = (0..d.n()).filter(|v| !sources.contains(v)).collect();
        for pick in combinations(rest.len(), k) {
            let sinks: Vec<usize> = pick.iter().map(|&i| rest[i]).collect();
            let r = order_k_disjoint_st_dipaths(d, &sources, &sinks)?;
            if r.is_feasible() {
                return Ok(r);
            }
        }
    }
    Ok(SolveResult::Infeasible { witness: None })
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for v in start..n {
            if n - v < k - cur.len() {
                break;
            }
            cur.push(v);
            rec(n, k, v + 1, cur, out);
            cur.pop();
        }
    }
    rec(n, k, 0, &mut cur, &mut out);
    out
}

/// Left-going arcs form a `root`-in-arborescence and right-going arcs a
/// `root`-out-arborescence. Without a root every vertex is tried in
/// increasing order.
pub fn order_in_arb_out_arb(d: &Digraph, root: Option<usize>) -> Result<SolveResult, SolveError> {
    let Some(r) = root else {
        for r in 0..d.n() {
            let res = order_in_arb_out_arb(d, Some(r))?;
            if res.is_feasible() {
                return Ok(res);
            }
        }
        return Ok(SolveResult::Infeasible { witness: None });
    };
    check_vertices(d, &[r])?;
    if let Some(v) = (0..d.n()).find(|&v| v != r && d.indegree(v) == 0) {
        return Ok(SolveResult::infeasible(Witness::DegreeDeficit { vertex: v }));
    }
    let m_delta: Vec<usize> = (0..d.n()).map(|v| usize::from(v != r)).collect();
    let m_rho: Vec<usize> = (0..d.n()).map(|v| d.indegree(v) - usize::from(v != r)).collect();
    let result = solve_exact(d, &m_delta, &m_rho)?;
    if let Some(order) = result.order() {
        let left = left_arcs(d, order);
        assert!(
            classify_arc_set(d, &left, ArcFamilyKind::InArborescence).expect("valid indices"),
            "left-going arcs must form an in-arborescence"
        );
        let right: Vec<usize> = (0..d.m()).filter(|a| !left.contains(a)).collect();
        assert!(
            classify_arc_set(&d.reversed(), &right, ArcFamilyKind::InArborescence).expect("valid indices"),
            "right-going arcs must form an out-arborescence"
        );
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> Digraph {
        Digraph::from_pairs(3, &[(0, 1), (1, 2), (2, 0)]).unwrap()
    }

    #[test]
    fn in_branching_examples() {
        let par = Digraph::from_pairs(2, &[(0, 1), (0, 1)]).unwrap();
        let out = order_in_branching(&par, &[]).unwrap();
        assert_eq!(out.result.order().unwrap().as_slice(), &[0, 1]);
        let p = out.partition.unwrap();
        assert!(p.family_arcs.is_empty());
        let tri = order_in_branching(&triangle(), &[]).unwrap().partition.unwrap();
        let mut sizes = [tri.family_arcs.len(), tri.acyclic_arcs.len()];
        sizes.sort_unstable();
        assert_eq!(sizes, [1, 2]);
        let two = Digraph::from_pairs(2, &[(0, 1), (1, 0)]).unwrap();
        let r = order_in_branching(&two, &[0, 1]).unwrap().result;
        assert_eq!(r.witness(), Some(&Witness::induced(vec![0, 1])));
    }

    #[test]
    fn partition_from_order_examples() {
        let id = VertexOrder::identity(3);
        let p = partition_from_order(&triangle(), &id, ArcFamilyKind::InBranching).unwrap();
        assert_eq!((p.family_arcs, p.acyclic_arcs), (vec![2], vec![0, 1]));
        let chain = Digraph::from_pairs(3, &[(0, 1), (1, 2)]).unwrap();
        let p = partition_from_order(&chain, &id, ArcFamilyKind::Matching).unwrap();
        assert!(p.family_arcs.is_empty());
        let p = partition_from_order(&triangle(), &id, ArcFamilyKind::Matching).unwrap();
        assert_eq!(p.family_arcs, vec![2]);
        let rev = VertexOrder::new(vec![2, 1, 0], 3).unwrap();
        assert!(matches!(
            partition_from_order(&chain, &rev, ArcFamilyKind::Matching),
            Err(FamilyError::FamilyViolation { .. })
        ));
    }

    #[test]
    fn st_dipath_examples() {
        let arc = Digraph::from_pairs(2, &[(0, 1)]).unwrap();
        let r = order_k_disjoint_st_dipaths(&arc, &[0], &[1]).unwrap();
        assert_eq!(r.order().unwrap().as_slice(), &[1, 0]);
        let none = Digraph::empty(2);
        let r = order_k_disjoint_st_dipaths(&none, &[0], &[1]).unwrap();
        assert_eq!(r.witness(), Some(&Witness::CutSet { vertices: vec![], k: 1 }));
        let two = Digraph::from_pairs(4, &[(0, 2), (1, 3)]).unwrap();
        assert!(order_k_disjoint_st_dipaths(&two, &[0, 1], &[2, 3]).unwrap().is_feasible());
        assert!(order_k_disjoint_st_dipaths(&two, &[0], &[0]).is_err());
    }

    #[test]
    fn hamiltonian_examples() {
        let chain = Digraph::from_pairs(3, &[(2, 1), (1, 0)]).unwrap();
        let r = order_hamiltonian_dipath(&chain, None).unwrap();
        assert_eq!(r.order().unwrap().as_slice(), &[0, 1, 2]);
        let par = Digraph::from_pairs(2, &[(0, 1), (0, 1)]).unwrap();
        assert!(!order_hamiltonian_dipath(&par, None).unwrap().is_feasible());
    }

    #[test]
    fn free_endpoint_examples() {
        assert!(order_disjoint_dipaths_free_endpoints(&triangle(), 1, 2).unwrap().is_feasible());
        let d = Digraph::from_pairs(3, &[(0, 1), (1, 0)]).unwrap();
        assert!(order_disjoint_dipaths_free_endpoints(&d, 1, 2).unwrap().is_feasible());
        assert!(matches!(
            order_disjoint_dipaths_free_endpoints(&d, 3, 2),
            Err(SolveError::CapExceeded { .. })
        ));
    }

    #[test]
    fn in_arb_out_arb_examples() {
        let two = Digraph::from_pairs(2, &[(0, 1), (1, 0)]).unwrap();
        let r = order_in_arb_out_arb(&two, Some(0)).unwrap();
        assert_eq!(r.order().unwrap().as_slice(), &[0, 1]);
        let chain = Digraph::from_pairs(2, &[(0, 1)]).unwrap();
        assert!(!order_in_arb_out_arb(&chain, Some(0)).unwrap().is_feasible());
        let chain_r1 = order_in_arb_out_arb(&chain, Some(1)).unwrap();
        assert_eq!(chain_r1.witness(), Some(&Witness::DegreeDeficit { vertex: 0 }));
    }

    #[test]
    fn combinations_are_lexicographic() {
        assert_eq!(combinations(4, 2).len(), 6);
        assert_eq!(combinations(4, 2)[0], vec![0, 1]);
        assert_eq!(combinations(3, 0), vec![Vec::<usize>::new()]);
    }
}
