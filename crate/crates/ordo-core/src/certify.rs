//! Independent re-checking of claimed orders, partitions and infeasibility
//! witnesses. Only digraph primitives are used; no solver is consulted.
//!
//! Witnesses without a polynomial check (an unvalidated stuck set, or no
//! witness at all) are settled by exhaustive search within fixed caps.

use std::collections::{HashSet, VecDeque};

use serde::Serialize;

use crate::digraph::{classify_arc_set, mask_of, ArcFamilyKind, Digraph, VertexOrder};
use crate::ext::ExtendedValue;
use crate::oracle::{FamilyExtra, OrderPredicate, SimultaneousBounds};
use crate::solution::{ArcPartition, BoundSpec, Witness};

/// Largest vertex count for the prefix-set search used on local predicates.
pub const PREFIX_CHECK_MAX_VERTICES: usize = 20;
/// Largest vertex count for the permutation search used on the rest.
pub const PERMUTATION_CHECK_MAX_VERTICES: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckMethod {
    Direct,
    Exhaustive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub valid: bool,
    pub method: CheckMethod,
    pub failures: Vec<String>,
}

impl Verdict {
    fn direct(failures: Vec<String>) -> Self {
        Self { valid: failures.is_empty(), method: CheckMethod::Direct, failures }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CertifyError {
    #[error("malformed claim: {0}")]
    MalformedClaim(String),
    #[error("claim needs an exhaustive check, limited to {cap} vertices (got {n})")]
    TooLarge { n: usize, cap: usize },
}

fn malformed(msg: impl Into<String>) -> CertifyError {
    CertifyError::MalformedClaim(msg.into())
}

fn check_vec<T>(what: &str, v: &[T], len: usize) -> Result<(), CertifyError> {
    if v.len() == len {
        Ok(())
    } else {
        Err(malformed(format!("{what} has {} entries, expected {len}", v.len())))
    }
}

fn check_vertex_list(what: &str, vs: &[usize], n: usize) -> Result<(), CertifyError> {
    let mut seen = vec![false; n];
    for &v in vs {
        if v >= n {
            return Err(malformed(format!("{what} names vertex {v} outside 0..{n}")));
        }
        if std::mem::replace(&mut seen[v], true) {
            return Err(malformed(format!("{what} repeats vertex {v}")));
        }
    }
    Ok(())
}

fn check_predicate(d: &Digraph, pred: &OrderPredicate) -> Result<(), CertifyError> {
    let n = d.n();
    match pred {
        OrderPredicate::Bounds { spec, weights } => {
            check_vec("f", &spec.f, n)?;
            check_vec("g", &spec.g, n)?;
            if let Some(w) = weights {
                check_vec("weights", w, d.m())?;
            }
        }
        OrderPredicate::DDistance { g, .. } => check_vec("g", g, n)?,
        OrderPredicate::Exact { m_delta, m_rho } => {
            check_vec("m_delta", m_delta, n)?;
            check_vec("m_rho", m_rho, n)?;
        }
        OrderPredicate::Simultaneous(b) => {
            for (name, v) in [("f_delta", &b.f_delta), ("g_delta", &b.g_delta), ("f_rho", &b.f_rho), ("g_rho", &b.g_rho)] {
                check_vec(name, v, n)?;
            }
        }
        OrderPredicate::Family { extra, .. } => match extra {
            FamilyExtra::None | FamilyExtra::PathCount(_) => {}
            FamilyExtra::Roots(r) => check_vertex_list("roots", r, n)?,
            FamilyExtra::Endpoints { s, t } => check_vertex_list("endpoints", &[*s, *t], n)?,
            FamilyExtra::Terminals { sources, sinks } => {
                check_vertex_list("sources", sources, n)?;
                check_vertex_list("sinks", sinks, n)?;
                if sources.len() != sinks.len() {
                    return Err(malformed("sources and sinks differ in size"));
                }
                if sources.iter().any(|s| sinks.contains(s)) {
                    return Err(malformed("sources and sinks overlap"));
                }
            }
            FamilyExtra::Root(r) => check_vertex_list("root", &[*r], n)?,
            FamilyExtra::InOutArborescence { root } => {
                if let Some(r) = root {
                    check_vertex_list("root", &[*r], n)?;
                }
            }
        },
    }
    Ok(())
}

fn effective_weights(d: &Digraph, pred: &OrderPredicate) -> Vec<ExtendedValue> {
    match pred {
        OrderPredicate::Bounds { weights: Some(w), .. } => w.clone(),
        _ => d.weights(),
    }
}

/// Left-going arc data of one order, recomputed from the arc list.
struct Layout {
    pos: Vec<usize>,
    left: Vec<bool>,
    left_out: Vec<usize>,
    left_in: Vec<usize>,
    left_w: Vec<ExtendedValue>,
}

impl Layout {
    fn new(d: &Digraph, order: &[usize], weights: &[ExtendedValue]) -> Self {
        let n = d.n();
        let mut pos = vec![0; n];
        for (i, &v) in order.iter().enumerate() {
            pos[v] = i;
        }
        let mut l = Self {
            left: vec![false; d.m()],
            left_out: vec![0; n],
            left_in: vec![0; n],
            left_w: vec![ExtendedValue::ZERO; n],
            pos,
        };
        for (i, a) in d.arcs().iter().enumerate() {
            if l.pos[a.head] < l.pos[a.tail] {
                l.left[i] = true;
                l.left_out[a.tail] += 1;
                l.left_in[a.head] += 1;
                l.left_w[a.tail] = l.left_w[a.tail] + weights[i];
            }
        }
        l
    }

    fn left_arc_list(&self) -> Vec<usize> {
        (0..self.left.len()).filter(|&a| self.left[a]).collect()
    }
}

/// Whether `order` satisfies `pred`, with one failure line per violation.
pub fn verify_order(d: &Digraph, order: &[usize], pred: &OrderPredicate) -> Result<Verdict, CertifyError> {
    check_predicate(d, pred)?;
    VertexOrder::new(order.to_vec(), d.n()).map_err(|e| malformed(e.to_string()))?;
    Ok(Verdict::direct(order_failures(d, order, pred)))
}

fn order_failures(d: &Digraph, order: &[usize], pred: &OrderPredicate) -> Vec<String> {
    let weights = effective_weights(d, pred);
    let lay = Layout::new(d, order, &weights);
    let c = ExtendedValue::from_count;
    let mut fails = Vec::new();
    match pred {
        OrderPredicate::Bounds { spec, .. } => {
            for v in 0..d.n() {
                if !(spec.f[v] <= lay.left_w[v] && lay.left_w[v] <= spec.g[v]) {
                    fails.push(format!(
                        "vertex {v}: left weight {} outside [{}, {}]",
                        lay.left_w[v], spec.f[v], spec.g[v]
                    ));
                }
            }
        }
        OrderPredicate::Simultaneous(b) => {
            for v in 0..d.n() {
                let (out, inn) = (c(lay.left_out[v]), c(lay.left_in[v]));
                if !(b.f_delta[v] <= out && out <= b.g_delta[v]) {
                    fails.push(format!("vertex {v}: left-outdegree {out} outside [{}, {}]", b.f_delta[v], b.g_delta[v]));
                }
                if !(b.f_rho[v] <= inn && inn <= b.g_rho[v]) {
                    fails.push(format!("vertex {v}: right-indegree {inn} outside [{}, {}]", b.f_rho[v], b.g_rho[v]));
                }
            }
        }
        OrderPredicate::Exact { m_delta, m_rho } => {
            for v in 0..d.n() {
                if lay.left_out[v] != m_delta[v] || lay.left_in[v] != m_rho[v] {
                    fails.push(format!(
                        "vertex {v}: degrees ({}, {}) differ from required ({}, {})",
                        lay.left_out[v], lay.left_in[v], m_delta[v], m_rho[v]
                    ));
                }
            }
        }
        OrderPredicate::DDistance { d: window, g } => {
            for (i, &v) in order.iter().enumerate() {
                let lo = i.saturating_sub(*window);
                let w: ExtendedValue = d
                    .out_arcs(v)
                    .iter()
                    .filter(|&&a| (lo..i).contains(&lay.pos[d.arc(a).head]))
                    .map(|&a| weights[a])
                    .sum();
                if w > g[v] {
                    fails.push(format!("vertex {v}: window weight {w} exceeds {}", g[v]));
                }
            }
        }
        OrderPredicate::Family { kind, extra } => {
            let left = lay.left_arc_list();
            if !classify_arc_set(d, &left, *kind).expect("indices in range") {
                fails.push(format!("left-going arcs {left:?} do not form a {kind}"));
            }
            fails.extend(extra_failures(d, &lay, extra));
        }
    }
    fails
}

fn extra_failures(d: &Digraph, lay: &Layout, extra: &FamilyExtra) -> Vec<String> {
    let n = d.n();
    let out = &lay.left_out;
    let inn = &lay.left_in;
    let right_in: Vec<usize> = (0..n).map(|v| d.indegree(v) - inn[v]).collect();
    let mut fails = Vec::new();
    match extra {
        FamilyExtra::None => {}
        FamilyExtra::Roots(roots) => {
            fails.extend(roots.iter().filter(|&&r| out[r] != 0).map(|r| format!("root {r} has a left-going arc")));
        }
        FamilyExtra::Root(r) => {
            if out[*r] != 0 {
                fails.push(format!("root {r} has a left-going arc"));
            }
        }
        FamilyExtra::Endpoints { s, t } => {
            if !(s != t && out[*s] == 1 && inn[*s] == 0 && out[*t] == 0 && inn[*t] == 1) {
                fails.push(format!("dipath does not run from {s} to {t}"));
            }
        }
        FamilyExtra::Terminals { sources, sinks } => {
            let role = |v: usize| {
                if sources.contains(&v) {
                    (1, 0)
                } else if sinks.contains(&v) {
                    (0, 1)
                } else {
                    (inn[v], inn[v])
                }
            };
            for v in 0..n {
                if (out[v], inn[v]) != role(v) {
                    fails.push(format!("vertex {v}: left out/in degrees ({}, {}) break the terminal roles", out[v], inn[v]));
                }
            }
        }
        FamilyExtra::PathCount(k) => {
            let starts = (0..n).filter(|&v| out[v] == 1 && inn[v] == 0).count();
            if starts != *k {
                fails.push(format!("{starts} dipaths, expected {k}"));
            }
        }
        FamilyExtra::InOutArborescence { root } => {
            let out_arb = |r: usize| out[r] == 0 && right_in[r] == 0 && (0..n).all(|v| v == r || right_in[v] == 1);
            let ok = match root {
                Some(r) => out_arb(*r),
                None => (0..n).any(out_arb),
            };
            if !ok {
                fails.push("right-going arcs do not form an out-arborescence at the root".into());
            }
        }
    }
    fails
}

/// Whether `p` splits every arc into a `p.kind` member and an acyclic rest.
pub fn verify_partition(d: &Digraph, p: &ArcPartition) -> Result<Verdict, CertifyError> {
    let mut seen = vec![0u8; d.m()];
    for &a in p.family_arcs.iter().chain(&p.acyclic_arcs) {
        if a >= d.m() {
            return Err(malformed(format!("arc {a} outside 0..{}", d.m())));
        }
        seen[a] += 1;
    }
    let mut fails: Vec<String> = (0..d.m())
        .filter(|&a| seen[a] != 1)
        .map(|a| format!("arc {a} appears {} times", seen[a]))
        .collect();
    if !classify_arc_set(d, &p.family_arcs, p.kind).expect("indices in range") {
        fails.push(format!("family arcs do not form a {}", p.kind));
    }
    if !classify_arc_set(d, &p.acyclic_arcs, ArcFamilyKind::Acyclic).expect("indices in range") {
        fails.push("remaining arcs contain a cycle".into());
    }
    Ok(Verdict::direct(fails))
}

/// Largest arc count for [`exhaustive_partition`].
pub const PARTITION_CHECK_MAX_ARCS: usize = 20;

/// Some split of the arcs into a `kind` member and an acyclic rest, by
/// enumerating every arc subset.
pub fn exhaustive_partition(d: &Digraph, kind: ArcFamilyKind) -> Result<Option<ArcPartition>, CertifyError> {
    let m = d.m();
    if m > PARTITION_CHECK_MAX_ARCS {
        return Err(CertifyError::TooLarge { n: m, cap: PARTITION_CHECK_MAX_ARCS });
    }
    for mask in 0u32..1 << m {
        let (family, rest): (Vec<usize>, Vec<usize>) = (0..m).partition(|&a| mask >> a & 1 == 1);
        if classify_arc_set(d, &family, kind).expect("indices in range")
            && classify_arc_set(d, &rest, ArcFamilyKind::Acyclic).expect("indices in range")
        {
            return Ok(Some(ArcPartition { kind, family_arcs: family, acyclic_arcs: rest }));
        }
    }
    Ok(None)
}

/// Whether no split of the arcs into a `kind` member and an acyclic rest exists.
pub fn verify_partition_infeasible(d: &Digraph, kind: ArcFamilyKind) -> Result<Verdict, CertifyError> {
    let found = exhaustive_partition(d, kind)?;
    Ok(Verdict {
        valid: found.is_none(),
        method: CheckMethod::Exhaustive,
        failures: found.map(|p| format!("partition with family arcs {:?} exists", p.family_arcs)).into_iter().collect(),
    })
}

/// Whether every member of `set` sends weight at least `value` into the
/// rest of the set, so that every order has a vertex of weighted
/// left-outdegree at least `value`.
pub fn verify_minmax_lower_bound(d: &Digraph, set: &[usize], value: ExtendedValue) -> Result<Verdict, CertifyError> {
    check_vertex_list("witness", set, d.n())?;
    if set.is_empty() {
        let fails = if value > ExtendedValue::ZERO { vec!["empty set bounds nothing above 0".into()] } else { vec![] };
        return Ok(Verdict::direct(fails));
    }
    let inside = mask_of(d.n(), set);
    let weights = d.weights();
    Ok(Verdict::direct(
        set.iter()
            .filter(|&&v| d.weight_into(v, &inside, &weights) < value)
            .map(|v| format!("vertex {v} sends less than {value} into the set"))
            .collect(),
    ))
}

/// A necessary condition on counts implied by a family predicate, used to
/// check witnesses emitted by count-based solvers.
fn count_relaxation(d: &Digraph, pred: &OrderPredicate) -> Option<OrderPredicate> {
    let n = d.n();
    let OrderPredicate::Family { kind, extra } = pred else { return None };
    match (kind, extra) {
        (ArcFamilyKind::InBranching, FamilyExtra::None | FamilyExtra::Roots(_)) => {
            let roots = match extra {
                FamilyExtra::Roots(r) => mask_of(n, r),
                _ => vec![false; n],
            };
            let g = (0..n).map(|v| if roots[v] { ExtendedValue::ZERO } else { ExtendedValue::ONE }).collect();
            Some(OrderPredicate::Bounds { spec: BoundSpec::upper(g), weights: Some(vec![ExtendedValue::ONE; d.m()]) })
        }
        (ArcFamilyKind::HamiltonianDipath, FamilyExtra::Endpoints { s, t }) => Some(OrderPredicate::Exact {
            m_delta: (0..n).map(|v| usize::from(v != *t)).collect(),
            m_rho: (0..n).map(|v| usize::from(v != *s)).collect(),
        }),
        (ArcFamilyKind::InArborescence, FamilyExtra::InOutArborescence { root: Some(r) }) => {
            Some(OrderPredicate::Exact {
                m_delta: (0..n).map(|v| usize::from(v != *r)).collect(),
                m_rho: (0..n).map(|v| d.indegree(v) - usize::from(v != *r)).collect(),
            })
        }
        _ => None,
    }
}

/// Whether `witness` proves that no order satisfies `pred`. Without a
/// witness, or with one that has no direct check, the claim is settled by
/// exhaustive search.
pub fn verify_infeasible(
    d: &Digraph,
    pred: &OrderPredicate,
    witness: Option<&Witness>,
) -> Result<Verdict, CertifyError> {
    check_predicate(d, pred)?;
    let Some(w) = witness else { return exhaustive_verdict(d, pred) };
    let counts = count_relaxation(d, pred);
    let target = counts.as_ref().unwrap_or(pred);
    match (w, target) {
        (Witness::InducedSet { vertices }, OrderPredicate::Bounds { spec, .. }) => {
            check_vertex_list("witness", vertices, d.n())?;
            let weights = effective_weights(d, target);
            if weights.iter().any(|&x| x < ExtendedValue::ZERO) {
                return exhaustive_verdict(d, pred);
            }
            Ok(Verdict::direct(induced_failures(d, spec, &weights, vertices)))
        }
        (Witness::StuckSet { vertices }, OrderPredicate::Bounds { spec, .. }) => {
            check_vertex_list("witness", vertices, d.n())?;
            let weights = effective_weights(d, target);
            if weights.iter().all(|&x| x >= ExtendedValue::ZERO) && induced_failures(d, spec, &weights, vertices).is_empty() {
                Ok(Verdict::direct(Vec::new()))
            } else {
                exhaustive_verdict(d, pred)
            }
        }
        (Witness::StuckSet { vertices }, OrderPredicate::Simultaneous(b)) => {
            check_vertex_list("witness", vertices, d.n())?;
            Ok(Verdict::direct(stuck_count_failures(d, b, vertices)))
        }
        (Witness::StuckSet { vertices }, OrderPredicate::Exact { m_delta, m_rho }) => {
            check_vertex_list("witness", vertices, d.n())?;
            Ok(Verdict::direct(stuck_count_failures(d, &SimultaneousBounds::exact(m_delta, m_rho), vertices)))
        }
        (Witness::SumMismatch { lhs, rhs }, OrderPredicate::Exact { m_delta, m_rho }) => {
            let l: u64 = m_delta.iter().map(|&x| x as u64).sum();
            let r: u64 = m_rho.iter().map(|&x| x as u64).sum();
            let mut fails = Vec::new();
            if (l, r) != (*lhs, *rhs) {
                fails.push(format!("sums are ({l}, {r}), witness claims ({lhs}, {rhs})"));
            }
            if l == r {
                fails.push("required sums agree".into());
            }
            Ok(Verdict::direct(fails))
        }
        (
            Witness::StuckSet { vertices },
            OrderPredicate::Family { kind: ArcFamilyKind::DisjointDipaths, extra: FamilyExtra::Terminals { sources, sinks } },
        ) => {
            check_vertex_list("witness", vertices, d.n())?;
            Ok(Verdict::direct(stuck_dipath_failures(d, sources, sinks, vertices)))
        }
        (
            Witness::CutSet { vertices, k },
            OrderPredicate::Family { kind: ArcFamilyKind::DisjointDipaths, extra: FamilyExtra::Terminals { sources, sinks } },
        ) => {
            check_vertex_list("witness", vertices, d.n())?;
            Ok(Verdict::direct(cut_failures(d, sources, sinks, vertices, *k)))
        }
        (Witness::DegreeDeficit { vertex }, _) => {
            let OrderPredicate::Family { extra: FamilyExtra::InOutArborescence { root: Some(r) }, .. } = pred else {
                return Err(malformed("degree-deficit applies only to a rooted in/out-arborescence claim"));
            };
            check_vertex_list("witness", &[*vertex], d.n())?;
            let mut fails = Vec::new();
            if vertex == r {
                fails.push(format!("vertex {vertex} is the root"));
            }
            if d.indegree(*vertex) != 0 {
                fails.push(format!("vertex {vertex} has an entering arc"));
            }
            Ok(Verdict::direct(fails))
        }
        (w, _) => Err(malformed(format!("a {} witness does not apply to this claim", w.type_name()))),
    }
}

/// Every member is over its upper bound when placed last in the set, or
/// every member is under its lower bound when placed first.
fn induced_failures(d: &Digraph, spec: &BoundSpec, weights: &[ExtendedValue], set: &[usize]) -> Vec<String> {
    if set.is_empty() {
        return vec!["witness set is empty".into()];
    }
    let inside = mask_of(d.n(), set);
    let outside: Vec<bool> = inside.iter().map(|&b| !b).collect();
    let over = set.iter().all(|&v| d.weight_into(v, &inside, weights) > spec.g[v]);
    let under = set.iter().all(|&v| d.weight_into(v, &outside, weights) < spec.f[v]);
    if over || under {
        return Vec::new();
    }
    set.iter()
        .filter(|&&v| d.weight_into(v, &inside, weights) <= spec.g[v])
        .map(|v| format!("vertex {v} fits its upper bound when last in the set"))
        .chain(
            set.iter()
                .filter(|&&v| d.weight_into(v, &outside, weights) >= spec.f[v])
                .map(|v| format!("vertex {v} meets its lower bound when first in the set")),
        )
        .collect()
}

/// Same two directions as [`induced_failures`], on left-outdegree and
/// right-indegree counts together.
fn stuck_count_failures(d: &Digraph, b: &SimultaneousBounds, set: &[usize]) -> Vec<String> {
    if set.is_empty() {
        return vec!["witness set is empty".into()];
    }
    let c = ExtendedValue::from_count;
    let inside = mask_of(d.n(), set);
    let outside: Vec<bool> = inside.iter().map(|&x| !x).collect();
    let last_fails = |v: usize| c(d.count_into(v, &inside)) > b.g_delta[v] || c(d.count_from(v, &outside)) < b.f_rho[v];
    let first_fails = |v: usize| c(d.count_into(v, &outside)) < b.f_delta[v] || c(d.count_from(v, &inside)) > b.g_rho[v];
    if set.iter().all(|&v| last_fails(v)) || set.iter().all(|&v| first_fails(v)) {
        Vec::new()
    } else {
        vec!["some member can be placed last and some member can be placed first in the set".into()]
    }
}

/// The four stuck-set conditions for disjoint source-sink dipaths.
fn stuck_dipath_failures(d: &Digraph, sources: &[usize], sinks: &[usize], set: &[usize]) -> Vec<String> {
    if set.is_empty() {
        return vec!["witness set is empty".into()];
    }
    let n = d.n();
    let inside = mask_of(n, set);
    let outside: Vec<bool> = inside.iter().map(|&x| !x).collect();
    let is_source = mask_of(n, sources);
    let is_sink = mask_of(n, sinks);
    let mut fails = Vec::new();
    for &v in set {
        let out_in = d.count_into(v, &inside);
        let fed = d.count_from(v, &outside) >= 1;
        let need = if is_source[v] {
            2
        } else if is_sink[v] {
            usize::from(fed)
        } else if fed {
            2
        } else {
            1
        };
        if out_in < need {
            fails.push(format!("vertex {v} has {out_in} arcs into the set, needs {need}"));
        }
    }
    fails
}

/// `cut` has fewer than `k` vertices and leaves no dipath from a source to
/// a sink once removed.
fn cut_failures(d: &Digraph, sources: &[usize], sinks: &[usize], cut: &[usize], k: usize) -> Vec<String> {
    let mut fails = Vec::new();
    if k != sources.len() {
        fails.push(format!("witness k = {k}, but {} sources", sources.len()));
    }
    if cut.len() >= k {
        fails.push(format!("cut has {} vertices, not fewer than {k}", cut.len()));
    }
    let removed = mask_of(d.n(), cut);
    let target = mask_of(d.n(), sinks);
    let mut seen = removed.clone();
    let mut queue: VecDeque<usize> = sources.iter().copied().filter(|&s| !removed[s]).collect();
    queue.iter().for_each(|&s| seen[s] = true);
    while let Some(u) = queue.pop_front() {
        if target[u] {
            fails.push(format!("sink {u} is reachable after removing the cut"));
            break;
        }
        for &a in d.out_arcs(u) {
            let h = d.arc(a).head;
            if !seen[h] {
                seen[h] = true;
                queue.push_back(h);
            }
        }
    }
    fails
}

fn exhaustive_verdict(d: &Digraph, pred: &OrderPredicate) -> Result<Verdict, CertifyError> {
    let found = exhaustive_order(d, pred)?;
    Ok(Verdict {
        valid: found.is_none(),
        method: CheckMethod::Exhaustive,
        failures: found.map(|o| format!("order {o:?} satisfies the claim")).into_iter().collect(),
    })
}

/// Some order satisfying `pred`, by exhaustive search.
pub fn exhaustive_order(d: &Digraph, pred: &OrderPredicate) -> Result<Option<Vec<usize>>, CertifyError> {
    check_predicate(d, pred)?;
    let n = d.n();
    let prefix_local = matches!(
        pred,
        OrderPredicate::Bounds { .. } | OrderPredicate::Simultaneous(_) | OrderPredicate::Exact { .. }
    );
    if prefix_local {
        if n > PREFIX_CHECK_MAX_VERTICES {
            return Err(CertifyError::TooLarge { n, cap: PREFIX_CHECK_MAX_VERTICES });
        }
        let mut s = PrefixSearch { d, pred, weights: effective_weights(d, pred), failed: HashSet::new(), order: Vec::new() };
        return Ok(s.run(0).then_some(s.order));
    }
    if n > PERMUTATION_CHECK_MAX_VERTICES {
        return Err(CertifyError::TooLarge { n, cap: PERMUTATION_CHECK_MAX_VERTICES });
    }
    let mut order = Vec::with_capacity(n);
    let mut used = vec![false; n];
    Ok(permute(d, pred, &mut order, &mut used).then_some(order))
}

fn permute(d: &Digraph, pred: &OrderPredicate, order: &mut Vec<usize>, used: &mut [bool]) -> bool {
    if order.len() == d.n() {
        return order_failures(d, order, pred).is_empty();
    }
    for v in 0..d.n() {
        if !used[v] {
            used[v] = true;
            order.push(v);
            if permute(d, pred, order, used) {
                return true;
            }
            order.pop();
            used[v] = false;
        }
    }
    false
}

/// Depth-first search over placed-prefix sets; valid for predicates in which
/// a vertex's degrees depend only on the set of vertices before it.
struct PrefixSearch<'a> {
    d: &'a Digraph,
    pred: &'a OrderPredicate,
    weights: Vec<ExtendedValue>,
    failed: HashSet<u64>,
    order: Vec<usize>,
}

impl PrefixSearch<'_> {
    fn fits(&self, v: usize, placed: u64) -> bool {
        let d = self.d;
        let before = |u: usize| placed >> u & 1 == 1;
        let mut left_w = ExtendedValue::ZERO;
        let mut left_c = 0;
        for &a in d.out_arcs(v) {
            if before(d.arc(a).head) {
                left_w = left_w + self.weights[a];
                left_c += 1;
            }
        }
        let right_in = d.in_arcs(v).iter().filter(|&&a| !before(d.arc(a).tail)).count();
        let c = ExtendedValue::from_count;
        match self.pred {
            OrderPredicate::Bounds { spec, .. } => spec.f[v] <= left_w && left_w <= spec.g[v],
            OrderPredicate::Simultaneous(b) => {
                b.f_delta[v] <= c(left_c) && c(left_c) <= b.g_delta[v] && b.f_rho[v] <= c(right_in) && c(right_in) <= b.g_rho[v]
            }
            OrderPredicate::Exact { m_delta, m_rho } => left_c == m_delta[v] && right_in == m_rho[v],
            _ => unreachable!("only prefix-local predicates reach the prefix search"),
        }
    }

    fn run(&mut self, placed: u64) -> bool {
        if self.order.len() == self.d.n() {
            return true;
        }
        if self.failed.contains(&placed) {
            return false;
        }
        for v in 0..self.d.n() {
            if placed >> v & 1 == 0 && self.fits(v, placed) {
                self.order.push(v);
                if self.run(placed | 1 << v) {
                    return true;
                }
                self.order.pop();
            }
        }
        self.failed.insert(placed);
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tri() -> Digraph {
        Digraph::from_pairs(3, &[(0, 1), (1, 2), (2, 0)]).unwrap()
    }

    fn c(x: i32) -> ExtendedValue {
        ExtendedValue::from(x)
    }

    #[test]
    fn orders_against_bounds_and_families() {
        let d = tri();
        let v = verify_order(&d, &[0, 1, 2], &OrderPredicate::upper(vec![c(1); 3])).unwrap();
        assert!(v.valid);
        let v = verify_order(&d, &[0, 1, 2], &OrderPredicate::upper(vec![c(0); 3])).unwrap();
        assert_eq!(v.failures.len(), 1);
        let v = verify_order(&d, &[0, 1, 2], &OrderPredicate::family(ArcFamilyKind::InBranching)).unwrap();
        assert!(v.valid);
        assert!(matches!(
            verify_order(&d, &[0, 0, 2], &OrderPredicate::upper(vec![c(1); 3])),
            Err(CertifyError::MalformedClaim(_))
        ));
    }

    #[test]
    fn induced_set_witnesses() {
        let d = tri();
        let zero = OrderPredicate::upper(vec![c(0); 3]);
        assert!(verify_infeasible(&d, &zero, Some(&Witness::induced(vec![0, 1, 2]))).unwrap().valid);
        let one = OrderPredicate::upper(vec![c(1); 3]);
        assert!(!verify_infeasible(&d, &one, Some(&Witness::induced(vec![0]))).unwrap().valid);
        let chain = Digraph::from_pairs(2, &[(0, 1)]).unwrap();
        let lower = OrderPredicate::lower(vec![c(0), c(2)]);
        assert!(verify_infeasible(&chain, &lower, Some(&Witness::induced(vec![1]))).unwrap().valid);
    }

    #[test]
    fn cut_and_stuck_witnesses() {
        let empty = Digraph::empty(2);
        let pred = OrderPredicate::Family {
            kind: ArcFamilyKind::DisjointDipaths,
            extra: FamilyExtra::Terminals { sources: vec![0], sinks: vec![1] },
        };
        let cut = Witness::CutSet { vertices: vec![], k: 1 };
        assert!(verify_infeasible(&empty, &pred, Some(&cut)).unwrap().valid);
        let arc = Digraph::from_pairs(2, &[(0, 1)]).unwrap();
        assert!(!verify_infeasible(&arc, &pred, Some(&cut)).unwrap().valid);
        // Source 0 with two arcs into the set and sink 1 fed only from inside.
        let d = Digraph::from_pairs(3, &[(0, 2), (0, 2), (2, 1)]).unwrap();
        let stuck = Witness::stuck(vec![0, 1, 2]);
        assert!(verify_infeasible(&d, &pred, Some(&stuck)).unwrap().valid);
    }

    #[test]
    fn count_witnesses() {
        let par = Digraph::from_pairs(2, &[(0, 1), (0, 1)]).unwrap();
        let exact = OrderPredicate::Exact { m_delta: vec![1, 0], m_rho: vec![0, 1] };
        assert!(verify_infeasible(&par, &exact, Some(&Witness::stuck(vec![0, 1]))).unwrap().valid);
        let bad = OrderPredicate::Exact { m_delta: vec![1, 1], m_rho: vec![0, 1] };
        let sums = Witness::SumMismatch { lhs: 2, rhs: 1 };
        assert!(verify_infeasible(&par, &bad, Some(&sums)).unwrap().valid);
        assert!(!verify_infeasible(&par, &exact, Some(&sums)).unwrap().valid);
    }

    #[test]
    fn exhaustive_fallback() {
        let d = tri();
        let ham = OrderPredicate::family(ArcFamilyKind::HamiltonianDipath);
        let v = verify_infeasible(&d, &ham, None).unwrap();
        assert_eq!((v.valid, v.method), (false, CheckMethod::Exhaustive));
        let two = Digraph::from_pairs(2, &[(0, 1), (1, 0)]).unwrap();
        let dd = OrderPredicate::DDistance { d: 1, g: vec![c(0); 2] };
        assert!(verify_infeasible(&two, &dd, None).unwrap().valid);
    }

    #[test]
    fn partitions() {
        let d = tri();
        let p = ArcPartition { kind: ArcFamilyKind::Matching, family_arcs: vec![2], acyclic_arcs: vec![0, 1] };
        assert!(verify_partition(&d, &p).unwrap().valid);
        let p = ArcPartition { kind: ArcFamilyKind::Matching, family_arcs: vec![], acyclic_arcs: vec![0, 1, 2] };
        assert!(!verify_partition(&d, &p).unwrap().valid);
    }

    #[test]
    fn minmax_bound_and_partition_search() {
        let d = tri();
        assert!(verify_minmax_lower_bound(&d, &[0, 1, 2], c(1)).unwrap().valid);
        assert!(!verify_minmax_lower_bound(&d, &[0, 1], c(1)).unwrap().valid);
        let par = Digraph::from_pairs(2, &[(0, 1), (0, 1)]).unwrap();
        let bowtie = Digraph::from_pairs(3, &[(0, 1), (1, 0), (0, 2), (2, 0)]).unwrap();
        assert!(verify_partition_infeasible(&bowtie, ArcFamilyKind::Matching).unwrap().valid);
        assert!(!verify_partition_infeasible(&par, ArcFamilyKind::PerfectMatching).unwrap().valid);
    }

    #[test]
    fn predicates_round_trip_through_json() {
        let p = OrderPredicate::Family {
            kind: ArcFamilyKind::InBranching,
            extra: FamilyExtra::Roots(vec![1]),
        };
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(serde_json::from_str::<OrderPredicate>(&s).unwrap(), p);
    }
}
