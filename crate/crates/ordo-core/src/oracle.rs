//! Exhaustive ground truth: permutation search for ordering predicates,
//! arc-subset search for partition predicates, and exact optimizers for
//! objectives without a polynomial algorithm.
//!
//! Permutations are enumerated in lexicographic order with per-vertex checks
//! as soon as a vertex is placed: its left-outdegree and right-indegree are
//! final at that point. Every search returns the lexicographically first
//! optimum.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::bounded::feasible;
use crate::digraph::classify::classify_mask;
use crate::digraph::{is_acyclic_subset, left_arcs, ArcFamilyKind, Digraph, VertexOrder};
use crate::ext::ExtendedValue;
use crate::solution::{ArcPartition, BoundSpec, SolveError, SolveResult};

/// Size limits; exceeding one is an error.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleCaps {
    /// Largest vertex count for permutation search.
    pub max_vertices: usize,
    /// Largest number of arcs an arc-subset search branches on.
    pub max_branch_arcs: usize,
}

impl Default for OracleCaps {
    fn default() -> Self {
        Self { max_vertices: 8, max_branch_arcs: 22 }
    }
}

/// Name of the environment variable overriding [`OracleCaps`].
pub const CAP_ENV: &str = "ORDO_ORACLE_CAP";

impl OracleCaps {
    /// Parses `"N"` (vertex cap) or a comma list of `n=N` / `m=M`.
    pub fn parse(s: &str) -> Result<Self, String> {
        let mut caps = Self::default();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, val) = part.split_once('=').unwrap_or(("n", part));
            let val: usize = val.trim().parse().map_err(|_| format!("bad cap value in `{part}`"))?;
            match key.trim() {
                "n" => caps.max_vertices = val,
                "m" => caps.max_branch_arcs = val,
                other => return Err(format!("unknown cap `{other}`")),
            }
        }
        Ok(caps)
    }

    /// Defaults overridden by [`CAP_ENV`] when set.
    pub fn from_env() -> Result<Self, String> {
        match std::env::var(CAP_ENV) {
            Ok(s) => Self::parse(&s),
            Err(_) => Ok(Self::default()),
        }
    }

    fn check_vertices(&self, n: usize) -> Result<(), SolveError> {
        if n > self.max_vertices {
            Err(SolveError::CapExceeded { param: "n", value: n, cap: self.max_vertices })
        } else {
            Ok(())
        }
    }

    fn check_arcs(&self, m: usize) -> Result<(), SolveError> {
        if m > self.max_branch_arcs {
            Err(SolveError::CapExceeded { param: "branch arcs", value: m, cap: self.max_branch_arcs })
        } else {
            Ok(())
        }
    }
}

/// Bounds on left-outdegree and right-indegree counts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimultaneousBounds {
    pub f_delta: Vec<ExtendedValue>,
    pub g_delta: Vec<ExtendedValue>,
    pub f_rho: Vec<ExtendedValue>,
    pub g_rho: Vec<ExtendedValue>,
}

impl SimultaneousBounds {
    pub fn unbounded(n: usize) -> Self {
        Self {
            f_delta: vec![ExtendedValue::NEG_INF; n],
            g_delta: vec![ExtendedValue::POS_INF; n],
            f_rho: vec![ExtendedValue::NEG_INF; n],
            g_rho: vec![ExtendedValue::POS_INF; n],
        }
    }

    pub fn exact(m_delta: &[usize], m_rho: &[usize]) -> Self {
        let d: Vec<ExtendedValue> = m_delta.iter().map(|&x| ExtendedValue::from_count(x)).collect();
        let r: Vec<ExtendedValue> = m_rho.iter().map(|&x| ExtendedValue::from_count(x)).collect();
        Self { f_delta: d.clone(), g_delta: d, f_rho: r.clone(), g_rho: r }
    }
}

/// Extra structure required of the left-going arcs beyond their kind.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "extra", content = "value", rename_all = "kebab-case")]
pub enum FamilyExtra {
    None,
    /// Listed vertices have no left-going arc.
    Roots(Vec<usize>),
    /// Hamiltonian dipath from `s` to `t`.
    Endpoints { s: usize, t: usize },
    /// `|sources|` disjoint dipaths, each from a source to a sink.
    Terminals { sources: Vec<usize>, sinks: Vec<usize> },
    /// Exactly this many disjoint dipaths with at least one arc each.
    PathCount(usize),
    /// In-arborescence rooted at `root`.
    Root(usize),
    /// Left arcs an in-arborescence and right arcs an out-arborescence with a
    /// common root (the given one, or any).
    InOutArborescence { root: Option<usize> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "predicate", rename_all = "kebab-case")]
pub enum OrderPredicate {
    /// `f <= δℓ_w <= g`; `weights` overrides the digraph's weights and may be signed.
    Bounds { spec: BoundSpec, weights: Option<Vec<ExtendedValue>> },
    Family { kind: ArcFamilyKind, extra: FamilyExtra },
    /// The vertex at position `i` sends weight at most `g` into its
    /// `min(d, i)` immediate predecessors.
    DDistance { d: usize, g: Vec<ExtendedValue> },
    Exact { m_delta: Vec<usize>, m_rho: Vec<usize> },
    Simultaneous(SimultaneousBounds),
}

impl OrderPredicate {
    pub fn upper(g: Vec<ExtendedValue>) -> Self {
        Self::Bounds { spec: BoundSpec::upper(g), weights: None }
    }

    pub fn lower(f: Vec<ExtendedValue>) -> Self {
        Self::Bounds { spec: BoundSpec::lower(f), weights: None }
    }

    pub fn family(kind: ArcFamilyKind) -> Self {
        Self::Family { kind, extra: FamilyExtra::None }
    }
}

/// Whether the left-going arcs of `order` satisfy `kind` and `extra`.
pub fn family_holds(d: &Digraph, order: &VertexOrder, kind: ArcFamilyKind, extra: &FamilyExtra) -> bool {
    let mut left = vec![false; d.m()];
    for a in left_arcs(d, order) {
        left[a] = true;
    }
    if !classify_mask(d, &left, kind) {
        return false;
    }
    let n = d.n();
    let mut out = vec![0usize; n];
    let mut inn = vec![0usize; n];
    let mut right_in = vec![0usize; n];
    for (i, a) in d.arcs().iter().enumerate() {
        if left[i] {
            out[a.tail] += 1;
            inn[a.head] += 1;
        } else {
            right_in[a.head] += 1;
        }
    }
    match extra {
        FamilyExtra::None => true,
        FamilyExtra::Roots(x) => x.iter().all(|&v| out[v] == 0),
        FamilyExtra::Endpoints { s, t } => {
            s != t && out[*s] == 1 && inn[*s] == 0 && out[*t] == 0 && inn[*t] == 1
        }
        FamilyExtra::Terminals { sources, sinks } => {
            let mut role = vec![0u8; n];
            sources.iter().for_each(|&s| role[s] = 1);
            sinks.iter().for_each(|&t| role[t] = 2);
            (0..n).all(|v| match role[v] {
                1 => out[v] == 1 && inn[v] == 0,
                2 => out[v] == 0 && inn[v] == 1,
                _ => out[v] == inn[v],
            })
        }
        FamilyExtra::PathCount(k) => (0..n).filter(|&v| out[v] == 1 && inn[v] == 0).count() == *k,
        FamilyExtra::Root(r) => out[*r] == 0,
        FamilyExtra::InOutArborescence { root } => {
            let ok = |r: usize| {
                out[r] == 0 && right_in[r] == 0 && (0..n).all(|v| v == r || right_in[v] == 1)
            };
            match root {
                Some(r) => ok(*r),
                None => (0..n).any(ok),
            }
        }
    }
}

/// Per-placement pruning state for the permutation search.
struct Search<'a> {
    d: &'a Digraph,
    pred: &'a OrderPredicate,
    weights: Vec<ExtendedValue>,
    pos: Vec<usize>,
    sigma: Vec<usize>,
    left_out: Vec<usize>,
    left_in: Vec<usize>,
    forced_root: Vec<bool>,
}

const UNPLACED: usize = usize::MAX;

impl<'a> Search<'a> {
    fn new(d: &'a Digraph, pred: &'a OrderPredicate) -> Self {
        let weights = match pred {
            OrderPredicate::Bounds { weights: Some(w), .. } => w.clone(),
            _ => d.weights(),
        };
        let mut forced_root = vec![false; d.n()];
        if let OrderPredicate::Family { extra: FamilyExtra::Roots(x), .. } = pred {
            x.iter().for_each(|&v| forced_root[v] = true);
        }
        Self {
            d,
            pred,
            weights,
            pos: vec![UNPLACED; d.n()],
            sigma: Vec::with_capacity(d.n()),
            left_out: vec![0; d.n()],
            left_in: vec![0; d.n()],
            forced_root,
        }
    }

    /// Places `v` next if the predicate's local conditions allow it.
    fn try_place(&mut self, v: usize) -> bool {
        let d = self.d;
        let i = self.sigma.len();
        let mut left_w = ExtendedValue::ZERO;
        let mut left_c = 0usize;
        let mut from_left = 0usize;
        for &a in d.out_arcs(v) {
            if self.pos[d.arc(a).head] != UNPLACED {
                left_w = left_w + self.weights[a];
                left_c += 1;
            }
        }
        for &a in d.in_arcs(v) {
            if self.pos[d.arc(a).tail] != UNPLACED {
                from_left += 1;
            }
        }
        let right_in = d.indegree(v) - from_left;
        let c = ExtendedValue::from_count;
        let ok = match self.pred {
            OrderPredicate::Bounds { spec, .. } => spec.f[v] <= left_w && left_w <= spec.g[v],
            OrderPredicate::Exact { m_delta, m_rho } => left_c == m_delta[v] && right_in == m_rho[v],
            OrderPredicate::Simultaneous(b) => {
                b.f_delta[v] <= c(left_c)
                    && c(left_c) <= b.g_delta[v]
                    && b.f_rho[v] <= c(right_in)
                    && c(right_in) <= b.g_rho[v]
            }
            OrderPredicate::DDistance { d: window, g } => {
                let lo = i.saturating_sub(*window);
                let w: ExtendedValue = d
                    .out_arcs(v)
                    .iter()
                    .filter(|&&a| {
                        let p = self.pos[d.arc(a).head];
                        p != UNPLACED && p >= lo
                    })
                    .map(|&a| self.weights[a])
                    .sum();
                w <= g[v]
            }
            OrderPredicate::Family { kind, .. } => return self.place_family(v, *kind, left_c),
        };
        if ok {
            self.commit(v);
        }
        ok
    }

    fn place_family(&mut self, v: usize, kind: ArcFamilyKind, left_c: usize) -> bool {
        use ArcFamilyKind::*;
        if self.forced_root[v] && left_c > 0 {
            return false;
        }
        let out_cap = matches!(
            kind,
            InBranching | InArborescence | Matching | PerfectMatching | DisjointDipaths | Dipath | HamiltonianDipath
        );
        if out_cap && left_c > 1 {
            return false;
        }
        let d = self.d;
        let matching = matches!(kind, Matching | PerfectMatching);
        let in_cap = matching || matches!(kind, DisjointDipaths | Dipath | HamiltonianDipath);
        if in_cap {
            for &a in d.out_arcs(v) {
                let h = d.arc(a).head;
                if self.pos[h] != UNPLACED {
                    let load = self.left_in[h] + 1 + if matching { self.left_out[h] } else { 0 };
                    if load > 1 {
                        return false;
                    }
                }
            }
        }
        self.commit(v);
        true
    }

    fn commit(&mut self, v: usize) {
        let d = self.d;
        for &a in d.out_arcs(v) {
            let h = d.arc(a).head;
            if self.pos[h] != UNPLACED {
                self.left_out[v] += 1;
                self.left_in[h] += 1;
            }
        }
        self.pos[v] = self.sigma.len();
        self.sigma.push(v);
    }

    fn undo(&mut self) {
        let v = self.sigma.pop().expect("placed vertex");
        self.pos[v] = UNPLACED;
        let d = self.d;
        for &a in d.out_arcs(v) {
            let h = d.arc(a).head;
            if self.pos[h] != UNPLACED {
                self.left_in[h] -= 1;
            }
        }
        self.left_out[v] = 0;
    }

    fn leaf_ok(&self) -> bool {
        match self.pred {
            OrderPredicate::Family { kind, extra } => {
                family_holds(self.d, &VertexOrder::from_vec_unchecked(self.sigma.clone()), *kind, extra)
            }
            _ => true,
        }
    }

    /// Depth-first enumeration; `visit` returns `false` to stop.
    fn run(&mut self, visit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        let n = self.d.n();
        if self.sigma.len() == n {
            return !self.leaf_ok() || visit(&self.sigma);
        }
        for v in 0..n {
            if self.pos[v] == UNPLACED && self.try_place(v) {
                let go_on = self.run(visit);
                self.undo();
                if !go_on {
                    return false;
                }
            }
        }
        true
    }
}

fn validate_predicate(d: &Digraph, pred: &OrderPredicate) -> Result<(), SolveError> {
    use crate::solution::check_len;
    let n = d.n();
    match pred {
        OrderPredicate::Bounds { spec, weights } => {
            check_len("f", &spec.f, n)?;
            check_len("g", &spec.g, n)?;
            if let Some(w) = weights {
                check_len("weights", w, d.m())?;
            }
        }
        OrderPredicate::DDistance { g, .. } => check_len("g", g, n)?,
        OrderPredicate::Exact { m_delta, m_rho } => {
            check_len("m_delta", m_delta, n)?;
            check_len("m_rho", m_rho, n)?;
        }
        OrderPredicate::Simultaneous(b) => {
            for v in [&b.f_delta, &b.g_delta, &b.f_rho, &b.g_rho] {
                check_len("simultaneous bounds", v, n)?;
            }
        }
        OrderPredicate::Family { extra, .. } => {
            let ids: Vec<usize> = match extra {
                FamilyExtra::None | FamilyExtra::PathCount(_) => vec![],
                FamilyExtra::Roots(x) => x.clone(),
                FamilyExtra::Endpoints { s, t } => vec![*s, *t],
                FamilyExtra::Terminals { sources, sinks } => [sources.as_slice(), sinks].concat(),
                FamilyExtra::Root(r) => vec![*r],
                FamilyExtra::InOutArborescence { root } => root.iter().copied().collect(),
            };
            if let Some(v) = ids.into_iter().find(|&v| v >= n) {
                return Err(SolveError::SpecViolation(format!("vertex {v} out of range")));
            }
        }
    }
    Ok(())
}

/// Calls `visit` on every order satisfying `pred`, in lexicographic order,
/// until it returns `false`.
pub fn for_each_order(
    d: &Digraph,
    pred: &OrderPredicate,
    caps: &OracleCaps,
    mut visit: impl FnMut(&[usize]) -> bool,
) -> Result<(), SolveError> {
    caps.check_vertices(d.n())?;
    validate_predicate(d, pred)?;
    Search::new(d, pred).run(&mut visit);
    Ok(())
}

/// Lexicographically first order satisfying `pred`.
pub fn oracle_order(d: &Digraph, pred: &OrderPredicate, caps: &OracleCaps) -> Result<SolveResult, SolveError> {
    let mut found = None;
    for_each_order(d, pred, caps, |s| {
        found = Some(s.to_vec());
        false
    })?;
    Ok(match found {
        Some(s) => feasible(d, &d.weights(), VertexOrder::from_vec_unchecked(s)),
        None => SolveResult::Infeasible { witness: None },
    })
}

/// Largest vertex count for [`oracle_bounds_by_prefix_sets`].
pub const PREFIX_SET_MAX_VERTICES: usize = 64;

/// Lexicographically first order with `f(v) <= w(v, before v) <= g(v)`,
/// searched over prefix sets with a memo of sets that cannot be completed.
/// `weights` may be signed; `None` uses the digraph's weights.
pub fn oracle_bounds_by_prefix_sets(
    d: &Digraph,
    spec: &BoundSpec,
    weights: Option<&[ExtendedValue]>,
) -> Result<SolveResult, SolveError> {
    let n = d.n();
    if n > PREFIX_SET_MAX_VERTICES {
        return Err(SolveError::CapExceeded { param: "n", value: n, cap: PREFIX_SET_MAX_VERTICES });
    }
    crate::solution::check_len("f", &spec.f, n)?;
    crate::solution::check_len("g", &spec.g, n)?;
    let own = d.weights();
    let w = weights.unwrap_or(&own);
    crate::solution::check_len("weights", w, d.m())?;
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut dead = std::collections::HashSet::new();
    let mut seq = Vec::with_capacity(n);
    fn rec(
        d: &Digraph,
        spec: &BoundSpec,
        w: &[ExtendedValue],
        placed: u64,
        full: u64,
        dead: &mut std::collections::HashSet<u64>,
        seq: &mut Vec<usize>,
    ) -> bool {
        if placed == full {
            return true;
        }
        if dead.contains(&placed) || stranded(d, spec, w, placed) {
            return false;
        }
        for v in (0..d.n()).filter(|&v| placed >> v & 1 == 0) {
            let left: ExtendedValue = d
                .out_arcs(v)
                .iter()
                .filter(|&&a| placed >> d.arc(a).head & 1 == 1)
                .map(|&a| w[a])
                .sum();
            if spec.admits(v, left) {
                seq.push(v);
                if rec(d, spec, w, placed | 1 << v, full, dead, seq) {
                    return true;
                }
                seq.pop();
            }
        }
        dead.insert(placed);
        false
    }
    Ok(if rec(d, spec, w, 0, full, &mut dead, &mut seq) {
        feasible(d, &d.weights(), VertexOrder::from_vec_unchecked(seq))
    } else {
        SolveResult::Infeasible { witness: None }
    })
}

/// Some unplaced vertex misses a bound whatever the remaining vertices do:
/// its left weight can still fall by its negative weight and rise by its
/// positive weight toward unplaced vertices.
fn stranded(d: &Digraph, spec: &BoundSpec, w: &[ExtendedValue], placed: u64) -> bool {
    (0..d.n()).filter(|&v| placed >> v & 1 == 0).any(|v| {
        let (mut now, mut down, mut up) = (ExtendedValue::ZERO, ExtendedValue::ZERO, ExtendedValue::ZERO);
        for &a in d.out_arcs(v) {
            let x = w[a];
            if placed >> d.arc(a).head & 1 == 1 {
                now = now + x;
            } else if x < ExtendedValue::ZERO {
                down = down + x;
            } else {
                up = up + x;
            }
        }
        now + down > spec.g[v] || now + up < spec.f[v]
    })
}

/// Every unconstrained order, lexicographically.
fn all_orders(d: &Digraph, caps: &OracleCaps, visit: impl FnMut(&[usize]) -> bool) -> Result<(), SolveError> {
    let pred = OrderPredicate::Bounds { spec: BoundSpec::unbounded(d.n()), weights: None };
    for_each_order(d, &pred, caps, visit)
}

/// Left-outdegree counts by position.
fn positional_left_counts(d: &Digraph, sigma: &[usize]) -> Vec<usize> {
    let mut pos = vec![0; d.n()];
    for (i, &v) in sigma.iter().enumerate() {
        pos[v] = i;
    }
    sigma
        .iter()
        .map(|&v| d.out_arcs(v).iter().filter(|&&a| pos[d.arc(a).head] < pos[v]).count())
        .collect()
}

/// Minimum over all orders of the largest weighted left-outdegree.
pub fn oracle_minmax(d: &Digraph, caps: &OracleCaps) -> Result<(VertexOrder, ExtendedValue), SolveError> {
    let weights = d.weights();
    let mut best: Option<(Vec<usize>, ExtendedValue)> = None;
    all_orders(d, caps, |s| {
        let order = VertexOrder::from_vec_unchecked(s.to_vec());
        let value = crate::digraph::profile::degree_profile_weighted(d, &order, &weights)
            .expect("permutation")
            .max_delta_left_w();
        if best.as_ref().is_none_or(|(_, b)| value < *b) {
            best = Some((s.to_vec(), value));
        }
        true
    })?;
    let (s, v) = best.unwrap_or((Vec::new(), ExtendedValue::ZERO));
    Ok((VertexOrder::from_vec_unchecked(s), v))
}

/// Among orders with `δℓ_w <= g`, one whose non-increasingly sorted
/// left-outdegree count vector is lexicographically smallest.
pub fn oracle_decreasing_min(
    d: &Digraph,
    g: &[ExtendedValue],
    caps: &OracleCaps,
) -> Result<Option<(VertexOrder, Vec<usize>)>, SolveError> {
    let mut best: Option<(Vec<usize>, Vec<usize>)> = None;
    for_each_order(d, &OrderPredicate::upper(g.to_vec()), caps, |s| {
        let mut vec = positional_left_counts(d, s);
        vec.sort_unstable_by(|a, b| b.cmp(a));
        if best.as_ref().is_none_or(|(_, b)| vec < *b) {
            best = Some((s.to_vec(), vec));
        }
        true
    })?;
    Ok(best.map(|(s, v)| (VertexOrder::from_vec_unchecked(s), v)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LexSide {
    FromLeft,
    FromRight,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LexSense {
    Min,
    Max,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LexObjective {
    pub side: LexSide,
    pub sense: LexSense,
}

/// Left-outdegree vector read in the objective's direction.
pub fn lex_vector(d: &Digraph, sigma: &[usize], side: LexSide) -> Vec<usize> {
    let mut v = positional_left_counts(d, sigma);
    if side == LexSide::FromRight {
        v.reverse();
    }
    v
}

/// All optimal orders under `obj` (lexicographic) and the optimal vector.
pub fn oracle_lex_all(
    d: &Digraph,
    obj: LexObjective,
    caps: &OracleCaps,
) -> Result<(Vec<VertexOrder>, Vec<usize>), SolveError> {
    let mut best: Option<Vec<usize>> = None;
    let mut orders = Vec::new();
    all_orders(d, caps, |s| {
        let vec = lex_vector(d, s, obj.side);
        let cmp = match &best {
            None => Ordering::Less,
            Some(b) => match obj.sense {
                LexSense::Min => vec.cmp(b),
                LexSense::Max => b.cmp(&vec),
            },
        };
        match cmp {
            Ordering::Less => {
                best = Some(vec);
                orders = vec![VertexOrder::from_vec_unchecked(s.to_vec())];
            }
            Ordering::Equal => orders.push(VertexOrder::from_vec_unchecked(s.to_vec())),
            Ordering::Greater => {}
        }
        true
    })?;
    Ok((orders, best.unwrap_or_default()))
}

/// Lexicographically first optimal order under `obj` and its vector.
pub fn oracle_lex(d: &Digraph, obj: LexObjective, caps: &OracleCaps) -> Result<(VertexOrder, Vec<usize>), SolveError> {
    let (mut orders, vec) = oracle_lex_all(d, obj, caps)?;
    Ok((orders.swap_remove(0), vec))
}

/// Arcs lying on some directed cycle: `head` reaches `tail`.
pub fn cycle_arcs(d: &Digraph) -> Vec<bool> {
    let n = d.n();
    let mut reach = vec![vec![false; n]; n];
    for (s, row) in reach.iter_mut().enumerate() {
        let mut stack = vec![s];
        row[s] = true;
        while let Some(u) = stack.pop() {
            for &a in d.out_arcs(u) {
                let h = d.arc(a).head;
                if !row[h] {
                    row[h] = true;
                    stack.push(h);
                }
            }
        }
    }
    d.arcs().iter().map(|a| reach[a.head][a.tail]).collect()
}

/// Minimum-cardinality in-branching meeting every directed cycle; the
/// lexicographically smallest sorted arc list among minimum ones.
pub fn oracle_min_inbranching_cover(d: &Digraph, caps: &OracleCaps) -> Result<Option<Vec<usize>>, SolveError> {
    let on_cycle = cycle_arcs(d);
    let branch: Vec<usize> = (0..d.m()).filter(|&a| on_cycle[a]).collect();
    caps.check_arcs(branch.len())?;
    // Each vertex keeps at most one of its cycle out-arcs.
    let choices: Vec<Vec<usize>> =
        (0..d.n()).map(|v| d.out_arcs(v).iter().copied().filter(|&a| on_cycle[a]).collect()).collect();
    let mut search = CoverSearch {
        d,
        choices,
        family: vec![false; d.m()],
        rest: vec![false; d.m()],
        chosen: Vec::new(),
        best: None,
    };
    search.run(0);
    Ok(search.best)
}

/// Arcs out of decided vertices are final, so a cycle among the kept ones
/// or among the chosen ones closes the branch.
struct CoverSearch<'a> {
    d: &'a Digraph,
    choices: Vec<Vec<usize>>,
    family: Vec<bool>,
    rest: Vec<bool>,
    chosen: Vec<usize>,
    best: Option<Vec<usize>>,
}

impl CoverSearch<'_> {
    fn run(&mut self, v: usize) {
        if self.best.as_ref().is_some_and(|b| self.chosen.len() > b.len()) {
            return;
        }
        if !is_acyclic_subset(self.d, &self.rest) || !is_acyclic_subset(self.d, &self.family) {
            return;
        }
        if v == self.d.n() {
            let mut set = self.chosen.clone();
            set.sort_unstable();
            if self.best.as_ref().is_none_or(|b| (set.len(), &set) < (b.len(), b)) {
                self.best = Some(set);
            }
            return;
        }
        let options = self.choices[v].clone();
        options.iter().for_each(|&a| self.rest[a] = true);
        self.run(v + 1);
        for &a in &options {
            self.rest[a] = false;
            self.family[a] = true;
            self.chosen.push(a);
            self.run(v + 1);
            self.chosen.pop();
            self.family[a] = false;
            self.rest[a] = true;
        }
        options.iter().for_each(|&a| self.rest[a] = false);
    }
}

/// Some partition of the arcs into a member of `kind` and an acyclic rest.
///
/// Downward-closed kinds branch only on arcs lying on cycles; other kinds
/// branch on every arc. The branch count is subject to the arc cap.
pub fn oracle_partition(d: &Digraph, kind: ArcFamilyKind, caps: &OracleCaps) -> Result<Option<ArcPartition>, SolveError> {
    let on_cycle = cycle_arcs(d);
    let branch: Vec<bool> = if kind.is_downward_closed() { on_cycle } else { vec![true; d.m()] };
    caps.check_arcs(branch.iter().filter(|&&b| b).count())?;
    let mut s = PartitionSearch::new(d, kind, branch);
    Ok(s.run(0).then(|| ArcPartition::from_mask(d, &s.family, kind)))
}

struct PartitionSearch<'a> {
    d: &'a Digraph,
    kind: ArcFamilyKind,
    branch: Vec<bool>,
    family: Vec<bool>,
    rest: Vec<bool>,
    out: Vec<usize>,
    inn: Vec<usize>,
    undecided_incident: Vec<usize>,
}

impl<'a> PartitionSearch<'a> {
    fn new(d: &'a Digraph, kind: ArcFamilyKind, branch: Vec<bool>) -> Self {
        let undecided_incident = (0..d.n()).map(|v| d.outdegree(v) + d.indegree(v)).collect();
        Self {
            d,
            kind,
            branch,
            family: vec![false; d.m()],
            rest: vec![false; d.m()],
            out: vec![0; d.n()],
            inn: vec![0; d.n()],
            undecided_incident,
        }
    }

    /// Whether `to` reaches `from` using arcs flagged in `set`.
    fn reaches(&self, set: &[bool], from: usize, to: usize) -> bool {
        let mut seen = vec![false; self.d.n()];
        let mut stack = vec![from];
        seen[from] = true;
        while let Some(u) = stack.pop() {
            if u == to {
                return true;
            }
            for &a in self.d.out_arcs(u) {
                let h = self.d.arc(a).head;
                if set[a] && !seen[h] {
                    seen[h] = true;
                    stack.push(h);
                }
            }
        }
        false
    }

    fn family_admits(&self, a: usize) -> bool {
        use ArcFamilyKind::*;
        let arc = self.d.arc(a);
        let (t, h) = (arc.tail, arc.head);
        let ok = match self.kind {
            Matching | PerfectMatching => {
                self.out[t] + self.inn[t] == 0 && self.out[h] + self.inn[h] == 0
            }
            InBranching | InArborescence => self.out[t] == 0,
            DisjointDipaths | Dipath | HamiltonianDipath => self.out[t] == 0 && self.inn[h] == 0,
            Acyclic => true,
        };
        ok && (matches!(self.kind, Matching | PerfectMatching) || !self.reaches(&self.family, h, t))
    }

    /// A perfect matching cannot leave a vertex with no remaining chance of cover.
    fn coverage_alive(&self, a: usize) -> bool {
        if self.kind != ArcFamilyKind::PerfectMatching {
            return true;
        }
        let arc = self.d.arc(a);
        [arc.tail, arc.head]
            .iter()
            .all(|&v| self.out[v] + self.inn[v] > 0 || self.undecided_incident[v] > 0)
    }

    fn run(&mut self, a: usize) -> bool {
        if a == self.d.m() {
            return classify_mask(self.d, &self.family, self.kind);
        }
        let arc = *self.d.arc(a);
        self.undecided_incident[arc.tail] -= 1;
        self.undecided_incident[arc.head] -= 1;
        let mut found = false;
        if self.branch[a] && self.family_admits(a) {
            self.family[a] = true;
            self.out[arc.tail] += 1;
            self.inn[arc.head] += 1;
            found = self.run(a + 1);
            if !found {
                self.family[a] = false;
                self.out[arc.tail] -= 1;
                self.inn[arc.head] -= 1;
            }
        }
        if !found && !self.reaches(&self.rest, arc.head, arc.tail) && self.coverage_alive(a) {
            self.rest[a] = true;
            found = self.run(a + 1);
            if !found {
                self.rest[a] = false;
            }
        }
        if !found {
            self.undecided_incident[arc.tail] += 1;
            self.undecided_incident[arc.head] += 1;
        }
        found
    }
}

/// Whether some order's left-going arcs form a member of `kind`
/// (shorthand for a family predicate without extras).
pub fn ordering_exists(d: &Digraph, kind: ArcFamilyKind, caps: &OracleCaps) -> Result<bool, SolveError> {
    Ok(oracle_order(d, &OrderPredicate::family(kind), caps)?.is_feasible())
}
