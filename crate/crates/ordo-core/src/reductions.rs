//! Hardness gadgets as executable constructions, with forward witness
//! builders and the converse certificate extractions.
//!
//! Every gadget numbers its vertices by sorting their tags, so equal inputs
//! serialize identically.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::digraph::{is_acyclic_subset, left_arcs, topological_order, Arc, Digraph, VertexOrder};
use crate::ext::ExtendedValue;
use crate::solution::BoundSpec;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ReductionError {
    #[error("k = {k} exceeds the vertex count {n}")]
    KTooLarge { k: usize, n: usize },
    #[error("input shape: {0}")]
    ShapeViolation(String),
    #[error("assignment rejected: {0}")]
    AssignmentRejected(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// A literal over variables numbered from 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Literal {
    pub var: usize,
    pub negated: bool,
}

impl Literal {
    pub fn pos(var: usize) -> Self {
        Self { var, negated: false }
    }

    pub fn neg(var: usize) -> Self {
        Self { var, negated: true }
    }

    /// Value under `assignment`, indexed by `var - 1`.
    pub fn value(&self, assignment: &[bool]) -> bool {
        assignment[self.var - 1] != self.negated
    }

    fn from_dimacs(x: i64) -> Self {
        Self { var: x.unsigned_abs() as usize, negated: x < 0 }
    }

    fn to_dimacs(self) -> i64 {
        let v = self.var as i64;
        if self.negated {
            -v
        } else {
            v
        }
    }
}

/// A CNF with exactly three literals per clause.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CnfFormula {
    pub num_vars: usize,
    pub clauses: Vec<[Literal; 3]>,
}

impl CnfFormula {
    pub fn new(num_vars: usize, clauses: Vec<[Literal; 3]>) -> Result<Self, ReductionError> {
        for (j, c) in clauses.iter().enumerate() {
            if let Some(l) = c.iter().find(|l| l.var == 0 || l.var > num_vars) {
                return Err(ReductionError::ShapeViolation(format!(
                    "clause {} uses variable {} outside 1..={num_vars}",
                    j + 1,
                    l.var
                )));
            }
        }
        Ok(Self { num_vars, clauses })
    }

    /// Parses DIMACS CNF (`p cnf V C` header, zero-terminated clauses).
    pub fn from_dimacs(text: &str) -> Result<Self, ReductionError> {
        let mut header = None;
        let mut lits = Vec::new();
        let mut clauses = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            let err = |msg: String| ReductionError::Parse { line: i + 1, msg };
            if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
                continue;
            }
            if let Some(rest) = line.strip_prefix('p') {
                let f: Vec<&str> = rest.split_whitespace().collect();
                match f.as_slice() {
                    ["cnf", v, c] => {
                        let v = v.parse::<usize>().map_err(|e| err(e.to_string()))?;
                        let c = c.parse::<usize>().map_err(|e| err(e.to_string()))?;
                        header = Some((v, c));
                    }
                    _ => return Err(err("expected `p cnf <vars> <clauses>`".into())),
                }
                continue;
            }
            if header.is_none() {
                return Err(err("clause before header".into()));
            }
            for tok in line.split_whitespace() {
                let x: i64 = tok.parse().map_err(|_| err(format!("bad literal `{tok}`")))?;
                if x == 0 {
                    let c: [Literal; 3] = std::mem::take(&mut lits)
                        .try_into()
                        .map_err(|v: Vec<Literal>| err(format!("clause has {} literals, expected 3", v.len())))?;
                    clauses.push(c);
                } else {
                    lits.push(Literal::from_dimacs(x));
                }
            }
        }
        let (v, c) = header.ok_or(ReductionError::Parse { line: 0, msg: "missing header".into() })?;
        if !lits.is_empty() {
            return Err(ReductionError::Parse { line: 0, msg: "unterminated clause".into() });
        }
        if clauses.len() != c {
            return Err(ReductionError::Parse {
                line: 0,
                msg: format!("header declares {c} clauses, found {}", clauses.len()),
            });
        }
        Self::new(v, clauses)
    }

    pub fn to_dimacs(&self) -> String {
        let mut s = format!("p cnf {} {}\n", self.num_vars, self.clauses.len());
        for c in &self.clauses {
            s.push_str(&format!("{} {} {} 0\n", c[0].to_dimacs(), c[1].to_dimacs(), c[2].to_dimacs()));
        }
        s
    }

    /// Occurrence count per variable, indexed by `var - 1`.
    pub fn occurrences(&self) -> Vec<usize> {
        let mut occ = vec![0; self.num_vars];
        self.clauses.iter().flatten().for_each(|l| occ[l.var - 1] += 1);
        occ
    }

    /// At least one variable, as many clauses as variables, and every
    /// variable occurring exactly three times.
    pub fn is_xsat3_shape(&self) -> bool {
        self.num_vars > 0 && self.clauses.len() == self.num_vars && self.occurrences().iter().all(|&o| o == 3)
    }

    /// Exactly one true literal occurrence per clause.
    pub fn exactly_one_satisfied(&self, assignment: &[bool]) -> bool {
        assignment.len() == self.num_vars
            && self.clauses.iter().all(|c| c.iter().filter(|l| l.value(assignment)).count() == 1)
    }

    /// Every clause has a true and a false literal.
    pub fn nae_satisfied(&self, assignment: &[bool]) -> bool {
        assignment.len() == self.num_vars
            && self.clauses.iter().all(|c| {
                let t = c.iter().filter(|l| l.value(assignment)).count();
                t == 1 || t == 2
            })
    }
}

/// Bounds attached to a gadget.
#[derive(Debug, Clone, PartialEq)]
pub enum GadgetBounds {
    None,
    Bounds(BoundSpec),
    /// Bounds on sums of possibly negative arc weights, one per arc.
    Signed { spec: BoundSpec, weights: Vec<ExtendedValue> },
    /// `g` applies to arcs into the `d` immediate predecessors.
    DDistance { d: usize, g: Vec<ExtendedValue> },
}

/// A constructed instance with one semantic tag per vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct GadgetInstance {
    pub digraph: Digraph,
    pub bounds: GadgetBounds,
    /// `tags[v]` labels vertex `v`; sorted and distinct.
    pub tags: Vec<String>,
}

impl GadgetInstance {
    pub fn vertex(&self, tag: &str) -> Option<usize> {
        self.tags.binary_search_by(|t| t.as_str().cmp(tag)).ok()
    }

    fn id(&self, tag: &str) -> usize {
        self.vertex(tag).unwrap_or_else(|| panic!("gadget has no vertex `{tag}`"))
    }

    /// Tag map `{"0": label, ...}` for the sidecar file.
    pub fn tags_json(&self) -> String {
        let map: std::collections::BTreeMap<String, &str> =
            self.tags.iter().enumerate().map(|(i, t)| (i.to_string(), t.as_str())).collect();
        serde_json::to_string_pretty(&map).expect("string map serializes")
    }
}

/// Collects tagged vertices and arcs, then renumbers by sorted tag.
#[derive(Default)]
struct Builder {
    tags: Vec<String>,
    index: HashMap<String, usize>,
    arcs: Vec<(usize, usize, ExtendedValue)>,
    f: Vec<ExtendedValue>,
    g: Vec<ExtendedValue>,
}

impl Builder {
    fn v(&mut self, tag: impl Into<String>) -> usize {
        let tag = tag.into();
        if let Some(&i) = self.index.get(&tag) {
            return i;
        }
        let i = self.tags.len();
        self.index.insert(tag.clone(), i);
        self.tags.push(tag);
        self.f.push(ExtendedValue::NEG_INF);
        self.g.push(ExtendedValue::POS_INF);
        i
    }

    fn arc(&mut self, tail: &str, head: &str) {
        self.arc_w(tail, head, ExtendedValue::ONE, 1);
    }

    fn arcs(&mut self, tail: &str, head: &str, copies: usize) {
        self.arc_w(tail, head, ExtendedValue::ONE, copies);
    }

    fn arc_w(&mut self, tail: &str, head: &str, w: ExtendedValue, copies: usize) {
        let (t, h) = (self.v(tail), self.v(head));
        for _ in 0..copies {
            self.arcs.push((t, h, w));
        }
    }

    fn path(&mut self, tags: &[&str]) {
        tags.windows(2).for_each(|p| self.arc(p[0], p[1]));
    }

    fn bound(&mut self, tag: &str, f: ExtendedValue, g: ExtendedValue) {
        let i = self.v(tag);
        self.f[i] = f;
        self.g[i] = g;
    }

    /// Vertex permutation `old -> new` sorting the tags.
    fn canonical(&self) -> Vec<usize> {
        let mut by_tag: Vec<usize> = (0..self.tags.len()).collect();
        by_tag.sort_by(|&a, &b| self.tags[a].cmp(&self.tags[b]));
        let mut new_id = vec![0; by_tag.len()];
        by_tag.iter().enumerate().for_each(|(new, &old)| new_id[old] = new);
        new_id
    }

    fn permute<T: Clone>(new_id: &[usize], xs: &[T]) -> Vec<T> {
        let mut out = xs.to_vec();
        xs.iter().enumerate().for_each(|(old, x)| out[new_id[old]] = x.clone());
        out
    }

    /// Finishes with unit weights; `make` receives the renumbered `f`, `g`.
    fn finish(self, make: impl FnOnce(Vec<ExtendedValue>, Vec<ExtendedValue>) -> GadgetBounds) -> GadgetInstance {
        let new_id = self.canonical();
        let arcs = self.arcs.iter().map(|&(t, h, _)| Arc::new(new_id[t], new_id[h])).collect();
        let digraph = Digraph::new(self.tags.len(), arcs).expect("gadget arcs are valid");
        let bounds = make(Self::permute(&new_id, &self.f), Self::permute(&new_id, &self.g));
        GadgetInstance { digraph, bounds, tags: Self::permute(&new_id, &self.tags) }
    }

    fn finish_signed(self) -> GadgetInstance {
        let weights = self.arcs.iter().map(|a| a.2).collect();
        self.finish(|f, g| GadgetBounds::Signed { spec: BoundSpec { f, g }, weights })
    }
}

/// Edges `{u < v}` of a symmetric loop-free digraph, lexicographically.
fn undirected_edges(g: &Digraph) -> Result<Vec<(usize, usize)>, ReductionError> {
    if !g.is_symmetric() {
        return Err(ReductionError::ShapeViolation("graph must be a symmetric digraph".into()));
    }
    let mut e: Vec<(usize, usize)> = g.arcs().iter().filter(|a| a.tail < a.head).map(|a| (a.tail, a.head)).collect();
    e.sort_unstable();
    e.dedup();
    Ok(e)
}

/// Copies of the `s -> e_1` arc. The bound at `s` forces `e_1` to its right
/// only when the copies exceed `k`.
fn s_multiplicity(n: usize, k: usize) -> usize {
    n.max(k + 1)
}

fn independent_set_skeleton(g: &Digraph, k: usize, simple: bool, s_to_v: ExtendedValue) -> Result<Builder, ReductionError> {
    let n = g.n();
    if k > n {
        return Err(ReductionError::KTooLarge { k, n });
    }
    let edges = undirected_edges(g)?;
    let mut b = Builder::default();
    b.v("s");
    for v in 0..n {
        b.v(format!("v_{v}"));
        b.arc_w("s", &format!("v_{v}"), s_to_v, 1);
    }
    for (j, &(u, v)) in edges.iter().enumerate() {
        let e = format!("e_{}", j + 1);
        b.arc(&e, &format!("v_{u}"));
        b.arc(&e, &format!("v_{v}"));
    }
    let chain: Vec<String> = std::iter::once("s".to_string()).chain((1..=edges.len()).map(|j| format!("e_{j}"))).collect();
    for (j, pair) in chain.windows(2).enumerate() {
        let copies = if j == 0 { s_multiplicity(n, k) } else { 2 };
        if simple {
            for r in 1..=copies {
                let p = format!("p_{}_{r}", j + 1);
                b.path(&[&pair[0], &p, &pair[1]]);
                b.bound(&p, ExtendedValue::NEG_INF, ExtendedValue::ZERO);
            }
        } else {
            b.arcs(&pair[0], &pair[1], copies);
        }
    }
    for j in 1..=edges.len() {
        b.bound(&format!("e_{j}"), ExtendedValue::NEG_INF, ExtendedValue::ONE);
    }
    for v in 0..n {
        b.bound(&format!("v_{v}"), ExtendedValue::NEG_INF, ExtendedValue::ONE);
    }
    Ok(b)
}

/// Bounded-ordering instance feasible iff the symmetric digraph `g` has an
/// independent set of size `k`. `s` has `f = g = k`; every other vertex an
/// upper bound of 1, or 0 for the split vertices of the simple variant.
pub fn gadget_independent_set(g: &Digraph, k: usize, simple: bool) -> Result<GadgetInstance, ReductionError> {
    let kk = ExtendedValue::from_count(k);
    let mut b = independent_set_skeleton(g, k, simple, ExtendedValue::ONE)?;
    b.bound("s", kk, kk);
    Ok(b.finish(|f, g| GadgetBounds::Bounds(BoundSpec { f, g })))
}

/// Upper-bound-only variant: weight -1 on `s -> v`, `g(s) = -k`.
pub fn gadget_independent_set_negweight(g: &Digraph, k: usize, simple: bool) -> Result<GadgetInstance, ReductionError> {
    let mut b = independent_set_skeleton(g, k, simple, ExtendedValue::finite(-1.0))?;
    b.bound("s", ExtendedValue::NEG_INF, ExtendedValue::finite(-(k as f64)));
    Ok(b.finish_signed())
}

/// Places the independent set first, then `s` and the edge chain, then
/// everything else.
pub fn witness_order_independent_set(gadget: &GadgetInstance, set: &[usize]) -> VertexOrder {
    let mut seq: Vec<usize> = set.iter().map(|v| gadget.id(&format!("v_{v}"))).collect();
    seq.push(gadget.id("s"));
    let mut j = 1;
    while let Some(e) = gadget.vertex(&format!("e_{j}")) {
        let mut r = 1;
        while let Some(p) = gadget.vertex(&format!("p_{j}_{r}")) {
            seq.push(p);
            r += 1;
        }
        seq.push(e);
        j += 1;
    }
    let mut seen = vec![false; gadget.digraph.n()];
    seq.iter().for_each(|&v| seen[v] = true);
    seq.extend((0..gadget.digraph.n()).filter(|&v| !seen[v]));
    VertexOrder::new(seq, gadget.digraph.n()).expect("every vertex once")
}

fn lit_tag(l: Literal) -> String {
    if l.negated {
        format!("nx_{}", l.var)
    } else {
        format!("x_{}", l.var)
    }
}

/// Exact-cover gadget on `10n - 1` vertices: feasible with
/// `f(s_1) = g(s_1) = 0`, `f(t_n) = g(t_n) = 1` and `f = 1`, `g = outdeg - 2`
/// elsewhere iff the formula has an exactly-one-in-three assignment.
pub fn gadget_3xsat3(formula: &CnfFormula) -> Result<GadgetInstance, ReductionError> {
    if !formula.is_xsat3_shape() {
        return Err(ReductionError::ShapeViolation(
            "need n >= 1 variables, n clauses and three occurrences per variable".into(),
        ));
    }
    let n = formula.num_vars;
    let mut b = Builder::default();
    let spine = xsat3_spine(n);
    for i in 1..=n {
        let (x, nx) = (format!("x_{i}"), format!("nx_{i}"));
        for lit in [&x, &nx] {
            b.arc(lit, &format!("s_{i}"));
            b.arcs(lit, &format!("t_{i}"), 2);
        }
        for w in [format!("v_{i}"), format!("v'_{i}")] {
            b.arc(&w, &x);
            b.arc(&w, &nx);
        }
    }
    for (j, c) in formula.clauses.iter().enumerate() {
        for &l in c {
            b.arc(&format!("c_{}", j + 1), &lit_tag(l));
        }
    }
    // The v_i and v'_i each point at their right neighbour in the sequence
    // s.., v.., c.., v'.., t.. with the p_k left out.
    let main: Vec<&str> = spine.iter().map(String::as_str).filter(|t| !t.starts_with("p_")).collect();
    let last = format!("t_{n}");
    for (i, &t) in main.iter().enumerate() {
        if t.starts_with("v_") || t.starts_with("v'_") {
            b.arc(t, main[i + 1]);
        }
        if t.starts_with("s_") || t.starts_with("t_") {
            if t != last {
                b.arcs(t, main[i + 1], 2);
            }
            if t != "s_1" {
                b.arc(t, main[i - 1]);
            }
        }
    }
    for (i, t) in spine.iter().enumerate() {
        if t.starts_with("p_") {
            b.arc(t, &spine[i - 1]);
            b.arcs(t, &spine[i + 1], 2);
        }
    }
    let outdeg: HashMap<usize, usize> = b.arcs.iter().fold(HashMap::new(), |mut m, a| {
        *m.entry(a.0).or_default() += 1;
        m
    });
    for tag in b.tags.clone() {
        let d = outdeg.get(&b.index[&tag]).copied().unwrap_or(0);
        let (f, g) = match tag.as_str() {
            "s_1" => (0, 0),
            t if t == format!("t_{n}") => (1, 1),
            _ => (1, d as i64 - 2),
        };
        b.bound(&tag, ExtendedValue::finite(f as f64), ExtendedValue::finite(g as f64));
    }
    Ok(b.finish(|f, g| GadgetBounds::Bounds(BoundSpec { f, g })))
}

/// `s_1..s_n, v_1, p_1, v_2, .., v_n, p_n, c_1, .., c_n, p_2n, v'_1, .., v'_n, t_1..t_n`.
fn xsat3_spine(n: usize) -> Vec<String> {
    let mut out: Vec<String> = (1..=n).map(|i| format!("s_{i}")).collect();
    let middle: Vec<String> = (1..=n)
        .map(|i| format!("v_{i}"))
        .chain((1..=n).map(|j| format!("c_{j}")))
        .chain((1..=n).map(|i| format!("v'_{i}")))
        .collect();
    for (k, t) in middle.iter().enumerate() {
        if k > 0 {
            out.push(format!("p_{k}"));
        }
        out.push(t.clone());
    }
    out.extend((1..=n).map(|i| format!("t_{i}")));
    out
}

/// The feasible order for an exactly-one-in-three assignment: true literals
/// right after `s_n`, false literals right before `t_1`.
pub fn witness_order_3xsat3(
    formula: &CnfFormula,
    gadget: &GadgetInstance,
    assignment: &[bool],
) -> Result<VertexOrder, ReductionError> {
    if !formula.exactly_one_satisfied(assignment) {
        return Err(ReductionError::AssignmentRejected("not exactly one true literal per clause".into()));
    }
    let n = formula.num_vars;
    let literal = |i: usize, truth: bool| {
        let l = Literal { var: i, negated: assignment[i - 1] != truth };
        gadget.id(&lit_tag(l))
    };
    let spine = xsat3_spine(n);
    let mut seq = Vec::with_capacity(gadget.digraph.n());
    for t in &spine {
        if t == "t_1" {
            seq.extend((1..=n).map(|i| literal(i, false)));
        }
        seq.push(gadget.id(t));
        if *t == format!("s_{n}") {
            seq.extend((1..=n).map(|i| literal(i, true)));
        }
    }
    let order = VertexOrder::new(seq, gadget.digraph.n()).expect("every vertex once");
    if let GadgetBounds::Bounds(spec) = &gadget.bounds {
        let profile = crate::digraph::degree_profile(&gadget.digraph, &order).expect("order fits");
        assert!(spec.violations(&profile).is_empty(), "constructed order must meet every bound");
    }
    Ok(order)
}

/// Reads the assignment off a feasible order: `x_i` is true iff its vertex
/// precedes `c_1`.
pub fn assignment_from_order_3xsat3(formula: &CnfFormula, gadget: &GadgetInstance, order: &VertexOrder) -> Vec<bool> {
    let pos = order.positions();
    let c1 = pos[gadget.id("c_1")];
    (1..=formula.num_vars).map(|i| pos[gadget.id(&format!("x_{i}"))] < c1).collect()
}

fn clause_tags(j: usize, k: usize) -> (String, String, String) {
    (format!("c_{k}^{j}"), format!("nc_{k}^{j}"), format!("u_{k}^{j}"))
}

/// Clause gadgets with their cycles, variable gadgets, and one
/// extension per literal occurrence.
fn nae_builder(formula: &CnfFormula, perfect: bool) -> Builder {
    let mut b = Builder::default();
    for i in 1..=formula.num_vars {
        let v = |l: usize| format!("v_{l}^{i}");
        b.arc(&v(1), &v(2));
        b.arc(&v(2), &v(1));
        b.path(&[&v(2), &v(3), &v(4), &v(5), &v(2)]);
        if perfect {
            b.path(&[&v(3), &format!("s^{i}"), &v(5)]);
        }
    }
    for (j0, clause) in formula.clauses.iter().enumerate() {
        let j = j0 + 1;
        let c = |k: usize| clause_tags(j, k);
        let outer = [c(1).0, c(1).2, c(2).0, c(2).2, c(3).0, c(3).2, c(1).0];
        b.path(&outer.iter().map(String::as_str).collect::<Vec<_>>());
        let inner = [c(1).1, c(3).2, c(3).1, c(2).2, c(2).1, c(1).2, c(1).1];
        b.path(&inner.iter().map(String::as_str).collect::<Vec<_>>());
        for (k0, lit) in clause.iter().enumerate() {
            let k = k0 + 1;
            let i = lit.var;
            let (ck, nck, _) = c(k);
            let (first, second) = if lit.negated { (ck, nck) } else { (nck, ck) };
            let v = |l: usize| format!("v_{l}^{i}");
            let (y, z) = (format!("y_{k}^{j}"), format!("z_{k}^{j}"));
            b.path(&[&v(5), &first, &z, &v(4), &y, &second, &v(3)]);
            if perfect {
                b.path(&[&y, &format!("t_{k}^{j}"), &z]);
            }
        }
    }
    b
}

/// Digraph on `9m + sum_i (5 + 2 occ(x_i))` vertices partitionable into a
/// matching and an acyclic part iff the formula is NAE-satisfiable.
pub fn gadget_nae3sat_matching(formula: &CnfFormula) -> Result<GadgetInstance, ReductionError> {
    Ok(nae_builder(formula, false).finish(|_, _| GadgetBounds::None))
}

/// The matching gadget plus `s^i` on `v_3^i -> s^i -> v_5^i` and `t_k^j` on
/// `y_k^j -> t_k^j -> z_k^j`; partitionable into a perfect matching and an
/// acyclic part iff the formula is NAE-satisfiable.
pub fn gadget_nae3sat_perfect_matching(formula: &CnfFormula) -> Result<GadgetInstance, ReductionError> {
    Ok(nae_builder(formula, true).finish(|_, _| GadgetBounds::None))
}

fn arc_between(d: &Digraph, tail: usize, head: usize) -> usize {
    d.out_arcs(tail)
        .iter()
        .copied()
        .find(|&a| d.arc(a).head == head)
        .expect("gadget arc exists")
}

fn nae_witness(
    formula: &CnfFormula,
    gadget: &GadgetInstance,
    assignment: &[bool],
    perfect: bool,
) -> Result<Vec<usize>, ReductionError> {
    if !formula.nae_satisfied(assignment) {
        return Err(ReductionError::AssignmentRejected("some clause is not NAE-satisfied".into()));
    }
    let d = &gadget.digraph;
    let mut m = Vec::new();
    let mut add = |t: &str, h: &str| m.push(arc_between(d, gadget.id(t), gadget.id(h)));
    for i in 1..=formula.num_vars {
        let v = |l: usize| format!("v_{l}^{i}");
        let s = format!("s^{i}");
        add(&v(1), &v(2));
        if assignment[i - 1] {
            add(&v(3), &v(4));
            if perfect {
                add(&s, &v(5));
            }
        } else {
            add(&v(4), &v(5));
            if perfect {
                add(&v(3), &s);
            }
        }
    }
    for (j0, clause) in formula.clauses.iter().enumerate() {
        let j = j0 + 1;
        for (k0, lit) in clause.iter().enumerate() {
            let k = k0 + 1;
            let (ck, nck, uk) = clause_tags(j, k);
            let (y, z, t) = (format!("y_{k}^{j}"), format!("z_{k}^{j}"), format!("t_{k}^{j}"));
            if lit.value(assignment) {
                add(&ck, &uk);
            } else {
                add(&uk, &nck);
            }
            let x = assignment[lit.var - 1];
            // The endpoint of the occurrence path not used by the clause arc.
            let (pos_lit, neg_lit) = if lit.negated { (&nck, &ck) } else { (&ck, &nck) };
            if x {
                add(neg_lit, &z);
                if perfect {
                    add(&y, &t);
                }
            } else {
                add(&y, pos_lit);
                if perfect {
                    add(&t, &z);
                }
            }
        }
    }
    m.sort_unstable();
    Ok(m)
}

/// A matching whose removal leaves the matching gadget acyclic, built from
/// an NAE-satisfying assignment.
pub fn witness_matching_nae(
    formula: &CnfFormula,
    gadget: &GadgetInstance,
    assignment: &[bool],
) -> Result<Vec<usize>, ReductionError> {
    nae_witness(formula, gadget, assignment, false)
}

/// A perfect matching of the extended gadget that is an inclusion-wise
/// minimal feedback arc set.
pub fn witness_perfect_matching_nae(
    formula: &CnfFormula,
    gadget: &GadgetInstance,
    assignment: &[bool],
) -> Result<Vec<usize>, ReductionError> {
    nae_witness(formula, gadget, assignment, true)
}

/// Reads the assignment off a family arc set: `x_i` is true iff
/// `v_3^i -> v_4^i` is in it.
pub fn assignment_from_matching_nae(formula: &CnfFormula, gadget: &GadgetInstance, arcs: &[usize]) -> Vec<bool> {
    let d = &gadget.digraph;
    (1..=formula.num_vars)
        .map(|i| {
            let a = arc_between(d, gadget.id(&format!("v_3^{i}")), gadget.id(&format!("v_4^{i}")));
            arcs.contains(&a)
        })
        .collect()
}

/// Removing `arcs` leaves an acyclic digraph and each removed arc closes a
/// cycle with the remainder.
pub fn is_minimal_feedback_arc_set(d: &Digraph, arcs: &[usize]) -> bool {
    let mut rest = vec![true; d.m()];
    arcs.iter().for_each(|&a| rest[a] = false);
    is_acyclic_subset(d, &rest)
        && arcs.iter().all(|&a| {
            let (from, to) = (d.arc(a).head, d.arc(a).tail);
            let mut seen = vec![false; d.n()];
            let mut stack = vec![from];
            seen[from] = true;
            while let Some(u) = stack.pop() {
                for &b in d.out_arcs(u).iter().filter(|&&b| rest[b]) {
                    let h = d.arc(b).head;
                    if !seen[h] {
                        seen[h] = true;
                        stack.push(h);
                    }
                }
            }
            seen[to]
        })
}

/// An order whose left-going arcs are exactly `arcs`, if one exists.
pub fn order_from_feedback_set(d: &Digraph, arcs: &[usize]) -> Option<VertexOrder> {
    let mut keep = vec![true; d.m()];
    arcs.iter().for_each(|&a| keep[a] = false);
    let rest: Vec<Arc> = (0..d.m()).filter(|&a| keep[a]).map(|a| *d.arc(a)).collect();
    let sub = Digraph::new(d.n(), rest).ok()?;
    // Kept arcs all go right, so the left-going arcs lie in `arcs`.
    let order = topological_order(&sub).ok()?;
    let mut left = left_arcs(d, &order);
    left.sort_unstable();
    let mut want = arcs.to_vec();
    want.sort_unstable();
    (left == want).then_some(order)
}

/// Every arc `u -> w` becomes `u -> a_i -> w`.
pub fn gadget_split_arcs(d: &Digraph) -> GadgetInstance {
    let mut b = Builder::default();
    (0..d.n()).for_each(|v| {
        b.v(format!("v_{v}"));
    });
    for (i, a) in d.arcs().iter().enumerate() {
        b.path(&[&format!("v_{}", a.tail), &format!("a_{i}"), &format!("v_{}", a.head)]);
    }
    b.finish(|_, _| GadgetBounds::None)
}

/// The digraph plus a copy `v'` of every vertex joined to `v` by a 2-cycle.
pub fn gadget_matching_to_dipaths(d: &Digraph) -> GadgetInstance {
    let mut b = Builder::default();
    for v in 0..d.n() {
        let (x, y) = (format!("v_{v}"), format!("v'_{v}"));
        b.arc(&x, &y);
        b.arc(&y, &x);
    }
    for a in d.arcs() {
        b.arc(&format!("v_{}", a.tail), &format!("v_{}", a.head));
    }
    b.finish(|_, _| GadgetBounds::None)
}

/// Each vertex `v` splits into `v_1 <-> v_2`; each arc `u -> w` becomes
/// `u_2 -> w_1`.
pub fn gadget_hampath_split(d: &Digraph) -> GadgetInstance {
    let mut b = Builder::default();
    for v in 0..d.n() {
        let (x, y) = (format!("in_{v}"), format!("out_{v}"));
        b.arc(&x, &y);
        b.arc(&y, &x);
    }
    for a in d.arcs() {
        b.arc(&format!("out_{}", a.tail), &format!("in_{}", a.head));
    }
    b.finish(|_, _| GadgetBounds::None)
}

/// Both orientations of every non-edge of the graph underlying `g`, with
/// `g = 0` at distance 1: feasible iff `g` has a Hamiltonian path.
pub fn gadget_1distance(g: &Digraph) -> GadgetInstance {
    let mut adjacent = vec![vec![false; g.n()]; g.n()];
    for a in g.arcs() {
        adjacent[a.tail][a.head] = true;
        adjacent[a.head][a.tail] = true;
    }
    let mut b = Builder::default();
    (0..g.n()).for_each(|v| {
        b.v(format!("v_{v}"));
    });
    for (u, row) in adjacent.iter().enumerate() {
        for v in (0..g.n()).filter(|&v| v != u && !row[v]) {
            b.arc(&format!("v_{u}"), &format!("v_{v}"));
        }
    }
    b.finish(|_, g| GadgetBounds::DDistance { d: 1, g: vec![ExtendedValue::ZERO; g.len()] })
}

/// Adds `d - 1` complete symmetric digraphs on `l + 1` vertices to a
/// `2l`-vertex instance; the result has `(d + 1)(l + 1) - 2` vertices and is
/// `d`-distance feasible with `g = 0` iff the input is 1-distance feasible.
pub fn gadget_distance_lift(base: &Digraph, d: usize, l: usize) -> Result<GadgetInstance, ReductionError> {
    if base.n() != 2 * l {
        return Err(ReductionError::ShapeViolation(format!("need 2l = {} vertices, got {}", 2 * l, base.n())));
    }
    if d == 0 {
        return Err(ReductionError::ShapeViolation("distance must be at least 1".into()));
    }
    let mut b = Builder::default();
    (0..base.n()).for_each(|v| {
        b.v(format!("v_{v}"));
    });
    for a in base.arcs() {
        b.arc(&format!("v_{}", a.tail), &format!("v_{}", a.head));
    }
    for j in 1..d {
        for x in 0..=l {
            b.v(format!("k_{j}_{x}"));
            for y in (0..=l).filter(|&y| y != x) {
                b.arc(&format!("k_{j}_{x}"), &format!("k_{j}_{y}"));
            }
        }
    }
    Ok(b.finish(|_, g| GadgetBounds::DDistance { d, g: vec![ExtendedValue::ZERO; g.len()] }))
}
