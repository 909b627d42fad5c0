//! Acceptance criteria 1-9. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any failure is not the documented known one.

use std::collections::BTreeSet;
use std::process::Command;
use std::time::Instant;

use ordo_core::applications::{check_activation, minmax_unfairness_order, simulate_activation, Activation, RankingProfile};
use ordo_core::bounded::{mixed_from_spec, solve_lower, solve_minmax, solve_mixed_per_vertex, solve_upper};
use ordo_core::certify::{verify_infeasible, verify_order, verify_partition, CheckMethod};
use ordo_core::family::order_k_disjoint_st_dipaths;
use ordo_core::gen::{
    planted_nae, planted_xsat3, random_digraph, random_profile, random_threshold_network, seeded,
};
use ordo_core::oracle::{
    oracle_bounds_by_prefix_sets, oracle_decreasing_min, oracle_min_inbranching_cover, oracle_minmax, oracle_order,
    oracle_partition, ordering_exists, FamilyExtra, OracleCaps, OrderPredicate, SimultaneousBounds,
};
use ordo_core::reductions::{
    gadget_1distance, gadget_3xsat3, gadget_hampath_split, gadget_independent_set,
    gadget_independent_set_negweight, gadget_matching_to_dipaths, gadget_nae3sat_matching,
    gadget_nae3sat_perfect_matching, gadget_split_arcs, is_minimal_feedback_arc_set, order_from_feedback_set,
    witness_matching_nae, witness_order_3xsat3, witness_perfect_matching_nae, CnfFormula, GadgetBounds, Literal,
};
use ordo_core::simultaneous::{solve_exact, solve_out_lower_in_upper, solve_out_upper_in_lower};
use ordo_core::{
    classify_arc_set, degree_profile, induced_min_outdegree, is_acyclic, ArcFamilyKind, ArcPartition, BoundSpec,
    Digraph, ExtendedValue as EV, SolveResult, VertexOrder, Witness,
};
use rand::seq::SliceRandom;
use rand::Rng;

/// Outcome of one criterion: mismatch descriptions, plus a summary.
struct Check {
    label: &'static str,
    summary: String,
    failures: Vec<String>,
    /// Failures explained by a recorded construction defect.
    known: bool,
}

type Criterion = fn() -> Vec<Check>;

fn c(x: usize) -> EV {
    EV::from_count(x)
}

fn ups() -> [EV; 4] {
    [c(0), c(1), c(2), EV::POS_INF]
}

fn main() {
    let criteria: [(&str, Criterion); 11] = [
        ("1", criterion_1_and_2),
        ("3", criterion_3),
        ("4", criterion_4),
        ("5", criterion_5),
        ("6a", criterion_6a),
        ("6b", criterion_6b),
        ("6c", criterion_6c),
        ("6d", criterion_6d),
        ("7", criterion_7),
        ("8", criterion_8),
        ("9", criterion_9),
    ];
    // ACCEPTANCE_ONLY=3,6b runs a subset (criterion 2 rides on 1).
    let only: Option<Vec<String>> =
        std::env::var("ACCEPTANCE_ONLY").ok().map(|s| s.split(',').map(|x| x.trim().to_owned()).collect());
    let mut unexpected = 0;
    for (name, run) in criteria {
        if only.as_ref().is_some_and(|o| !o.iter().any(|x| x == name)) {
            continue;
        }
        let start = Instant::now();
        let checks = run();
        let secs = start.elapsed().as_secs_f64();
        for ch in checks {
            let verdict = if ch.failures.is_empty() { "PASS" } else { "FAIL" };
            println!("criterion {:<3} {verdict}  {} ({secs:.1}s)", ch.label, ch.summary);
            for f in ch.failures.iter().take(5) {
                println!("    {f}");
            }
            if !ch.failures.is_empty() && !ch.known {
                unexpected += 1;
            }
        }
    }
    if unexpected > 0 {
        eprintln!("{unexpected} criterion check(s) failed unexpectedly");
        std::process::exit(1);
    }
}

/// Every loop-free digraph on `n` vertices with at most one arc per ordered pair.
fn all_digraphs(n: usize) -> impl Iterator<Item = Digraph> {
    let pairs: Vec<(usize, usize)> =
        (0..n).flat_map(|u| (0..n).map(move |v| (u, v))).filter(|(u, v)| u != v).collect();
    (0u32..1 << pairs.len()).map(move |mask| {
        let chosen: Vec<_> = pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, p)| *p).collect();
        Digraph::from_pairs(n, &chosen).expect("loop-free")
    })
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                cur.push(v);
                rec(cur, used, out);
                cur.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

fn adjacency_mask(d: &Digraph, relabel: &[usize]) -> u32 {
    let n = d.n();
    d.arcs().iter().fold(0, |m, a| m | 1 << (relabel[a.tail] * n + relabel[a.head]))
}

/// One representative per isomorphism class of simple digraphs on `n` vertices.
fn digraph_classes(n: usize) -> Vec<Digraph> {
    let perms = permutations(n);
    let mut seen = BTreeSet::new();
    all_digraphs(n)
        .filter(|d| {
            let canon = perms.iter().map(|p| adjacency_mask(d, p)).min().unwrap_or(0);
            seen.insert(canon)
        })
        .collect()
}

/// Every simple undirected graph on `n` vertices, as a symmetric digraph.
fn all_graphs(n: usize) -> Vec<Digraph> {
    let edges: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    (0u32..1 << edges.len())
        .map(|mask| {
            let pairs: Vec<_> = edges
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .flat_map(|(_, &(u, v))| [(u, v), (v, u)])
                .collect();
            Digraph::from_pairs(n, &pairs).expect("loop-free")
        })
        .collect()
}

fn draw(rng: &mut impl Rng, n: usize, choices: &[EV]) -> Vec<EV> {
    (0..n).map(|_| *choices.choose(rng).expect("non-empty")).collect()
}

fn criterion_1_and_2() -> Vec<Check> {
    let caps = OracleCaps::default();
    let lows = [EV::NEG_INF, c(0), c(1), c(2)];
    let mut rng = seeded(1);
    let kinds = ["upper", "lower", "out-upper-in-lower", "out-lower-in-upper", "exact", "mixed"];
    let mut mismatches = Vec::new();
    let mut witness_failures = Vec::new();
    let (mut runs, mut infeasible, mut induced) = (0usize, 0usize, 0usize);
    let mut minmax_runs = 0;
    let perms = permutations(4);
    for (gi, d) in all_digraphs(4).enumerate() {
        let weights = d.weights();
        for _ in 0..200 {
            for kind in kinds {
                let (pred, result) = match kind {
                    "upper" => {
                        let g = draw(&mut rng, 4, &ups());
                        (OrderPredicate::upper(g.clone()), solve_upper(&d, &g))
                    }
                    "lower" => {
                        let f = draw(&mut rng, 4, &lows);
                        (OrderPredicate::lower(f.clone()), solve_lower(&d, &f))
                    }
                    "out-upper-in-lower" => {
                        let s = SimultaneousBounds {
                            g_delta: draw(&mut rng, 4, &ups()),
                            f_rho: draw(&mut rng, 4, &lows),
                            ..SimultaneousBounds::unbounded(4)
                        };
                        let r = solve_out_upper_in_lower(&d, &s.g_delta, &s.f_rho);
                        (OrderPredicate::Simultaneous(s), r)
                    }
                    "out-lower-in-upper" => {
                        let s = SimultaneousBounds {
                            f_delta: draw(&mut rng, 4, &lows),
                            g_rho: draw(&mut rng, 4, &ups()),
                            ..SimultaneousBounds::unbounded(4)
                        };
                        let r = solve_out_lower_in_upper(&d, &s.f_delta, &s.g_rho);
                        (OrderPredicate::Simultaneous(s), r)
                    }
                    "exact" => {
                        // Half planted from a random order so that feasible cases occur.
                        let (md, mr) = if rng.gen_bool(0.5) {
                            let p = perms.choose(&mut rng).expect("non-empty").clone();
                            let prof = degree_profile(&d, &VertexOrder::new(p, 4).unwrap()).unwrap();
                            (prof.delta_left, prof.rho_right)
                        } else {
                            ((0..4).map(|_| rng.gen_range(0..=2)).collect(), (0..4).map(|_| rng.gen_range(0..=2)).collect())
                        };
                        let r = solve_exact(&d, &md, &mr);
                        (OrderPredicate::Exact { m_delta: md, m_rho: mr }, r)
                    }
                    _ => {
                        let mut spec = BoundSpec::unbounded(4);
                        for v in 0..4 {
                            let x = c(rng.gen_range(0..=2));
                            if rng.gen_bool(0.5) {
                                spec.f[v] = x;
                            } else {
                                spec.g[v] = x;
                            }
                        }
                        let r = mixed_from_spec(&spec).and_then(|m| solve_mixed_per_vertex(&d, &m));
                        (OrderPredicate::Bounds { spec, weights: None }, r)
                    }
                };
                runs += 1;
                let result = result.expect("valid input");
                let truth = oracle_order(&d, &pred, &caps).expect("within caps").is_feasible();
                if result.is_feasible() != truth {
                    mismatches.push(format!("digraph #{gi} {kind}: solver {} oracle {truth}", result.is_feasible()));
                    continue;
                }
                match &result {
                    SolveResult::Feasible { order, .. } => {
                        let v = verify_order(&d, order.as_slice(), &pred).expect("well-formed");
                        if !v.valid {
                            mismatches.push(format!("digraph #{gi} {kind}: emitted order fails {:?}", v.failures));
                        }
                    }
                    SolveResult::Infeasible { witness } => {
                        infeasible += 1;
                        if let Some(Witness::InducedSet { vertices }) = witness {
                            induced += 1;
                            if !induced_set_holds(&d, &weights, &pred, vertices) {
                                witness_failures.push(format!("digraph #{gi} {kind}: induced set {vertices:?}"));
                            }
                        }
                        let v = verify_infeasible(&d, &pred, witness.as_ref()).expect("well-formed");
                        if !v.valid {
                            witness_failures.push(format!("digraph #{gi} {kind}: witness rejected {:?}", v.failures));
                        }
                    }
                }
            }
        }
        let (_, value) = solve_minmax(&d);
        let (_, best) = oracle_minmax(&d, &caps).expect("within caps");
        minmax_runs += 1;
        if value != best {
            mismatches.push(format!("digraph #{gi} minmax: solver {value:?} oracle {best:?}"));
        }
    }
    vec![
        Check {
            label: "1",
            summary: format!("{runs} bounded instances + {minmax_runs} minmax values vs oracle, {} mismatches", mismatches.len()),
            failures: mismatches,
            known: false,
        },
        Check {
            label: "2",
            summary: format!(
                "{induced} induced-set witnesses checked by induced_min_outdegree ({infeasible} infeasible certified), {} bad",
                witness_failures.len()
            ),
            failures: witness_failures,
            known: false,
        },
    ]
}

/// Upper bounds: every member sends more than `g` into the set.
/// Lower bounds: every member sends less than `f` out of the set.
fn induced_set_holds(d: &Digraph, weights: &[EV], pred: &OrderPredicate, set: &[usize]) -> bool {
    let OrderPredicate::Bounds { spec, .. } = pred else { return false };
    if set.is_empty() {
        return false;
    }
    let inside = induced_min_outdegree(d, weights, set);
    let complement: Vec<usize> = (0..d.n()).filter(|v| !set.contains(v)).collect();
    let outside = induced_min_outdegree(d, weights, &complement);
    set.iter().all(|&v| inside[v] > spec.g[v]) || set.iter().all(|&v| outside[v] < spec.f[v])
}

fn criterion_3() -> Vec<Check> {
    let caps = OracleCaps::default();
    let mut rng = seeded(3);
    let mut failures = Vec::new();
    let (mut cuts, mut stuck, mut feasible) = (0, 0, 0);
    for i in 0..1000 {
        let n = rng.gen_range(2..=6);
        let k = if n >= 4 && rng.gen_bool(0.5) { 2 } else { 1 };
        let p = rng.gen_range(0.2..0.7);
        let d = random_digraph(&mut rng, n, p);
        let mut vs: Vec<usize> = (0..n).collect();
        vs.shuffle(&mut rng);
        let (sources, sinks) = (vs[..k].to_vec(), vs[k..2 * k].to_vec());
        let pred = OrderPredicate::Family {
            kind: ArcFamilyKind::DisjointDipaths,
            extra: FamilyExtra::Terminals { sources: sources.clone(), sinks: sinks.clone() },
        };
        let result = order_k_disjoint_st_dipaths(&d, &sources, &sinks).expect("valid terminals");
        let truth = oracle_order(&d, &pred, &caps).expect("within caps").is_feasible();
        if result.is_feasible() != truth {
            failures.push(format!("instance {i}: solver {} oracle {truth}", result.is_feasible()));
            continue;
        }
        match &result {
            SolveResult::Feasible { order, .. } => {
                feasible += 1;
                if !verify_order(&d, order.as_slice(), &pred).unwrap().valid {
                    failures.push(format!("instance {i}: emitted order rejected"));
                }
            }
            SolveResult::Infeasible { witness: Some(w @ Witness::CutSet { vertices, k: wk }) } => {
                cuts += 1;
                if !(vertices.len() < *wk && *wk == k && separates(&d, &sources, &sinks, vertices)) {
                    failures.push(format!("instance {i}: bad cut {w:?}"));
                }
            }
            SolveResult::Infeasible { witness: Some(w @ Witness::StuckSet { .. }) } => {
                stuck += 1;
                let v = verify_infeasible(&d, &pred, Some(w)).unwrap();
                if !v.valid || v.method != CheckMethod::Direct {
                    failures.push(format!("instance {i}: stuck set {w:?} fails {:?}", v.failures));
                }
            }
            other => failures.push(format!("instance {i}: unexpected result {other:?}")),
        }
    }
    vec![Check {
        label: "3",
        summary: format!(
            "1000 S-T dipath instances vs oracle ({feasible} feasible, {cuts} cut sets, {stuck} stuck sets), {} failures",
            failures.len()
        ),
        failures,
        known: false,
    }]
}

/// No dipath from `S \ C` to `T` avoids `C`.
fn separates(d: &Digraph, sources: &[usize], sinks: &[usize], cut: &[usize]) -> bool {
    let mut seen = vec![false; d.n()];
    let mut stack: Vec<usize> = sources.iter().copied().filter(|s| !cut.contains(s)).collect();
    stack.iter().for_each(|&s| seen[s] = true);
    while let Some(u) = stack.pop() {
        for &a in d.out_arcs(u) {
            let h = d.arc(a).head;
            if !seen[h] && !cut.contains(&h) {
                seen[h] = true;
                stack.push(h);
            }
        }
    }
    sinks.iter().all(|&t| !seen[t])
}

fn criterion_4() -> Vec<Check> {
    let caps = OracleCaps::default();
    let kinds = [ArcFamilyKind::InBranching, ArcFamilyKind::Matching, ArcFamilyKind::DisjointDipaths];
    let mut failures = Vec::new();
    let mut count = 0;
    for n in 1..=4 {
        for d in all_digraphs(n) {
            count += 1;
            for kind in kinds {
                let order = ordering_exists(&d, kind, &caps).unwrap();
                let part = oracle_partition(&d, kind, &caps).unwrap().is_some();
                if order != part {
                    failures.push(format!("{kind} on {:?}: ordering {order} partition {part}", pairs(&d)));
                }
            }
        }
    }
    let twin = Digraph::from_pairs(2, &[(0, 1), (0, 1)]).unwrap();
    for kind in [ArcFamilyKind::PerfectMatching, ArcFamilyKind::HamiltonianDipath, ArcFamilyKind::InArborescence] {
        let part = oracle_partition(&twin, kind, &caps).unwrap();
        let order = ordering_exists(&twin, kind, &caps).unwrap();
        match part {
            Some(p) if !order && verify_partition(&twin, &p).unwrap().valid => {}
            _ => failures.push(format!("{kind} on two parallel arcs: partition {} ordering {order}", part_is(&part))),
        }
    }
    vec![Check {
        label: "4",
        summary: format!(
            "ordering = partition on {count} digraphs (n <= 4) x 3 kinds; parallel-arc divergence for 3 kinds; {} failures",
            failures.len()
        ),
        failures,
        known: false,
    }]
}

fn part_is(p: &Option<ArcPartition>) -> bool {
    p.is_some()
}

fn pairs(d: &Digraph) -> Vec<(usize, usize)> {
    d.arcs().iter().map(|a| (a.tail, a.head)).collect()
}

fn criterion_5() -> Vec<Check> {
    let caps = OracleCaps::default();
    let mut rng = seeded(5);
    let mut failures = Vec::new();
    let mut feasible = 0;
    for i in 0..2000 {
        let n = rng.gen_range(1..=5);
        let all: Vec<(usize, usize)> =
            (0..n).flat_map(|u| (0..n).map(move |v| (u, v))).filter(|(u, v)| u != v).collect();
        let m = rng.gen_range(0..=all.len().min(8));
        let chosen: Vec<_> = all.choose_multiple(&mut rng, m).copied().collect();
        let d = Digraph::from_pairs(n, &chosen).unwrap();
        let unit = vec![EV::ONE; n];
        let cover = oracle_min_inbranching_cover(&d, &caps).unwrap();
        let decmin = oracle_decreasing_min(&d, &unit, &caps).unwrap();
        let greedy = solve_upper(&d, &unit).unwrap();
        // No order exists iff some vertex set has every member sending at least two arcs into it.
        let characterized = match greedy.witness() {
            Some(Witness::InducedSet { vertices }) => {
                let inside = induced_min_outdegree(&d, &d.weights(), vertices);
                !vertices.is_empty() && vertices.iter().all(|&v| inside[v] >= c(2))
            }
            _ => false,
        };
        let bits = (cover.is_some(), decmin.is_some(), greedy.is_feasible(), !characterized);
        if !(bits.0 == bits.1 && bits.1 == bits.2 && bits.2 == bits.3) {
            failures.push(format!("instance {i} {:?}: feasibility bits {bits:?}", pairs(&d)));
            continue;
        }
        if let (Some(arcs), Some((_, vec))) = (&cover, &decmin) {
            feasible += 1;
            let ones = vec.iter().filter(|&&x| x == 1).count();
            if arcs.len() != ones {
                failures.push(format!("instance {i} {:?}: cover {} vs {ones} ones", pairs(&d), arcs.len()));
            }
        }
    }
    vec![Check {
        label: "5",
        summary: format!("2000 digraphs (n <= 5, m <= 8), {feasible} feasible, {} failures", failures.len()),
        failures,
        known: false,
    }]
}

fn has_independent_set(g: &Digraph, k: usize) -> bool {
    let n = g.n();
    (0u32..1 << n).any(|mask| {
        mask.count_ones() as usize == k
            && g.arcs().iter().all(|a| mask >> a.tail & 1 == 0 || mask >> a.head & 1 == 0)
    })
}

fn gadget_feasible(bounds: &GadgetBounds, d: &Digraph) -> bool {
    match bounds {
        GadgetBounds::Bounds(spec) => oracle_bounds_by_prefix_sets(d, spec, None),
        GadgetBounds::Signed { spec, weights } => oracle_bounds_by_prefix_sets(d, spec, Some(weights)),
        _ => unreachable!("independent-set gadgets carry bounds"),
    }
    .expect("within prefix-set limits")
    .is_feasible()
}

fn criterion_6a() -> Vec<Check> {
    let mut out = Vec::new();
    type Builder = fn(&Digraph, usize, bool) -> Result<ordo_core::reductions::GadgetInstance, ordo_core::reductions::ReductionError>;
    let variants: [(&str, Builder, bool); 4] = [
        ("exact", gadget_independent_set, false),
        ("exact-simple", gadget_independent_set, true),
        ("negw", gadget_independent_set_negweight, false),
        ("negw-simple", gadget_independent_set_negweight, true),
    ];
    for (name, build, simple) in variants {
        let mut failures = Vec::new();
        let (mut runs, mut wrong_direction) = (0, 0);
        for n in 1..=4 {
            for g in all_graphs(n) {
                for k in 1..=n {
                    let gi = build(&g, k, simple).expect("valid graph");
                    let gadget = gadget_feasible(&gi.bounds, &gi.digraph);
                    let truth = has_independent_set(&g, k);
                    runs += 1;
                    if gadget != truth {
                        if gadget && !truth {
                            wrong_direction += 1;
                        }
                        failures.push(format!("n={n} k={k} edges {:?}: gadget {gadget} IS {truth}", pairs(&g)));
                    }
                }
            }
        }
        // The simple exact variant is unsound (recorded); every mismatch must be gadget-yes/IS-no.
        let known = name == "exact-simple" && wrong_direction == failures.len();
        out.push(Check {
            label: "6a",
            summary: format!("IS gadget {name}: {runs} (graph, k) pairs, {} mismatches", failures.len()),
            failures,
            known,
        });
    }
    out
}

/// Split arcs: min feedback arc set = min in-branching cover.
fn criterion_6b() -> Vec<Check> {
    let wide = OracleCaps { max_vertices: 8, max_branch_arcs: 24 };
    let mut failures = Vec::new();
    let mut classes = 0;
    for n in 1..=4 {
        for d in digraph_classes(n) {
            classes += 1;
            let fas = min_feedback_arc_set(&d);
            let gi = gadget_split_arcs(&d);
            let cover = oracle_min_inbranching_cover(&gi.digraph, &wide).unwrap().map(|c| c.len());
            if cover != Some(fas) {
                failures.push(format!("{:?}: min FAS {fas} cover {cover:?}", pairs(&d)));
            }
        }
    }
    vec![Check {
        label: "6b",
        summary: format!("split-arcs on {classes} digraph classes (n <= 4), {} mismatches", failures.len()),
        failures,
        known: false,
    }]
}

fn criterion_6c() -> Vec<Check> {
    let mut failures = Vec::new();
    let caps = OracleCaps { max_vertices: 8, max_branch_arcs: 20 };
    for n in 1..=4 {
        for d in digraph_classes(n) {
            let truth = has_ham_dipath(&d);
            let gi = gadget_hampath_split(&d);
            let part = oracle_partition(&gi.digraph, ArcFamilyKind::HamiltonianDipath, &caps).unwrap();
            if part.is_some() != truth {
                failures.push(format!("hampath-split {:?}: partition {} ham {truth}", pairs(&d), part.is_some()));
            }
        }
    }
    let classes: usize = (1..=4).map(|n| digraph_classes(n).len()).sum();
    let mut graphs = 0;
    for n in 1..=4 {
        for g in all_graphs(n) {
            graphs += 1;
            let truth = has_ham_dipath(&g);
            let gi = gadget_1distance(&g);
            let GadgetBounds::DDistance { d, g: bound } = &gi.bounds else { unreachable!("distance gadget") };
            let pred = OrderPredicate::DDistance { d: *d, g: bound.clone() };
            let got = oracle_order(&gi.digraph, &pred, &caps).unwrap().is_feasible();
            if got != truth {
                failures.push(format!("1dist {:?}: gadget {got} ham {truth}", pairs(&g)));
            }
        }
    }
    vec![Check {
        label: "6c",
        summary: format!("hampath-split on {classes} classes, 1dist on {graphs} graphs, {} mismatches", failures.len()),
        failures,
        known: false,
    }]
}

fn criterion_6d() -> Vec<Check> {
    let caps = OracleCaps { max_vertices: 8, max_branch_arcs: 20 };
    let mut failures = Vec::new();
    let mut classes = 0;
    for n in 1..=4 {
        for d in digraph_classes(n) {
            classes += 1;
            let a = oracle_partition(&d, ArcFamilyKind::Matching, &caps).unwrap().is_some();
            let gi = gadget_matching_to_dipaths(&d);
            let b = oracle_partition(&gi.digraph, ArcFamilyKind::DisjointDipaths, &caps).unwrap().is_some();
            if a != b {
                failures.push(format!("{:?}: matching {a} dipaths {b}", pairs(&d)));
            }
        }
    }
    vec![Check {
        label: "6d",
        summary: format!("match-to-dipaths on {classes} classes, {} mismatches", failures.len()),
        failures,
        known: false,
    }]
}

fn min_feedback_arc_set(d: &Digraph) -> usize {
    let m = d.m();
    (0u32..1 << m)
        .filter(|mask| {
            let kept: Vec<_> = (0..m).filter(|a| mask >> a & 1 == 0).map(|a| (d.arc(a).tail, d.arc(a).head)).collect();
            is_acyclic(&Digraph::from_pairs(d.n(), &kept).unwrap())
        })
        .map(|mask| mask.count_ones() as usize)
        .min()
        .expect("removing every arc leaves an acyclic digraph")
}

fn has_ham_dipath(d: &Digraph) -> bool {
    permutations(d.n()).iter().any(|p| {
        p.windows(2).all(|w| d.out_arcs(w[0]).iter().any(|&a| d.arc(a).head == w[1]))
    })
}

fn bounds_predicate(bounds: &GadgetBounds) -> OrderPredicate {
    match bounds {
        GadgetBounds::Bounds(spec) => OrderPredicate::Bounds { spec: spec.clone(), weights: None },
        _ => unreachable!("3-XSAT-3 gadget carries plain bounds"),
    }
}

fn criterion_7() -> Vec<Check> {
    let mut failures = Vec::new();
    let mut rng = seeded(7);
    let figure = CnfFormula::new(
        3,
        vec![
            [Literal::pos(1), Literal::pos(2), Literal::pos(3)],
            [Literal::neg(1), Literal::neg(2), Literal::pos(3)],
            [Literal::neg(1), Literal::pos(2), Literal::neg(3)],
        ],
    )
    .unwrap();
    let mut xsat: Vec<(CnfFormula, Vec<bool>)> = Vec::new();
    let figure_solution = (0..8u8)
        .map(|b| (0..3).map(|i| b >> i & 1 == 1).collect::<Vec<bool>>())
        .find(|a| figure.exactly_one_satisfied(a))
        .expect("figure formula is satisfiable");
    xsat.push((figure, figure_solution));
    for _ in 0..50 {
        let n = rng.gen_range(3..=6);
        xsat.push(planted_xsat3(&mut rng, n));
    }
    for (i, (f, a)) in xsat.iter().enumerate() {
        let gi = gadget_3xsat3(f).unwrap();
        let order = witness_order_3xsat3(f, &gi, a).unwrap();
        let v = verify_order(&gi.digraph, order.as_slice(), &bounds_predicate(&gi.bounds)).unwrap();
        if !v.valid {
            failures.push(format!("3-XSAT-3 #{i}: {:?}", v.failures));
        }
    }
    for i in 0..50 {
        let vars = rng.gen_range(3..=5);
        let clauses = rng.gen_range(1..=3);
        let (f, a) = planted_nae(&mut rng, vars, clauses);
        let gi = gadget_nae3sat_matching(&f).unwrap();
        let m = witness_matching_nae(&f, &gi, &a).unwrap();
        let rest: Vec<usize> = (0..gi.digraph.m()).filter(|x| !m.contains(x)).collect();
        let p = ArcPartition { kind: ArcFamilyKind::Matching, family_arcs: m, acyclic_arcs: rest };
        if !verify_partition(&gi.digraph, &p).unwrap().valid {
            failures.push(format!("NAE matching #{i}: invalid partition"));
        }
        let gp = gadget_nae3sat_perfect_matching(&f).unwrap();
        let pm = witness_perfect_matching_nae(&f, &gp, &a).unwrap();
        let perfect = classify_arc_set(&gp.digraph, &pm, ArcFamilyKind::PerfectMatching).unwrap();
        let minimal = is_minimal_feedback_arc_set(&gp.digraph, &pm);
        let realized = order_from_feedback_set(&gp.digraph, &pm).is_some();
        if !(perfect && minimal && realized) {
            failures.push(format!("NAE perfect #{i}: perfect {perfect} minimal {minimal} realized {realized}"));
        }
    }
    vec![Check {
        label: "7",
        summary: format!("{} 3-XSAT-3 witness orders, 50 NAE matching pairs, {} failures", xsat.len(), failures.len()),
        failures,
        known: false,
    }]
}

fn criterion_8() -> Vec<Check> {
    let mut rng = seeded(8);
    let mut failures = Vec::new();
    for i in 0..1000 {
        let n = rng.gen_range(1..=8);
        let p = rng.gen_range(0.1..0.6);
        let net = random_threshold_network(&mut rng, n, p, 0.25);
        let sim = simulate_activation(&net).iter().all(|&b| b);
        let full = match check_activation(&net) {
            Activation::Full(order) => {
                let pos = order.positions();
                let seeds = net.is_seed_mask();
                let ok = (0..n).all(|v| {
                    seeds[v]
                        || net.digraph.in_arcs(v).iter().filter(|&&a| pos[net.digraph.arc(a).tail] < pos[v]).count()
                            >= net.tau[v]
                });
                if !ok {
                    failures.push(format!("network {i}: activation order invalid"));
                }
                true
            }
            Activation::Blocked(_) => false,
        };
        if full != sim {
            failures.push(format!("network {i}: check {full} simulation {sim}"));
        }
    }
    for i in 0..200 {
        let cands = rng.gen_range(1..=5);
        let judges = rng.gen_range(1..=5);
        let profile = random_profile(&mut rng, cands, judges);
        let (_, phi) = minmax_unfairness_order(&profile);
        let brute = brute_minmax_phi(&profile);
        if phi != brute {
            failures.push(format!("profile {i}: maxPhi {phi} brute {brute}"));
        }
    }
    let condorcet = RankingProfile::from_indices(3, vec![vec![0, 1, 2], vec![1, 2, 0], vec![2, 0, 1]]).unwrap();
    let (_, phi) = minmax_unfairness_order(&condorcet);
    if phi != 1 {
        failures.push(format!("Condorcet cycle maxPhi {phi}"));
    }
    vec![Check {
        label: "8",
        summary: format!("1000 threshold networks, 200 profiles, Condorcet cycle; {} failures", failures.len()),
        failures,
        known: false,
    }]
}

/// Minimum over candidate orders of the largest count of candidates placed
/// earlier that a strict majority ranks below.
fn brute_minmax_phi(profile: &RankingProfile) -> usize {
    let n = profile.num_candidates();
    let judges = profile.rankings().len();
    let mut before = vec![vec![0; n]; n];
    for r in profile.rankings() {
        for (i, &u) in r.iter().enumerate() {
            for &v in &r[i + 1..] {
                before[u][v] += 1;
            }
        }
    }
    permutations(n)
        .iter()
        .map(|p| {
            (0..n)
                .map(|i| (0..i).filter(|&j| 2 * before[p[i]][p[j]] > judges).count())
                .max()
                .unwrap_or(0)
        })
        .min()
        .unwrap_or(0)
}

fn ordo(args: &[&str]) -> (i32, serde_json::Value) {
    let out = Command::new(env!("CARGO_BIN_EXE_ordo")).args(args).output().expect("binary runs");
    let body = serde_json::from_slice(&out.stdout).unwrap_or(serde_json::Value::Null);
    (out.status.code().unwrap_or(-1), body)
}

fn criterion_9() -> Vec<Check> {
    let dir = tempfile::tempdir().expect("temp dir");
    let path = |name: &str| dir.path().join(name).display().to_string();
    let (graph, bounds, report) = (path("g.dg"), path("b.json"), path("r.json"));
    let kinds =
        ["upper", "lower", "minmax", "mixed", "out-upper-in-lower", "out-lower-in-upper", "exact", "d-distance"];
    let mut failures = Vec::new();
    let (mut feasible, mut infeasible) = (0, 0);
    for i in 0..500usize {
        let kind = kinds[i % kinds.len()];
        let n = 2 + (i / kinds.len()) % 6;
        let seed = i.to_string();
        let n_arg = n.to_string();
        let p = ["0.2", "0.35", "0.5"][i % 3];
        let bounds_for = if kind == "minmax" { "upper" } else { kind };
        let (code, _) = ordo(&[
            "gen", "--seed", &seed, "--n", &n_arg, "--p", p, "--out", &graph, "--bounds-for", bounds_for,
            "--bounds-out", &bounds,
        ]);
        if code != 0 {
            failures.push(format!("gen {i} exit {code}"));
            continue;
        }
        let mut args = vec!["solve", kind, "--graph", &graph, "--bounds", &bounds];
        if kind == "d-distance" {
            args.extend(["--k", "1"]);
        }
        let (code, body) = ordo(&args);
        let claimed = body.get("feasible").and_then(|f| f.as_bool());
        match (code, claimed) {
            (0, Some(true)) => feasible += 1,
            (1, Some(false)) => infeasible += 1,
            _ => {
                failures.push(format!("solve {kind} seed {i}: exit {code}, feasible {claimed:?}"));
                continue;
            }
        }
        std::fs::write(&report, body.to_string()).expect("write report");
        let (code, v) = ordo(&["verify", "--graph", &graph, "--bounds", &bounds, "--report", &report]);
        if code != 0 || v["valid"] != serde_json::Value::Bool(true) {
            failures.push(format!("verify {kind} seed {i}: exit {code} {}", v["failures"]));
        }
    }
    let (code, body) = ordo(&["solve", "upper", "--graph", &path("missing.dg")]);
    if code != 2 || body.get("error").is_none() {
        failures.push(format!("missing input gave exit {code}"));
    }
    vec![Check {
        label: "9",
        summary: format!(
            "500 gen instances over 8 solve commands ({feasible} feasible, {infeasible} infeasible) verified; {} failures",
            failures.len()
        ),
        failures,
        known: false,
    }]
}
