use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use ordo_core::applications::{
    bounded_disappointment_order, build_penalty_digraph, check_activation, disappointment_digraph_from_matrix,
    minmax_unfairness_order, Activation, RankingProfile, ThresholdNetwork,
};
use ordo_core::bounded::{
    mixed_from_spec, solve_d_distance_large, solve_lower, solve_minmax, solve_mixed_per_vertex, solve_upper,
};
use ordo_core::digraph::io::{write_dg, write_dg_signed, BoundsFile};
use ordo_core::family::{
    order_disjoint_dipaths_free_endpoints, order_hamiltonian_dipath, order_in_arb_out_arb, order_in_branching,
    order_k_disjoint_st_dipaths,
};
use ordo_core::oracle::{
    oracle_bounds_by_prefix_sets, oracle_min_inbranching_cover, oracle_minmax, oracle_order, oracle_partition,
    FamilyExtra, OracleCaps, OrderPredicate, SimultaneousBounds,
};
use ordo_core::reductions::{
    gadget_1distance, gadget_3xsat3, gadget_distance_lift, gadget_hampath_split, gadget_independent_set,
    gadget_independent_set_negweight, gadget_matching_to_dipaths, gadget_nae3sat_matching,
    gadget_nae3sat_perfect_matching, gadget_split_arcs, CnfFormula, GadgetBounds, GadgetInstance,
};
use ordo_core::simultaneous::{solve_exact, solve_out_lower_in_upper, solve_out_upper_in_lower};
use ordo_core::{degree_profile, ArcFamilyKind, BoundSpec, Digraph, ExtendedValue, VertexOrder};
use rand::seq::SliceRandom;
use rand::Rng;
use serde_json::json;

use crate::args::{
    BoundsFor, Command, FamilyFlags, FamilyProblem, Gadget, GenArgs, OracleQuery, Problem, ProblemInput, RankTask,
};
use crate::io;
use crate::report::{usage, Claim, CliError, Outcome, Report, SCHEMA};

pub enum Output {
    Report(Outcome),
    /// Plain text, exit status 0.
    Raw(String),
}

pub fn run(cmd: Command) -> Result<Output, CliError> {
    let out = match cmd {
        Command::Solve { problem, input } => solve(problem, &input)?,
        Command::OrderFamily { family, graph, flags } => order_family(family, &io::graph(&graph)?, &flags)?,
        Command::Partition { graph, kind } => partition(&io::graph(&graph)?, kind)?,
        Command::Oracle { query } => oracle(query)?,
        Command::Reduce { gadget, input, out, k, simple, d, l } => reduce(gadget, &input, &out, k, simple, d, l)?,
        Command::Rank { task, rankings, cap, caps, matrix } => rank(task, &rankings, cap, caps, matrix)?,
        Command::Activate { graph, thresholds } => activate(&graph, &thresholds)?,
        Command::Verify(args) => crate::verify::run(&args)?,
        Command::Gen(args) => return generate(&args),
    };
    Ok(Output::Report(out))
}

/// Graph with `w_default` applied, and the bounds file.
pub fn load_problem(input: &ProblemInput) -> Result<(Digraph, BoundsFile), CliError> {
    let raw = io::graph(&input.graph)?;
    let bounds = io::bounds(input.bounds.as_ref())?;
    let d = bounds.apply_weight_defaults(&raw).map_err(io::at(input.bounds.as_ref()))?;
    Ok((d, bounds))
}

/// The order predicate a bounded-ordering problem asks for.
pub fn predicate(
    problem: Problem,
    d: &Digraph,
    b: &BoundsFile,
    k: Option<usize>,
    path: Option<&PathBuf>,
) -> Result<OrderPredicate, CliError> {
    let n = d.n();
    let at = io::at(path);
    let weights = b.w_default.as_ref().map(|_| d.weights());
    let lower = |map, key| BoundsFile::lower(map, n, key).map_err(&at);
    let upper = |map, key| BoundsFile::upper(map, n, key).map_err(&at);
    Ok(match problem {
        Problem::Upper => OrderPredicate::Bounds { spec: BoundSpec::upper(upper(&b.g, "g")?), weights },
        Problem::Lower => OrderPredicate::Bounds { spec: BoundSpec::lower(lower(&b.f, "f")?), weights },
        Problem::Mixed => {
            OrderPredicate::Bounds { spec: BoundSpec { f: lower(&b.f, "f")?, g: upper(&b.g, "g")? }, weights }
        }
        Problem::Minmax => {
            let (_, value) = solve_minmax(d);
            OrderPredicate::Bounds { spec: BoundSpec::upper(vec![value; n]), weights }
        }
        Problem::OutUpperInLower => OrderPredicate::Simultaneous(SimultaneousBounds {
            g_delta: upper(&b.g, "g")?,
            f_rho: lower(&b.f_rho, "f_rho")?,
            ..SimultaneousBounds::unbounded(n)
        }),
        Problem::OutLowerInUpper => OrderPredicate::Simultaneous(SimultaneousBounds {
            f_delta: lower(&b.f, "f")?,
            g_rho: upper(&b.g_rho, "g_rho")?,
            ..SimultaneousBounds::unbounded(n)
        }),
        Problem::Exact => OrderPredicate::Exact {
            m_delta: BoundsFile::exact(&b.m_delta, n, "m_delta").map_err(&at)?,
            m_rho: BoundsFile::exact(&b.m_rho, n, "m_rho").map_err(&at)?,
        },
        Problem::DDistance => {
            let k = k.ok_or_else(|| usage("d-distance needs --k"))?;
            OrderPredicate::DDistance { d: n.saturating_sub(k), g: upper(&b.g, "g")? }
        }
    })
}

fn solve(problem: Problem, input: &ProblemInput) -> Result<Outcome, CliError> {
    let (d, b) = load_problem(input)?;
    let command = format!("solve {}", problem.name());
    if problem == Problem::Minmax {
        return Ok(minmax_report(command, &d).outcome());
    }
    let pred = predicate(problem, &d, &b, input.k, input.bounds.as_ref())?;
    let result = match (&pred, problem) {
        (OrderPredicate::Bounds { spec, .. }, Problem::Upper) => solve_upper(&d, &spec.g)?,
        (OrderPredicate::Bounds { spec, .. }, Problem::Lower) => solve_lower(&d, &spec.f)?,
        (OrderPredicate::Bounds { spec, .. }, Problem::Mixed) => solve_mixed_per_vertex(&d, &mixed_from_spec(spec)?)?,
        (OrderPredicate::Simultaneous(s), Problem::OutUpperInLower) => solve_out_upper_in_lower(&d, &s.g_delta, &s.f_rho)?,
        (OrderPredicate::Simultaneous(s), Problem::OutLowerInUpper) => solve_out_lower_in_upper(&d, &s.f_delta, &s.g_rho)?,
        (OrderPredicate::Exact { m_delta, m_rho }, _) => solve_exact(&d, m_delta, m_rho)?,
        (OrderPredicate::DDistance { g, .. }, _) => {
            solve_d_distance_large(&d, g, input.k.expect("predicate checked --k"), input.cap)?
        }
        _ => unreachable!("predicate shape follows the problem"),
    };
    Ok(Report::from_result(command, result, Some(Claim::Order { predicate: pred })).outcome())
}

/// Minmax order, its value and a set certifying that no order does better.
fn minmax_report(command: String, d: &Digraph) -> Report {
    let (order, value) = solve_minmax(d);
    let profile = degree_profile(d, &order).expect("solver emits permutations");
    // Placed right to left, each vertex had the least inner weight in its prefix,
    // so the prefix ending at the maximum certifies the value.
    let sigma = order.as_slice();
    let lower_bound_set = (0..sigma.len())
        .max_by_key(|&i| (profile.delta_left_w[sigma[i]], std::cmp::Reverse(i)))
        .map(|i| sigma[..=i].to_vec())
        .unwrap_or_default();
    let mut r = Report::new(command, true);
    r.order = Some(order.into_vec());
    r.profile = Some(profile);
    r.value = Some(serde_json::to_value(value).expect("value serializes"));
    r.claim = Some(Claim::Minmax { value, lower_bound_set });
    r
}

/// The order predicate an arc-family problem asks for.
pub fn family_predicate(family: FamilyProblem, f: &FamilyFlags) -> Result<OrderPredicate, CliError> {
    let (kind, extra) = match family {
        FamilyProblem::InBranching => (
            ArcFamilyKind::InBranching,
            if f.roots.is_empty() { FamilyExtra::None } else { FamilyExtra::Roots(f.roots.clone()) },
        ),
        FamilyProblem::StDipaths => (
            ArcFamilyKind::DisjointDipaths,
            FamilyExtra::Terminals { sources: f.sources.clone(), sinks: f.sinks.clone() },
        ),
        FamilyProblem::HamDipath => (
            ArcFamilyKind::HamiltonianDipath,
            match (f.start, f.end) {
                (Some(s), Some(t)) => FamilyExtra::Endpoints { s, t },
                (None, None) => FamilyExtra::None,
                _ => return Err(usage("give both --s and --t, or neither")),
            },
        ),
        FamilyProblem::Dipaths => (
            ArcFamilyKind::DisjointDipaths,
            FamilyExtra::PathCount(f.k.ok_or_else(|| usage("dipaths needs --k"))?),
        ),
        FamilyProblem::InArbOutArb => {
            (ArcFamilyKind::InArborescence, FamilyExtra::InOutArborescence { root: f.root })
        }
    };
    Ok(OrderPredicate::Family { kind, extra })
}

fn order_family(family: FamilyProblem, d: &Digraph, f: &FamilyFlags) -> Result<Outcome, CliError> {
    let pred = family_predicate(family, f)?;
    let OrderPredicate::Family { extra, .. } = &pred else { unreachable!("family predicate") };
    let mut partition = None;
    let result = match (family, extra) {
        (FamilyProblem::InBranching, _) => {
            let out = order_in_branching(d, &f.roots)?;
            partition = out.partition;
            out.result
        }
        (FamilyProblem::StDipaths, _) => order_k_disjoint_st_dipaths(d, &f.sources, &f.sinks)?,
        (FamilyProblem::HamDipath, FamilyExtra::Endpoints { s, t }) => order_hamiltonian_dipath(d, Some((*s, *t)))?,
        (FamilyProblem::HamDipath, _) => order_hamiltonian_dipath(d, None)?,
        (FamilyProblem::Dipaths, FamilyExtra::PathCount(k)) => order_disjoint_dipaths_free_endpoints(d, *k, f.cap)?,
        (FamilyProblem::InArbOutArb, _) => order_in_arb_out_arb(d, f.root)?,
        _ => unreachable!("predicate shape follows the family"),
    };
    let name = crate::args::family_name(family);
    let mut r = Report::from_result(format!("order-family {name}"), result, Some(Claim::Order { predicate: pred }));
    r.partition = partition;
    Ok(r.outcome())
}

fn caps() -> Result<OracleCaps, CliError> {
    OracleCaps::from_env().map_err(usage)
}

fn partition(d: &Digraph, kind: ArcFamilyKind) -> Result<Outcome, CliError> {
    let command = format!("partition {kind}");
    let mut r = if kind == ArcFamilyKind::InBranching {
        let out = order_in_branching(d, &[])?;
        let mut r = Report::from_result(command, out.result, None);
        r.partition = out.partition;
        r
    } else {
        let found = oracle_partition(d, kind, &caps()?)?;
        let mut r = Report::new(command, found.is_some());
        if found.is_none() {
            r.diagnostics.push("no partition exists (exhaustive search)".into());
        }
        r.partition = found;
        r
    };
    r.order = None;
    r.profile = None;
    r.claim = Some(Claim::Partition { kind });
    Ok(r.outcome())
}

fn oracle(query: OracleQuery) -> Result<Outcome, CliError> {
    let caps = caps()?;
    match query {
        OracleQuery::Caps => Ok(Outcome::json(
            json!({
                "schema": SCHEMA,
                "command": "oracle caps",
                "max_vertices": caps.max_vertices,
                "max_branch_arcs": caps.max_branch_arcs,
                "env": ordo_core::oracle::CAP_ENV,
            }),
            true,
        )),
        OracleQuery::Solve { problem, input, signed } => {
            let command = format!("oracle solve {}", problem.name());
            if signed {
                let (d, weights) = io::signed_graph(&input.graph)?;
                let b = io::bounds(input.bounds.as_ref())?;
                let pred = predicate(problem, &d, &b, input.k, input.bounds.as_ref())?;
                let OrderPredicate::Bounds { spec, .. } = pred else {
                    return Err(usage("--signed applies to upper, lower and mixed only"));
                };
                let result = oracle_bounds_by_prefix_sets(&d, &spec, Some(&weights))?;
                let claim = Claim::Order { predicate: OrderPredicate::Bounds { spec, weights: Some(weights) } };
                return Ok(Report::from_result(command, result, Some(claim)).outcome());
            }
            let (d, b) = load_problem(&input)?;
            if problem == Problem::Minmax {
                let (order, value) = oracle_minmax(&d, &caps)?;
                let mut r = minmax_report(command, &d);
                r.profile = Some(degree_profile(&d, &order).expect("oracle emits permutations"));
                r.order = Some(order.into_vec());
                r.value = Some(serde_json::to_value(value).expect("value serializes"));
                return Ok(r.outcome());
            }
            let pred = predicate(problem, &d, &b, input.k, input.bounds.as_ref())?;
            let result = oracle_order(&d, &pred, &caps)?;
            Ok(Report::from_result(command, result, Some(Claim::Order { predicate: pred })).outcome())
        }
        OracleQuery::Partition { graph, kind } => {
            let d = io::graph(&graph)?;
            let found = oracle_partition(&d, kind, &caps)?;
            let mut r = Report::new(format!("oracle partition {kind}"), found.is_some());
            r.partition = found;
            r.claim = Some(Claim::Partition { kind });
            Ok(r.outcome())
        }
        OracleQuery::InbranchingCover { graph } => {
            let d = io::graph(&graph)?;
            let cover = oracle_min_inbranching_cover(&d, &caps)?;
            let mut r = Report::new("oracle inbranching-cover", cover.is_some());
            if let Some(arcs) = &cover {
                let rest: Vec<usize> = (0..d.m()).filter(|a| !arcs.contains(a)).collect();
                r.value = Some(json!(arcs.len()));
                r.partition = Some(ordo_core::ArcPartition {
                    kind: ArcFamilyKind::InBranching,
                    family_arcs: arcs.clone(),
                    acyclic_arcs: rest,
                });
                r.claim = Some(Claim::Partition { kind: ArcFamilyKind::InBranching });
            }
            Ok(r.outcome())
        }
    }
}

fn reduce(
    gadget: Gadget,
    input: &Path,
    out: &Path,
    k: Option<usize>,
    simple: bool,
    window: Option<usize>,
    half: Option<usize>,
) -> Result<Outcome, CliError> {
    let need_k = || k.ok_or_else(|| usage("this gadget needs --k"));
    let formula = || -> Result<CnfFormula, CliError> { Ok(CnfFormula::from_dimacs(&io::read(input)?)?) };
    let inst: GadgetInstance = match gadget {
        Gadget::Is => gadget_independent_set(&io::graph(input)?, need_k()?, simple)?,
        Gadget::IsNegw => gadget_independent_set_negweight(&io::graph(input)?, need_k()?, simple)?,
        Gadget::Xsat3 => gadget_3xsat3(&formula()?)?,
        Gadget::NaeMatching => gadget_nae3sat_matching(&formula()?)?,
        Gadget::NaePerfect => gadget_nae3sat_perfect_matching(&formula()?)?,
        Gadget::SplitArcs => gadget_split_arcs(&io::graph(input)?),
        Gadget::MatchToDipaths => gadget_matching_to_dipaths(&io::graph(input)?),
        Gadget::HampathSplit => gadget_hampath_split(&io::graph(input)?),
        Gadget::OneDist => gadget_1distance(&io::graph(input)?),
        Gadget::DistLift => gadget_distance_lift(
            &io::graph(input)?,
            window.ok_or_else(|| usage("dist-lift needs --d"))?,
            half.ok_or_else(|| usage("dist-lift needs --l"))?,
        )?,
    };
    let with_ext = |ext: &str| {
        let mut name = out.as_os_str().to_owned();
        name.push(ext);
        PathBuf::from(name)
    };
    let dg = with_ext(".dg");
    let tags = with_ext(".tags.json");
    let mut files = vec![dg.clone(), tags.clone()];
    let mut summary = json!({});
    let bounds = match &inst.bounds {
        GadgetBounds::None => None,
        GadgetBounds::Bounds(spec) | GadgetBounds::Signed { spec, .. } => Some(BoundsFile {
            f: Some(BoundsFile::map_from(&spec.f, Some(ExtendedValue::NEG_INF))),
            g: Some(BoundsFile::map_from(&spec.g, Some(ExtendedValue::POS_INF))),
            ..Default::default()
        }),
        GadgetBounds::DDistance { d, g } => {
            summary["window"] = json!(d);
            summary["k"] = json!(inst.digraph.n() - d);
            Some(BoundsFile { g: Some(BoundsFile::map_from(g, Some(ExtendedValue::POS_INF))), ..Default::default() })
        }
    };
    let text = match &inst.bounds {
        GadgetBounds::Signed { weights, .. } => write_dg_signed(&inst.digraph, weights),
        _ => write_dg(&inst.digraph),
    };
    io::write(&dg, &text)?;
    io::write(&tags, &inst.tags_json())?;
    if let Some(b) = bounds {
        let path = with_ext(".bounds.json");
        io::write(&path, &b.to_json())?;
        files.push(path);
    }
    summary["schema"] = json!(SCHEMA);
    summary["command"] = json!(format!("reduce {}", crate::args::gadget_name(gadget)));
    summary["vertices"] = json!(inst.digraph.n());
    summary["arcs"] = json!(inst.digraph.m());
    summary["signed"] = json!(matches!(inst.bounds, GadgetBounds::Signed { .. }));
    summary["files"] = json!(files.iter().map(|p| p.display().to_string()).collect::<Vec<_>>());
    Ok(Outcome::json(summary, true))
}

fn rank(
    task: RankTask,
    rankings: &Path,
    cap: Option<String>,
    caps: Option<PathBuf>,
    matrix: Option<PathBuf>,
) -> Result<Outcome, CliError> {
    let profile = RankingProfile::from_csv(&io::read(rankings)?)?;
    let names = profile.candidates();
    let named = |order: &VertexOrder| order.as_slice().iter().map(|&v| names[v].clone()).collect::<Vec<_>>();
    match task {
        RankTask::Penalty => {
            let d = build_penalty_digraph(&profile);
            let arcs: Vec<[usize; 2]> = d.arcs().iter().map(|a| [a.tail, a.head]).collect();
            Ok(Outcome::json(
                json!({
                    "schema": SCHEMA,
                    "command": "rank penalty",
                    "candidates": names,
                    "arcs": arcs,
                    "graph": write_dg(&d),
                }),
                true,
            ))
        }
        RankTask::Minmax => {
            let (order, phi) = minmax_unfairness_order(&profile);
            let mut r = Report::new("rank minmax", true);
            r.value = Some(json!({ "max_phi": phi, "ranking": named(&order) }));
            r.order = Some(order.into_vec());
            Ok(r.outcome())
        }
        RankTask::Disappointment => {
            let n = profile.num_candidates();
            let mut limits = match cap {
                Some(s) => vec![s.parse::<ExtendedValue>().map_err(|e| usage(e.to_string()))?; n],
                None => vec![ExtendedValue::POS_INF; n],
            };
            if let Some(path) = &caps {
                let map: BTreeMap<String, ExtendedValue> = io::json(path)?;
                for (name, value) in map {
                    let v = names
                        .iter()
                        .position(|c| *c == name)
                        .ok_or_else(|| usage(format!("unknown candidate `{name}` in caps")))?;
                    limits[v] = value;
                }
            }
            let result = match &matrix {
                None => bounded_disappointment_order(&profile, &limits)?,
                Some(path) => {
                    let m: Vec<Vec<ExtendedValue>> = io::json(path)?;
                    if m.len() != n {
                        return Err(usage(format!("matrix has {} rows for {n} candidates", m.len())));
                    }
                    solve_upper(&disappointment_digraph_from_matrix(&m)?, &limits)?
                }
            };
            let ranking = result.order().map(named);
            let mut r = Report::from_result("rank disappointment", result, None);
            r.value = ranking.map(|x| json!({ "ranking": x }));
            Ok(r.outcome())
        }
    }
}

fn activate(graph: &Path, thresholds: &Path) -> Result<Outcome, CliError> {
    let net = ThresholdNetwork::from_json(io::graph(graph)?, &io::read(thresholds)?)?;
    Ok(match check_activation(&net) {
        Activation::Full(order) => {
            let mut r = Report::new("activate", true);
            r.order = Some(order.into_vec());
            r.outcome()
        }
        Activation::Blocked(set) => {
            let mut r = Report::new("activate", false);
            r.value = Some(json!({ "blocked": set }));
            r.outcome()
        }
    })
}

fn generate(args: &GenArgs) -> Result<Output, CliError> {
    if !(0.0..=1.0).contains(&args.p) {
        return Err(usage("--p must lie in [0, 1]"));
    }
    let mut rng = ordo_core::gen::seeded(args.seed);
    let d = match args.max_mult {
        Some(m) => ordo_core::gen::random_multidigraph(&mut rng, args.n, m),
        None => ordo_core::gen::random_digraph(&mut rng, args.n, args.p),
    };
    let mut files = Vec::new();
    if let (Some(kind), Some(path)) = (args.bounds_for, &args.bounds_out) {
        io::write(path, &random_bounds(&mut rng, &d, kind).to_json())?;
        files.push(path.display().to_string());
    }
    let Some(out) = &args.out else {
        return Ok(Output::Raw(write_dg(&d)));
    };
    io::write(out, &write_dg(&d))?;
    files.insert(0, out.display().to_string());
    Ok(Output::Report(Outcome::json(
        json!({
            "schema": SCHEMA,
            "command": "gen",
            "prng": "ChaCha8",
            "seed": args.seed,
            "vertices": d.n(),
            "arcs": d.m(),
            "files": files,
        }),
        true,
    )))
}

fn random_bounds(rng: &mut impl Rng, d: &Digraph, kind: BoundsFor) -> BoundsFile {
    let n = d.n();
    let c = ExtendedValue::from_count;
    let ups = [c(0), c(1), c(2), ExtendedValue::POS_INF];
    let lows = [ExtendedValue::NEG_INF, c(0), c(1), c(2)];
    let mut draw = |choices: &[ExtendedValue]| -> Vec<ExtendedValue> {
        (0..n).map(|_| *choices.choose(rng).expect("non-empty")).collect()
    };
    let map = |v: &[ExtendedValue]| Some(BoundsFile::map_from(v, None));
    match kind {
        BoundsFor::Upper | BoundsFor::DDistance => BoundsFile { g: map(&draw(&ups)), ..Default::default() },
        BoundsFor::Lower => BoundsFile { f: map(&draw(&lows)), ..Default::default() },
        BoundsFor::OutUpperInLower => {
            BoundsFile { g: map(&draw(&ups)), f_rho: map(&draw(&lows)), ..Default::default() }
        }
        BoundsFor::OutLowerInUpper => {
            BoundsFile { f: map(&draw(&lows)), g_rho: map(&draw(&ups)), ..Default::default() }
        }
        BoundsFor::Mixed => {
            let values = draw(&[c(0), c(1), c(2)]);
            let (mut f, mut g) = (BTreeMap::new(), BTreeMap::new());
            for (v, x) in values.into_iter().enumerate() {
                let side = if rng.gen_bool(0.5) { &mut f } else { &mut g };
                side.insert(v.to_string(), x);
            }
            BoundsFile { f: Some(f), g: Some(g), ..Default::default() }
        }
        BoundsFor::Exact => {
            // Half the draws are read off a random order, so feasible instances occur.
            let (m_delta, m_rho): (Vec<usize>, Vec<usize>) = if rng.gen_bool(0.5) {
                let mut sigma: Vec<usize> = (0..n).collect();
                sigma.shuffle(rng);
                let p = degree_profile(d, &VertexOrder::new(sigma, n).expect("shuffle")).expect("fits");
                (p.delta_left, p.rho_right)
            } else {
                ((0..n).map(|_| rng.gen_range(0..=2)).collect(), (0..n).map(|_| rng.gen_range(0..=2)).collect())
            };
            let counts = |v: Vec<usize>| map(&v.into_iter().map(c).collect::<Vec<_>>());
            BoundsFile { m_delta: counts(m_delta), m_rho: counts(m_rho), ..Default::default() }
        }
    }
}
