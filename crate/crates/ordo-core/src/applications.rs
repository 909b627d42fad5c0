//! Rank aggregation over penalty and disappointment digraphs, and
//! activation checking in threshold networks.

use std::collections::{BTreeMap, HashMap};

use serde::Deserialize;

use crate::bounded::{solve_lower, solve_minmax, solve_upper};
use crate::digraph::{Arc, Digraph, VertexOrder};
use crate::ext::ExtendedValue;
use crate::solution::{SolveError, SolveResult, Witness};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ApplicationError {
    #[error("a ranking profile needs at least one judge")]
    NoJudges,
    #[error("judge {judge} does not rank every candidate exactly once")]
    NotAPermutation { judge: usize },
    #[error("rankings line {line}: {msg}")]
    Csv { line: usize, msg: String },
    #[error("threshold file: {0}")]
    Thresholds(String),
    #[error("weight matrix: {0}")]
    Matrix(String),
    #[error(transparent)]
    Solve(#[from] SolveError),
}

/// Complete rankings of the same candidates, one per judge. Each ranking
/// lists candidate indices from most to least preferred.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankingProfile {
    candidates: Vec<String>,
    rankings: Vec<Vec<usize>>,
}

impl RankingProfile {
    pub fn new(candidates: Vec<String>, rankings: Vec<Vec<usize>>) -> Result<Self, ApplicationError> {
        if rankings.is_empty() {
            return Err(ApplicationError::NoJudges);
        }
        let n = candidates.len();
        for (judge, r) in rankings.iter().enumerate() {
            let mut seen = vec![false; n];
            let ok = r.len() == n && r.iter().all(|&c| c < n && !std::mem::replace(&mut seen[c], true));
            if !ok {
                return Err(ApplicationError::NotAPermutation { judge });
            }
        }
        Ok(Self { candidates, rankings })
    }

    /// Candidates named `0..n`, handy for generated profiles.
    pub fn from_indices(n: usize, rankings: Vec<Vec<usize>>) -> Result<Self, ApplicationError> {
        Self::new((0..n).map(|i| i.to_string()).collect(), rankings)
    }

    /// One judge per line, candidate names separated by commas. Candidates
    /// are numbered in order of first appearance.
    pub fn from_csv(text: &str) -> Result<Self, ApplicationError> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .flexible(true)
            .trim(csv::Trim::All)
            .from_reader(text.as_bytes());
        let mut index: HashMap<String, usize> = HashMap::new();
        let mut candidates = Vec::new();
        let mut rankings = Vec::new();
        for (i, record) in reader.records().enumerate() {
            let record = record.map_err(|e| ApplicationError::Csv { line: i + 1, msg: e.to_string() })?;
            let names: Vec<&str> = record.iter().filter(|s| !s.is_empty()).collect();
            if names.is_empty() {
                continue;
            }
            let ranking = names
                .into_iter()
                .map(|name| {
                    *index.entry(name.to_owned()).or_insert_with(|| {
                        candidates.push(name.to_owned());
                        candidates.len() - 1
                    })
                })
                .collect();
            rankings.push(ranking);
        }
        Self::new(candidates, rankings)
    }

    pub fn num_candidates(&self) -> usize {
        self.candidates.len()
    }

    pub fn candidates(&self) -> &[String] {
        &self.candidates
    }

    pub fn rankings(&self) -> &[Vec<usize>] {
        &self.rankings
    }

    /// `before[u][v]`: number of judges ranking `u` ahead of `v`.
    pub fn pairwise_counts(&self) -> Vec<Vec<usize>> {
        let n = self.num_candidates();
        let mut before = vec![vec![0; n]; n];
        for r in &self.rankings {
            for (i, &u) in r.iter().enumerate() {
                for &v in &r[i + 1..] {
                    before[u][v] += 1;
                }
            }
        }
        before
    }
}

/// Arc `u -> v` when strictly more than half of the judges rank `u` ahead of `v`.
pub fn build_penalty_digraph(profile: &RankingProfile) -> Digraph {
    let n = profile.num_candidates();
    let judges = profile.rankings().len();
    let before = profile.pairwise_counts();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (0..n).map(move |v| (u, v)))
        .filter(|&(u, v)| u != v && 2 * before[u][v] > judges)
        .collect();
    Digraph::from_pairs(n, &pairs).expect("candidate pairs are loop-free")
}

/// Consensus order minimizing the largest number of majority preferences a
/// candidate loses, with that number.
pub fn minmax_unfairness_order(profile: &RankingProfile) -> (VertexOrder, usize) {
    let (order, value) = solve_minmax(&build_penalty_digraph(profile));
    (order, value.as_integer().expect("arc counts are integral") as usize)
}

/// Arc `v -> u` weighted by the number of judges ranking `v` ahead of `u`;
/// zero weights are omitted.
pub fn disappointment_digraph(profile: &RankingProfile) -> Digraph {
    let before = profile.pairwise_counts();
    let matrix: Vec<Vec<ExtendedValue>> = before
        .iter()
        .map(|row| row.iter().map(|&c| ExtendedValue::from_count(c)).collect())
        .collect();
    disappointment_digraph_from_matrix(&matrix).expect("counts form a valid matrix")
}

/// Arc `v -> u` of weight `matrix[v][u]` for every positive off-diagonal entry.
pub fn disappointment_digraph_from_matrix(matrix: &[Vec<ExtendedValue>]) -> Result<Digraph, ApplicationError> {
    let n = matrix.len();
    let mut arcs = Vec::new();
    for (v, row) in matrix.iter().enumerate() {
        if row.len() != n {
            return Err(ApplicationError::Matrix(format!("row {v} has {} entries, expected {n}", row.len())));
        }
        for (u, &w) in row.iter().enumerate() {
            if w < ExtendedValue::ZERO {
                return Err(ApplicationError::Matrix(format!("entry ({v}, {u}) is negative")));
            }
            if u != v && w > ExtendedValue::ZERO {
                arcs.push(Arc::weighted(v, u, w));
            }
        }
    }
    Digraph::new(n, arcs).map_err(|e| ApplicationError::Matrix(e.to_string()))
}

/// Order in which every candidate's disappointment stays within its cap.
pub fn bounded_disappointment_order(
    profile: &RankingProfile,
    caps: &[ExtendedValue],
) -> Result<SolveResult, ApplicationError> {
    Ok(solve_upper(&disappointment_digraph(profile), caps)?)
}

/// Arc `u -> v` means `u` influences `v`; `v` activates once at least
/// `tau[v]` of its in-neighbours are active. Seeds start active.
#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdNetwork {
    pub digraph: Digraph,
    pub tau: Vec<usize>,
    pub seed: Vec<usize>,
}

#[derive(Deserialize)]
struct ThresholdFile {
    #[serde(default)]
    tau: BTreeMap<String, usize>,
    #[serde(default)]
    seed: Vec<usize>,
}

impl ThresholdNetwork {
    pub fn new(digraph: Digraph, tau: Vec<usize>, seed: Vec<usize>) -> Result<Self, ApplicationError> {
        if tau.len() != digraph.n() {
            return Err(ApplicationError::Thresholds(format!("{} thresholds for {} vertices", tau.len(), digraph.n())));
        }
        if let Some(&s) = seed.iter().find(|&&s| s >= digraph.n()) {
            return Err(ApplicationError::Thresholds(format!("seed {s} out of range")));
        }
        Ok(Self { digraph, tau, seed })
    }

    /// Reads `{"tau": {"v": t, ...}, "seed": [...]}`. Every non-seed vertex
    /// needs a threshold; seeds default to 0.
    pub fn from_json(digraph: Digraph, text: &str) -> Result<Self, ApplicationError> {
        let file: ThresholdFile =
            serde_json::from_str(text).map_err(|e| ApplicationError::Thresholds(e.to_string()))?;
        let n = digraph.n();
        let mut tau = vec![None; n];
        for (key, &t) in &file.tau {
            let v: usize = key
                .parse()
                .ok()
                .filter(|&v| v < n)
                .ok_or_else(|| ApplicationError::Thresholds(format!("bad vertex key `{key}`")))?;
            tau[v] = Some(t);
        }
        let mut is_seed = vec![false; n];
        for &s in &file.seed {
            if s >= n {
                return Err(ApplicationError::Thresholds(format!("seed {s} out of range")));
            }
            is_seed[s] = true;
        }
        let tau = (0..n)
            .map(|v| match (tau[v], is_seed[v]) {
                (Some(t), _) => Ok(t),
                (None, true) => Ok(0),
                (None, false) => Err(ApplicationError::Thresholds(format!("vertex {v} has no threshold"))),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(digraph, tau, file.seed)
    }

    pub fn is_seed_mask(&self) -> Vec<bool> {
        let mut m = vec![false; self.digraph.n()];
        self.seed.iter().for_each(|&s| m[s] = true);
        m
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Activation {
    /// Vertices in an order in which each meets its threshold from earlier ones.
    Full(VertexOrder),
    /// Non-seed vertices each having fewer than `tau` in-neighbours outside the set.
    Blocked(Vec<usize>),
}

/// Whether the seeds activate the whole network one vertex at a time.
pub fn check_activation(net: &ThresholdNetwork) -> Activation {
    let seeds = net.is_seed_mask();
    let f: Vec<ExtendedValue> = (0..net.digraph.n())
        .map(|v| if seeds[v] { ExtendedValue::ZERO } else { ExtendedValue::from_count(net.tau[v]) })
        .collect();
    match solve_lower(&net.digraph.reversed().unweighted(), &f).expect("one bound per vertex") {
        SolveResult::Feasible { order, .. } => Activation::Full(order),
        SolveResult::Infeasible { witness: Some(Witness::InducedSet { vertices }) } => Activation::Blocked(vertices),
        other => unreachable!("lower-bound solver returned {other:?}"),
    }
}

/// Round-based propagation to a fixpoint; returns the active set.
pub fn simulate_activation(net: &ThresholdNetwork) -> Vec<bool> {
    let d = &net.digraph;
    let mut active = net.is_seed_mask();
    loop {
        let next: Vec<usize> = (0..d.n())
            .filter(|&v| !active[v] && d.count_from(v, &active) >= net.tau[v])
            .collect();
        if next.is_empty() {
            return active;
        }
        next.into_iter().for_each(|v| active[v] = true);
    }
}
