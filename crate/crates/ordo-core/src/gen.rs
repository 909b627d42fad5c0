//! Seeded random instances. Fixtures use ChaCha8 so that a seed names the
//! same instance on every platform.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::applications::{RankingProfile, ThresholdNetwork};
use crate::digraph::Digraph;
use crate::ext::ExtendedValue;
use crate::reductions::{CnfFormula, Literal};

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Each ordered pair `(u, v)`, `u != v`, becomes an arc with probability `p`.
pub fn random_digraph(rng: &mut impl Rng, n: usize, p: f64) -> Digraph {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (0..n).map(move |v| (u, v)))
        .filter(|&(u, v)| u != v)
        .filter(|_| rng.gen_bool(p))
        .collect();
    Digraph::from_pairs(n, &pairs).expect("pairs are loop-free")
}

/// Each ordered pair receives `0..=max_mult` parallel arcs uniformly.
pub fn random_multidigraph(rng: &mut impl Rng, n: usize, max_mult: usize) -> Digraph {
    let mut pairs = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if u != v {
                let copies = rng.gen_range(0..=max_mult);
                pairs.extend(std::iter::repeat_n((u, v), copies));
            }
        }
    }
    Digraph::from_pairs(n, &pairs).expect("pairs are loop-free")
}

/// Undirected graph as a symmetric digraph, each edge present with probability `p`.
pub fn random_graph(rng: &mut impl Rng, n: usize, p: f64) -> Digraph {
    let mut pairs = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                pairs.push((u, v));
                pairs.push((v, u));
            }
        }
    }
    Digraph::from_pairs(n, &pairs).expect("pairs are loop-free")
}

/// Random bound drawn from `choices`.
pub fn random_bounds(rng: &mut impl Rng, n: usize, choices: &[ExtendedValue]) -> Vec<ExtendedValue> {
    (0..n).map(|_| *choices.choose(rng).expect("choices is non-empty")).collect()
}

/// A formula with `n >= 3` variables and `n` clauses, each variable
/// occurring three times and never twice in one clause, with an assignment
/// making exactly one literal per clause true.
pub fn planted_xsat3(rng: &mut impl Rng, n: usize) -> (CnfFormula, Vec<bool>) {
    assert!(n >= 3, "three distinct variables per clause need n >= 3");
    let mut slots: Vec<usize> = (1..=n).flat_map(|v| [v; 3]).collect();
    loop {
        slots.shuffle(rng);
        if slots.chunks(3).all(|c| c[0] != c[1] && c[1] != c[2] && c[0] != c[2]) {
            break;
        }
    }
    let assignment: Vec<bool> = (0..n).map(|_| rng.gen()).collect();
    let clauses = slots
        .chunks(3)
        .map(|c| {
            let true_slot = rng.gen_range(0..3);
            std::array::from_fn(|i| {
                let var = c[i];
                let want = i == true_slot;
                Literal { var, negated: assignment[var - 1] != want }
            })
        })
        .collect();
    (CnfFormula::new(n, clauses).expect("variables in range"), assignment)
}

/// `num_clauses` clauses over `num_vars >= 3` variables, three distinct
/// variables per clause, all not-all-equal satisfied by the returned assignment.
pub fn planted_nae(rng: &mut impl Rng, num_vars: usize, num_clauses: usize) -> (CnfFormula, Vec<bool>) {
    assert!(num_vars >= 3, "three distinct variables per clause need at least 3 variables");
    let assignment: Vec<bool> = (0..num_vars).map(|_| rng.gen()).collect();
    let vars: Vec<usize> = (1..=num_vars).collect();
    let clauses = (0..num_clauses)
        .map(|_| {
            let chosen: Vec<usize> = vars.choose_multiple(rng, 3).copied().collect();
            loop {
                let clause: [Literal; 3] = std::array::from_fn(|i| Literal { var: chosen[i], negated: rng.gen() });
                let values = clause.map(|l| l.value(&assignment));
                if values.iter().any(|&b| b) && values.iter().any(|&b| !b) {
                    break clause;
                }
            }
        })
        .collect();
    (CnfFormula::new(num_vars, clauses).expect("variables in range"), assignment)
}

/// `judges` uniformly random rankings of `candidates` candidates.
pub fn random_profile(rng: &mut impl Rng, candidates: usize, judges: usize) -> RankingProfile {
    let rankings = (0..judges)
        .map(|_| {
            let mut r: Vec<usize> = (0..candidates).collect();
            r.shuffle(rng);
            r
        })
        .collect();
    RankingProfile::from_indices(candidates, rankings).expect("shuffles are permutations")
}

/// Random influence digraph, thresholds in `0..=indegree + 1` and each
/// vertex a seed with probability `seed_p`.
pub fn random_threshold_network(rng: &mut impl Rng, n: usize, p: f64, seed_p: f64) -> ThresholdNetwork {
    let d = random_digraph(rng, n, p);
    let tau = (0..n).map(|v| rng.gen_range(0..=d.indegree(v) + 1)).collect();
    let seed = (0..n).filter(|_| rng.gen_bool(seed_p)).collect();
    ThresholdNetwork::new(d, tau, seed).expect("generated network is consistent")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeds_reproduce() {
        let a = random_digraph(&mut seeded(3), 6, 0.4);
        let b = random_digraph(&mut seeded(3), 6, 0.4);
        assert_eq!(a, b);
        assert!(a.is_simple());
    }

    #[test]
    fn planted_formulas_hold() {
        let mut rng = seeded(11);
        for n in 3..9 {
            let (f, a) = planted_xsat3(&mut rng, n);
            assert!(f.is_xsat3_shape());
            assert!(f.exactly_one_satisfied(&a));
            let (f, a) = planted_nae(&mut rng, n, 3);
            assert!(f.nae_satisfied(&a));
        }
    }

    #[test]
    fn graphs_are_symmetric() {
        assert!(random_graph(&mut seeded(1), 5, 0.5).is_symmetric());
    }
}
