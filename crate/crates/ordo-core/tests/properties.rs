use ordo_core::applications::{
    build_penalty_digraph, check_activation, simulate_activation, Activation,
};
use ordo_core::bounded::{solve_lower, solve_minmax, solve_upper};
use ordo_core::certify::{verify_infeasible, verify_order};
use ordo_core::digraph::io::{parse_dg, write_dg};
use ordo_core::gen::{random_profile, random_threshold_network, seeded};
use ordo_core::oracle::{oracle_minmax, oracle_order, OracleCaps, OrderPredicate};
use ordo_core::{degree_profile, is_acyclic, topological_order, Digraph, ExtendedValue as EV, VertexOrder};
use proptest::prelude::*;

fn digraph(max_n: usize) -> impl Strategy<Value = Digraph> {
    (1..=max_n).prop_flat_map(|n| {
        proptest::collection::vec((0..n, 0..n), 0..=2 * n).prop_map(move |pairs| {
            let pairs: Vec<_> = pairs.into_iter().filter(|(u, v)| u != v).collect();
            Digraph::from_pairs(n, &pairs).unwrap()
        })
    })
}

fn with_order(max_n: usize) -> impl Strategy<Value = (Digraph, Vec<usize>)> {
    digraph(max_n).prop_flat_map(|d| {
        let n = d.n();
        (Just(d), Just((0..n).collect::<Vec<_>>()).prop_shuffle())
    })
}

fn bound() -> impl Strategy<Value = EV> {
    prop_oneof![Just(EV::NEG_INF), Just(EV::POS_INF), (0usize..3).prop_map(EV::from_count)]
}

proptest! {
    #[test]
    fn profile_counts_every_arc_once((d, sigma) in with_order(7)) {
        let n = d.n();
        let p = degree_profile(&d, &VertexOrder::new(sigma, n).unwrap()).unwrap();
        let left: usize = p.delta_left.iter().sum();
        let right: usize = p.delta_right.iter().sum();
        prop_assert_eq!(left + right, d.m());
        prop_assert_eq!(left, p.rho_right.iter().sum::<usize>());
        prop_assert_eq!(right, p.rho_left.iter().sum::<usize>());
    }

    #[test]
    fn dg_text_round_trips(d in digraph(8)) {
        prop_assert_eq!(parse_dg(&write_dg(&d)).unwrap(), d);
    }

    #[test]
    fn topological_order_has_no_left_arcs(d in digraph(8)) {
        match topological_order(&d) {
            Ok(order) => {
                prop_assert!(is_acyclic(&d));
                let p = degree_profile(&d, &order).unwrap();
                prop_assert_eq!(p.left_arc_count(), 0);
            }
            Err(_) => prop_assert!(!is_acyclic(&d)),
        }
    }

    #[test]
    fn upper_matches_oracle_and_certifies(d in digraph(6), g in proptest::collection::vec(bound(), 6)) {
        let g = g[..d.n()].iter().map(|x| if x.is_neg_inf() { EV::ZERO } else { *x }).collect::<Vec<_>>();
        let pred = OrderPredicate::upper(g.clone());
        let r = solve_upper(&d, &g).unwrap();
        prop_assert_eq!(r.is_feasible(), oracle_order(&d, &pred, &OracleCaps::default()).unwrap().is_feasible());
        match r.order() {
            Some(o) => prop_assert!(verify_order(&d, o.as_slice(), &pred).unwrap().valid),
            None => prop_assert!(verify_infeasible(&d, &pred, r.witness()).unwrap().valid),
        }
    }

    #[test]
    fn lower_matches_oracle_and_certifies(d in digraph(6), f in proptest::collection::vec(bound(), 6)) {
        let f = f[..d.n()].iter().map(|x| if x.is_pos_inf() { EV::ONE } else { *x }).collect::<Vec<_>>();
        let pred = OrderPredicate::lower(f.clone());
        let r = solve_lower(&d, &f).unwrap();
        prop_assert_eq!(r.is_feasible(), oracle_order(&d, &pred, &OracleCaps::default()).unwrap().is_feasible());
        match r.order() {
            Some(o) => prop_assert!(verify_order(&d, o.as_slice(), &pred).unwrap().valid),
            None => prop_assert!(verify_infeasible(&d, &pred, r.witness()).unwrap().valid),
        }
    }

    #[test]
    fn minmax_is_optimal(d in digraph(6)) {
        let (order, value) = solve_minmax(&d);
        let p = degree_profile(&d, &order).unwrap();
        prop_assert_eq!(p.max_delta_left_w(), value);
        prop_assert_eq!(oracle_minmax(&d, &OracleCaps::default()).unwrap().1, value);
    }
}

#[test]
fn penalty_digraph_is_antisymmetric() {
    let mut rng = seeded(21);
    for judges in 1..=6 {
        let d = build_penalty_digraph(&random_profile(&mut rng, 6, judges));
        for a in d.arcs() {
            assert!(!d.out_arcs(a.head).iter().any(|&b| d.arc(b).head == a.tail));
        }
    }
}

#[test]
fn activation_agrees_with_simulation() {
    let mut rng = seeded(22);
    for _ in 0..300 {
        let net = random_threshold_network(&mut rng, 7, 0.35, 0.3);
        let all = simulate_activation(&net).iter().all(|&b| b);
        match check_activation(&net) {
            Activation::Full(_) => assert!(all),
            Activation::Blocked(set) => {
                assert!(!all);
                let active = simulate_activation(&net);
                assert!(set.iter().all(|&v| !active[v]), "blocked vertices never activate");
            }
        }
    }
}
