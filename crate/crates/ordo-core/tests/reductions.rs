use ordo_core::gen::{planted_xsat3, seeded};
use ordo_core::oracle::{oracle_bounds_by_prefix_sets, oracle_order, OracleCaps, OrderPredicate};
use ordo_core::reductions::{
    assignment_from_order_3xsat3, gadget_1distance, gadget_3xsat3, gadget_distance_lift, gadget_split_arcs,
    witness_order_3xsat3, GadgetBounds, GadgetInstance,
};
use ordo_core::Digraph;

fn distance_feasible(gi: &GadgetInstance) -> bool {
    let GadgetBounds::DDistance { d, g } = &gi.bounds else { panic!("distance gadget expected") };
    let pred = OrderPredicate::DDistance { d: *d, g: g.clone() };
    oracle_order(&gi.digraph, &pred, &OracleCaps::default()).unwrap().is_feasible()
}

#[test]
fn distance_lift_preserves_feasibility() {
    let pairs: Vec<(usize, usize)> = (0..4).flat_map(|u| (0..4).map(move |v| (u, v))).filter(|(u, v)| u != v).collect();
    let mut rng_state = 0u32;
    for _ in 0..40 {
        rng_state = rng_state.wrapping_mul(1_103_515_245).wrapping_add(12_345);
        let chosen: Vec<_> = pairs.iter().enumerate().filter(|(i, _)| rng_state >> (i + 4) & 1 == 1).map(|(_, p)| *p).collect();
        let base = Digraph::from_pairs(4, &chosen).unwrap();
        let one = GadgetInstance {
            digraph: base.clone(),
            bounds: GadgetBounds::DDistance { d: 1, g: vec![ordo_core::ExtendedValue::ZERO; 4] },
            tags: (0..4).map(|v| format!("v_{v}")).collect(),
        };
        let lifted = gadget_distance_lift(&base, 2, 2).unwrap();
        assert_eq!(lifted.digraph.n(), 7);
        assert_eq!(distance_feasible(&one), distance_feasible(&lifted), "base {chosen:?}");
    }
}

#[test]
fn one_distance_examples() {
    let path = Digraph::from_pairs(3, &[(0, 1), (1, 0), (1, 2), (2, 1)]).unwrap();
    assert!(distance_feasible(&gadget_1distance(&path)));
    let empty = Digraph::empty(3);
    assert!(!distance_feasible(&gadget_1distance(&empty)));
}

#[test]
fn split_arcs_counts() {
    let tri = Digraph::from_pairs(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
    let gi = gadget_split_arcs(&tri);
    assert_eq!((gi.digraph.n(), gi.digraph.m()), (6, 6));
}

#[test]
fn planted_assignments_survive_the_round_trip() {
    let mut rng = seeded(31);
    for n in 3..=4 {
        let (f, a) = planted_xsat3(&mut rng, n);
        let gi = gadget_3xsat3(&f).unwrap();
        let order = witness_order_3xsat3(&f, &gi, &a).unwrap();
        let back = assignment_from_order_3xsat3(&f, &gi, &order);
        assert!(f.exactly_one_satisfied(&back));
        let GadgetBounds::Bounds(spec) = &gi.bounds else { panic!("bounds gadget") };
        assert!(oracle_bounds_by_prefix_sets(&gi.digraph, spec, None).unwrap().is_feasible());
    }
}
