use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use ordo_core::bounded::{solve_lower, solve_minmax, solve_upper};
use ordo_core::family::order_k_disjoint_st_dipaths;
use ordo_core::gen::{random_digraph, seeded};
use ordo_core::oracle::{oracle_order, OracleCaps, OrderPredicate};
use ordo_core::simultaneous::solve_out_upper_in_lower;
use ordo_core::ExtendedValue as EV;

fn greedy(c: &mut Criterion) {
    let mut group = c.benchmark_group("greedy");
    for n in [50, 200, 800] {
        let d = random_digraph(&mut seeded(n as u64), n, 8.0 / n as f64);
        let g = vec![EV::from_count(4); n];
        let f = vec![EV::from_count(2); n];
        group.bench_with_input(BenchmarkId::new("upper", n), &d, |b, d| b.iter(|| solve_upper(black_box(d), &g)));
        group.bench_with_input(BenchmarkId::new("lower", n), &d, |b, d| b.iter(|| solve_lower(black_box(d), &f)));
        group.bench_with_input(BenchmarkId::new("minmax", n), &d, |b, d| b.iter(|| solve_minmax(black_box(d))));
        group.bench_with_input(BenchmarkId::new("out-upper-in-lower", n), &d, |b, d| {
            b.iter(|| solve_out_upper_in_lower(black_box(d), &g, &f))
        });
    }
    group.finish();
}

fn dipaths(c: &mut Criterion) {
    let mut group = c.benchmark_group("st-dipaths");
    for n in [20, 80] {
        let d = random_digraph(&mut seeded(7 + n as u64), n, 4.0 / n as f64);
        group.bench_with_input(BenchmarkId::from_parameter(n), &d, |b, d| {
            b.iter(|| order_k_disjoint_st_dipaths(black_box(d), &[0, 1], &[n - 2, n - 1]))
        });
    }
    group.finish();
}

fn oracle(c: &mut Criterion) {
    let d = random_digraph(&mut seeded(3), 7, 0.35);
    let pred = OrderPredicate::upper(vec![EV::ONE; 7]);
    c.bench_function("oracle/upper-n7", |b| b.iter(|| oracle_order(black_box(&d), &pred, &OracleCaps::default())));
}

criterion_group!(benches, greedy, dipaths, oracle);
criterion_main!(benches);
