use std::hint::black_box;
use std::sync::Arc;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use symdyn::graph::{build_rauzy_graph, cycle_space, decompose_in_cycles, four_vertex_example};
use symdyn::substitution::{fractal_cloud, Substitution};
use symdyn::torus::examples::hexagon_center;
use symdyn::torus::hexagon_default;
use symdyn::word::{complexity, StabilizationPolicy, Symbol};

fn fixed_points(c: &mut Criterion) {
    let mut group = c.benchmark_group("fixed_point");
    for k in [2, 3, 4] {
        let s = Substitution::k_bonacci(k).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(k), &s, |b, s| {
            b.iter(|| s.fixed_point(Symbol(0)).unwrap().prefix(black_box(1 << 20)))
        });
    }
    group.finish();
}

fn complexity_tables(c: &mut Criterion) {
    let w = Substitution::k_bonacci(3).unwrap().fixed_point(Symbol(0)).unwrap();
    c.bench_function("complexity/tribonacci_n30", |b| {
        b.iter(|| complexity(&w, black_box(30), StabilizationPolicy::default()).unwrap())
    });
}

fn hexagon_coding(c: &mut Criterion) {
    let map = Arc::new(hexagon_default(0).unwrap());
    let x0 = hexagon_center(&map);
    c.bench_function("hexagon/coding_1M", |b| b.iter(|| map.coding(&x0).unwrap().prefix(black_box(1 << 20))));
}

fn rauzy_graphs(c: &mut Criterion) {
    let w = Substitution::k_bonacci(3).unwrap().fixed_point(Symbol(0)).unwrap();
    c.bench_function("rauzy/tribonacci_n10", |b| b.iter(|| build_rauzy_graph(&w, black_box(10), 1 << 18).unwrap()));
}

fn fractal(c: &mut Criterion) {
    let s = Substitution::k_bonacci(3).unwrap();
    c.bench_function("fractal/tribonacci_100k", |b| b.iter(|| fractal_cloud(&s, black_box(100_000), 1e-12).unwrap()));
}

fn cycles(c: &mut Criterion) {
    let g = four_vertex_example();
    let f = [1.0, 0.0, 1.0, 2.0, 1.0, 1.0];
    c.bench_function("cycles/four_vertex_decompose", |b| {
        b.iter(|| {
            let basis = cycle_space(&g);
            decompose_in_cycles(&g, &basis, black_box(&f), 1e-12).unwrap()
        })
    });
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = fixed_points, complexity_tables, hexagon_coding, rauzy_graphs, fractal, cycles
}
criterion_main!(benches);
