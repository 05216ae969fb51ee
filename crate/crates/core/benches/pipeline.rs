//! Benches the data-parallel core against its sequential twin: candidate
//! growth over all uncolored edges (the per-phase inner loop), a single
//! multi-step run, and the full phase simulation.
//!
//! Build with the default `parallel` feature so both paths exist.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use vizing_core::gen;
use vizing_core::graph::EdgeId;
use vizing_core::msva::MsvaParams;
use vizing_core::sim::{grow_candidates_seq, simulate_coloring, SimConfig};
use vizing_core::PartialColoring;

#[cfg(feature = "parallel")]
use vizing_core::sim::grow_candidates_par;

fn bench_grow(c: &mut Criterion) {
    let mut group = c.benchmark_group("grow_candidates");
    for (n, delta) in [(1000usize, 8usize), (4000, 8), (4000, 16)] {
        let g = gen::random_graph(n, delta, 11);
        let phi = PartialColoring::new(&g);
        let uncolored: Vec<EdgeId> = g.edge_ids().collect();
        let params = MsvaParams::for_graph(&g, 1.0 / 16.0);
        group.bench_with_input(
            BenchmarkId::new("seq", format!("n{n}_d{delta}")),
            &(&g, &phi, &uncolored, &params),
            |b, (g, phi, uncolored, params)| {
                b.iter(|| {
                    black_box(grow_candidates_seq(g, phi, uncolored, params, 7, 1, false))
                })
            },
        );
        #[cfg(feature = "parallel")]
        group.bench_with_input(
            BenchmarkId::new("par", format!("n{n}_d{delta}")),
            &(&g, &phi, &uncolored, &params),
            |b, (g, phi, uncolored, params)| {
                b.iter(|| {
                    black_box(grow_candidates_par(g, phi, uncolored, params, 7, 1, false))
                })
            },
        );
    }
    group.finish();
}

fn bench_msva_single(c: &mut Criterion) {
    let g = gen::random_graph(2000, 8, 3);
    let phi = gen::random_partial_coloring(&g, 0.9, 4);
    let params = MsvaParams::for_graph(&g, 1.0 / 16.0);
    let e = g.edge_ids().find(|&e| phi.is_blank(e)).unwrap();
    let mut work = phi.clone();
    let mut rng = gen::rng_from(5);
    c.bench_function("msva_single_run", |b| {
        b.iter(|| {
            black_box(
                vizing_core::run_msva_in(&g, &mut work, e, &params, &mut rng).unwrap(),
            )
        })
    });
}

fn bench_simulate(c: &mut Criterion) {
    let mut group = c.benchmark_group("simulate");
    group.sample_size(10);
    let g = gen::random_graph(2000, 8, 21);
    group.bench_function("n2000_d8", |b| {
        b.iter(|| black_box(simulate_coloring(&g, &SimConfig::seeded(21)).unwrap()))
    });
    group.finish();
}

criterion_group!(benches, bench_grow, bench_msva_single, bench_simulate);
criterion_main!(benches);
