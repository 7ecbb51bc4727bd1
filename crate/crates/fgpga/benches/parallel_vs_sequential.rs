//! Compares the rayon-backed paths against their sequential fallbacks: the
//! exhaustive oracle enumeration and a batch of independent seeded GA runs.

use criterion::{criterion_group, criterion_main, Criterion};
use rayon::prelude::*;
use std::hint::black_box;

use fgpga::ga::{run_fgpga, GaParams};
use fgpga::generator::{generate_instance, GenParams};
use fgpga::graph::{ApplicationGraph, Instance, MachineGraph};
use fgpga::oracle::{solve_exact, solve_exact_serial};

fn oracle_instance(vertices: usize) -> Instance {
    // Ring graph: small, fully deterministic, every state feasible.
    let demands = vec![1.0; vertices];
    let mut edges: Vec<(usize, usize, f64)> = (0..vertices - 1)
        .map(|i| (i, i + 1, 1.0 + i as f64))
        .collect();
    edges.push((0, vertices - 1, 0.5));
    let app = ApplicationGraph::new(demands, edges).unwrap();
    let machines = MachineGraph::new(
        vec![vertices as f64; 3],
        vec![
            vec![0.0, 1.0, 2.0],
            vec![1.0, 0.0, 1.5],
            vec![2.0, 1.5, 0.0],
        ],
    )
    .unwrap();
    Instance::new("ring", app, machines)
}

fn bench_oracle(c: &mut Criterion) {
    let instance = oracle_instance(11); // 3^11 = 177147 states
    let mut group = c.benchmark_group("oracle_exhaustive");
    group.bench_function("sequential", |b| {
        b.iter(|| solve_exact_serial(black_box(&instance), u64::MAX).unwrap())
    });
    group.bench_function("parallel", |b| {
        b.iter(|| solve_exact(black_box(&instance), u64::MAX).unwrap())
    });
    group.finish();
}

fn bench_run_batch(c: &mut Criterion) {
    let instance = generate_instance(&GenParams::sized(60, 7));
    let params: Vec<GaParams> = (0..8)
        .map(|seed| {
            let mut p = GaParams::for_vertex_count(60).with_seed(seed);
            p.max_generations = 120;
            p
        })
        .collect();
    let mut group = c.benchmark_group("ga_seed_batch");
    group.sample_size(10);
    group.bench_function("sequential", |b| {
        b.iter(|| {
            params
                .iter()
                .map(|p| run_fgpga(black_box(&instance), p).best_cost)
                .collect::<Vec<_>>()
        })
    });
    group.bench_function("parallel", |b| {
        b.iter(|| {
            params
                .par_iter()
                .map(|p| run_fgpga(black_box(&instance), p).best_cost)
                .collect::<Vec<_>>()
        })
    });
    group.finish();
}

criterion_group!(benches, bench_oracle, bench_run_batch);
criterion_main!(benches);
