//! Sequential vs multi-threaded timing of graph construction and full runs.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use mpld::graph::build_layout_graph;
use mpld::pipeline::{run_layout, RunConfig};
use mpld::solvers::Algorithm;
use mpld::synth::{random_layout, LayoutParams};

const THREADS: [usize; 2] = [1, 8];

fn layout_graph(c: &mut Criterion) {
    let layout = random_layout(
        11,
        &LayoutParams {
            features: 20_000,
            row_len: 100_000,
            ..LayoutParams::default()
        },
    );
    let mut group = c.benchmark_group("layout_graph");
    for threads in THREADS {
        group.bench_with_input(BenchmarkId::from_parameter(threads), &threads, |b, &t| {
            b.iter(|| build_layout_graph(black_box(&layout), t))
        });
    }
    group.finish();
}

fn full_run(c: &mut Criterion) {
    let layout = random_layout(
        12,
        &LayoutParams {
            features: 4000,
            row_len: 40_000,
            ..LayoutParams::default()
        },
    );
    let mut group = c.benchmark_group("run");
    group.sample_size(20);
    for algorithm in [Algorithm::Backtrack, Algorithm::DancingLinks] {
        for threads in THREADS {
            let config = RunConfig {
                algorithm,
                threads,
                ..RunConfig::default()
            };
            group.bench_with_input(BenchmarkId::new(algorithm.to_string(), threads), &config, |b, cfg| {
                b.iter(|| run_layout(black_box(&layout), cfg).unwrap().report.cost)
            });
        }
    }
    group.finish();
}

criterion_group!(benches, layout_graph, full_run);
criterion_main!(benches);
