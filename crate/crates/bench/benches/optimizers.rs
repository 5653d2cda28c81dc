use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use eosa_bench::{algorithm, objective, rank_matrix, sample_points, ALGORITHMS, EVAL_FUNCTIONS};
use eosa_core::stats::friedman;

fn evaluation(c: &mut Criterion) {
    let mut group = c.benchmark_group("evaluate_dim30");
    for id in EVAL_FUNCTIONS {
        let obj = objective(id, 30);
        let points = sample_points(&obj, 64, 1);
        group.bench_function(*id, |b| {
            b.iter(|| {
                points
                    .iter()
                    .map(|x| obj.evaluate(black_box(x)).unwrap())
                    .sum::<f64>()
            })
        });
    }
    group.finish();
}

fn optimizers(c: &mut Criterion) {
    let mut group = c.benchmark_group("sphere_dim30_psize50_epochs50");
    group.sample_size(20);
    for id in ALGORITHMS {
        let config = algorithm(id);
        group.bench_with_input(BenchmarkId::from_parameter(id), &config, |b, config| {
            b.iter(|| config.run("F34", Some(30), 50, 50, black_box(7)).unwrap())
        });
    }
    group.finish();
}

fn statistics(c: &mut Criterion) {
    let matrix = rank_matrix(46, 8, 3);
    c.bench_function("friedman_46x8", |b| b.iter(|| friedman(black_box(&matrix))));
}

criterion_group!(benches, evaluation, optimizers, statistics);
criterion_main!(benches);
