//! Shared workloads for the criterion benches.

use eosa_core::harness::AlgorithmConfig;
use eosa_core::optimizer::uniform_point;
use eosa_core::rng::stream;
use eosa_core::stats::RankMatrix;
use eosa_core::{lookup, Objective};

/// Functions timed by the evaluation bench: separable, multimodal, composite.
pub const EVAL_FUNCTIONS: &[&str] = &["F34", "F27", "C30"];

/// Algorithms timed by the optimizer bench.
pub const ALGORITHMS: &[&str] = &["eosa", "pso", "de", "ga"];

pub fn objective(id: &str, dim: usize) -> Objective {
    lookup(id)
        .and_then(|spec| spec.instantiate(dim))
        .unwrap_or_else(|e| panic!("{id}: {e}"))
}

/// Uniform points inside the objective's box.
pub fn sample_points(objective: &Objective, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let dim = objective.dimension();
    let bounds = objective.bounds();
    let lower = vec![bounds.lower; dim];
    let upper = vec![bounds.upper; dim];
    let mut rng = stream(seed);
    (0..count)
        .map(|_| uniform_point(&lower, &upper, &mut rng))
        .collect()
}

pub fn algorithm(id: &str) -> AlgorithmConfig {
    AlgorithmConfig::by_id(id).unwrap_or_else(|e| panic!("{e}"))
}

/// A problems-by-algorithms matrix of distinct values.
pub fn rank_matrix(problems: usize, algorithms: usize, seed: u64) -> RankMatrix {
    let rows = sample_points(&objective("F34", algorithms), problems, seed);
    RankMatrix::new(rows, true).expect("sampled matrix is valid")
}
