//! Types shared by every optimizer.

use std::time::Duration;

use rand::{Rng, RngCore};

use crate::epidemic::CompartmentCensus;
use crate::error::{Error, Result};
use crate::objectives::Objective;
use crate::rng::{child_seed, stream, Stream};

/// One `(epoch, gbest_fitness)` point of a run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HistoryEntry {
    pub epoch: usize,
    pub gbest_fitness: f64,
}

/// An epoch in which the infected set was re-seeded at the global best.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Reinjection {
    pub epoch: usize,
}

/// Outcome of one optimization run.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimizationResult {
    pub gbest_position: Vec<f64>,
    pub gbest_fitness: f64,
    /// Best fitness before the first epoch.
    pub initial_fitness: f64,
    pub history: Vec<HistoryEntry>,
    pub evaluations: u64,
    /// Empty for optimizers without compartments.
    pub census_trace: Vec<CompartmentCensus>,
    pub reinjections: Vec<Reinjection>,
    pub wall_time: Duration,
}

impl OptimizationResult {
    /// Fitness after `epoch`, holding the last value past the end.
    pub fn fitness_at(&self, epoch: usize) -> f64 {
        if epoch == 0 || self.history.is_empty() {
            return self.initial_fitness;
        }
        let idx = self.history.partition_point(|h| h.epoch <= epoch);
        if idx == 0 {
            self.initial_fitness
        } else {
            self.history[idx - 1].gbest_fitness
        }
    }
}

/// Counts objective evaluations and rejects non-finite values.
pub struct Evaluator<'a> {
    objective: &'a Objective,
    noise: Stream,
    count: u64,
}

impl<'a> Evaluator<'a> {
    /// The noise stream is derived from `seed`, independent of the search stream.
    pub fn new(objective: &'a Objective, seed: u64) -> Self {
        Self {
            objective,
            noise: stream(child_seed(seed, "noise")),
            count: 0,
        }
    }

    pub fn eval(&mut self, x: &[f64]) -> Result<f64> {
        self.count += 1;
        let v = self
            .objective
            .evaluate_with_noise(x, &mut self.noise as &mut dyn RngCore)?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::ObjectiveUndefined { value: v })
        }
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn dimension(&self) -> usize {
        self.objective.dimension()
    }
}

/// Uniform point in the box `[lower, upper]`.
pub fn uniform_point<R: Rng + ?Sized>(lower: &[f64], upper: &[f64], rng: &mut R) -> Vec<f64> {
    lower
        .iter()
        .zip(upper)
        .map(|(&lo, &hi)| lo + rng.random::<f64>() * (hi - lo))
        .collect()
}

/// Hard clamp into the box.
pub fn clamp_into(x: &mut [f64], lower: &[f64], upper: &[f64]) {
    for ((v, &lo), &hi) in x.iter_mut().zip(lower).zip(upper) {
        *v = v.clamp(lo, hi);
    }
}

pub(crate) fn check_box(lower: &[f64], upper: &[f64], dim: usize) -> Result<()> {
    if lower.len() != dim || upper.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: lower.len().max(upper.len()),
        });
    }
    if lower
        .iter()
        .zip(upper)
        .any(|(l, u)| !(l.is_finite() && u.is_finite()) || l > u)
    {
        return Err(Error::InvalidConfig("inverted or non-finite bounds".into()));
    }
    Ok(())
}
