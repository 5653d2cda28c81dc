//! Reference optimizers sharing the EOSA result type.

mod de;
mod ga;
mod pso;

use serde::{Deserialize, Serialize};

pub use de::DeParams;
pub use ga::GaParams;
pub use pso::PsoParams;

use crate::error::{Error, Result};
use crate::objectives::Objective;
use crate::optimizer::OptimizationResult;

/// Which baseline to run, with its parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "lowercase")]
pub enum Baseline {
    Pso(PsoParams),
    De(DeParams),
    Ga(GaParams),
}

impl Baseline {
    pub fn id(&self) -> &'static str {
        match self {
            Baseline::Pso(_) => "pso",
            Baseline::De(_) => "de",
            Baseline::Ga(_) => "ga",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BaselineConfig {
    pub algorithm: Baseline,
    pub population_size: usize,
    pub epochs: usize,
    pub seed: u64,
}

impl BaselineConfig {
    pub fn validate(&self) -> Result<()> {
        let min = match self.algorithm {
            Baseline::Pso(_) => 1,
            Baseline::De(_) => 4,
            Baseline::Ga(_) => 2,
        };
        if self.population_size < min {
            return Err(Error::InvalidConfig(format!(
                "{} needs a population of at least {min}",
                self.algorithm.id()
            )));
        }
        match &self.algorithm {
            Baseline::Pso(p) => p.validate(),
            Baseline::De(p) => p.validate(),
            Baseline::Ga(p) => {
                if !self.population_size.is_multiple_of(2) {
                    return Err(Error::InvalidConfig(
                        "ga population size must be even".into(),
                    ));
                }
                p.validate()
            }
        }
    }
}

/// Runs the configured baseline on `objective`.
pub fn baseline_optimize(
    objective: &Objective,
    config: &BaselineConfig,
) -> Result<OptimizationResult> {
    config.validate()?;
    match &config.algorithm {
        Baseline::Pso(p) => pso::run(objective, p, config),
        Baseline::De(p) => de::run(objective, p, config),
        Baseline::Ga(p) => ga::run(objective, p, config),
    }
}

pub(crate) fn probability(name: &str, p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::InvalidConfig(format!(
            "{name} must lie in [0, 1], got {p}"
        )))
    }
}

/// Tracks the best point seen and the per-epoch history.
pub(crate) struct Elite {
    pub position: Vec<f64>,
    pub fitness: f64,
    pub initial: f64,
    pub history: Vec<crate::optimizer::HistoryEntry>,
}

impl Elite {
    pub fn from_population(positions: &[Vec<f64>], fitness: &[f64]) -> Self {
        let (k, &f) = fitness
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .expect("population is non-empty");
        Self {
            position: positions[k].clone(),
            fitness: f,
            initial: f,
            history: Vec::new(),
        }
    }

    pub fn offer(&mut self, position: &[f64], fitness: f64) {
        if fitness < self.fitness {
            self.fitness = fitness;
            self.position = position.to_vec();
        }
    }

    pub fn record(&mut self, epoch: usize) {
        self.history.push(crate::optimizer::HistoryEntry {
            epoch,
            gbest_fitness: self.fitness,
        });
    }

    pub fn finish(self, evaluations: u64, started: std::time::Instant) -> OptimizationResult {
        OptimizationResult {
            gbest_position: self.position,
            gbest_fitness: self.fitness,
            initial_fitness: self.initial,
            history: self.history,
            evaluations,
            census_trace: Vec::new(),
            reinjections: Vec::new(),
            wall_time: started.elapsed(),
        }
    }
}

pub(crate) fn box_of(objective: &Objective) -> (Vec<f64>, Vec<f64>) {
    let b = objective.bounds();
    let d = objective.dimension();
    (vec![b.lower; d], vec![b.upper; d])
}
