use std::time::Instant;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::{box_of, probability, BaselineConfig, Elite};
use crate::error::{Error, Result};
use crate::objectives::Objective;
use crate::optimizer::{clamp_into, uniform_point, Evaluator, OptimizationResult};
use crate::rng::stream;

/// Real-coded generational GA with one elite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GaParams {
    pub crossover_prob: f64,
    /// Per-gene probability; `None` means `1 / dim`.
    pub mutation_prob: Option<f64>,
    pub tournament_size: usize,
    /// Mutation standard deviation as a fraction of the box width.
    pub mutation_scale: f64,
}

impl Default for GaParams {
    fn default() -> Self {
        Self {
            crossover_prob: 0.9,
            mutation_prob: None,
            tournament_size: 2,
            mutation_scale: 0.1,
        }
    }
}

impl GaParams {
    pub fn validate(&self) -> Result<()> {
        probability("ga crossover probability", self.crossover_prob)?;
        if let Some(m) = self.mutation_prob {
            probability("ga mutation probability", m)?;
        }
        if self.tournament_size == 0 {
            return Err(Error::InvalidConfig(
                "tournament size must be positive".into(),
            ));
        }
        if !(self.mutation_scale.is_finite() && self.mutation_scale >= 0.0) {
            return Err(Error::InvalidConfig(
                "mutation scale must be non-negative".into(),
            ));
        }
        Ok(())
    }
}

fn tournament<R: Rng + ?Sized>(fit: &[f64], size: usize, rng: &mut R) -> usize {
    let mut best = rng.random_range(0..fit.len());
    for _ in 1..size {
        let c = rng.random_range(0..fit.len());
        if fit[c] < fit[best] {
            best = c;
        }
    }
    best
}

pub(super) fn run(
    objective: &Objective,
    p: &GaParams,
    config: &BaselineConfig,
) -> Result<OptimizationResult> {
    let started = Instant::now();
    let mut rng = stream(config.seed);
    let mut eval = Evaluator::new(objective, config.seed);
    let (lo, hi) = box_of(objective);
    let n = config.population_size;
    let dim = lo.len();
    let pm = p.mutation_prob.unwrap_or(1.0 / dim as f64);
    let sigma: Vec<f64> = lo
        .iter()
        .zip(&hi)
        .map(|(l, h)| p.mutation_scale * (h - l))
        .collect();

    let mut x: Vec<Vec<f64>> = (0..n).map(|_| uniform_point(&lo, &hi, &mut rng)).collect();
    let mut fit = x
        .iter()
        .map(|xi| eval.eval(xi))
        .collect::<Result<Vec<_>>>()?;
    let mut elite = Elite::from_population(&x, &fit);

    for epoch in 1..=config.epochs {
        let mut children = Vec::with_capacity(n);
        while children.len() < n {
            let a = x[tournament(&fit, p.tournament_size, &mut rng)].clone();
            let b = x[tournament(&fit, p.tournament_size, &mut rng)].clone();
            let (mut c1, mut c2) = (a.clone(), b.clone());
            if rng.random::<f64>() < p.crossover_prob {
                for d in 0..dim {
                    if rng.random::<bool>() {
                        c1[d] = b[d];
                        c2[d] = a[d];
                    }
                }
            }
            for child in [&mut c1, &mut c2] {
                for d in 0..dim {
                    if rng.random::<f64>() < pm {
                        let z: f64 = rng.sample(StandardNormal);
                        child[d] += sigma[d] * z;
                    }
                }
                clamp_into(child, &lo, &hi);
            }
            children.push(c1);
            children.push(c2);
        }
        let mut child_fit = children
            .iter()
            .map(|c| eval.eval(c))
            .collect::<Result<Vec<_>>>()?;
        for (c, &f) in children.iter().zip(&child_fit) {
            elite.offer(c, f);
        }
        // keep the best-so-far in place of the worst child
        let worst = (0..n)
            .max_by(|&a, &b| child_fit[a].total_cmp(&child_fit[b]))
            .expect("population is non-empty");
        if elite.fitness < child_fit[worst] {
            children[worst].clone_from(&elite.position);
            child_fit[worst] = elite.fitness;
        }
        x = children;
        fit = child_fit;
        elite.record(epoch);
    }
    Ok(elite.finish(eval.count(), started))
}
