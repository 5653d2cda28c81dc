use std::time::Instant;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{box_of, BaselineConfig, Elite};
use crate::error::{Error, Result};
use crate::objectives::Objective;
use crate::optimizer::{clamp_into, uniform_point, Evaluator, OptimizationResult};
use crate::rng::stream;

/// Velocity is clamped to this fraction of the box width.
const VMAX_FRACTION: f64 = 0.2;

/// Global-best particle swarm with inertia weight.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PsoParams {
    pub inertia: f64,
    pub cognitive: f64,
    pub social: f64,
}

impl Default for PsoParams {
    fn default() -> Self {
        Self {
            inertia: 0.729,
            cognitive: 1.49445,
            social: 1.49445,
        }
    }
}

impl PsoParams {
    pub fn validate(&self) -> Result<()> {
        if [self.inertia, self.cognitive, self.social]
            .iter()
            .any(|v| !v.is_finite() || *v < 0.0)
        {
            return Err(Error::InvalidConfig(
                "pso coefficients must be finite and non-negative".into(),
            ));
        }
        Ok(())
    }
}

pub(super) fn run(
    objective: &Objective,
    p: &PsoParams,
    config: &BaselineConfig,
) -> Result<OptimizationResult> {
    let started = Instant::now();
    let mut rng = stream(config.seed);
    let mut eval = Evaluator::new(objective, config.seed);
    let (lo, hi) = box_of(objective);
    let vmax: Vec<f64> = lo
        .iter()
        .zip(&hi)
        .map(|(l, h)| VMAX_FRACTION * (h - l))
        .collect();
    let n = config.population_size;

    let mut x: Vec<Vec<f64>> = (0..n).map(|_| uniform_point(&lo, &hi, &mut rng)).collect();
    let mut v: Vec<Vec<f64>> = (0..n)
        .map(|_| {
            vmax.iter()
                .map(|m| m * (2.0 * rng.random::<f64>() - 1.0))
                .collect()
        })
        .collect();
    let mut fit = x
        .iter()
        .map(|xi| eval.eval(xi))
        .collect::<Result<Vec<_>>>()?;
    let mut pbest = x.clone();
    let mut pbest_fit = fit.clone();
    let mut elite = Elite::from_population(&x, &fit);

    for epoch in 1..=config.epochs {
        for i in 0..n {
            for d in 0..x[i].len() {
                let r1: f64 = rng.random();
                let r2: f64 = rng.random();
                let vel = p.inertia * v[i][d]
                    + p.cognitive * r1 * (pbest[i][d] - x[i][d])
                    + p.social * r2 * (elite.position[d] - x[i][d]);
                v[i][d] = vel.clamp(-vmax[d], vmax[d]);
                x[i][d] += v[i][d];
            }
            clamp_into(&mut x[i], &lo, &hi);
            fit[i] = eval.eval(&x[i])?;
            if fit[i] < pbest_fit[i] {
                pbest_fit[i] = fit[i];
                pbest[i].clone_from(&x[i]);
            }
            elite.offer(&x[i], fit[i]);
        }
        elite.record(epoch);
    }
    Ok(elite.finish(eval.count(), started))
}
