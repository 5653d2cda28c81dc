use std::time::Instant;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{box_of, probability, BaselineConfig, Elite};
use crate::error::{Error, Result};
use crate::objectives::Objective;
use crate::optimizer::{clamp_into, uniform_point, Evaluator, OptimizationResult};
use crate::rng::stream;

/// DE/rand/1/bin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DeParams {
    pub scale: f64,
    pub crossover: f64,
}

impl Default for DeParams {
    fn default() -> Self {
        Self {
            scale: 0.5,
            crossover: 0.9,
        }
    }
}

impl DeParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.scale.is_finite() && self.scale > 0.0) {
            return Err(Error::InvalidConfig("de scale must be positive".into()));
        }
        probability("de crossover", self.crossover)
    }
}

fn distinct<R: Rng + ?Sized>(n: usize, exclude: usize, rng: &mut R) -> [usize; 3] {
    let mut out = [exclude; 3];
    let mut k = 0;
    while k < 3 {
        let c = rng.random_range(0..n);
        if c != exclude && !out[..k].contains(&c) {
            out[k] = c;
            k += 1;
        }
    }
    out
}

pub(super) fn run(
    objective: &Objective,
    p: &DeParams,
    config: &BaselineConfig,
) -> Result<OptimizationResult> {
    let started = Instant::now();
    let mut rng = stream(config.seed);
    let mut eval = Evaluator::new(objective, config.seed);
    let (lo, hi) = box_of(objective);
    let n = config.population_size;
    let dim = lo.len();

    let mut x: Vec<Vec<f64>> = (0..n).map(|_| uniform_point(&lo, &hi, &mut rng)).collect();
    let mut fit = x
        .iter()
        .map(|xi| eval.eval(xi))
        .collect::<Result<Vec<_>>>()?;
    let mut elite = Elite::from_population(&x, &fit);

    for epoch in 1..=config.epochs {
        let mut next = x.clone();
        let mut next_fit = fit.clone();
        for i in 0..n {
            let [a, b, c] = distinct(n, i, &mut rng);
            let forced = rng.random_range(0..dim);
            let mut trial: Vec<f64> = (0..dim)
                .map(|d| {
                    if d == forced || rng.random::<f64>() < p.crossover {
                        x[a][d] + p.scale * (x[b][d] - x[c][d])
                    } else {
                        x[i][d]
                    }
                })
                .collect();
            clamp_into(&mut trial, &lo, &hi);
            let f = eval.eval(&trial)?;
            elite.offer(&trial, f);
            if f <= fit[i] {
                next[i] = trial;
                next_fit[i] = f;
            }
        }
        x = next;
        fit = next_fit;
        elite.record(epoch);
    }
    Ok(elite.finish(eval.count(), started))
}
