use serde::{Deserialize, Serialize};

use super::Archive;
use crate::error::{Error, Result};

/// Table-style aggregate of final gbest values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SummaryStats {
    pub best: f64,
    pub worst: f64,
    pub mean: f64,
    pub median: f64,
    /// Sample standard deviation (n - 1 denominator), 0 for a single value.
    pub stdev: f64,
}

impl SummaryStats {
    /// Looks up a statistic by column name.
    pub fn metric(&self, name: &str) -> Option<f64> {
        match name {
            "best" => Some(self.best),
            "worst" => Some(self.worst),
            "mean" => Some(self.mean),
            "median" => Some(self.median),
            "stdev" => Some(self.stdev),
            _ => None,
        }
    }
}

pub(crate) fn median(values: &[f64]) -> f64 {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0
    }
}

pub fn summarize(final_values: &[f64]) -> Result<SummaryStats> {
    if final_values.is_empty() {
        return Err(Error::EmptyInput);
    }
    let n = final_values.len() as f64;
    let best = final_values.iter().copied().fold(f64::INFINITY, f64::min);
    let worst = final_values
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    let mean = (final_values.iter().sum::<f64>() / n).clamp(best, worst);
    let stdev = if final_values.len() < 2 {
        0.0
    } else {
        let ss: f64 = final_values.iter().map(|v| (v - mean).powi(2)).sum();
        (ss / (n - 1.0)).sqrt()
    };
    Ok(SummaryStats {
        best,
        worst,
        mean,
        median: median(final_values),
        stdev,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    pub algorithm: String,
    pub function: String,
    pub checkpoint: usize,
    pub median_gbest: f64,
}

/// Median gbest across runs at each checkpoint.
pub fn convergence_table(archive: &Archive, checkpoints: &[usize]) -> Result<Vec<ConvergenceRow>> {
    let epochs = archive.config.epochs;
    if let Some(&c) = checkpoints.iter().find(|&&c| c > epochs) {
        return Err(Error::CheckpointBeyondEpochs {
            checkpoint: c,
            epochs,
        });
    }
    let mut rows = Vec::new();
    for (algorithm, function) in archive.pairs() {
        let runs: Vec<_> = archive.group(&algorithm, &function).collect();
        if runs.is_empty() {
            continue;
        }
        for &checkpoint in checkpoints {
            let at: Vec<f64> = runs
                .iter()
                .map(|r| r.result.fitness_at(checkpoint))
                .collect();
            rows.push(ConvergenceRow {
                algorithm: algorithm.clone(),
                function: function.clone(),
                checkpoint,
                median_gbest: median(&at),
            });
        }
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq)]
pub struct TimingRow {
    pub algorithm: String,
    pub mean_time_s: f64,
    pub runs: usize,
}

/// Mean wall time per algorithm. Algorithms without runs are skipped with a warning.
pub fn timing_report(archive: &Archive) -> Vec<TimingRow> {
    let mut rows = Vec::new();
    for algo in &archive.config.algorithms {
        let id = algo.id();
        let times: Vec<f64> = archive
            .records
            .iter()
            .filter(|r| r.algorithm == id)
            .map(|r| r.result.wall_time.as_secs_f64())
            .collect();
        if times.is_empty() {
            log::warn!("no runs recorded for algorithm '{id}', omitted from timing report");
            continue;
        }
        rows.push(TimingRow {
            algorithm: id.to_string(),
            mean_time_s: times.iter().sum::<f64>() / times.len() as f64,
            runs: times.len(),
        });
    }
    rows
}
