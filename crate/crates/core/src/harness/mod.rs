//! Multi-run experiments and their reporting artifacts.

mod analysis;
mod archive;
mod report;
mod simulate;

use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use analysis::{analyze_summary, write_stats, PairTest, StatsReport, METRICS};
pub use archive::{
    format_float, read_summary, write_archive, write_census_csv, write_history_csv, SummaryRow,
};
pub use report::{
    convergence_table, summarize, timing_report, ConvergenceRow, SummaryStats, TimingRow,
};
pub use simulate::{simulate_propagation, SimulationConfig};

use crate::baselines::{
    baseline_optimize, Baseline, BaselineConfig, DeParams, GaParams, PsoParams,
};
use crate::eosa::{optimize, EosaConfig, EosaParams};
use crate::error::{Error, Result};
use crate::objectives::lookup;
use crate::optimizer::OptimizationResult;
use crate::rng::run_seed;

pub const DEFAULT_CHECKPOINTS: [usize; 7] = [1, 50, 100, 200, 300, 400, 500];

/// One algorithm entry, tagged by `name`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "lowercase")]
pub enum AlgorithmConfig {
    Eosa(EosaParams),
    Pso(PsoParams),
    De(DeParams),
    Ga(GaParams),
}

impl AlgorithmConfig {
    pub fn id(&self) -> &'static str {
        match self {
            AlgorithmConfig::Eosa(_) => "eosa",
            AlgorithmConfig::Pso(_) => "pso",
            AlgorithmConfig::De(_) => "de",
            AlgorithmConfig::Ga(_) => "ga",
        }
    }

    /// Default parameters for an algorithm id.
    pub fn by_id(id: &str) -> Result<Self> {
        match id.to_ascii_lowercase().as_str() {
            "eosa" => Ok(Self::Eosa(EosaParams::default())),
            "pso" => Ok(Self::Pso(PsoParams::default())),
            "de" => Ok(Self::De(DeParams::default())),
            "ga" => Ok(Self::Ga(GaParams::default())),
            other => Err(Error::InvalidConfig(format!(
                "unknown algorithm '{other}' (expected eosa, pso, de or ga)"
            ))),
        }
    }

    /// Runs one optimization of `function` at `dim`.
    pub fn run(
        &self,
        function: &str,
        dim: Option<usize>,
        population_size: usize,
        epochs: usize,
        seed: u64,
    ) -> Result<OptimizationResult> {
        let spec = lookup(function)?;
        let objective = spec.instantiate(dim.unwrap_or(spec.default_dimension))?;
        let baseline = |algorithm| BaselineConfig {
            algorithm,
            population_size,
            epochs,
            seed,
        };
        match self {
            AlgorithmConfig::Eosa(p) => optimize(
                &objective,
                &EosaConfig::from_params(&objective, p, population_size, epochs, seed),
            ),
            AlgorithmConfig::Pso(p) => {
                baseline_optimize(&objective, &baseline(Baseline::Pso(p.clone())))
            }
            AlgorithmConfig::De(p) => {
                baseline_optimize(&objective, &baseline(Baseline::De(p.clone())))
            }
            AlgorithmConfig::Ga(p) => {
                baseline_optimize(&objective, &baseline(Baseline::Ga(p.clone())))
            }
        }
    }
}

fn default_runs() -> usize {
    20
}
fn default_epochs() -> usize {
    500
}
fn default_population() -> usize {
    100
}
/// Output directory used when neither the config nor the caller names one.
pub const DEFAULT_OUTPUT_DIR: &str = "results";

/// An experiment: every algorithm on every function, `runs` times.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub algorithms: Vec<AlgorithmConfig>,
    pub functions: Vec<String>,
    #[serde(default = "default_runs")]
    pub runs: usize,
    #[serde(default = "default_epochs")]
    pub epochs: usize,
    #[serde(default = "default_population")]
    pub population_size: usize,
    #[serde(default)]
    pub master_seed: u64,
    /// Defaults to the standard checkpoints up to `epochs`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub checkpoints: Option<Vec<usize>>,
    /// Overrides each function's default dimension.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dimension: Option<usize>,
    /// Defaults to [`DEFAULT_OUTPUT_DIR`].
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| Error::ConfigParse(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::InvalidConfig(e.to_string()))
    }

    pub fn output_path(&self) -> PathBuf {
        self.output_dir
            .clone()
            .unwrap_or_else(|| PathBuf::from(DEFAULT_OUTPUT_DIR))
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidConfig(m));
        if self.algorithms.is_empty() {
            return bad("no algorithms listed".into());
        }
        if self.functions.is_empty() {
            return bad("no functions listed".into());
        }
        if self.runs == 0 || self.epochs == 0 || self.population_size == 0 {
            return bad("runs, epochs and population_size must be positive".into());
        }
        let mut seen = Vec::new();
        for a in &self.algorithms {
            if seen.contains(&a.id()) {
                return bad(format!("algorithm '{}' listed twice", a.id()));
            }
            seen.push(a.id());
        }
        for f in &self.functions {
            lookup(f)?;
        }
        let cps = self.effective_checkpoints()?;
        if cps.windows(2).any(|w| w[0] >= w[1]) || cps.first() == Some(&0) {
            return bad("checkpoints must be strictly increasing and start at 1 or later".into());
        }
        Ok(())
    }

    /// Explicit checkpoints, or the defaults that fit within `epochs`.
    pub fn effective_checkpoints(&self) -> Result<Vec<usize>> {
        match &self.checkpoints {
            Some(cps) => {
                if let Some(&c) = cps.iter().find(|&&c| c > self.epochs) {
                    return Err(Error::CheckpointBeyondEpochs {
                        checkpoint: c,
                        epochs: self.epochs,
                    });
                }
                Ok(cps.clone())
            }
            None => Ok(DEFAULT_CHECKPOINTS
                .iter()
                .copied()
                .filter(|&c| c <= self.epochs)
                .collect()),
        }
    }
}

/// One completed run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub algorithm: String,
    pub function: String,
    pub run_index: usize,
    pub seed: u64,
    pub result: OptimizationResult,
}

/// All runs of an experiment, in config order.
#[derive(Debug, Clone)]
pub struct Archive {
    pub config: ExperimentConfig,
    pub records: Vec<RunRecord>,
}

impl Archive {
    /// Final gbest values for one (algorithm, function) pair.
    pub fn finals(&self, algorithm: &str, function: &str) -> Vec<f64> {
        self.group(algorithm, function)
            .map(|r| r.result.gbest_fitness)
            .collect()
    }

    pub fn group<'a>(
        &'a self,
        algorithm: &'a str,
        function: &'a str,
    ) -> impl Iterator<Item = &'a RunRecord> + 'a {
        self.records
            .iter()
            .filter(move |r| r.algorithm == algorithm && r.function == function)
    }

    pub fn pairs(&self) -> Vec<(String, String)> {
        let mut out = Vec::new();
        for a in &self.config.algorithms {
            for f in &self.config.functions {
                out.push((a.id().to_string(), f.clone()));
            }
        }
        out
    }
}

/// Runs every (algorithm, function, run) triple on `jobs` worker threads.
///
/// Records come back in config order whatever the thread count.
pub fn execute(config: &ExperimentConfig, jobs: usize) -> Result<Archive> {
    config.validate()?;
    let mut tasks = Vec::new();
    for algo in &config.algorithms {
        for function in &config.functions {
            let canonical = lookup(function)?.id.clone();
            for run_index in 0..config.runs {
                let seed = run_seed(config.master_seed, algo.id(), &canonical, run_index);
                tasks.push((algo, canonical.clone(), run_index, seed));
            }
        }
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))?;
    let records = pool.install(|| {
        tasks
            .into_par_iter()
            .map(|(algo, function, run_index, seed)| {
                log::debug!("{} {function} run {run_index}", algo.id());
                let result = algo.run(
                    &function,
                    config.dimension,
                    config.population_size,
                    config.epochs,
                    seed,
                )?;
                Ok(RunRecord {
                    algorithm: algo.id().to_string(),
                    function,
                    run_index,
                    seed,
                    result,
                })
            })
            .collect::<Result<Vec<_>>>()
    })?;
    let mut config = config.clone();
    config.functions = config
        .functions
        .iter()
        .map(|f| lookup(f).map(|s| s.id.clone()))
        .collect::<Result<_>>()?;
    Ok(Archive { config, records })
}

/// Executes the experiment and writes its archive to the configured output directory.
pub fn run_experiment(config: &ExperimentConfig, jobs: usize) -> Result<Archive> {
    let archive = execute(config, jobs)?;
    write_archive(&archive, &config.output_path())?;
    Ok(archive)
}
