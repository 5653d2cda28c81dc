//! `eosa`: run optimizations, experiments, propagation simulations and
//! rank statistics from the command line.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use eosa_core::eosa::MovementMode;
use eosa_core::harness::{
    analyze_summary, read_summary, run_experiment, simulate_propagation, write_census_csv,
    write_history_csv, write_stats, AlgorithmConfig, ExperimentConfig, SimulationConfig,
    DEFAULT_OUTPUT_DIR,
};
use eosa_core::objectives::registry_csv;
use eosa_core::{format_float, lookup, Error, Result};

#[derive(Parser)]
#[command(name = "eosa", version, about = "Ebola optimization search toolkit")]
struct Cli {
    /// Default directory for outputs.
    #[arg(long, global = true, env = "EOSA_OUTPUT_DIR")]
    output_dir: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one optimization and write its convergence CSV.
    Optimize(OptimizeArgs),
    /// Run every algorithm on every function from a TOML config.
    Experiment(ExperimentArgs),
    /// Trace compartment sizes of an outbreak on a trivial objective.
    Simulate(SimulateArgs),
    /// Friedman ranks and Wilcoxon tests over a summary CSV.
    Stats(StatsArgs),
    /// Print the benchmark registry as CSV.
    ListFunctions,
}

#[derive(Args)]
struct OptimizeArgs {
    #[arg(long)]
    function: String,
    #[arg(long, default_value = "eosa")]
    algo: String,
    /// Defaults to the function's registered dimension.
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long, default_value_t = 500)]
    epochs: usize,
    #[arg(long, default_value_t = 100)]
    psize: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// EOSA displacement rule: differential or literal.
    #[arg(long)]
    movement: Option<String>,
    /// Convergence CSV path.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ExperimentArgs {
    #[arg(long)]
    config: PathBuf,
    /// Worker threads. Outputs do not depend on this value.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[arg(long)]
    runs: Option<usize>,
    #[arg(long)]
    epochs: Option<usize>,
    #[arg(long)]
    master_seed: Option<u64>,
    /// Archive directory, overriding the config file.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateArgs {
    /// TOML file with simulation settings and a `[rates]` table.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    psize: Option<usize>,
    #[arg(long)]
    epochs: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    evdincub: Option<f64>,
    /// Rate override as NAME=VALUE, e.g. `--rate xi=0`. Repeatable.
    #[arg(long = "rate", value_name = "NAME=VALUE")]
    rates: Vec<String>,
    /// Stop when the infected set dies out instead of re-seeding it.
    #[arg(long)]
    no_reinject: bool,
    /// Census CSV path.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct StatsArgs {
    #[arg(long)]
    summary: PathBuf,
    /// Summary column to rank: best, worst, mean, median or stdev.
    #[arg(long, default_value = "mean")]
    metric: String,
    /// Algorithm the Wilcoxon tests compare against.
    #[arg(long)]
    reference: Option<String>,
    /// Directory for friedman.csv, friedman_test.csv and wilcoxon.csv.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn output_root(cli_dir: &Option<PathBuf>) -> PathBuf {
    cli_dir
        .clone()
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUTPUT_DIR))
}

fn create_file(path: &Path) -> Result<fs::File> {
    let io_err = |p: &Path, source| Error::Io {
        path: p.display().to_string(),
        source,
    };
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    }
    fs::File::create(path).map_err(|e| io_err(path, e))
}

fn optimize(args: OptimizeArgs, root: PathBuf) -> Result<()> {
    let spec = lookup(&args.function)?;
    let mut algorithm = AlgorithmConfig::by_id(&args.algo)?;
    if let Some(m) = &args.movement {
        let AlgorithmConfig::Eosa(params) = &mut algorithm else {
            return Err(Error::InvalidConfig(
                "--movement only applies to --algo eosa".into(),
            ));
        };
        params.movement = match m.to_ascii_lowercase().as_str() {
            "differential" => MovementMode::Differential,
            "literal" => MovementMode::Literal,
            other => {
                return Err(Error::InvalidConfig(format!(
                    "unknown movement '{other}' (expected differential or literal)"
                )))
            }
        };
    }
    let result = algorithm.run(&spec.id, args.dim, args.psize, args.epochs, args.seed)?;
    let out = args.out.unwrap_or_else(|| {
        root.join(format!(
            "{}_{}_seed{}.csv",
            algorithm.id(),
            spec.id,
            args.seed
        ))
    });
    write_history_csv(create_file(&out)?, &result, args.epochs)?;
    println!("{}", format_float(result.gbest_fitness));
    log::info!("wrote {}", out.display());
    Ok(())
}

fn experiment(args: ExperimentArgs, cli_dir: &Option<PathBuf>) -> Result<()> {
    let mut config = ExperimentConfig::load(&args.config)?;
    if let Some(runs) = args.runs {
        config.runs = runs;
    }
    if let Some(epochs) = args.epochs {
        config.epochs = epochs;
    }
    if let Some(seed) = args.master_seed {
        config.master_seed = seed;
    }
    if args.out.is_some() {
        config.output_dir = args.out;
    } else if config.output_dir.is_none() {
        config.output_dir = cli_dir.clone();
    }
    config.validate()?;
    let archive = run_experiment(&config, args.jobs)?;
    println!(
        "{} runs written to {}",
        archive.records.len(),
        config.output_path().display()
    );
    Ok(())
}

fn parse_rate(text: &str) -> Result<(&str, f64)> {
    let bad = || Error::InvalidConfig(format!("rate override '{text}' is not NAME=VALUE"));
    let (name, value) = text.split_once('=').ok_or_else(bad)?;
    let value = value.trim().parse::<f64>().map_err(|_| bad())?;
    Ok((name, value))
}

fn simulate(args: SimulateArgs, root: PathBuf) -> Result<()> {
    let mut config = match &args.config {
        Some(path) => SimulationConfig::load(path)?,
        None => SimulationConfig::default(),
    };
    if let Some(v) = args.psize {
        config.population_size = v;
    }
    if let Some(v) = args.epochs {
        config.epochs = v;
    }
    if let Some(v) = args.seed {
        config.seed = v;
    }
    if let Some(v) = args.evdincub {
        config.evdincub = v;
    }
    if args.no_reinject {
        config.reinject_index_case = false;
    }
    for text in &args.rates {
        let (name, value) = parse_rate(text)?;
        config.rates.set(name, value)?;
    }
    let trace = simulate_propagation(&config)?;
    let out = args
        .out
        .unwrap_or_else(|| root.join(format!("census_seed{}.csv", config.seed)));
    write_census_csv(create_file(&out)?, &trace)?;
    println!("{} epochs written to {}", trace.len(), out.display());
    Ok(())
}

fn stats(args: StatsArgs, root: PathBuf) -> Result<()> {
    let rows = read_summary(&args.summary)?;
    let report = analyze_summary(&rows, &args.metric, args.reference.as_deref())?;
    let out = args.out.unwrap_or(root);
    write_stats(&report, &out)?;
    let f = &report.friedman;
    println!(
        "friedman: chi2 = {:.6}, df = {}, p = {:.6e} over {} functions",
        f.chi_square,
        f.df,
        f.p_value,
        report.functions.len()
    );
    for (position, (algorithm, rank)) in report.ranking().iter().enumerate() {
        println!("{:>2}. {algorithm:<10} {rank:.4}", position + 1);
    }
    Ok(())
}

fn list_functions() -> Result<()> {
    io::stdout()
        .write_all(registry_csv().as_bytes())
        .map_err(|e| Error::Io {
            path: "<stdout>".into(),
            source: e,
        })
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let root = output_root(&cli.output_dir);
    let outcome = match cli.command {
        Command::Optimize(a) => optimize(a, root),
        Command::Experiment(a) => experiment(a, &cli.output_dir),
        Command::Simulate(a) => simulate(a, root),
        Command::Stats(a) => stats(a, root),
        Command::ListFunctions => list_functions(),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_user_error() {
                ExitCode::from(2)
            } else {
                ExitCode::FAILURE
            }
        }
    }
}
