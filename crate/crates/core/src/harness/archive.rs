use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Serialize;

use super::report::{convergence_table, summarize, timing_report, SummaryStats};
use super::Archive;
use crate::epidemic::CompartmentCensus;
use crate::error::{Error, Result};
use crate::optimizer::OptimizationResult;

/// 17 significant digits, enough to round-trip any `f64`.
pub fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

/// Writes `epoch,gbest_fitness`, one row per epoch `1..=epochs`.
///
/// Runs that stopped early repeat their last value.
pub fn write_history_csv<W: Write>(
    out: W,
    result: &OptimizationResult,
    epochs: usize,
) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["epoch", "gbest_fitness"])?;
    for epoch in 1..=epochs {
        w.write_record([epoch.to_string(), format_float(result.fitness_at(epoch))])?;
    }
    w.flush().map_err(|e| Error::io("<history csv>", e))?;
    Ok(())
}

/// Writes `epoch,S,I,H,R,V,D,Q`, one row per census.
pub fn write_census_csv<W: Write>(out: W, trace: &[CompartmentCensus]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["epoch", "S", "I", "H", "R", "V", "D", "Q"])?;
    for (i, c) in trace.iter().enumerate() {
        w.write_record(
            [
                i + 1,
                c.s_count,
                c.i_count,
                c.h_count,
                c.r_count,
                c.v_count,
                c.d_count,
                c.q_count,
            ]
            .map(|v| v.to_string()),
        )?;
    }
    w.flush().map_err(|e| Error::io("<census csv>", e))?;
    Ok(())
}

/// One row of a summary CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub algorithm: String,
    pub function: String,
    pub stats: SummaryStats,
    pub mean_time_s: f64,
}

const SUMMARY_HEADER: [&str; 8] = [
    "algorithm",
    "function",
    "best",
    "worst",
    "mean",
    "median",
    "stdev",
    "mean_time_s",
];

fn write_summary<W: Write>(out: W, rows: &[SummaryRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SUMMARY_HEADER)?;
    for r in rows {
        let s = &r.stats;
        w.write_record([
            r.algorithm.clone(),
            r.function.clone(),
            format_float(s.best),
            format_float(s.worst),
            format_float(s.mean),
            format_float(s.median),
            format_float(s.stdev),
            format_float(r.mean_time_s),
        ])?;
    }
    w.flush().map_err(|e| Error::io("<summary csv>", e))?;
    Ok(())
}

/// Parses a summary CSV. Row numbers in errors count the header as row 1.
pub fn read_summary(path: &Path) -> Result<Vec<SummaryRow>> {
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new().flexible(true).from_reader(file);
    let header = reader.headers()?.clone();
    let missing: Vec<&str> = SUMMARY_HEADER
        .iter()
        .take(7)
        .filter(|h| !header.iter().any(|c| c.trim() == **h))
        .copied()
        .collect();
    if !missing.is_empty() {
        return Err(Error::Malformed {
            row: 1,
            message: format!("header lacks column(s) {}", missing.join(", ")),
        });
    }
    let col = |name: &str| header.iter().position(|c| c.trim() == name);
    let mut rows = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let row = i + 2;
        let record = record.map_err(|e| Error::Malformed {
            row,
            message: e.to_string(),
        })?;
        let text = |name: &str| -> Result<String> {
            col(name)
                .and_then(|c| record.get(c))
                .map(|s| s.trim().to_string())
                .filter(|s| !s.is_empty())
                .ok_or_else(|| Error::Malformed {
                    row,
                    message: format!("missing value for '{name}'"),
                })
        };
        let number = |name: &str| -> Result<f64> {
            let raw = text(name)?;
            raw.parse::<f64>().map_err(|_| Error::Malformed {
                row,
                message: format!("'{raw}' in column '{name}' is not a number"),
            })
        };
        let mean_time_s = match col("mean_time_s").and_then(|c| record.get(c)) {
            Some(s) if !s.trim().is_empty() => number("mean_time_s")?,
            _ => f64::NAN,
        };
        rows.push(SummaryRow {
            algorithm: text("algorithm")?,
            function: text("function")?,
            stats: SummaryStats {
                best: number("best")?,
                worst: number("worst")?,
                mean: number("mean")?,
                median: number("median")?,
                stdev: number("stdev")?,
            },
            mean_time_s,
        });
    }
    if rows.is_empty() {
        return Err(Error::EmptyInput);
    }
    Ok(rows)
}

#[derive(Serialize)]
struct Manifest<'a> {
    tool: &'static str,
    version: &'static str,
    config: &'a super::ExperimentConfig,
    runs: Vec<ManifestRun<'a>>,
}

#[derive(Serialize)]
struct ManifestRun<'a> {
    algorithm: &'a str,
    function: &'a str,
    run: usize,
    /// Hex, since TOML integers are signed.
    seed: String,
    evaluations: u64,
}

pub(super) fn create(path: &Path) -> Result<fs::File> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    fs::File::create(path).map_err(|e| Error::io(path, e))
}

fn with_path(path: &Path, r: Result<()>) -> Result<()> {
    r.map_err(|e| match e {
        Error::Io { source, .. } => Error::io(path, source),
        other => other,
    })
}

/// Writes run, census, summary, convergence and timing CSVs, then the manifest.
pub fn write_archive(archive: &Archive, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let epochs = archive.config.epochs;

    for r in &archive.records {
        let path = dir
            .join("runs")
            .join(&r.algorithm)
            .join(&r.function)
            .join(format!("run_{:03}.csv", r.run_index));
        with_path(&path, write_history_csv(create(&path)?, &r.result, epochs))?;
        if !r.result.census_trace.is_empty() {
            let path = dir
                .join("census")
                .join(&r.function)
                .join(format!("run_{:03}.csv", r.run_index));
            with_path(
                &path,
                write_census_csv(create(&path)?, &r.result.census_trace),
            )?;
        }
    }

    let mut summary = Vec::new();
    for (algorithm, function) in archive.pairs() {
        let runs: Vec<_> = archive.group(&algorithm, &function).collect();
        let finals: Vec<f64> = runs.iter().map(|r| r.result.gbest_fitness).collect();
        let Ok(stats) = summarize(&finals) else {
            log::warn!("no runs for {algorithm}/{function}, omitted from summary");
            continue;
        };
        let time: f64 = runs.iter().map(|r| r.result.wall_time.as_secs_f64()).sum();
        let mean_time_s = time / runs.len() as f64;
        summary.push(SummaryRow {
            algorithm,
            function,
            stats,
            mean_time_s,
        });
    }
    let path = dir.join("summary.csv");
    with_path(&path, write_summary(create(&path)?, &summary))?;

    let checkpoints = archive.config.effective_checkpoints()?;
    let path = dir.join("convergence.csv");
    let mut w = csv::Writer::from_writer(create(&path)?);
    w.write_record(["algorithm", "function", "checkpoint", "median_gbest"])?;
    for row in convergence_table(archive, &checkpoints)? {
        w.write_record([
            row.algorithm,
            row.function,
            row.checkpoint.to_string(),
            format_float(row.median_gbest),
        ])?;
    }
    w.flush().map_err(|e| Error::io(&path, e))?;

    let path = dir.join("timing.csv");
    let mut w = csv::Writer::from_writer(create(&path)?);
    w.write_record(["algorithm", "mean_time_s", "runs"])?;
    for row in timing_report(archive) {
        w.write_record([
            row.algorithm,
            format_float(row.mean_time_s),
            row.runs.to_string(),
        ])?;
    }
    w.flush().map_err(|e| Error::io(&path, e))?;

    let manifest = Manifest {
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        config: &archive.config,
        runs: archive
            .records
            .iter()
            .map(|r| ManifestRun {
                algorithm: &r.algorithm,
                function: &r.function,
                run: r.run_index,
                seed: format!("{:#018x}", r.seed),
                evaluations: r.result.evaluations,
            })
            .collect(),
    };
    let text = toml::to_string(&manifest).map_err(|e| Error::InvalidConfig(e.to_string()))?;
    let path = dir.join("manifest.toml");
    fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
    Ok(())
}
