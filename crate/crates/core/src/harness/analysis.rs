use std::fs;
use std::path::Path;

use super::archive::{create, format_float, SummaryRow};
use crate::error::{Error, Result};
use crate::stats::{friedman, wilcoxon_signed_rank, FriedmanResult, RankMatrix, WilcoxonResult};

pub const METRICS: [&str; 5] = ["best", "worst", "mean", "median", "stdev"];

/// Wilcoxon comparison of one algorithm against the reference.
#[derive(Debug, Clone, PartialEq)]
pub struct PairTest {
    pub algorithm: String,
    pub reference: String,
    /// Error text when the test is undefined for this pair.
    pub outcome: std::result::Result<WilcoxonResult, String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StatsReport {
    pub metric: String,
    pub algorithms: Vec<String>,
    pub functions: Vec<String>,
    pub friedman: FriedmanResult,
    pub reference: String,
    pub pairs: Vec<PairTest>,
}

impl StatsReport {
    /// Algorithms ordered by mean rank, best first.
    pub fn ranking(&self) -> Vec<(&str, f64)> {
        let mut out: Vec<(&str, f64)> = self
            .algorithms
            .iter()
            .map(String::as_str)
            .zip(self.friedman.mean_ranks.iter().copied())
            .collect();
        out.sort_by(|a, b| a.1.total_cmp(&b.1));
        out
    }
}

fn first_seen(rows: &[SummaryRow], key: impl Fn(&SummaryRow) -> &str) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for r in rows {
        if !out.iter().any(|s| s == key(r)) {
            out.push(key(r).to_string());
        }
    }
    out
}

/// Friedman ranks over functions and Wilcoxon tests against a reference.
///
/// The reference defaults to `eosa` when present, otherwise the best-ranked
/// algorithm. Functions lacking a value for some algorithm are dropped.
pub fn analyze_summary(
    rows: &[SummaryRow],
    metric: &str,
    reference: Option<&str>,
) -> Result<StatsReport> {
    if !METRICS.contains(&metric) {
        return Err(Error::InvalidConfig(format!(
            "unknown metric '{metric}' (expected one of {})",
            METRICS.join(", ")
        )));
    }
    let algorithms = first_seen(rows, |r| &r.algorithm);
    let mut functions = Vec::new();
    let mut matrix = Vec::new();
    for function in first_seen(rows, |r| &r.function) {
        let mut row = Vec::with_capacity(algorithms.len());
        for algorithm in &algorithms {
            let hits: Vec<(usize, &SummaryRow)> = rows
                .iter()
                .enumerate()
                .filter(|(_, r)| &r.algorithm == algorithm && r.function == function)
                .collect();
            if hits.len() > 1 {
                return Err(Error::Malformed {
                    row: hits[1].0 + 2,
                    message: format!("duplicate entry for {algorithm}/{function}"),
                });
            }
            if let Some((_, r)) = hits.first() {
                row.push(r.stats.metric(metric).expect("metric name checked"));
            }
        }
        if row.len() == algorithms.len() {
            functions.push(function);
            matrix.push(row);
        } else {
            log::warn!("function {function} lacks some algorithms, dropped from the analysis");
        }
    }
    let friedman = friedman(&RankMatrix::new(matrix.clone(), true)?);

    let find = |name: &str| algorithms.iter().position(|a| a.eq_ignore_ascii_case(name));
    let ref_idx = match reference {
        Some(name) => find(name).ok_or_else(|| {
            Error::InvalidConfig(format!("reference algorithm '{name}' not in the summary"))
        })?,
        None => find("eosa").unwrap_or_else(|| {
            (0..algorithms.len())
                .min_by(|&a, &b| friedman.mean_ranks[a].total_cmp(&friedman.mean_ranks[b]))
                .expect("at least two algorithms")
        }),
    };
    let column = |j: usize| -> Vec<f64> { matrix.iter().map(|row| row[j]).collect() };
    let reference_values = column(ref_idx);
    let pairs = (0..algorithms.len())
        .filter(|&j| j != ref_idx)
        .map(|j| PairTest {
            algorithm: algorithms[j].clone(),
            reference: algorithms[ref_idx].clone(),
            outcome: wilcoxon_signed_rank(&column(j), &reference_values).map_err(|e| e.to_string()),
        })
        .collect();

    Ok(StatsReport {
        metric: metric.to_string(),
        reference: algorithms[ref_idx].clone(),
        algorithms,
        functions,
        friedman,
        pairs,
    })
}

/// Writes `friedman.csv`, `friedman_test.csv` and `wilcoxon.csv` into `dir`.
pub fn write_stats(report: &StatsReport, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;

    let path = dir.join("friedman.csv");
    let mut w = csv::Writer::from_writer(create(&path)?);
    w.write_record(["algorithm", "mean_rank", "rank"])?;
    for (position, (algorithm, mean_rank)) in report.ranking().into_iter().enumerate() {
        w.write_record([
            algorithm.to_string(),
            format_float(mean_rank),
            (position + 1).to_string(),
        ])?;
    }
    w.flush().map_err(|e| Error::io(&path, e))?;

    let path = dir.join("friedman_test.csv");
    let mut w = csv::Writer::from_writer(create(&path)?);
    w.write_record([
        "metric",
        "n_problems",
        "k_algorithms",
        "chi_square",
        "df",
        "p_value",
    ])?;
    let f = &report.friedman;
    w.write_record([
        report.metric.clone(),
        report.functions.len().to_string(),
        report.algorithms.len().to_string(),
        format_float(f.chi_square),
        f.df.to_string(),
        format_float(f.p_value),
    ])?;
    w.flush().map_err(|e| Error::io(&path, e))?;

    let path = dir.join("wilcoxon.csv");
    let mut w = csv::Writer::from_writer(create(&path)?);
    w.write_record([
        "comparison",
        "n",
        "w_plus",
        "w_minus",
        "w",
        "z",
        "p_value",
        "note",
    ])?;
    for pair in &report.pairs {
        let label = format!("{}-{}", pair.algorithm, pair.reference);
        match &pair.outcome {
            Ok(t) => w.write_record([
                label,
                t.n.to_string(),
                format_float(t.w_plus),
                format_float(t.w_minus),
                format_float(t.w),
                format_float(t.z),
                format_float(t.p_value),
                String::new(),
            ])?,
            Err(note) => w.write_record([
                label,
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                note.clone(),
            ])?,
        }
    }
    w.flush().map_err(|e| Error::io(&path, e))?;
    Ok(())
}
