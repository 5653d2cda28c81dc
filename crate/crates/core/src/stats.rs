//! Friedman mean-rank test and Wilcoxon signed-rank test.

use statrs::distribution::{ChiSquared, ContinuousCDF, Normal};

use crate::error::{Error, Result};

/// Results of `n_problems` problems (rows) for `k_algorithms` algorithms (columns).
#[derive(Debug, Clone, PartialEq)]
pub struct RankMatrix {
    values: Vec<Vec<f64>>,
    lower_is_better: bool,
}

impl RankMatrix {
    pub fn new(values: Vec<Vec<f64>>, lower_is_better: bool) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::InvalidMatrix(format!(
                "need at least 2 problems, got {}",
                values.len()
            )));
        }
        let k = values[0].len();
        if k < 2 {
            return Err(Error::InvalidMatrix(format!(
                "need at least 2 algorithms, got {k}"
            )));
        }
        for (i, row) in values.iter().enumerate() {
            if row.len() != k {
                return Err(Error::InvalidMatrix(format!(
                    "row {i} has {} entries, expected {k}",
                    row.len()
                )));
            }
            if row.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidMatrix(format!(
                    "row {i} has a non-finite entry"
                )));
            }
        }
        Ok(Self {
            values,
            lower_is_better,
        })
    }

    pub fn n_problems(&self) -> usize {
        self.values.len()
    }

    pub fn k_algorithms(&self) -> usize {
        self.values[0].len()
    }

    /// Per-row ranks, 1 = best, ties averaged.
    pub fn row_ranks(&self) -> Vec<Vec<f64>> {
        self.values
            .iter()
            .map(|row| {
                if self.lower_is_better {
                    average_ranks(row)
                } else {
                    let negated: Vec<f64> = row.iter().map(|v| -v).collect();
                    average_ranks(&negated)
                }
            })
            .collect()
    }
}

/// Ranks ascending values 1..n, giving ties their average rank.
pub fn average_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && values[order[end]] == values[order[start]] {
            end += 1;
        }
        // positions start..end share ranks start+1..=end
        let avg = (start + 1 + end) as f64 / 2.0;
        for &idx in &order[start..end] {
            ranks[idx] = avg;
        }
        start = end;
    }
    ranks
}

#[derive(Debug, Clone, PartialEq)]
pub struct FriedmanResult {
    pub mean_ranks: Vec<f64>,
    pub chi_square: f64,
    pub df: usize,
    pub p_value: f64,
}

/// Friedman test without tie correction.
pub fn friedman(matrix: &RankMatrix) -> FriedmanResult {
    let n = matrix.n_problems() as f64;
    let k = matrix.k_algorithms();
    let kf = k as f64;
    let mut sums = vec![0.0; k];
    for row in matrix.row_ranks() {
        for (s, r) in sums.iter_mut().zip(row) {
            *s += r;
        }
    }
    let sum_sq: f64 = sums.iter().map(|r| r * r).sum();
    let chi = 12.0 / (n * kf * (kf + 1.0)) * sum_sq - 3.0 * n * (kf + 1.0);
    // rounding can leave a tiny negative value when every row is tied
    let chi_square = if chi.abs() < 1e-9 { 0.0 } else { chi };
    let df = k - 1;
    let p_value = ChiSquared::new(df as f64)
        .map(|d| d.sf(chi_square))
        .unwrap_or(f64::NAN);
    FriedmanResult {
        mean_ranks: sums.iter().map(|s| s / n).collect(),
        chi_square,
        df,
        p_value,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WilcoxonResult {
    pub z: f64,
    pub p_value: f64,
    pub w_plus: f64,
    pub w_minus: f64,
    /// `min(w_plus, w_minus)`.
    pub w: f64,
    /// Non-zero pairs used.
    pub n: usize,
}

/// Minimum number of non-zero differences.
pub const MIN_PAIRS: usize = 5;

/// Wilcoxon signed-rank test on `a - b`, normal approximation.
///
/// `z = (W⁻ - n(n+1)/4) / sqrt(n(n+1)(2n+1)/24)`, so `z < 0` when `a`
/// tends to exceed `b` and swapping the arguments flips the sign.
pub fn wilcoxon_signed_rank(a: &[f64], b: &[f64]) -> Result<WilcoxonResult> {
    if a.len() != b.len() {
        return Err(Error::InvalidMatrix(format!(
            "paired samples differ in length: {} vs {}",
            a.len(),
            b.len()
        )));
    }
    if a.is_empty() {
        return Err(Error::EmptyInput);
    }
    let diffs: Vec<f64> = a
        .iter()
        .zip(b)
        .map(|(x, y)| x - y)
        .filter(|d| *d != 0.0)
        .collect();
    if diffs.is_empty() {
        return Err(Error::DegeneratePairs);
    }
    if diffs.len() < MIN_PAIRS {
        return Err(Error::InsufficientPairs(diffs.len()));
    }
    let abs: Vec<f64> = diffs.iter().map(|d| d.abs()).collect();
    let ranks = average_ranks(&abs);
    let (mut w_plus, mut w_minus) = (0.0, 0.0);
    for (d, r) in diffs.iter().zip(&ranks) {
        if *d > 0.0 {
            w_plus += r;
        } else {
            w_minus += r;
        }
    }
    let n = diffs.len() as f64;
    let mean = n * (n + 1.0) / 4.0;
    let sd = (n * (n + 1.0) * (2.0 * n + 1.0) / 24.0).sqrt();
    let z = (w_minus - mean) / sd;
    let normal = Normal::standard();
    let p_value = (2.0 * normal.sf(z.abs())).min(1.0);
    Ok(WilcoxonResult {
        z,
        p_value,
        w_plus,
        w_minus,
        w: w_plus.min(w_minus),
        n: diffs.len(),
    })
}
