//! Seeded shift and rotation transforms.
//!
//! Transforms are regenerated from `(seed, dim, bounds)`, so only those
//! values need to be stored.

use rand::Rng;
use rand_distr::StandardNormal;

use super::Bounds;
use crate::error::{Error, Result};
use crate::rng::stream;

/// A shift vector and an orthonormal rotation (row-major).
#[derive(Debug, Clone, PartialEq)]
pub struct TransformSpec {
    pub seed: u64,
    pub dim: usize,
    pub bounds: Bounds,
    pub shift: Vec<f64>,
    pub rotation: Vec<f64>,
}

/// Generates a transform for a base function with the given bounds.
///
/// The shift is uniform in the inner 80% of the bounds; the rotation comes
/// from orthonormalizing a matrix of standard-normal entries.
pub fn generate_transform(seed: u64, dim: usize, bounds: Bounds) -> Result<TransformSpec> {
    if dim == 0 {
        return Err(Error::InvalidConfig(
            "transform dimension must be >= 1".into(),
        ));
    }
    let mut rng = stream(seed);
    let span = bounds.upper - bounds.lower;
    let lo = bounds.lower + 0.1 * span;
    let shift: Vec<f64> = (0..dim)
        .map(|_| lo + 0.8 * span * rng.random::<f64>())
        .collect();
    loop {
        let raw: Vec<f64> = (0..dim * dim).map(|_| rng.sample(StandardNormal)).collect();
        if let Some(rotation) = orthonormalize(raw, dim) {
            return Ok(TransformSpec {
                seed,
                dim,
                bounds,
                shift,
                rotation,
            });
        }
    }
}

/// Modified Gram-Schmidt on the rows, applied twice for orthogonality at
/// machine precision. Returns `None` for a numerically singular input.
fn orthonormalize(mut m: Vec<f64>, n: usize) -> Option<Vec<f64>> {
    for i in 0..n {
        for _pass in 0..2 {
            for j in 0..i {
                let dot: f64 = (0..n).map(|k| m[i * n + k] * m[j * n + k]).sum();
                for k in 0..n {
                    m[i * n + k] -= dot * m[j * n + k];
                }
            }
        }
        let norm = (0..n).map(|k| m[i * n + k].powi(2)).sum::<f64>().sqrt();
        if norm < 1e-8 {
            return None;
        }
        for k in 0..n {
            m[i * n + k] /= norm;
        }
    }
    Some(m)
}

impl TransformSpec {
    /// `rotation * (x - shift)`.
    pub fn shift_rotate(&self, x: &[f64]) -> Vec<f64> {
        let z: Vec<f64> = x.iter().zip(&self.shift).map(|(a, s)| a - s).collect();
        self.rotate(&z)
    }

    /// `x - shift`.
    pub fn shift_only(&self, x: &[f64]) -> Vec<f64> {
        x.iter().zip(&self.shift).map(|(a, s)| a - s).collect()
    }

    pub fn rotate(&self, z: &[f64]) -> Vec<f64> {
        let n = self.dim;
        (0..n)
            .map(|i| (0..n).map(|k| self.rotation[i * n + k] * z[k]).sum())
            .collect()
    }

    /// `rotationᵀ * y`.
    pub fn rotate_back(&self, y: &[f64]) -> Vec<f64> {
        let n = self.dim;
        (0..n)
            .map(|k| (0..n).map(|i| self.rotation[i * n + k] * y[i]).sum())
            .collect()
    }

    /// Largest absolute entry of `R Rᵀ - I`.
    pub fn orthonormality_residual(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let dot: f64 = (0..n)
                    .map(|k| self.rotation[i * n + k] * self.rotation[j * n + k])
                    .sum();
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((dot - target).abs());
            }
        }
        worst
    }

    /// Flat text form; the transform is regenerated on parse.
    pub fn to_text(&self) -> String {
        format!(
            "seed {}\ndim {}\nlower {:.16e}\nupper {:.16e}\n",
            self.seed, self.dim, self.bounds.lower, self.bounds.upper
        )
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut seed = None;
        let mut dim = None;
        let mut lower = None;
        let mut upper = None;
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let bad = |m: &str| Error::Malformed {
                row: lineno + 1,
                message: m.to_string(),
            };
            let (key, value) = line
                .split_once(' ')
                .ok_or_else(|| bad("expected 'key value'"))?;
            let value = value.trim();
            match key {
                "seed" => seed = Some(value.parse::<u64>().map_err(|e| bad(&e.to_string()))?),
                "dim" => dim = Some(value.parse::<usize>().map_err(|e| bad(&e.to_string()))?),
                "lower" => lower = Some(value.parse::<f64>().map_err(|e| bad(&e.to_string()))?),
                "upper" => upper = Some(value.parse::<f64>().map_err(|e| bad(&e.to_string()))?),
                other => return Err(bad(&format!("unknown key '{other}'"))),
            }
        }
        let missing = |k: &str| Error::Malformed {
            row: 0,
            message: format!("missing '{k}'"),
        };
        generate_transform(
            seed.ok_or_else(|| missing("seed"))?,
            dim.ok_or_else(|| missing("dim"))?,
            Bounds::new(
                lower.ok_or_else(|| missing("lower"))?,
                upper.ok_or_else(|| missing("upper"))?,
            )?,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b() -> Bounds {
        Bounds::new(-100.0, 100.0).unwrap()
    }

    #[test]
    fn one_dimensional_rotation_is_sign() {
        for seed in 0..20 {
            let t = generate_transform(seed, 1, b()).unwrap();
            assert_eq!(t.rotation[0].abs(), 1.0);
        }
    }

    #[test]
    fn regenerates_identically() {
        let a = generate_transform(77, 12, b()).unwrap();
        let c = generate_transform(77, 12, b()).unwrap();
        assert_eq!(a, c);
        assert_ne!(a, generate_transform(78, 12, b()).unwrap());
    }

    #[test]
    fn orthonormal_within_tolerance() {
        for dim in [2, 5, 30, 50] {
            let t = generate_transform(dim as u64, dim, b()).unwrap();
            assert!(t.orthonormality_residual() < 1e-10, "dim {dim}");
        }
    }

    #[test]
    fn shift_in_inner_band() {
        let t = generate_transform(5, 200, b()).unwrap();
        assert!(t.shift.iter().all(|s| (-80.0..=80.0).contains(s)));
    }

    #[test]
    fn text_round_trip() {
        let t = generate_transform(123, 7, Bounds::new(-5.0, 10.0).unwrap()).unwrap();
        assert_eq!(TransformSpec::from_text(&t.to_text()).unwrap(), t);
        assert!(TransformSpec::from_text("seed x\n").is_err());
        assert!(TransformSpec::from_text("seed 1\n").is_err());
    }
}
