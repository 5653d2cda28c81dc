//! Closed-form benchmark formulas.
//!
//! Formulas follow the printed benchmark table; where a printed formula is
//! internally inconsistent the variant is noted on the enum member.

use std::f64::consts::{E, PI};

use rand::{Rng, RngCore};

/// A base benchmark formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BaseFunction {
    Ackley,
    Alpine,
    Brown,
    BentCigar,
    /// Printed as `1e6 * x1^2 * sum_{i>=2} x_i^2` (a product).
    DiscusProduct,
    /// Printed under the name "Discus"; the formula is Dixon and Price.
    DixonPrice,
    /// Helical valley on three variables.
    FletcherPowell,
    /// Printed with the 1/1400 scale.
    Griewank,
    Penalized1,
    Penalized2,
    Holzman2,
    HgBat,
    HighConditionedElliptic,
    /// Cosine mixture without the constant offset, minimum `-0.1 n`.
    InvertedCosineMixture,
    Levy3,
    Levy,
    LevyMontalvo,
    /// `sum x_i^4 + U[0, 1)`; needs a noise stream.
    Noise,
    /// Product of two cosine sums over `x1` only, as printed.
    Pathological,
    /// Perm function with beta = 0.5.
    Perm,
    /// Block-wise over groups of four variables.
    Powell,
    Quartic,
    Rastrigin,
    /// `sum_i sum_{j<=i} x_j^2`.
    RotatedHyperEllipsoid,
    Rosenbrock,
    Schwefel226,
    Schwefel12,
    Schwefel222,
    Schwefel221,
    Sphere,
    /// `sum floor(x_i + 0.5)^2`.
    Step,
    SumSquares,
    SumPower,
    SumDifferentPowers,
    /// Printed under the name "Wavy 1"; the formula is Zakharov.
    ZakharovForm,
    /// Printed under the name "Zakharov"; the formula is the wavy cosine.
    WavyForm,
    Salomon,
    Weierstrass,
}

const PERM_BETA: f64 = 0.5;
const SCHWEFEL_OPT: f64 = 420.968_746_359_982;

fn penalty(x: f64, a: f64, k: f64, m: i32) -> f64 {
    if x > a {
        k * (x - a).powi(m)
    } else if x < -a {
        k * (-x - a).powi(m)
    } else {
        0.0
    }
}

fn sin2(v: f64) -> f64 {
    let s = v.sin();
    s * s
}

impl BaseFunction {
    pub fn is_stochastic(self) -> bool {
        matches!(self, BaseFunction::Noise)
    }

    /// Whether the formula is defined for `dim` variables.
    pub fn accepts_dimension(self, dim: usize) -> bool {
        match self {
            BaseFunction::FletcherPowell => dim == 3,
            BaseFunction::Powell => dim >= 4 && dim.is_multiple_of(4),
            _ => dim >= 1,
        }
    }

    /// Evaluates the formula. `noise` is only consulted by [`BaseFunction::Noise`].
    pub fn eval(self, x: &[f64], noise: Option<&mut (dyn RngCore + '_)>) -> f64 {
        let n = x.len();
        let nf = n as f64;
        use BaseFunction::*;
        match self {
            Ackley => {
                let sq = x.iter().map(|v| v * v).sum::<f64>() / nf;
                let cs = x.iter().map(|v| (2.0 * PI * v).cos()).sum::<f64>() / nf;
                -20.0 * (-0.2 * sq.sqrt()).exp() - cs.exp() + 20.0 + E
            }
            Alpine => x.iter().map(|v| (v * v.sin() + 0.1 * v).abs()).sum(),
            Brown => x
                .windows(2)
                .map(|w| {
                    let (a, b) = (w[0] * w[0], w[1] * w[1]);
                    a.powf(b + 1.0) + b.powf(a + 1.0)
                })
                .sum(),
            BentCigar => x[0] * x[0] + 1e6 * x[1..].iter().map(|v| v * v).sum::<f64>(),
            DiscusProduct => 1e6 * x[0] * x[0] * x[1..].iter().map(|v| v * v).sum::<f64>(),
            DixonPrice => {
                (x[0] - 1.0).powi(2)
                    + (1..n)
                        .map(|i| (i + 1) as f64 * (2.0 * x[i] * x[i] - x[i - 1]).powi(2))
                        .sum::<f64>()
            }
            FletcherPowell => {
                let (x1, x2, x3) = (x[0], x[1], x[2]);
                let mut ratio = (x2 / x1).atan();
                if ratio.is_nan() {
                    ratio = 0.0;
                }
                let two_pi_theta = if x1 >= 0.0 { ratio } else { PI - ratio };
                let theta = two_pi_theta / (2.0 * PI);
                100.0 * ((x3 - 10.0 * theta).powi(2) + ((x1 * x1 + x2 * x2).sqrt() - 1.0).powi(2))
                    + x3 * x3
            }
            Griewank => {
                let s = x.iter().map(|v| v * v / 1400.0).sum::<f64>();
                let p = x
                    .iter()
                    .enumerate()
                    .map(|(i, v)| (v / ((i + 1) as f64).sqrt()).cos())
                    .product::<f64>();
                1.0 + s - p
            }
            Penalized1 => {
                let y: Vec<f64> = x.iter().map(|v| 1.0 + (v + 1.0) / 4.0).collect();
                let inner = 10.0 * sin2(PI * y[0])
                    + y.windows(2)
                        .map(|w| (w[0] - 1.0).powi(2) * (1.0 + 10.0 * sin2(PI * w[1])))
                        .sum::<f64>()
                    + (y[n - 1] - 1.0).powi(2);
                PI / nf * inner + x.iter().map(|&v| penalty(v, 10.0, 100.0, 4)).sum::<f64>()
            }
            Penalized2 => {
                let inner = sin2(3.0 * PI * x[0])
                    + x.windows(2)
                        .map(|w| (w[0] - 1.0).powi(2) * (1.0 + sin2(3.0 * PI * w[1])))
                        .sum::<f64>()
                    + (x[n - 1] - 1.0).powi(2) * (1.0 + sin2(2.0 * PI * x[n - 1]));
                0.1 * inner + x.iter().map(|&v| penalty(v, 5.0, 100.0, 4)).sum::<f64>()
            }
            Holzman2 | Quartic => x
                .iter()
                .enumerate()
                .map(|(i, v)| (i + 1) as f64 * v.powi(4))
                .sum(),
            HgBat => {
                let s2 = x.iter().map(|v| v * v).sum::<f64>();
                let s1 = x.iter().sum::<f64>();
                (s2 * s2 - s1 * s1).abs().sqrt() + (0.5 * s2 + s1) / nf + 0.5
            }
            HighConditionedElliptic => x
                .iter()
                .enumerate()
                .map(|(i, v)| {
                    let e = if n > 1 { i as f64 / (nf - 1.0) } else { 0.0 };
                    1e6f64.powf(e) * v * v
                })
                .sum(),
            InvertedCosineMixture => {
                let c = x.iter().map(|v| (5.0 * PI * v).cos()).sum::<f64>();
                let s = x.iter().map(|v| v * v).sum::<f64>();
                -(0.1 * c - s)
            }
            Levy3 => x
                .windows(2)
                .map(|w| {
                    let (a, b) = (w[0], w[1]);
                    0.5 + (sin2((100.0 * a * a + b * b).sqrt()) - 0.5)
                        / (1.0 + 0.001 * (a * a - 2.0 * a * b + b * b))
                })
                .sum(),
            Levy => {
                x.windows(2)
                    .map(|w| (w[0] - 1.0).powi(2) * sin2(3.0 * PI * w[1]))
                    .sum::<f64>()
                    + sin2(3.0 * PI * x[0])
                    + (x[n - 1] - 1.0).abs() * (1.0 + sin2(3.0 * PI * x[n - 1]))
            }
            LevyMontalvo => {
                0.1 * sin2(3.0 * PI * x[0])
                    + x.windows(2)
                        .map(|w| (w[0] - 1.0).powi(2) * (1.0 + sin2(3.0 * PI * w[1])))
                        .sum::<f64>()
                    + (x[n - 1] - 1.0).powi(2) * (1.0 + sin2(2.0 * PI * x[n - 1]))
            }
            Noise => {
                let base = x.iter().map(|v| v.powi(4)).sum::<f64>();
                let u: f64 = match noise {
                    Some(rng) => rng.random::<f64>(),
                    None => 0.0,
                };
                base + u
            }
            Pathological => {
                let x1 = x[0];
                let a: f64 = (1..=5)
                    .map(|i| {
                        let i = i as f64;
                        i * ((i - 1.0) * x1 + i).cos()
                    })
                    .sum();
                let b: f64 = (1..=5)
                    .map(|j| {
                        let j = j as f64;
                        j * ((j + 1.0) * x1 + j).cos()
                    })
                    .sum();
                a * b
            }
            Perm => (1..=n)
                .map(|k| {
                    let inner: f64 = x
                        .iter()
                        .enumerate()
                        .map(|(i, v)| {
                            let i = (i + 1) as f64;
                            (i.powi(k as i32) + PERM_BETA) * ((v / i).powi(k as i32) - 1.0)
                        })
                        .sum();
                    inner * inner
                })
                .sum(),
            Powell => x
                .chunks_exact(4)
                .map(|c| {
                    (c[0] + 10.0 * c[1]).powi(2)
                        + 5.0 * (c[2] + c[3]).powi(2)
                        + (c[1] - 2.0 * c[2]).powi(4)
                        + 10.0 * (c[0] - c[3]).powi(4)
                })
                .sum(),
            Rastrigin => x
                .iter()
                .map(|v| v * v - 10.0 * (2.0 * PI * v).cos() + 10.0)
                .sum(),
            RotatedHyperEllipsoid => {
                let mut acc = 0.0;
                let mut total = 0.0;
                for v in x {
                    acc += v * v;
                    total += acc;
                }
                total
            }
            Rosenbrock => x
                .windows(2)
                .map(|w| 100.0 * (w[1] - w[0] * w[0]).powi(2) + (w[0] - 1.0).powi(2))
                .sum(),
            Schwefel226 => x.iter().map(|v| -v * v.abs().sqrt().sin()).sum(),
            Schwefel12 => {
                let mut acc = 0.0;
                let mut total = 0.0;
                for v in x {
                    acc += v;
                    total += acc * acc;
                }
                total
            }
            Schwefel222 => {
                x.iter().map(|v| v.abs()).sum::<f64>() + x.iter().map(|v| v.abs()).product::<f64>()
            }
            Schwefel221 => x.iter().fold(0.0, |m, v| m.max(v.abs())),
            Sphere | SumPower => x.iter().map(|v| v * v).sum(),
            Step => x.iter().map(|v| (v + 0.5).floor().powi(2)).sum(),
            SumSquares => x
                .iter()
                .enumerate()
                .map(|(i, v)| (i + 1) as f64 * v * v)
                .sum(),
            SumDifferentPowers => x
                .iter()
                .enumerate()
                .map(|(i, v)| v.abs().powi(i as i32 + 2))
                .sum(),
            ZakharovForm => {
                let s2 = x.iter().map(|v| v * v).sum::<f64>();
                let lin = x
                    .iter()
                    .enumerate()
                    .map(|(i, v)| 0.5 * (i + 1) as f64 * v)
                    .sum::<f64>();
                s2 + lin.powi(2) + lin.powi(4)
            }
            WavyForm => {
                x.iter()
                    .map(|v| 1.0 - (10.0 * v).cos() * (-0.5 * v * v).exp())
                    .sum::<f64>()
                    / nf
            }
            Salomon => {
                let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
                1.0 - (2.0 * PI * r).cos() + 0.1 * r
            }
            Weierstrass => {
                let term = |v: f64| -> f64 {
                    (0..=20)
                        .map(|k| 0.5f64.powi(k) * (2.0 * PI * 3f64.powi(k) * (v + 0.5)).cos())
                        .sum()
                };
                x.iter().map(|&v| term(v)).sum::<f64>() - nf * term(0.0)
            }
        }
    }

    /// Location of the global minimum, when it has a closed form.
    pub fn optimum(self, dim: usize) -> Option<Vec<f64>> {
        use BaseFunction::*;
        match self {
            FletcherPowell | Pathological | Noise => None,
            Rosenbrock | Penalized2 | Levy | LevyMontalvo => Some(vec![1.0; dim]),
            Penalized1 | HgBat => Some(vec![-1.0; dim]),
            Schwefel226 => Some(vec![SCHWEFEL_OPT; dim]),
            Perm => Some((1..=dim).map(|i| i as f64).collect()),
            DixonPrice => Some(
                (1..=dim)
                    .map(|i| {
                        let p = 2f64.powi(i as i32);
                        2f64.powf(-(p - 2.0) / p)
                    })
                    .collect(),
            ),
            _ => Some(vec![0.0; dim]),
        }
    }
}
