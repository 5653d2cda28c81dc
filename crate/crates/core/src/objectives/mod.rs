//! Benchmark objective functions.
//!
//! An [`ObjectiveSpec`] describes a function independent of dimension.
//! [`ObjectiveSpec::instantiate`] fixes the dimension, generating any
//! shift/rotation data, and yields an [`Objective`] ready for evaluation.

mod functions;
mod registry;
mod transform;

use std::fmt;

use rand::RngCore;
use serde::{Deserialize, Serialize};

pub use functions::BaseFunction;
pub use registry::{lookup, registry_csv, registry_list};
pub use transform::{generate_transform, TransformSpec};

use crate::error::{Error, Result};

/// A box interval applied to every coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bounds {
    pub lower: f64,
    pub upper: f64,
}

impl Bounds {
    pub fn new(lower: f64, upper: f64) -> Result<Self> {
        if !(lower.is_finite() && upper.is_finite()) || lower > upper {
            return Err(Error::InvalidConfig(format!(
                "invalid bounds [{lower}, {upper}]"
            )));
        }
        Ok(Self { lower, upper })
    }

    pub fn symmetric(r: f64) -> Self {
        Self {
            lower: -r,
            upper: r,
        }
    }

    fn hull(&self, other: &Bounds) -> Bounds {
        Bounds {
            lower: self.lower.min(other.lower),
            upper: self.upper.max(other.upper),
        }
    }
}

/// Landscape classification tags.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Modality {
    Unimodal,
    Multimodal,
    Separable,
    NonSeparable,
}

impl Modality {
    /// Parses the compact type column, e.g. `"MN"` or `"US"`.
    pub fn parse_code(code: &str) -> Vec<Modality> {
        code.chars()
            .filter_map(|c| match c {
                'U' => Some(Modality::Unimodal),
                'M' => Some(Modality::Multimodal),
                'S' => Some(Modality::Separable),
                'N' => Some(Modality::NonSeparable),
                _ => None,
            })
            .collect()
    }

    pub fn code(self) -> char {
        match self {
            Modality::Unimodal => 'U',
            Modality::Multimodal => 'M',
            Modality::Separable => 'S',
            Modality::NonSeparable => 'N',
        }
    }
}

/// Known global minimum value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KnownMinimum {
    Unknown,
    Constant(f64),
    /// Scales with the number of variables.
    PerDimension(f64),
}

impl KnownMinimum {
    pub fn at(self, dim: usize) -> Option<f64> {
        match self {
            KnownMinimum::Unknown => None,
            KnownMinimum::Constant(v) => Some(v),
            KnownMinimum::PerDimension(v) => Some(v * dim as f64),
        }
    }
}

/// Whether a transformed function also rotates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransformMode {
    Shift,
    ShiftRotate,
}

/// How a hybrid splits its input vector.
#[derive(Debug, Clone, PartialEq)]
pub enum Partition {
    /// Equal contiguous blocks; the remainder goes to the last part.
    Equal,
    Explicit(Vec<usize>),
}

impl Partition {
    fn sizes(&self, parts: usize, dim: usize) -> Result<Vec<usize>> {
        match self {
            Partition::Equal => {
                if dim < parts {
                    return Err(Error::PartitionMismatch(format!(
                        "{parts} parts need at least {parts} dimensions, got {dim}"
                    )));
                }
                let base = dim / parts;
                let mut sizes = vec![base; parts];
                sizes[parts - 1] += dim - base * parts;
                Ok(sizes)
            }
            Partition::Explicit(sizes) => {
                if sizes.len() != parts {
                    return Err(Error::PartitionMismatch(format!(
                        "{} block sizes for {parts} parts",
                        sizes.len()
                    )));
                }
                let total: usize = sizes.iter().sum();
                if total != dim || sizes.contains(&0) {
                    return Err(Error::PartitionMismatch(format!(
                        "block sizes {sizes:?} do not cover dimension {dim}"
                    )));
                }
                Ok(sizes.clone())
            }
        }
    }
}

/// Structure of an objective.
#[derive(Debug, Clone, PartialEq)]
pub enum SpecKind {
    Base(BaseFunction),
    Transformed {
        base: Box<ObjectiveSpec>,
        mode: TransformMode,
        seed: u64,
    },
    Hybrid {
        parts: Vec<ObjectiveSpec>,
        partition: Partition,
    },
    Composition {
        parts: Vec<ObjectiveSpec>,
        weights: Vec<f64>,
    },
}

/// A benchmark function and its metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct ObjectiveSpec {
    pub id: String,
    pub name: String,
    pub default_dimension: usize,
    pub bounds: Bounds,
    pub known_minimum: KnownMinimum,
    pub tags: Vec<Modality>,
    pub kind: SpecKind,
}

impl ObjectiveSpec {
    pub fn base(
        id: &str,
        name: &str,
        function: BaseFunction,
        default_dimension: usize,
        bounds: Bounds,
        known_minimum: KnownMinimum,
        type_code: &str,
    ) -> Self {
        Self {
            id: id.to_string(),
            name: name.to_string(),
            default_dimension,
            bounds,
            known_minimum,
            tags: Modality::parse_code(type_code),
            kind: SpecKind::Base(function),
        }
    }

    /// Shifted (and optionally rotated) variant of `base`.
    pub fn transformed(base: &ObjectiveSpec, mode: TransformMode, seed: u64) -> Self {
        let prefix = match mode {
            TransformMode::Shift => "Shifted",
            TransformMode::ShiftRotate => "Shifted and Rotated",
        };
        Self {
            id: format!(
                "{}-{}",
                if mode == TransformMode::Shift {
                    "S"
                } else {
                    "SR"
                },
                base.id
            ),
            name: format!("{prefix} {}", base.name),
            default_dimension: base.default_dimension,
            bounds: base.bounds,
            known_minimum: base.known_minimum,
            tags: Vec::new(),
            kind: SpecKind::Transformed {
                base: Box::new(base.clone()),
                mode,
                seed,
            },
        }
    }

    pub fn with_id(mut self, id: &str, name: &str) -> Self {
        self.id = id.to_string();
        self.name = name.to_string();
        self
    }

    pub fn with_bounds(mut self, bounds: Bounds) -> Self {
        self.bounds = bounds;
        self
    }

    pub fn with_default_dimension(mut self, dim: usize) -> Self {
        self.default_dimension = dim;
        self
    }

    pub fn with_tags(mut self, code: &str) -> Self {
        self.tags = Modality::parse_code(code);
        self
    }

    pub fn tag_code(&self) -> String {
        self.tags.iter().map(|t| t.code()).collect()
    }

    pub fn is_stochastic(&self) -> bool {
        match &self.kind {
            SpecKind::Base(f) => f.is_stochastic(),
            SpecKind::Transformed { base, .. } => base.is_stochastic(),
            SpecKind::Hybrid { parts, .. } | SpecKind::Composition { parts, .. } => {
                parts.iter().any(|p| p.is_stochastic())
            }
        }
    }

    /// Fixes the dimension and builds an evaluator.
    pub fn instantiate(&self, dim: usize) -> Result<Objective> {
        let node = self.build_node(dim)?;
        Ok(Objective {
            spec: self.clone(),
            dim,
            node,
        })
    }

    /// Instantiates at the default dimension.
    pub fn instantiate_default(&self) -> Result<Objective> {
        self.instantiate(self.default_dimension)
    }

    /// Convenience: instantiate at `x.len()` and evaluate.
    ///
    /// Regenerates transforms on every call; use [`Objective`] in loops.
    pub fn evaluate(&self, x: &[f64]) -> Result<f64> {
        self.instantiate(x.len())?.evaluate(x)
    }

    fn build_node(&self, dim: usize) -> Result<Node> {
        if dim == 0 {
            return Err(Error::DimensionMismatch {
                expected: self.default_dimension,
                got: 0,
            });
        }
        Ok(match &self.kind {
            SpecKind::Base(f) => {
                if !f.accepts_dimension(dim) {
                    return Err(Error::DimensionMismatch {
                        expected: self.default_dimension,
                        got: dim,
                    });
                }
                Node::Base(*f, self.known_minimum.at(dim))
            }
            SpecKind::Transformed { base, mode, seed } => {
                let node = base.build_node(dim)?;
                let anchor = node.optimum(dim).filter(|c| c.iter().any(|v| *v != 0.0));
                Node::Transformed {
                    base: Box::new(node),
                    transform: generate_transform(*seed, dim, base.bounds)?,
                    mode: *mode,
                    anchor,
                }
            }
            SpecKind::Hybrid { parts, partition } => {
                let sizes = partition.sizes(parts.len(), dim)?;
                let nodes = parts
                    .iter()
                    .zip(&sizes)
                    .map(|(p, &d)| Ok((p.build_node(d)?, d)))
                    .collect::<Result<Vec<_>>>()?;
                Node::Hybrid { parts: nodes }
            }
            SpecKind::Composition { parts, weights } => Node::Composition {
                parts: parts
                    .iter()
                    .map(|p| p.build_node(dim))
                    .collect::<Result<Vec<_>>>()?,
                weights: weights.clone(),
            },
        })
    }
}

/// Builds a hybrid: the input is split into contiguous blocks and each part
/// is evaluated on its own block; the value is the sum.
pub fn hybrid_compose(parts: &[ObjectiveSpec], partition: Partition) -> Result<ObjectiveSpec> {
    if parts.len() < 2 {
        return Err(Error::PartitionMismatch(
            "a hybrid needs at least two parts".into(),
        ));
    }
    let default_dimension = match &partition {
        Partition::Explicit(sizes) => {
            partition.sizes(parts.len(), sizes.iter().sum())?;
            sizes.iter().sum()
        }
        Partition::Equal => 30.max(parts.len()),
    };
    let known_minimum = parts
        .iter()
        .map(|p| match p.known_minimum {
            KnownMinimum::Constant(v) => Some(v),
            _ => None,
        })
        .sum::<Option<f64>>()
        .map_or(KnownMinimum::Unknown, KnownMinimum::Constant);
    let bounds = parts[1..]
        .iter()
        .fold(parts[0].bounds, |b, p| b.hull(&p.bounds));
    Ok(ObjectiveSpec {
        id: format!(
            "H[{}]",
            parts
                .iter()
                .map(|p| p.id.as_str())
                .collect::<Vec<_>>()
                .join(",")
        ),
        name: "Hybrid".into(),
        default_dimension,
        bounds,
        known_minimum,
        tags: Vec::new(),
        kind: SpecKind::Hybrid {
            parts: parts.to_vec(),
            partition,
        },
    })
}

/// Builds a weighted composition over the full input vector.
pub fn composition_compose(parts: &[ObjectiveSpec], weights: &[f64]) -> Result<ObjectiveSpec> {
    if parts.is_empty() || weights.len() != parts.len() {
        return Err(Error::WeightMismatch(format!(
            "{} weights for {} parts",
            weights.len(),
            parts.len()
        )));
    }
    if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
        return Err(Error::WeightMismatch("weights must be non-negative".into()));
    }
    let total: f64 = weights.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::WeightMismatch(format!(
            "weights sum to {total}, not 1"
        )));
    }
    let bounds = parts[1..]
        .iter()
        .fold(parts[0].bounds, |b, p| b.hull(&p.bounds));
    Ok(ObjectiveSpec {
        id: format!(
            "C[{}]",
            parts
                .iter()
                .map(|p| p.id.as_str())
                .collect::<Vec<_>>()
                .join(",")
        ),
        name: "Composition".into(),
        default_dimension: parts[0].default_dimension,
        bounds,
        // filled in per-dimension by the instantiated objective
        known_minimum: KnownMinimum::Unknown,
        tags: Vec::new(),
        kind: SpecKind::Composition {
            parts: parts.to_vec(),
            weights: weights.to_vec(),
        },
    })
}

/// Composition with equal weights.
pub fn composition_equal(parts: &[ObjectiveSpec]) -> Result<ObjectiveSpec> {
    let w = vec![1.0 / parts.len() as f64; parts.len()];
    composition_compose(parts, &w)
}

#[derive(Debug, Clone)]
enum Node {
    Base(BaseFunction, Option<f64>),
    Transformed {
        base: Box<Node>,
        transform: TransformSpec,
        mode: TransformMode,
        /// Base minimizer, added back so the transformed minimizer is the shift itself.
        anchor: Option<Vec<f64>>,
    },
    Hybrid {
        parts: Vec<(Node, usize)>,
    },
    Composition {
        parts: Vec<Node>,
        weights: Vec<f64>,
    },
}

impl Node {
    fn eval(&self, x: &[f64], noise: &mut Option<&mut dyn RngCore>) -> f64 {
        match self {
            Node::Base(f, _) => f.eval(x, noise.as_deref_mut()),
            Node::Transformed {
                base,
                transform,
                mode,
                anchor,
            } => {
                let mut y = match mode {
                    TransformMode::Shift => transform.shift_only(x),
                    TransformMode::ShiftRotate => transform.shift_rotate(x),
                };
                if let Some(c) = anchor {
                    y.iter_mut().zip(c).for_each(|(v, c)| *v += c);
                }
                base.eval(&y, noise)
            }
            Node::Hybrid { parts } => {
                let mut offset = 0;
                let mut total = 0.0;
                for (node, d) in parts {
                    total += node.eval(&x[offset..offset + d], noise);
                    offset += d;
                }
                total
            }
            Node::Composition { parts, weights } => parts
                .iter()
                .zip(weights)
                .map(|(node, w)| w * node.eval(x, noise))
                .sum(),
        }
    }

    fn is_stochastic(&self) -> bool {
        match self {
            Node::Base(f, _) => f.is_stochastic(),
            Node::Transformed { base, .. } => base.is_stochastic(),
            Node::Hybrid { parts } => parts.iter().any(|(n, _)| n.is_stochastic()),
            Node::Composition { parts, .. } => parts.iter().any(Node::is_stochastic),
        }
    }

    fn optimum(&self, dim: usize) -> Option<Vec<f64>> {
        match self {
            Node::Base(f, _) => f.optimum(dim),
            Node::Transformed {
                base, transform, ..
            } => {
                base.optimum(dim)?;
                Some(transform.shift.clone())
            }
            Node::Hybrid { parts } => {
                let mut out = Vec::with_capacity(dim);
                for (node, d) in parts {
                    out.extend(node.optimum(*d)?);
                }
                Some(out)
            }
            Node::Composition { parts, .. } => {
                let first = parts[0].optimum(dim)?;
                for node in &parts[1..] {
                    if node.optimum(dim)? != first {
                        return None;
                    }
                }
                Some(first)
            }
        }
    }

    fn minimum(&self, dim: usize) -> Option<f64> {
        match self {
            Node::Base(_, m) => *m,
            Node::Transformed { base, .. } => base.minimum(dim),
            Node::Hybrid { parts } => parts.iter().map(|(n, d)| n.minimum(*d)).sum(),
            Node::Composition { parts, weights } => {
                // a weighted sum of minima is only attained when all parts share the minimizer
                self.optimum(dim)?;
                parts
                    .iter()
                    .zip(weights)
                    .map(|(n, w)| n.minimum(dim).map(|v| v * w))
                    .sum()
            }
        }
    }
}

/// A benchmark function fixed to one dimension.
#[derive(Debug, Clone)]
pub struct Objective {
    spec: ObjectiveSpec,
    dim: usize,
    node: Node,
}

impl Objective {
    pub fn spec(&self) -> &ObjectiveSpec {
        &self.spec
    }

    pub fn id(&self) -> &str {
        &self.spec.id
    }

    pub fn dimension(&self) -> usize {
        self.dim
    }

    pub fn bounds(&self) -> Bounds {
        self.spec.bounds
    }

    pub fn is_stochastic(&self) -> bool {
        self.node.is_stochastic()
    }

    /// Evaluates a deterministic objective.
    pub fn evaluate(&self, x: &[f64]) -> Result<f64> {
        self.check_dim(x)?;
        if self.is_stochastic() {
            return Err(Error::NeedsNoiseStream(self.spec.id.clone()));
        }
        Ok(self.node.eval(x, &mut None))
    }

    /// Evaluates any objective; stochastic terms draw from `noise`.
    pub fn evaluate_with_noise(&self, x: &[f64], noise: &mut dyn RngCore) -> Result<f64> {
        self.check_dim(x)?;
        Ok(self.node.eval(x, &mut Some(noise)))
    }

    fn check_dim(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: x.len(),
            });
        }
        Ok(())
    }

    /// Location of the global minimum, when known.
    pub fn optimum_location(&self) -> Option<Vec<f64>> {
        self.node.optimum(self.dim)
    }

    /// Known minimum value at this dimension.
    pub fn known_minimum(&self) -> Option<f64> {
        self.node.minimum(self.dim)
    }

    /// True when `x` lies inside the box bounds.
    pub fn in_bounds(&self, x: &[f64]) -> bool {
        let b = self.spec.bounds;
        x.iter().all(|v| (b.lower..=b.upper).contains(v))
    }
}

impl fmt::Display for ObjectiveSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({})", self.id, self.name)
    }
}
