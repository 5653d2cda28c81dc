//! Ebola optimization search and supporting tooling.

pub mod baselines;
pub mod eosa;
pub mod epidemic;
pub mod error;
pub mod harness;
pub mod objectives;
pub mod optimizer;
pub mod rng;
pub mod stats;

pub use error::{Error, Result};
pub use harness::format_float;
pub use objectives::{lookup, registry_list, Bounds, Objective, ObjectiveSpec};
pub use optimizer::OptimizationResult;
