use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::eosa::{optimize, EosaConfig, EosaParams};
use crate::epidemic::{CompartmentCensus, EpidemicRates};
use crate::error::{Error, Result};
use crate::objectives::lookup;

/// Objective driving the population in a pure propagation run.
const TRIVIAL_OBJECTIVE: &str = "F34";
const TRIVIAL_DIMENSION: usize = 2;

/// Settings for a propagation-only run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimulationConfig {
    pub rates: EpidemicRates,
    pub population_size: usize,
    pub epochs: usize,
    pub seed: u64,
    pub evdincub: f64,
    pub reinject_index_case: bool,
}

impl Default for SimulationConfig {
    fn default() -> Self {
        let params = EosaParams::default();
        Self {
            rates: params.rates,
            population_size: 100,
            epochs: 50,
            seed: 0,
            evdincub: params.evdincub,
            reinject_index_case: params.reinject_index_case,
        }
    }
}

impl SimulationConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::ConfigParse(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml(&text)
    }
}

/// Census after every epoch of an EOSA run on a fixed low-dimensional sphere.
pub fn simulate_propagation(config: &SimulationConfig) -> Result<Vec<CompartmentCensus>> {
    if config.population_size < 2 {
        return Err(Error::InvalidConfig(format!(
            "population size must be at least 2, got {}",
            config.population_size
        )));
    }
    if config.epochs == 0 {
        return Err(Error::InvalidConfig("epochs must be positive".into()));
    }
    let objective = lookup(TRIVIAL_OBJECTIVE)?.instantiate(TRIVIAL_DIMENSION)?;
    let params = EosaParams {
        rates: config.rates,
        evdincub: config.evdincub,
        reinject_index_case: config.reinject_index_case,
        ..EosaParams::default()
    };
    let eosa = EosaConfig::from_params(
        &objective,
        &params,
        config.population_size,
        config.epochs,
        config.seed,
    );
    Ok(optimize(&objective, &eosa)?.census_trace)
}
