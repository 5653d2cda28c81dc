//! Ebola optimization search.
//!
//! Candidate solutions are individuals in an outbreak. Infected individuals
//! move through the search space relative to the global best and spread
//! infection to susceptibles; the compartment model decides how many leave
//! the infected set each epoch.

use std::time::Instant;

use rand::seq::index::sample;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::epidemic::{
    compartment_derivatives, draw_count, draw_quarantine, draw_removals, CompartmentCensus,
    EpidemicRates,
};
use crate::error::{Error, Result};
use crate::objectives::Objective;
use crate::optimizer::{
    check_box, clamp_into, uniform_point, Evaluator, HistoryEntry, OptimizationResult, Reinjection,
};
use crate::rng::stream;

/// Initial environmental pathogen load.
pub const INITIAL_PE_LOAD: f64 = 1.0;

/// Compartment membership of an individual.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Tag {
    Susceptible,
    Infected,
    Hospitalized,
    Recovered,
    Vaccinated,
    Dead,
    Quarantined,
}

/// A candidate solution.
#[derive(Debug, Clone, PartialEq)]
pub struct Individual {
    pub position: Vec<f64>,
    /// `None` until evaluated.
    pub fitness: Option<f64>,
    pub tag: Tag,
}

impl Individual {
    fn susceptible(position: Vec<f64>) -> Self {
        Self {
            position,
            fitness: None,
            tag: Tag::Susceptible,
        }
    }

    fn fitness_or_inf(&self) -> f64 {
        self.fitness.unwrap_or(f64::INFINITY)
    }
}

/// How the displacement term uses the global best.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MovementMode {
    /// `pos + rho * (rate * u + gbest)`.
    Literal,
    /// `pos + rho * (rate * u + (gbest - pos))`.
    #[default]
    Differential,
}

/// Exploitation or exploration branch for one infected individual.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Neighborhood {
    Short,
    Long,
}

/// Run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct EosaConfig {
    pub population_size: usize,
    pub epochs: usize,
    pub bounds_lower: Vec<f64>,
    pub bounds_upper: Vec<f64>,
    pub srate: f64,
    pub lrate: f64,
    pub rho: f64,
    pub evdincub: f64,
    pub neighborhood_threshold: f64,
    pub rates: EpidemicRates,
    pub seed: u64,
    pub reinject_index_case: bool,
    pub movement: MovementMode,
}

/// Tunable parameters as they appear in experiment configs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EosaParams {
    pub srate: f64,
    pub lrate: f64,
    pub rho: f64,
    pub evdincub: f64,
    pub reinject_index_case: bool,
    pub movement: MovementMode,
    pub rates: EpidemicRates,
}

impl Default for EosaParams {
    fn default() -> Self {
        Self {
            srate: 0.1,
            lrate: 1.0,
            rho: 0.5,
            evdincub: 0.5,
            reinject_index_case: true,
            movement: MovementMode::default(),
            rates: EpidemicRates::default(),
        }
    }
}

impl EosaConfig {
    /// Default parameters over the objective's box.
    pub fn for_objective(objective: &Objective, seed: u64) -> Self {
        Self::from_params(objective, &EosaParams::default(), 100, 500, seed)
    }

    pub fn from_params(
        objective: &Objective,
        params: &EosaParams,
        population_size: usize,
        epochs: usize,
        seed: u64,
    ) -> Self {
        let b = objective.bounds();
        let dim = objective.dimension();
        Self {
            population_size,
            epochs,
            bounds_lower: vec![b.lower; dim],
            bounds_upper: vec![b.upper; dim],
            srate: params.srate,
            lrate: params.lrate,
            rho: params.rho,
            evdincub: params.evdincub,
            neighborhood_threshold: 0.5,
            rates: params.rates,
            seed,
            reinject_index_case: params.reinject_index_case,
            movement: params.movement,
        }
    }

    pub fn dimension(&self) -> usize {
        self.bounds_lower.len()
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidConfig(m.to_string()));
        if self.population_size == 0 {
            return bad("population size must be positive");
        }
        check_box(
            &self.bounds_lower,
            &self.bounds_upper,
            self.bounds_upper.len(),
        )?;
        if self.bounds_lower.is_empty() {
            return bad("bounds must have at least one dimension");
        }
        if !(self.srate > 0.0 && self.srate <= 1.0) {
            return bad("srate must lie in (0, 1]");
        }
        if !self.lrate.is_finite() || self.lrate < self.srate {
            return bad("lrate must be finite and at least srate");
        }
        if !self.rho.is_finite() || self.rho <= 0.0 {
            return bad("rho must be positive");
        }
        if !(0.0..=1.0).contains(&self.evdincub) {
            return bad("evdincub must lie in [0, 1]");
        }
        if !(0.0..=1.0).contains(&self.neighborhood_threshold) {
            return bad("neighborhood threshold must lie in [0, 1]");
        }
        self.rates.validate()
    }
}

/// `population_size` susceptibles placed uniformly in the box.
pub fn initialize_susceptibles<R: Rng + ?Sized>(
    config: &EosaConfig,
    rng: &mut R,
) -> Result<Vec<Individual>> {
    if config.population_size == 0 {
        return Err(Error::InvalidConfig(
            "population size must be positive".into(),
        ));
    }
    check_box(
        &config.bounds_lower,
        &config.bounds_upper,
        config.dimension(),
    )?;
    Ok((0..config.population_size)
        .map(|_| {
            Individual::susceptible(uniform_point(
                &config.bounds_lower,
                &config.bounds_upper,
                rng,
            ))
        })
        .collect())
}

/// Infects one uniformly chosen susceptible and returns its index.
pub fn generate_index_case<R: Rng + ?Sized>(
    population: &mut [Individual],
    rng: &mut R,
) -> Result<usize> {
    let susceptible: Vec<usize> = indices_with(population, Tag::Susceptible);
    if susceptible.is_empty() {
        return Err(Error::PopulationExhausted);
    }
    let k = susceptible[rng.random_range(0..susceptible.len())];
    population[k].tag = Tag::Infected;
    Ok(k)
}

/// New position for a moving infected individual, clamped into the box.
pub fn displace<R: Rng + ?Sized>(
    individual: &Individual,
    gbest: &Individual,
    rate: f64,
    config: &EosaConfig,
    rng: &mut R,
) -> Vec<f64> {
    let mut next: Vec<f64> = individual
        .position
        .iter()
        .zip(&gbest.position)
        .map(|(&p, &g)| {
            let pull = match config.movement {
                MovementMode::Literal => g,
                MovementMode::Differential => g - p,
            };
            p + config.rho * (rate * rng.random::<f64>() + pull)
        })
        .collect();
    clamp_into(&mut next, &config.bounds_lower, &config.bounds_upper);
    next
}

/// Short when a uniform draw falls below `threshold`.
pub fn classify_neighborhood<R: Rng + ?Sized>(rng: &mut R, threshold: f64) -> Neighborhood {
    if rng.random::<f64>() < threshold {
        Neighborhood::Short
    } else {
        Neighborhood::Long
    }
}

/// The strictly fitter of the two; ties keep `gbest`.
pub fn update_best<'a>(cbest: &'a Individual, gbest: &'a Individual) -> &'a Individual {
    if cbest.fitness_or_inf() < gbest.fitness_or_inf() {
        cbest
    } else {
        gbest
    }
}

/// Mutable state of a run between epochs.
#[derive(Debug, Clone)]
pub struct EosaState {
    pub population: Vec<Individual>,
    pub census: CompartmentCensus,
    pub gbest: Individual,
}

impl EosaState {
    pub fn infected_count(&self) -> usize {
        self.population
            .iter()
            .filter(|p| p.tag == Tag::Infected)
            .count()
    }
}

fn indices_with(population: &[Individual], tag: Tag) -> Vec<usize> {
    population
        .iter()
        .enumerate()
        .filter(|(_, p)| p.tag == tag)
        .map(|(i, _)| i)
        .collect()
}

fn pick<R: Rng + ?Sized>(from: &[usize], amount: usize, rng: &mut R) -> Vec<usize> {
    sample(rng, from.len(), amount.min(from.len()))
        .into_iter()
        .map(|i| from[i])
        .collect()
}

fn census_of(population: &[Individual], pe_load: f64) -> CompartmentCensus {
    let mut c = CompartmentCensus {
        pe_load,
        ..Default::default()
    };
    for p in population {
        match p.tag {
            Tag::Susceptible => c.s_count += 1,
            Tag::Infected => c.i_count += 1,
            Tag::Hospitalized => c.h_count += 1,
            Tag::Recovered => c.r_count += 1,
            Tag::Vaccinated => c.v_count += 1,
            Tag::Dead => c.d_count += 1,
            Tag::Quarantined => c.q_count += 1,
        }
    }
    c
}

fn keep_better(cbest: &mut Option<Individual>, candidate: &Individual) {
    let better = match cbest {
        None => true,
        Some(c) => candidate.fitness_or_inf() < c.fitness_or_inf(),
    };
    if better {
        *cbest = Some(candidate.clone());
    }
}

/// Runs one epoch. Returns without changes when no one is infected.
pub fn propagate_epoch<R: Rng + ?Sized>(
    state: &mut EosaState,
    evaluator: &mut Evaluator<'_>,
    config: &EosaConfig,
    rng: &mut R,
) -> Result<()> {
    let infected = indices_with(&state.population, Tag::Infected);
    if infected.is_empty() {
        return Ok(());
    }
    let rates = &config.rates;

    let quarantined = pick(&infected, draw_quarantine(infected.len(), rates, rng), rng);
    for &k in &quarantined {
        state.population[k].tag = Tag::Quarantined;
    }
    let active = indices_with(&state.population, Tag::Infected);

    // infection pressure uses this epoch's S, I, Q and last epoch's H, R, V, D
    let pressure_census = CompartmentCensus {
        s_count: state.population.len() - infected.len(),
        i_count: active.len(),
        q_count: quarantined.len(),
        ..state.census
    };
    let pressure = compartment_derivatives(&pressure_census, rates).di.max(0.0);

    let mut cbest: Option<Individual> = None;

    for &k in &active {
        let rate = match classify_neighborhood(rng, config.neighborhood_threshold) {
            Neighborhood::Short => config.srate,
            Neighborhood::Long => config.lrate,
        };
        let moved = displace(&state.population[k], &state.gbest, rate, config, rng);
        let fitness = evaluator.eval(&moved)?;
        let ind = &mut state.population[k];
        ind.position = moved;
        ind.fitness = Some(fitness);
        keep_better(&mut cbest, ind);

        if rng.random::<f64>() > config.evdincub {
            let susceptible = indices_with(&state.population, Tag::Susceptible);
            let bound = (pressure * active.len() as f64 * rate).round();
            let bound = if bound > 0.0 { bound as usize } else { 0 };
            let count = draw_count(bound.min(susceptible.len()), rng);
            for j in pick(&susceptible, count, rng) {
                state.population[j].tag = Tag::Infected;
                state.population[j].fitness = None;
            }
        }
    }

    // removals come from the infected set after this epoch's new infections
    let mut pool = indices_with(&state.population, Tag::Infected);
    let plan = draw_removals(pool.len(), rates, rng);
    let mut take = |n: usize, tag: Tag, pool: &mut Vec<usize>, rng: &mut R| {
        let chosen = pick(pool, n, rng);
        pool.retain(|i| !chosen.contains(i));
        for &k in &chosen {
            state.population[k].tag = tag;
        }
        chosen
    };
    let hospitalized = take(plan.to_hospital, Tag::Hospitalized, &mut pool, rng);
    take(plan.to_recovered, Tag::Recovered, &mut pool, rng);
    take(plan.to_dead, Tag::Dead, &mut pool, rng);
    let mut h_pool = hospitalized;
    take(plan.to_vaccinated, Tag::Vaccinated, &mut h_pool, rng);

    for ind in state.population.iter_mut() {
        match ind.tag {
            Tag::Quarantined => ind.tag = Tag::Infected,
            Tag::Hospitalized | Tag::Vaccinated | Tag::Recovered => ind.tag = Tag::Susceptible,
            Tag::Dead => {
                *ind = Individual::susceptible(uniform_point(
                    &config.bounds_lower,
                    &config.bounds_upper,
                    rng,
                ))
            }
            Tag::Susceptible | Tag::Infected => {}
        }
    }

    for ind in state.population.iter_mut() {
        if ind.tag == Tag::Infected && ind.fitness.is_none() {
            ind.fitness = Some(evaluator.eval(&ind.position)?);
            keep_better(&mut cbest, ind);
        }
    }

    if let Some(c) = cbest {
        if c.fitness_or_inf() < state.gbest.fitness_or_inf() {
            state.gbest = c;
        }
    }

    let end = census_of(&state.population, state.census.pe_load);
    state.census = CompartmentCensus {
        s_count: end.s_count,
        i_count: end.i_count,
        h_count: plan.to_hospital,
        r_count: plan.to_recovered,
        v_count: plan.to_vaccinated,
        d_count: plan.to_dead,
        q_count: quarantined.len(),
        pe_load: state.census.pe_load,
    };
    Ok(())
}

/// Runs the full search.
pub fn optimize(objective: &Objective, config: &EosaConfig) -> Result<OptimizationResult> {
    config.validate()?;
    if config.dimension() != objective.dimension() {
        return Err(Error::DimensionMismatch {
            expected: objective.dimension(),
            got: config.dimension(),
        });
    }
    let started = Instant::now();
    let mut rng = stream(config.seed);
    let mut evaluator = Evaluator::new(objective, config.seed);

    let mut population = initialize_susceptibles(config, &mut rng)?;
    let index = generate_index_case(&mut population, &mut rng)?;
    population[index].fitness = Some(evaluator.eval(&population[index].position)?);
    let gbest = population[index].clone();
    let initial_fitness = gbest.fitness_or_inf();

    let mut state = EosaState {
        census: census_of(&population, INITIAL_PE_LOAD),
        population,
        gbest,
    };
    let mut history = Vec::with_capacity(config.epochs);
    let mut census_trace = Vec::with_capacity(config.epochs);
    let mut reinjections = Vec::new();

    for epoch in 1..=config.epochs {
        if state.infected_count() == 0 {
            break;
        }
        propagate_epoch(&mut state, &mut evaluator, config, &mut rng)?;
        if state.infected_count() == 0 && config.reinject_index_case {
            let susceptible = indices_with(&state.population, Tag::Susceptible);
            if let Some(&k) = pick(&susceptible, 1, &mut rng).first() {
                state.population[k] = Individual {
                    tag: Tag::Infected,
                    ..state.gbest.clone()
                };
                state.census.s_count -= 1;
                state.census.i_count += 1;
                reinjections.push(Reinjection { epoch });
                log::debug!("epoch {epoch}: infected set empty, re-seeded at gbest");
            }
        }
        history.push(HistoryEntry {
            epoch,
            gbest_fitness: state.gbest.fitness_or_inf(),
        });
        census_trace.push(state.census);
    }

    Ok(OptimizationResult {
        gbest_fitness: state.gbest.fitness_or_inf(),
        gbest_position: state.gbest.position,
        initial_fitness,
        history,
        evaluations: evaluator.count(),
        census_trace,
        reinjections,
        wall_time: started.elapsed(),
    })
}
