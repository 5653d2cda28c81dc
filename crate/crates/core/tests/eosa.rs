use eosa_core::eosa::{
    classify_neighborhood, displace, generate_index_case, initialize_susceptibles, optimize,
    propagate_epoch, update_best, EosaConfig, EosaState, Individual, MovementMode, Neighborhood,
    Tag, INITIAL_PE_LOAD,
};
use eosa_core::epidemic::{CompartmentCensus, EpidemicRates};
use eosa_core::optimizer::Evaluator;
use eosa_core::rng::stream;
use eosa_core::{lookup, Error, Objective};
use rand::RngCore;

fn sphere(dim: usize) -> Objective {
    lookup("F34").unwrap().instantiate(dim).unwrap()
}

fn config(dim: usize, lo: f64, hi: f64) -> EosaConfig {
    let mut c = EosaConfig::for_objective(&sphere(dim), 1);
    c.bounds_lower = vec![lo; dim];
    c.bounds_upper = vec![hi; dim];
    c
}

fn individual(position: Vec<f64>, fitness: f64) -> Individual {
    Individual {
        position,
        fitness: Some(fitness),
        tag: Tag::Infected,
    }
}

/// Yields the same 64-bit word forever.
struct Fixed(u64);

impl RngCore for Fixed {
    fn next_u32(&mut self) -> u32 {
        (self.0 >> 32) as u32
    }
    fn next_u64(&mut self) -> u64 {
        self.0
    }
    fn fill_bytes(&mut self, dst: &mut [u8]) {
        dst.fill(0);
    }
}

fn yielding(u: f64) -> Fixed {
    Fixed(((u * (1u64 << 53) as f64) as u64) << 11)
}

#[test]
fn degenerate_bounds_give_zero_vectors() {
    let pop = initialize_susceptibles(&config(4, 0.0, 0.0), &mut stream(0)).unwrap();
    assert_eq!(pop.len(), 100);
    assert!(pop.iter().all(|p| p.position == vec![0.0; 4]));
    assert!(pop
        .iter()
        .all(|p| p.tag == Tag::Susceptible && p.fitness.is_none()));
}

#[test]
fn initial_positions_lie_in_bounds_and_replay() {
    let c = config(30, -1.0, 1.0);
    let pop = initialize_susceptibles(&c, &mut stream(42)).unwrap();
    assert!(pop
        .iter()
        .flat_map(|p| &p.position)
        .all(|v| (-1.0..=1.0).contains(v)));
    assert_eq!(pop, initialize_susceptibles(&c, &mut stream(42)).unwrap());
}

#[test]
fn initialization_rejects_bad_config() {
    let mut c = config(2, -1.0, 1.0);
    c.population_size = 0;
    assert!(initialize_susceptibles(&c, &mut stream(0)).is_err());
    let c = config(2, 1.0, -1.0);
    assert!(initialize_susceptibles(&c, &mut stream(0)).is_err());
}

#[test]
fn index_case_selection() {
    let mut single = initialize_susceptibles(
        &EosaConfig {
            population_size: 1,
            ..config(2, -1.0, 1.0)
        },
        &mut stream(0),
    )
    .unwrap();
    assert_eq!(generate_index_case(&mut single, &mut stream(5)).unwrap(), 0);
    assert_eq!(single[0].tag, Tag::Infected);
    assert!(matches!(
        generate_index_case(&mut single, &mut stream(5)),
        Err(Error::PopulationExhausted)
    ));

    let base = initialize_susceptibles(&config(2, -1.0, 1.0), &mut stream(0)).unwrap();
    let (mut a, mut b) = (base.clone(), base);
    assert_eq!(
        generate_index_case(&mut a, &mut stream(9)).unwrap(),
        generate_index_case(&mut b, &mut stream(9)).unwrap()
    );
}

#[test]
fn displacement_examples() {
    let mut c = config(3, -100.0, 100.0);
    c.movement = MovementMode::Literal;
    let ind = individual(vec![1.0, -2.0, 3.0], 0.0);
    let g = individual(vec![50.0, 50.0, 50.0], 0.0);
    c.rho = 0.0;
    assert_eq!(displace(&ind, &g, 1.0, &c, &mut stream(1)), ind.position);

    c.rho = 0.5;
    let zero = individual(vec![0.0; 3], 0.0);
    assert_eq!(
        displace(&zero, &zero, 0.0, &c, &mut stream(1)),
        vec![0.0; 3]
    );

    let mut c = config(1, -100.0, 100.0);
    c.movement = MovementMode::Literal;
    c.rho = 1.0;
    let moved = displace(
        &individual(vec![0.0], 0.0),
        &individual(vec![100.0], 0.0),
        0.0,
        &c,
        &mut stream(3),
    );
    assert_eq!(moved, vec![100.0]);
}

#[test]
fn differential_movement_pulls_towards_gbest() {
    let mut c = config(2, -100.0, 100.0);
    c.rho = 1.0;
    let moved = displace(
        &individual(vec![-40.0, 70.0], 0.0),
        &individual(vec![10.0, 20.0], 0.0),
        0.0,
        &c,
        &mut stream(0),
    );
    assert_eq!(moved, vec![10.0, 20.0]);
}

#[test]
fn displacement_is_clamped() {
    let mut c = config(2, -1.0, 1.0);
    c.movement = MovementMode::Literal;
    c.rho = 10.0;
    let moved = displace(
        &individual(vec![0.9, -0.9], 0.0),
        &individual(vec![1.0, -1.0], 0.0),
        1.0,
        &c,
        &mut stream(2),
    );
    assert!(moved.iter().all(|v| (-1.0..=1.0).contains(v)));
}

#[test]
fn neighborhood_from_forced_streams() {
    assert_eq!(
        classify_neighborhood(&mut Fixed(0), 0.5),
        Neighborhood::Short
    );
    assert_eq!(
        classify_neighborhood(&mut yielding(0.99), 0.5),
        Neighborhood::Long
    );
    assert_eq!(
        classify_neighborhood(&mut yielding(0.5), 0.5),
        Neighborhood::Long
    );
}

#[test]
fn neighborhood_split_is_even() {
    let mut rng = stream(11);
    let short = (0..100_000)
        .filter(|_| classify_neighborhood(&mut rng, 0.5) == Neighborhood::Short)
        .count();
    let frac = short as f64 / 100_000.0;
    assert!((0.49..=0.51).contains(&frac), "{frac}");
}

#[test]
fn update_best_keeps_strictly_better() {
    let one = individual(vec![1.0], 1.0);
    let two = individual(vec![2.0], 2.0);
    assert_eq!(update_best(&one, &two), &one);
    assert_eq!(update_best(&two, &one), &one);
    let tie = individual(vec![9.0], 1.0);
    assert_eq!(update_best(&tie, &one), &one);
}

fn seeded_state<'a>(c: &EosaConfig, obj: &'a Objective, seed: u64) -> (EosaState, Evaluator<'a>) {
    let mut rng = stream(seed);
    let mut pop = initialize_susceptibles(c, &mut rng).unwrap();
    let k = generate_index_case(&mut pop, &mut rng).unwrap();
    let mut evaluator = Evaluator::new(obj, seed);
    pop[k].fitness = Some(evaluator.eval(&pop[k].position).unwrap());
    let state = EosaState {
        census: CompartmentCensus {
            s_count: pop.len() - 1,
            i_count: 1,
            pe_load: INITIAL_PE_LOAD,
            ..Default::default()
        },
        gbest: pop[k].clone(),
        population: pop,
    };
    (state, evaluator)
}

#[test]
fn empty_infected_set_is_left_unchanged() {
    let obj = sphere(2);
    let c = config(2, -100.0, 100.0);
    let (mut state, mut ev) = seeded_state(&c, &obj, 4);
    for p in state.population.iter_mut() {
        p.tag = Tag::Susceptible;
    }
    let before = state.population.clone();
    propagate_epoch(&mut state, &mut ev, &c, &mut stream(0)).unwrap();
    assert_eq!(state.population, before);
}

#[test]
fn zero_rates_only_move_infected() {
    let obj = sphere(2);
    let mut c = config(2, -100.0, 100.0);
    c.rates = EpidemicRates::zero();
    c.evdincub = 1.0;
    let (mut state, mut ev) = seeded_state(&c, &obj, 8);
    let before = state.population.clone();
    let mut rng = stream(1);
    for _ in 0..5 {
        propagate_epoch(&mut state, &mut ev, &c, &mut rng).unwrap();
    }
    for (a, b) in before.iter().zip(&state.population) {
        assert_eq!(a.tag, b.tag);
        if a.tag == Tag::Susceptible {
            assert_eq!(a.position, b.position);
        }
    }
    assert_eq!(state.census.i_count, 1);
}

#[test]
fn an_epoch_never_worsens_gbest() {
    let obj = sphere(2);
    let c = config(2, -100.0, 100.0);
    for seed in 0..20 {
        let (mut state, mut ev) = seeded_state(&c, &obj, seed);
        let mut rng = stream(seed);
        for _ in 0..10 {
            let before = state.gbest.fitness.unwrap();
            propagate_epoch(&mut state, &mut ev, &c, &mut rng).unwrap();
            assert!(state.gbest.fitness.unwrap() <= before);
            assert_eq!(
                state.census.s_count + state.census.i_count,
                c.population_size
            );
        }
    }
}

#[test]
fn zero_epochs_return_the_index_case() {
    let obj = sphere(5);
    let mut c = EosaConfig::for_objective(&obj, 3);
    c.epochs = 0;
    let r = optimize(&obj, &c).unwrap();
    assert!(r.history.is_empty());
    assert_eq!(r.gbest_fitness, r.initial_fitness);
    assert_eq!(r.evaluations, 1);
}

#[test]
fn sphere_run_improves_and_replays() {
    let obj = sphere(30);
    let c = EosaConfig::for_objective(&obj, 17);
    let r = optimize(&obj, &c).unwrap();
    assert!(r.gbest_fitness <= r.initial_fitness);
    assert_eq!(r.history.len(), 500);
    assert_eq!(r.history.last().unwrap().gbest_fitness, r.gbest_fitness);
    assert_eq!(obj.evaluate(&r.gbest_position).unwrap(), r.gbest_fitness);
    let again = optimize(&obj, &c).unwrap();
    assert_eq!(r.history, again.history);
    assert_eq!(r.gbest_position, again.gbest_position);
    assert_eq!(r.census_trace, again.census_trace);
}

#[test]
fn zero_rates_still_improve_locally() {
    let obj = sphere(5);
    let mut c = EosaConfig::for_objective(&obj, 2);
    c.rates = EpidemicRates::zero();
    c.evdincub = 1.0;
    c.epochs = 50;
    let r = optimize(&obj, &c).unwrap();
    assert!(r.gbest_fitness <= r.initial_fitness);
    assert!(r.census_trace.iter().all(|c| c.i_count == 1));
}

#[test]
fn extinction_without_reinjection_stops_early() {
    let obj = sphere(2);
    let mut c = EosaConfig::for_objective(&obj, 0);
    c.reinject_index_case = false;
    c.rates.gamma_cap_death = 1.0;
    c.rates.beta1_contact_infectious = 0.0;
    c.rates.beta2_contact_pathogen = 0.0;
    c.rates.beta3_contact_deceased = 0.0;
    c.rates.beta4_contact_recovered = 0.0;
    c.epochs = 200;
    let r = optimize(&obj, &c).unwrap();
    assert!(r.history.len() < 200);
    assert!(r.reinjections.is_empty());
    assert_eq!(r.fitness_at(200), r.gbest_fitness);

    c.reinject_index_case = true;
    let r = optimize(&obj, &c).unwrap();
    assert_eq!(r.history.len(), 200);
    assert!(!r.reinjections.is_empty());
}

#[test]
fn mismatched_dimension_is_rejected() {
    let obj = sphere(3);
    let c = config(2, -1.0, 1.0);
    assert!(matches!(
        optimize(&obj, &c),
        Err(Error::DimensionMismatch { .. })
    ));
}
