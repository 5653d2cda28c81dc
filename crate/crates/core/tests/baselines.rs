use eosa_core::baselines::{
    baseline_optimize, Baseline, BaselineConfig, DeParams, GaParams, PsoParams,
};
use eosa_core::{lookup, Error, Objective};

fn sphere(dim: usize) -> Objective {
    lookup("F34").unwrap().instantiate(dim).unwrap()
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    }
}

fn run(algorithm: Baseline, dim: usize, psize: usize, epochs: usize, seed: u64) -> (f64, f64) {
    let c = BaselineConfig {
        algorithm,
        population_size: psize,
        epochs,
        seed,
    };
    let r = baseline_optimize(&sphere(dim), &c).unwrap();
    (r.initial_fitness, r.gbest_fitness)
}

#[test]
fn zero_epochs_return_best_initial() {
    for algorithm in [
        Baseline::Pso(PsoParams::default()),
        Baseline::De(DeParams::default()),
        Baseline::Ga(GaParams::default()),
    ] {
        let c = BaselineConfig {
            algorithm,
            population_size: 10,
            epochs: 0,
            seed: 4,
        };
        let r = baseline_optimize(&sphere(3), &c).unwrap();
        assert!(r.history.is_empty());
        assert_eq!(r.gbest_fitness, r.initial_fitness);
        assert_eq!(r.evaluations, 10);
    }
}

#[test]
fn pso_improves_on_small_sphere() {
    let (initial, last) = run(Baseline::Pso(PsoParams::default()), 2, 30, 200, 1);
    assert!(last < initial);
}

#[test]
fn de_converges_on_sphere() {
    let (initial, finals): (Vec<f64>, Vec<f64>) = (0..20)
        .map(|seed| run(Baseline::De(DeParams::default()), 10, 50, 500, seed))
        .unzip();
    assert!(median(finals) <= 1e-4 * median(initial));
}

#[test]
fn ga_improves_on_sphere() {
    let (initial, last) = run(Baseline::Ga(GaParams::default()), 10, 40, 200, 2);
    assert!(last < 1e-2 * initial);
}

#[test]
fn invalid_configs_are_rejected() {
    let bad = |algorithm, population_size| {
        let c = BaselineConfig {
            algorithm,
            population_size,
            epochs: 5,
            seed: 0,
        };
        matches!(
            baseline_optimize(&sphere(2), &c),
            Err(Error::InvalidConfig(_))
        )
    };
    assert!(bad(Baseline::Ga(GaParams::default()), 7));
    assert!(bad(Baseline::De(DeParams::default()), 3));
    assert!(bad(Baseline::Pso(PsoParams::default()), 0));
    assert!(bad(
        Baseline::De(DeParams {
            crossover: 1.5,
            ..DeParams::default()
        }),
        10
    ));
    assert!(bad(
        Baseline::Ga(GaParams {
            mutation_prob: Some(-0.1),
            ..GaParams::default()
        }),
        10
    ));
}

#[test]
fn parameters_round_trip_through_toml() {
    let b = Baseline::Pso(PsoParams {
        inertia: 0.5,
        ..PsoParams::default()
    });
    let text = toml::to_string(&b).unwrap();
    assert!(text.contains("name = \"pso\""));
    assert_eq!(toml::from_str::<Baseline>(&text).unwrap(), b);
}
