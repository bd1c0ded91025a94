//! Acceptance criteria for the simulator, one line per criterion.
//!
//! Run with `cargo test -p duality-cli --test acceptance -- --nocapture` to see
//! the report; the test fails if any criterion fails.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, PI};
use std::time::{Duration, Instant};

use duality_cli::compile::{compile_sequence, Reference};
use duality_cli::sweep::{compute_sweep, run_sweep, sweep_point};
use duality_cli::SweepConfig;
use marker_duality::analysis::{
    angle_distance, beta_basis, distinguishability_geometric, distinguishability_likelihood,
    entanglement, likelihood, optimal_observable_search,
};
use marker_duality::experiment::{NoiseModel, Readout, Simulator};
use marker_duality::interferometer::{psi1, MarkerPair};
use marker_duality::linalg::{partial_trace, von_neumann_entropy, Subsystem};
use marker_duality::pulse::programs::{MARKER_PROGRAM, PHASE_PROGRAM};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn worst<I: IntoIterator<Item = f64>>(it: I) -> f64 {
    it.into_iter().fold(0.0, f64::max)
}

fn duality_relation() -> Outcome {
    let start = Instant::now();
    let rows = compute_sweep(&SweepConfig::default()).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let dev = worst(
        rows.iter()
            .map(|r| (r.d_geo.powi(2) + r.visibility.powi(2) - 1.0).abs()),
    );
    check(
        rows.len() == 21 && dev <= 1e-6 && elapsed < Duration::from_secs(5),
        format!(
            "{} rows, max |D²+V²−1| = {dev:.2e}, {:.3} s",
            rows.len(),
            elapsed.as_secs_f64()
        ),
    )
}

fn strategy_equivalence() -> Outcome {
    let sim = Simulator::ideal();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let cal = sim.calibrate(&mut rng);
    let mut dev: f64 = 0.0;
    for k in 0..256 {
        let phi = 2.0 * PI * k as f64 / 256.0;
        let jp = sim
            .measure_joint(
                &MarkerPair::from_marker_angle(FRAC_PI_2, phi),
                &cal,
                &mut rng,
            )
            .map_err(|e| e.to_string())?;
        let want = phi.sin().abs();
        let d_lik = distinguishability_likelihood(likelihood(&jp)).map_err(|e| e.to_string())?;
        dev = dev
            .max((distinguishability_geometric(&jp) - want).abs())
            .max((d_lik - want).abs());
    }
    check(
        dev <= 1e-9,
        format!("256 angles, max deviation from |sin φ| = {dev:.2e}"),
    )
}

fn joint_probability_closed_forms() -> Outcome {
    let sim = Simulator::ideal();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let cal = sim.calibrate(&mut rng);
    let mut dev: f64 = 0.0;
    for phi in SweepConfig::default().phi_range.points() {
        let jp = sim
            .measure_joint(
                &MarkerPair::from_marker_angle(FRAC_PI_2, phi),
                &cal,
                &mut rng,
            )
            .map_err(|e| e.to_string())?;
        let c = (FRAC_PI_4 - phi / 2.0).cos().powi(2) / 2.0;
        let s = (FRAC_PI_4 - phi / 2.0).sin().powi(2) / 2.0;
        for (got, want) in [
            (jp.p_bp_0, c),
            (jp.p_bm_1, c),
            (jp.p_bm_0, s),
            (jp.p_bp_1, s),
        ] {
            dev = dev.max((got - want).abs());
        }
    }
    check(
        dev <= 1e-9,
        format!("sweep grid, max population deviation = {dev:.2e}"),
    )
}

fn extreme_points() -> Outcome {
    let config = SweepConfig::default();
    let sim = Simulator::ideal();
    let mut dev: f64 = 0.0;
    for k in 0..3 {
        for (phi, want) in [
            (k as f64 * PI, [1.0, 0.0, 0.0]),
            ((2 * k + 1) as f64 * FRAC_PI_2, [0.0, 1.0, 1.0]),
        ] {
            let r = sweep_point(&sim, &config, 0, phi).map_err(|e| e.to_string())?;
            for (got, w) in [
                (r.visibility, want[0]),
                (r.d_geo, want[1]),
                (r.d_lik, want[1]),
                (r.entanglement, want[2]),
            ] {
                dev = dev.max((got - w).abs());
            }
        }
    }
    check(
        dev <= 1e-9,
        format!("φ = kπ and (2k+1)π/2 for k = 0,1,2, max deviation = {dev:.2e}"),
    )
}

fn entanglement_consistency() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut dev: f64 = 0.0;
    for _ in 0..100 {
        let m = MarkerPair::new(
            rng.random_range(-2.0 * PI..2.0 * PI),
            rng.random_range(-2.0 * PI..2.0 * PI),
        );
        let rho_a = partial_trace(&psi1(&m).density(), Subsystem::A);
        dev = dev.max((entanglement(&m) - von_neumann_entropy(&rho_a)).abs());
    }
    // H(1/4) = 2 − (3/4)·log2(3)
    let spot_want = 2.0 - 0.75 * 3f64.log2();
    let spot = entanglement(&MarkerPair::from_marker_angle(0.0, FRAC_PI_3));
    let spot_dev = (spot - 0.811278).abs();
    check(
        dev <= 1e-10 && spot_dev <= 1e-6 && (spot_want - 0.811278).abs() <= 1e-6,
        format!("100 pairs, max |E − S(ρ_A)| = {dev:.2e}; E(π/3) = {spot:.6}"),
    )
}

fn compiler_fidelity() -> Outcome {
    let mut worst_u2: f64 = 1.0;
    for k in 0..32 {
        let phase = -PI + 2.0 * PI * k as f64 / 32.0 + 0.05;
        let params = BTreeMap::from([("phase".to_string(), phase)]);
        let r = compile_sequence(PHASE_PROGRAM, params, Reference::PhaseGate)
            .map_err(|e| e.to_string())?;
        worst_u2 = worst_u2.min(r.score.unwrap_or(0.0));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    let mut worst_marker: f64 = 1.0;
    for _ in 0..32 {
        let params = BTreeMap::from([
            ("phi_p".to_string(), rng.random_range(-PI..PI)),
            ("phi_m".to_string(), rng.random_range(-PI..PI)),
        ]);
        let r = compile_sequence(MARKER_PROGRAM, params, Reference::MarkedState)
            .map_err(|e| e.to_string())?;
        worst_marker = worst_marker.min(r.score.unwrap_or(0.0));
    }
    check(
        worst_u2 >= 1.0 - 1e-9 && worst_marker >= 1.0 - 1e-9,
        format!("worst score: phase gate {worst_u2:.12}, marker state {worst_marker:.12}"),
    )
}

fn optimal_observable() -> Outcome {
    const GRID: usize = 256;
    let step = PI / GRID as f64;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut dev: f64 = 0.0;
    let mut n = 0;
    while n < 20 {
        let m = MarkerPair::new(rng.random_range(-PI..PI), rng.random_range(-PI..PI));
        if m.marker_angle().sin().abs() < 0.05 {
            continue;
        }
        let found = optimal_observable_search(&m, GRID).map_err(|e| e.to_string())?;
        dev = dev.max(angle_distance(found.theta, beta_basis(&m).theta, FRAC_PI_2));
        n += 1;
    }
    check(
        dev <= step,
        format!("20 markers, max distance to β angle = {dev:.2e} (step {step:.2e})"),
    )
}

fn scatter_emulation() -> Outcome {
    let config = SweepConfig {
        noise: Some(NoiseModel::chloroform(0.05, 0)),
        seed: 0,
        ..SweepConfig::default()
    };
    let rows = compute_sweep(&config).map_err(|e| e.to_string())?;
    let dev = worst(
        rows.iter()
            .map(|r| (r.d_geo.powi(2) + r.visibility.powi(2) - 1.0).abs()),
    );
    check(
        dev <= 0.1,
        format!(
            "ε = 0.05, seed 0, {} rows, max |D²+V²−1| = {dev:.4}",
            rows.len()
        ),
    )
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let run = |name: &str, workers: usize| -> Result<Vec<u8>, String> {
        let path = dir.path().join(name);
        let config = SweepConfig {
            noise: Some(NoiseModel::chloroform(0.05, 99)),
            readout: Readout::Shots(2000),
            seed: 99,
            workers,
            output_path: Some(path.clone()),
            ..SweepConfig::default()
        };
        run_sweep(&config).map_err(|e| e.to_string())?;
        std::fs::read(&path).map_err(|e| e.to_string())
    };
    let a = run("a.csv", 1)?;
    let b = run("b.csv", 1)?;
    let c = run("c.csv", 4)?;
    check(
        !a.is_empty() && a == b && a == c,
        format!(
            "{} bytes, identical across repeats and worker counts",
            a.len()
        ),
    )
}

#[test]
fn acceptance_criteria() {
    let criteria: [Criterion; 9] = [
        ("1 duality relation", duality_relation),
        ("2 strategy equivalence", strategy_equivalence),
        (
            "3 joint-probability closed forms",
            joint_probability_closed_forms,
        ),
        ("4 extreme points", extreme_points),
        ("5 entanglement consistency", entanglement_consistency),
        ("6 pulse-compiler fidelity", compiler_fidelity),
        ("7 optimal observable", optimal_observable),
        ("8 noise scatter", scatter_emulation),
        ("9 determinism", determinism),
    ];
    let mut failed = Vec::new();
    for (name, f) in criteria {
        match f() {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(detail) => {
                println!("FAIL  {name}: {detail}");
                failed.push(name);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
