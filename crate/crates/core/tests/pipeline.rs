use std::f64::consts::{FRAC_PI_2, PI};

use marker_duality::analysis::{
    distinguishability_geometric, duality_sum, entanglement, visibility_analytic,
    visibility_from_fringe,
};
use marker_duality::experiment::{Calibration, NoiseModel, Readout, Simulator};
use marker_duality::interferometer::{psi1, psi2, MarkerPair, PhaseSetting};
use marker_duality::linalg::{apply, phase_aligned_fidelity, StateVector};
use marker_duality::pulse::programs::{marker_sequence, u2_sequence};
use marker_duality::pulse::{compile, FrameConvention};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn grid(n: usize) -> Vec<f64> {
    (0..n).map(|k| 2.0 * PI * k as f64 / n as f64).collect()
}

#[test]
fn pulse_programs_drive_the_interferometer() {
    let frame = FrameConvention::default();
    for k in 0..12 {
        let m = MarkerPair::new(0.4 * k as f64 - 2.0, 1.3 - 0.25 * k as f64);
        let marked = apply(
            &compile(&marker_sequence(m.phi_plus, m.phi_minus), &frame).unwrap(),
            &StateVector::basis(0, 0),
        );
        assert!(phase_aligned_fidelity(&marked, &psi1(&m)) > 1.0 - 1e-12);
        for phase in [0.0, 0.7, 2.0, -1.1] {
            let merged = apply(&compile(&u2_sequence(phase), &frame).unwrap(), &marked);
            assert!(phase_aligned_fidelity(&merged, &psi2(&m, PhaseSetting(phase))) > 1.0 - 1e-12);
        }
    }
}

#[test]
fn ideal_measurements_saturate_duality() {
    let sim = Simulator::ideal();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let cal = Calibration::exact();
    for k in 0..40 {
        let m = MarkerPair::from_marker_angle(FRAC_PI_2, k as f64 * PI / 20.0);
        let d = distinguishability_geometric(&sim.measure_joint(&m, &cal, &mut rng).unwrap());
        let samples: Vec<_> = sim
            .fringe(&m, &grid(32), &cal, &mut rng)
            .unwrap()
            .iter()
            .map(|s| (s.phase, s.population))
            .collect();
        let v = visibility_from_fringe(&samples).unwrap();
        assert!((v - visibility_analytic(&m)).abs() < 1e-9);
        assert!((duality_sum(v, d) - 1.0).abs() < 1e-9);
        assert!((0.0..=1.0 + 1e-12).contains(&entanglement(&m)));
    }
}

#[test]
fn noisy_runs_reproduce_from_seed() {
    let sim = Simulator::new(Some(NoiseModel::chloroform(0.1, 5)), Readout::Shots(1000)).unwrap();
    let m = MarkerPair::from_marker_angle(FRAC_PI_2, 1.0);
    let run = |seed| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cal = sim.calibrate(&mut rng);
        (
            sim.measure_joint(&m, &cal, &mut rng).unwrap(),
            sim.fringe(&m, &grid(16), &cal, &mut rng).unwrap(),
        )
    };
    assert_eq!(run(1), run(1));
    assert_ne!(run(1), run(2));
}
