use marker_duality::analysis::{
    distinguishability_geometric, distinguishability_likelihood, entanglement, likelihood,
    visibility_with, DualityRecord,
};
use marker_duality::experiment::{point_seed, Simulator};
use marker_duality::interferometer::MarkerPair;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::config::phase_grid;
use crate::output::{write_atomic, write_sweep};
use crate::{CliError, Result, SweepConfig};

/// One sweep row: joint readout for the distinguishabilities and a fitted
/// fringe for the visibility. Both share the point's pulse calibration, drawn
/// from the point's own random stream.
pub fn sweep_point(
    sim: &Simulator,
    config: &SweepConfig,
    index: usize,
    phi: f64,
) -> Result<DualityRecord> {
    let markers = MarkerPair::from_marker_angle(config.phi_plus, phi);
    let mut rng = ChaCha8Rng::seed_from_u64(point_seed(config.seed, index as u64));
    let cal = sim.calibrate(&mut rng);
    let jp = sim.measure_joint(&markers, &cal, &mut rng)?;
    let d_geo = distinguishability_geometric(&jp);
    let d_lik = distinguishability_likelihood(likelihood(&jp))?;
    let samples: Vec<(f64, f64)> = sim
        .fringe(
            &markers,
            &phase_grid(config.phase_grid_points),
            &cal,
            &mut rng,
        )?
        .into_iter()
        .map(|s| (s.phase, s.population))
        .collect();
    let visibility = visibility_with(&samples, config.estimator)?;
    Ok(DualityRecord::new(
        phi,
        visibility,
        d_geo,
        d_lik,
        entanglement(&markers),
    ))
}

/// Computes every row; the result is independent of the worker count.
pub fn compute_sweep(config: &SweepConfig) -> Result<Vec<DualityRecord>> {
    config.validate()?;
    let sim = Simulator::new(config.noise, config.readout)?;
    let points = config.phi_range.points();
    log::info!(
        "sweeping {} marker angles with {} phase points",
        points.len(),
        config.phase_grid_points
    );
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|e| CliError::Pool(e.to_string()))?;
    pool.install(|| {
        points
            .par_iter()
            .enumerate()
            .map(|(i, &phi)| sweep_point(&sim, config, i, phi))
            .collect()
    })
}

/// Computes the sweep and writes it to `config.output_path` (or stdout).
pub fn run_sweep(config: &SweepConfig) -> Result<Vec<DualityRecord>> {
    let records = compute_sweep(config)?;
    match &config.output_path {
        Some(path) => write_atomic(path, |w| write_sweep(&records, config.output_format, w))?,
        None => write_sweep(&records, config.output_format, std::io::stdout().lock())?,
    }
    Ok(records)
}
