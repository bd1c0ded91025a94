use marker_duality::analysis::visibility_with;
use marker_duality::experiment::{point_seed, Simulator};
use marker_duality::interferometer::MarkerPair;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::config::{phase_grid, MIN_PHASE_POINTS};
use crate::output::{write_atomic, write_fringe, FringeOutput};
use crate::{CliError, OutputFormat, Result, SweepConfig};

/// Samples the `|0⟩_B` population over a uniform phase grid for one marker pair.
pub fn compute_fringe(markers: &MarkerPair, config: &SweepConfig) -> Result<FringeOutput> {
    if config.phase_grid_points < MIN_PHASE_POINTS {
        return Err(CliError::InvalidConfig(format!(
            "need at least {MIN_PHASE_POINTS} phase points, got {}",
            config.phase_grid_points
        )));
    }
    let sim = Simulator::new(config.noise, config.readout)?;
    let mut rng = ChaCha8Rng::seed_from_u64(point_seed(config.seed, 0));
    let cal = sim.calibrate(&mut rng);
    let samples = sim.fringe(
        markers,
        &phase_grid(config.phase_grid_points),
        &cal,
        &mut rng,
    )?;
    let pairs: Vec<(f64, f64)> = samples.iter().map(|s| (s.phase, s.population)).collect();
    let visibility = visibility_with(&pairs, config.estimator)?;
    Ok(FringeOutput {
        samples,
        visibility,
    })
}

pub fn run_fringe(markers: &MarkerPair, config: &SweepConfig) -> Result<FringeOutput> {
    let fringe = compute_fringe(markers, config)?;
    let format: OutputFormat = config.output_format;
    match &config.output_path {
        Some(path) => write_atomic(path, |w| write_fringe(&fringe, format, w))?,
        None => write_fringe(&fringe, format, std::io::stdout().lock())?,
    }
    Ok(fringe)
}
