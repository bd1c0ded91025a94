use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, PI};
use std::path::PathBuf;
use std::str::FromStr;

use marker_duality::analysis::VisibilityEstimator;
use marker_duality::experiment::{NoiseModel, Readout};
use marker_duality::pulse::parse_expr;
use serde::{Deserialize, Serialize};

use crate::{CliError, Result};

pub const MIN_PHASE_POINTS: usize = 8;

/// Evaluates a constant angle expression such as `5*pi/4`.
pub fn parse_angle(text: &str) -> Result<f64> {
    let expr =
        parse_expr(text).map_err(|e| CliError::InvalidConfig(format!("angle `{text}`: {e}")))?;
    expr.eval(&BTreeMap::new())
        .map_err(|e| CliError::InvalidConfig(format!("angle `{text}`: {e}")))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(CliError::InvalidConfig(format!("unknown format `{other}`"))),
        }
    }
}

/// Inclusive marker-angle range `start, start + step, …` up to `end`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhiRange {
    pub start: f64,
    pub end: f64,
    pub step: f64,
}

impl Default for PhiRange {
    fn default() -> Self {
        Self {
            start: 0.0,
            end: 5.0 * PI / 4.0,
            step: PI / 16.0,
        }
    }
}

impl PhiRange {
    pub fn validate(&self) -> Result<()> {
        if !(self.start.is_finite() && self.end.is_finite() && self.step.is_finite()) {
            return Err(CliError::InvalidConfig(
                "marker-angle range must be finite".into(),
            ));
        }
        if self.step <= 0.0 {
            return Err(CliError::InvalidConfig(format!(
                "step must be positive, got {}",
                self.step
            )));
        }
        if self.end < self.start {
            return Err(CliError::InvalidConfig(
                "range end lies before its start".into(),
            ));
        }
        Ok(())
    }

    pub fn points(&self) -> Vec<f64> {
        // The slack keeps an end point that is an exact multiple of the step.
        let n = ((self.end - self.start) / self.step + 1e-9).floor() as usize + 1;
        (0..n).map(|k| self.start + self.step * k as f64).collect()
    }
}

/// `n` phases uniform over `[0, 2π)`.
pub fn phase_grid(n: usize) -> Vec<f64> {
    (0..n).map(|k| 2.0 * PI * k as f64 / n as f64).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub phi_plus: f64,
    pub phi_range: PhiRange,
    pub phase_grid_points: usize,
    pub noise: Option<NoiseModel>,
    pub readout: Readout,
    /// Root of the per-point random streams (pulse errors and shot sampling).
    pub seed: u64,
    pub estimator: VisibilityEstimator,
    pub output_path: Option<PathBuf>,
    pub output_format: OutputFormat,
    /// Worker threads; 0 lets the pool decide.
    pub workers: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            phi_plus: FRAC_PI_2,
            phi_range: PhiRange::default(),
            phase_grid_points: 32,
            noise: None,
            readout: Readout::Ensemble,
            seed: 0,
            estimator: VisibilityEstimator::SinusoidFit,
            output_path: None,
            output_format: OutputFormat::Csv,
            workers: 0,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if !self.phi_plus.is_finite() {
            return Err(CliError::InvalidConfig("phi_plus must be finite".into()));
        }
        self.phi_range.validate()?;
        if self.phase_grid_points < MIN_PHASE_POINTS {
            return Err(CliError::InvalidConfig(format!(
                "need at least {MIN_PHASE_POINTS} phase points, got {}",
                self.phase_grid_points
            )));
        }
        if let Some(n) = &self.noise {
            n.validate()?;
        }
        if self.readout == Readout::Shots(0) {
            return Err(CliError::InvalidConfig(
                "shot count must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// `--shots` accepts a count or `ensemble`.
pub fn parse_readout(text: &str) -> Result<Readout> {
    if text.eq_ignore_ascii_case("ensemble") {
        return Ok(Readout::Ensemble);
    }
    match text.parse::<u64>() {
        Ok(0) | Err(_) => Err(CliError::InvalidConfig(format!(
            "--shots expects a positive count or `ensemble`, got `{text}`"
        ))),
        Ok(n) => Ok(Readout::Shots(n)),
    }
}
