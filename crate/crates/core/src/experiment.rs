//! Virtual measurement of the interferometer.
//!
//! Distinguishability runs rotate the marker's β basis onto the computational
//! basis, kill all coherences (the gradient-pulse stand-in for a projective
//! measurement) and read the four diagonal populations. Visibility runs apply
//! the phase-shift / beam-merge step and read the path populations of spin B.
//!
//! Without noise the states come straight from [`crate::interferometer`]. With a
//! [`NoiseModel`] every step is executed as a pulse program on a density matrix:
//! each pulse slot carries a [`Calibration`] factor `1 + ε·u` with `u ~ U[−1, 1]`,
//! drawn once per setting and shared by all its runs, and coupling
//! evolution of duration `t = |φ|/(πJ)` damps the coherences of spin A and
//! spin B by `exp(−t/T₂)`.
//!
//! Randomness is drawn from ChaCha8 streams. A sweep point `i` under seed `s`
//! uses the stream seeded with [`point_seed`]`(s, i)`, so points can run in any
//! order or in parallel and still reproduce bit for bit.

use std::f64::consts::{FRAC_PI_4, PI};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use crate::analysis::JointProbs;
use crate::interferometer::{self, MarkerPair, PhaseSetting};
use crate::linalg::{on_spin, DensityMatrix, Gate, Mat4, StateVector, Subsystem};
use crate::pulse::{programs, pulse_unitary, FrameConvention, PulseOp, PulseSequence};
use crate::{Error, Result};

/// Proton (marker spin A) transverse relaxation, seconds.
pub const T2_PROTON: f64 = 3.3;
/// Carbon (observed spin B) transverse relaxation, seconds.
pub const T2_CARBON: f64 = 0.35;
/// ¹³C–¹H scalar coupling, Hz.
pub const J_CH: f64 = 214.95;
pub const MAX_MISCALIBRATION: f64 = 0.2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    /// ε: each pulse angle is multiplied by `1 + ε·u`, `u ~ U[−1, 1]`.
    pub miscalibration: f64,
    pub t2_a: f64,
    pub t2_b: f64,
    pub j_coupling: f64,
    pub rng_seed: u64,
}

impl NoiseModel {
    /// Miscalibration `ε` with the chloroform relaxation and coupling constants.
    pub fn chloroform(miscalibration: f64, rng_seed: u64) -> Self {
        Self {
            miscalibration,
            t2_a: T2_PROTON,
            t2_b: T2_CARBON,
            j_coupling: J_CH,
            rng_seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=MAX_MISCALIBRATION).contains(&self.miscalibration) {
            return Err(Error::InvalidNoise(format!(
                "miscalibration {} outside [0, {MAX_MISCALIBRATION}]",
                self.miscalibration
            )));
        }
        for (name, v) in [
            ("t2_a", self.t2_a),
            ("t2_b", self.t2_b),
            ("j_coupling", self.j_coupling),
        ] {
            if v.is_nan() || v <= 0.0 {
                return Err(Error::InvalidNoise(format!(
                    "{name} must be positive, got {v}"
                )));
            }
        }
        Ok(())
    }

    /// Random stream for sweep point `index`.
    pub fn point_rng(&self, index: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(point_seed(self.rng_seed, index))
    }
}

/// SplitMix64 finalizer applied to `seed + (index + 1)·0x9E3779B97F4A7C15`.
pub fn point_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// How populations are read from the dephased state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Readout {
    /// Exact ensemble averages (the diagonal itself).
    #[default]
    Ensemble,
    /// Multinomial sampling of this many shots.
    Shots(u64),
}

/// Diagonal of the dephased density matrix in the computational basis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasurementRecord {
    pub diagonal: [f64; 4],
}

impl MeasurementRecord {
    pub fn new(diagonal: [f64; 4]) -> Result<Self> {
        if diagonal.iter().any(|p| !p.is_finite()) {
            return Err(Error::NonFinite("measurement record"));
        }
        if let Some(p) = diagonal.iter().find(|&&p| p < -1e-9) {
            return Err(Error::InvalidProbabilities(format!(
                "negative population {p}"
            )));
        }
        let sum: f64 = diagonal.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidProbabilities(format!(
                "populations sum to {sum}"
            )));
        }
        Ok(Self { diagonal })
    }

    /// Population of spin B in `|b⟩`.
    pub fn path_population(&self, b: usize) -> f64 {
        self.diagonal[2 * b] + self.diagonal[2 * b + 1]
    }
}

/// `α = π/4 − (φ₊ + φ₋)/2`.
pub fn rotation_angle(markers: &MarkerPair) -> f64 {
    FRAC_PI_4 - 0.5 * (markers.phi_plus + markers.phi_minus)
}

/// `[[cos α, −sin α], [sin α, cos α]]` on the marker; takes `|β₊⟩ → |0⟩` and `|β₋⟩ → −|1⟩`.
pub fn marker_rotation(markers: &MarkerPair) -> Gate {
    Gate::real_rotation(rotation_angle(markers))
}

/// Zeroes every off-diagonal entry.
pub fn dephase(rho: &DensityMatrix<4>) -> DensityMatrix<4> {
    let d = rho.diagonal();
    DensityMatrix::from_matrix_unchecked(Mat4::from_diagonal(&d.map(Into::into).into()))
}

pub fn t2_dephasing_weight(duration: f64, t2: f64) -> f64 {
    (-duration / t2).exp()
}

/// Time for the scalar coupling to accumulate phase `φ`: `|φ|/(πJ)`.
pub fn coupling_duration(phase: f64, j_coupling: f64) -> f64 {
    phase.abs() / (PI * j_coupling)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FringeSample {
    pub phase: f64,
    pub population: f64,
}

/// Runs the measurement procedures, ideally or through noisy pulse programs.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Simulator {
    noise: Option<NoiseModel>,
    readout: Readout,
    frame: FrameConvention,
}

impl Simulator {
    pub fn ideal() -> Self {
        Self::default()
    }

    pub fn new(noise: Option<NoiseModel>, readout: Readout) -> Result<Self> {
        if let Some(n) = &noise {
            n.validate()?;
        }
        if readout == Readout::Shots(0) {
            return Err(Error::InvalidNoise("shot count must be positive".into()));
        }
        Ok(Self {
            noise,
            readout,
            frame: FrameConvention::default(),
        })
    }

    pub fn noise(&self) -> Option<&NoiseModel> {
        self.noise.as_ref()
    }

    pub fn readout(&self) -> Readout {
        self.readout
    }

    /// Pulse-angle errors for one experimental setting: exact without noise,
    /// otherwise one `1 + ε·u` factor per pulse slot.
    pub fn calibrate<R: Rng>(&self, rng: &mut R) -> Calibration {
        match &self.noise {
            None => Calibration::exact(),
            Some(n) => Calibration::draw(n.miscalibration, rng),
        }
    }

    /// Executes `seq` on `rho` with scaled angles and T₂ loss during coupling.
    fn run_noisy(
        &self,
        noise: &NoiseModel,
        seq: &PulseSequence,
        scales: &[f64],
        mut rho: DensityMatrix<4>,
    ) -> Result<DensityMatrix<4>> {
        let pulses: Vec<_> = seq
            .resolve()?
            .into_iter()
            .zip(scales.iter().copied())
            .collect();
        for (p, scale) in self.frame.execution_order(&pulses) {
            let angle = p.angle * scale;
            rho = rho.evolve(&pulse_unitary(p.op, angle, &self.frame));
            if p.op == PulseOp::Coupling {
                let t = coupling_duration(angle, noise.j_coupling);
                rho = rho
                    .damp_coherences(Subsystem::A, t2_dephasing_weight(t, noise.t2_a))
                    .damp_coherences(Subsystem::B, t2_dephasing_weight(t, noise.t2_b));
            }
        }
        Ok(rho)
    }

    /// `ρ₁`: the marked superposition, prepared from `|00⟩`.
    pub fn prepare_marked(
        &self,
        markers: &MarkerPair,
        cal: &Calibration,
    ) -> Result<DensityMatrix<4>> {
        match &self.noise {
            None => Ok(interferometer::psi1(markers).density()),
            Some(n) => {
                let seq = programs::marker_sequence(markers.phi_plus, markers.phi_minus);
                self.run_noisy(n, &seq, &cal.marker, StateVector::basis(0, 0).density())
            }
        }
    }

    fn read<R: Rng>(&self, rho: &DensityMatrix<4>, rng: &mut R) -> Result<MeasurementRecord> {
        let diag = dephase(rho).diagonal().map(|p| p.max(0.0));
        let total: f64 = diag.iter().sum();
        let diag = diag.map(|p| p / total);
        let diag = match self.readout {
            Readout::Ensemble => diag,
            Readout::Shots(n) => sample_shots(diag, n, rng),
        };
        MeasurementRecord::new(diag)
    }

    /// Rotates `ρ₁` into the β basis and reads the dephased diagonal. `rng`
    /// only feeds shot sampling.
    pub fn measure_joint<R: Rng>(
        &self,
        markers: &MarkerPair,
        cal: &Calibration,
        rng: &mut R,
    ) -> Result<JointProbs> {
        let rho = self.prepare_marked(markers, cal)?;
        let rotated = match &self.noise {
            None => rho.evolve(&on_spin(Subsystem::A, &marker_rotation(markers))),
            Some(n) => {
                let seq = programs::readout_sequence(rotation_angle(markers));
                self.run_noisy(n, &seq, &cal.readout, rho)?
            }
        };
        JointProbs::from_rotated_populations(self.read(&rotated, rng)?.diagonal)
    }

    /// `|0⟩_B` population of `ρ₂` for each phase.
    pub fn fringe<R: Rng>(
        &self,
        markers: &MarkerPair,
        phases: &[f64],
        cal: &Calibration,
        rng: &mut R,
    ) -> Result<Vec<FringeSample>> {
        if phases.is_empty() {
            return Err(Error::EmptyGrid);
        }
        let rho1 = self.prepare_marked(markers, cal)?;
        phases
            .iter()
            .map(|&phase| {
                let rho2 = match &self.noise {
                    None => interferometer::psi2(markers, PhaseSetting(phase)).density(),
                    Some(n) => {
                        self.run_noisy(n, &programs::u2_sequence(phase), &cal.phase, rho1.clone())?
                    }
                };
                Ok(FringeSample {
                    phase,
                    population: self.read(&rho2, rng)?.path_population(0),
                })
            })
            .collect()
    }
}

/// Angle scale factors for each pulse slot of the marker, phase and readout
/// programs, in listing order. A miscalibrated pulse is off by the same factor
/// every time it is played within one setting.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Calibration {
    pub marker: Vec<f64>,
    pub phase: Vec<f64>,
    pub readout: Vec<f64>,
}

impl Calibration {
    pub fn exact() -> Self {
        Self {
            marker: vec![1.0; programs::marker_program().len()],
            phase: vec![1.0; programs::phase_program().len()],
            readout: vec![1.0; programs::readout_program().len()],
        }
    }

    /// Draws `1 + ε·u`, `u ~ U[−1, 1]`, for every slot: marker, phase, then readout.
    pub fn draw<R: Rng>(miscalibration: f64, rng: &mut R) -> Self {
        let mut cal = Self::exact();
        for f in cal
            .marker
            .iter_mut()
            .chain(&mut cal.phase)
            .chain(&mut cal.readout)
        {
            *f = 1.0 + miscalibration * rng.random_range(-1.0..=1.0);
        }
        cal
    }
}

fn sample_shots<R: Rng>(probs: [f64; 4], shots: u64, rng: &mut R) -> [f64; 4] {
    let mut counts = [0u64; 4];
    let mut remaining = shots;
    let mut mass = 1.0;
    for i in 0..3 {
        if remaining == 0 || mass <= 0.0 {
            break;
        }
        let p = (probs[i] / mass).clamp(0.0, 1.0);
        counts[i] = Binomial::new(remaining, p)
            .expect("p in [0, 1]")
            .sample(rng);
        remaining -= counts[i];
        mass -= probs[i];
    }
    counts[3] = remaining;
    counts.map(|c| c as f64 / shots as f64)
}

/// Joint probabilities for one marker setting, drawing noise from `noise.rng_seed`.
pub fn joint_probabilities(markers: &MarkerPair, noise: Option<&NoiseModel>) -> Result<JointProbs> {
    let sim = Simulator::new(noise.copied(), Readout::Ensemble)?;
    let mut rng = ChaCha8Rng::seed_from_u64(noise.map_or(0, |n| n.rng_seed));
    let cal = sim.calibrate(&mut rng);
    sim.measure_joint(markers, &cal, &mut rng)
}

/// Fringe over `phase_grid`, drawing noise from `noise.rng_seed`.
pub fn simulate_fringe(
    markers: &MarkerPair,
    phase_grid: &[f64],
    noise: Option<&NoiseModel>,
) -> Result<Vec<FringeSample>> {
    let sim = Simulator::new(noise.copied(), Readout::Ensemble)?;
    let mut rng = ChaCha8Rng::seed_from_u64(noise.map_or(0, |n| n.rng_seed));
    let cal = sim.calibrate(&mut rng);
    sim.fringe(markers, phase_grid, &cal, &mut rng)
}
