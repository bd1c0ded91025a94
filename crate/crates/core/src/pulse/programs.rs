//! The pulse programs that drive the interferometer.

use std::f64::consts::FRAC_1_SQRT_2;
use std::sync::OnceLock;

use super::{parse, PulseSequence};

/// Beam splitter plus path marking: takes `|00⟩` to `(|0⟩|m₊⟩ + |1⟩|m₋⟩)/√2`
/// with marker angles `phi_p`, `phi_m`.
pub const MARKER_PROGRAM: &str =
    "YA(phi_p + phi_m) XA(pi/2) JAB(phi_m - phi_p) XA(-pi/2) XB(pi) YB(pi/2)";

/// Phase shift and beam merge on spin B; bind `theta1`, `theta2` from [`u2_pulse_angles`].
pub const PHASE_PROGRAM: &str = "XB(-theta1) YB(theta2) XB(-theta1)";

/// Rotates the marker's measurement basis onto the computational basis; bind `alpha`.
pub const READOUT_PROGRAM: &str = "YA(2*alpha)";

fn cached(cell: &'static OnceLock<PulseSequence>, text: &str) -> PulseSequence {
    cell.get_or_init(|| parse(text).expect("built-in program parses"))
        .clone()
}

pub fn marker_program() -> PulseSequence {
    static CELL: OnceLock<PulseSequence> = OnceLock::new();
    cached(&CELL, MARKER_PROGRAM)
}

pub fn phase_program() -> PulseSequence {
    static CELL: OnceLock<PulseSequence> = OnceLock::new();
    cached(&CELL, PHASE_PROGRAM)
}

pub fn readout_program() -> PulseSequence {
    static CELL: OnceLock<PulseSequence> = OnceLock::new();
    cached(&CELL, READOUT_PROGRAM)
}

/// `θ₁ = atan(-sin ϕ)`, `θ₂ = 2 asin(-cos ϕ / √2)`.
pub fn u2_pulse_angles(phase: f64) -> (f64, f64) {
    let theta1 = (-phase.sin()).atan();
    let theta2 = 2.0 * (-phase.cos() * FRAC_1_SQRT_2).asin();
    (theta1, theta2)
}

pub fn marker_sequence(phi_plus: f64, phi_minus: f64) -> PulseSequence {
    marker_program()
        .with("phi_p", phi_plus)
        .with("phi_m", phi_minus)
}

pub fn u2_sequence(phase: f64) -> PulseSequence {
    let (theta1, theta2) = u2_pulse_angles(phase);
    phase_program()
        .with("theta1", theta1)
        .with("theta2", theta2)
}

pub fn readout_sequence(alpha: f64) -> PulseSequence {
    readout_program().with("alpha", alpha)
}
