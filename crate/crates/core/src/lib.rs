//! Simulation of a two-way interferometer whose paths are labelled by a
//! quantum marker spin.
//!
//! The observed spin B travels the two "paths" `|0⟩_B` and `|1⟩_B`; the marker
//! spin A records which path was taken in the (generally non-orthogonal) marker
//! states `|m±⟩_A`. The crate covers the whole chain:
//!
//! - [`linalg`]: exact one- and two-qubit states, operators, partial trace and
//!   entropy, with the fixed ordering `B ⊗ A`.
//! - [`pulse`]: a small pulse-program language (`YA(pi/2) JAB(phi) ...`) and its
//!   compiler to 4×4 unitaries.
//! - [`interferometer`]: the analytic reference states and the phase-shift /
//!   beam-merge operator.
//! - [`analysis`]: fringe visibility, which-way distinguishability (geometric and
//!   likelihood strategies), entanglement and the duality sum `D² + V²`.
//! - [`experiment`]: virtual measurement (basis rotation, gradient dephasing,
//!   diagonal readout) and a seeded pulse-miscalibration / T₂ noise model.

#![forbid(unsafe_code)]

pub mod analysis;
pub mod error;
pub mod experiment;
pub mod interferometer;
pub mod linalg;
pub mod pulse;

pub use error::{Error, Result};
