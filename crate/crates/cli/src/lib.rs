//! Orchestration for the marker-duality simulator: marker-angle sweeps, single
//! fringe scans and the pulse compiler, plus the file formats they emit.

pub mod compile;
pub mod config;
pub mod error;
pub mod fringe;
pub mod output;
pub mod sweep;

pub use config::{parse_angle, OutputFormat, PhiRange, SweepConfig};
pub use error::{CliError, Result};
