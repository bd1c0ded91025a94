//! Pulse programs: parsing, rendering and compilation to two-spin unitaries.
//!
//! A program is a whitespace-separated list of pulses such as
//! `YA(phi_p + phi_m) XA(pi/2) JAB(phi_m - phi_p)`. Rotation pulses name an axis
//! and a target spin; `JAB(φ)` is free evolution under the scalar coupling,
//! written as the accumulated phase `φ` rather than a duration.
//!
//! How the written order maps to time, and the sign of each generator, is set
//! by [`FrameConvention`]. See its docs for the calibrated default.

mod compile;
mod expr;
mod parser;
pub mod programs;

use std::collections::BTreeMap;
use std::fmt;

pub use compile::{
    compile, compile_resolved, equivalent_up_to_phase, pulse_unitary, FrameConvention, PulseOrder,
    Sign,
};
pub use expr::{BinOp, Expr};
pub use parser::{parse, parse_expr, ParseError, ParseErrorKind, Position};

use crate::linalg::Subsystem;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
    Z,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PulseOp {
    Rotation {
        axis: Axis,
        target: Subsystem,
    },
    /// `exp(-i (φ/2) σz ⊗ σz)` up to the frame sign.
    Coupling,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Pulse {
    pub op: PulseOp,
    pub angle: Expr,
}

/// A pulse with its angle evaluated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResolvedPulse {
    pub op: PulseOp,
    pub angle: f64,
}

impl fmt::Display for Pulse {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.op {
            PulseOp::Rotation { axis, target } => write!(f, "{axis:?}{target:?}({})", self.angle),
            PulseOp::Coupling => write!(f, "JAB({})", self.angle),
        }
    }
}

/// Ordered pulses plus the parameter bindings used to evaluate their angles.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PulseSequence {
    pulses: Vec<Pulse>,
    params: BTreeMap<String, f64>,
}

impl PulseSequence {
    pub fn new(pulses: Vec<Pulse>) -> Self {
        Self {
            pulses,
            params: BTreeMap::new(),
        }
    }

    pub fn pulses(&self) -> &[Pulse] {
        &self.pulses
    }

    pub fn params(&self) -> &BTreeMap<String, f64> {
        &self.params
    }

    pub fn len(&self) -> usize {
        self.pulses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pulses.is_empty()
    }

    pub fn bind(&mut self, name: impl Into<String>, value: f64) -> &mut Self {
        self.params.insert(name.into(), value);
        self
    }

    pub fn with(mut self, name: impl Into<String>, value: f64) -> Self {
        self.bind(name, value);
        self
    }

    /// Appends `other`'s pulses; its bindings override ours on conflict.
    pub fn extend(&mut self, other: &PulseSequence) {
        self.pulses.extend(other.pulses.iter().cloned());
        self.params
            .extend(other.params.iter().map(|(k, v)| (k.clone(), *v)));
    }

    /// Every parameter referenced by a pulse, in first-seen order.
    pub fn parameter_names(&self) -> Vec<&str> {
        let mut out: Vec<&str> = Vec::new();
        for p in &self.pulses {
            for name in p.angle.params() {
                if !out.contains(&name) {
                    out.push(name);
                }
            }
        }
        out
    }

    pub fn unbound_parameters(&self) -> Vec<&str> {
        self.parameter_names()
            .into_iter()
            .filter(|n| !self.params.contains_key(*n))
            .collect()
    }

    /// Evaluates every angle, in source order.
    pub fn resolve(&self) -> Result<Vec<ResolvedPulse>> {
        if let Some(name) = self.unbound_parameters().first() {
            return Err(Error::UnboundParameter(name.to_string()));
        }
        self.pulses
            .iter()
            .map(|p| {
                Ok(ResolvedPulse {
                    op: p.op,
                    angle: p.angle.eval(&self.params)?,
                })
            })
            .collect()
    }
}

/// Renders the program text (bindings are not part of the text form).
impl fmt::Display for PulseSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.pulses.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

impl std::str::FromStr for PulseSequence {
    type Err = ParseError;

    fn from_str(s: &str) -> std::result::Result<Self, ParseError> {
        parse(s)
    }
}
