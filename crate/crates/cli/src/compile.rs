use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_4;
use std::fmt;
use std::str::FromStr;

use marker_duality::interferometer::{psi1, u2, MarkerPair, PhaseSetting};
use marker_duality::linalg::{
    apply, on_spin, phase_aligned_fidelity, StateVector, Subsystem, Unitary,
};
use marker_duality::pulse::programs::u2_pulse_angles;
use marker_duality::pulse::{compile, equivalent_up_to_phase, parse, FrameConvention};

use crate::{CliError, Result};

/// What a compiled program is scored against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Reference {
    /// The marked state reached from `|00⟩` (needs `phi_p`, `phi_m`).
    MarkedState,
    /// The phase gate on spin B (needs `phase`).
    PhaseGate,
    /// The two-spin identity.
    Identity,
    #[default]
    None,
}

impl FromStr for Reference {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "marked" => Ok(Reference::MarkedState),
            "u2" => Ok(Reference::PhaseGate),
            "identity" => Ok(Reference::Identity),
            "none" => Ok(Reference::None),
            other => Err(CliError::InvalidConfig(format!(
                "unknown reference `{other}`"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompileReport {
    pub unitary: Unitary<4>,
    pub bindings: BTreeMap<String, f64>,
    pub score: Option<f64>,
}

/// Fills in parameters that follow from others: `theta1`/`theta2` from
/// `phase`, and `alpha` from `phi_p`/`phi_m`.
pub fn derive_bindings(mut bindings: BTreeMap<String, f64>) -> BTreeMap<String, f64> {
    if let Some(&phase) = bindings.get("phase") {
        let (t1, t2) = u2_pulse_angles(phase);
        bindings.entry("theta1".into()).or_insert(t1);
        bindings.entry("theta2".into()).or_insert(t2);
    }
    if let (Some(&p), Some(&m)) = (bindings.get("phi_p"), bindings.get("phi_m")) {
        bindings
            .entry("alpha".into())
            .or_insert(FRAC_PI_4 - (p + m) / 2.0);
    }
    bindings
}

fn required(bindings: &BTreeMap<String, f64>, name: &str) -> Result<f64> {
    bindings
        .get(name)
        .copied()
        .ok_or_else(|| CliError::InvalidConfig(format!("reference needs parameter `{name}`")))
}

pub fn compile_sequence(
    program: &str,
    bindings: BTreeMap<String, f64>,
    reference: Reference,
) -> Result<CompileReport> {
    let bindings = derive_bindings(bindings);
    let mut seq = parse(program).map_err(marker_duality::Error::from)?;
    for (name, &value) in &bindings {
        seq.bind(name.clone(), value);
    }
    let unitary = compile(&seq, &FrameConvention::default())?;
    let score = match reference {
        Reference::None => None,
        Reference::Identity => Some(equivalent_up_to_phase(&unitary, &Unitary::identity())),
        Reference::PhaseGate => {
            let target = on_spin(
                Subsystem::B,
                &u2(PhaseSetting(required(&bindings, "phase")?)),
            );
            Some(equivalent_up_to_phase(&unitary, &target))
        }
        Reference::MarkedState => {
            let markers =
                MarkerPair::new(required(&bindings, "phi_p")?, required(&bindings, "phi_m")?);
            let reached = apply(&unitary, &StateVector::basis(0, 0));
            Some(phase_aligned_fidelity(&reached, &psi1(&markers)))
        }
    };
    Ok(CompileReport {
        unitary,
        bindings,
        score,
    })
}

impl fmt::Display for CompileReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = self.unitary.matrix();
        for r in 0..4 {
            let row: Vec<String> = (0..4)
                .map(|c| {
                    let z = m[(r, c)];
                    format!("{:+.6}{:+.6}i", z.re, z.im)
                })
                .collect();
            writeln!(f, "{}", row.join("  "))?;
        }
        if let Some(s) = self.score {
            writeln!(f, "score {s:.12}")?;
        }
        Ok(())
    }
}
