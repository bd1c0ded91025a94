use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use duality_cli::compile::{compile_sequence, Reference};
use duality_cli::config::parse_readout;
use duality_cli::{fringe, parse_angle, sweep, OutputFormat, PhiRange, SweepConfig};
use marker_duality::analysis::VisibilityEstimator;
use marker_duality::experiment::{NoiseModel, J_CH, T2_CARBON, T2_PROTON};
use marker_duality::interferometer::MarkerPair;

#[derive(Parser)]
#[command(
    name = "duality",
    version,
    about = "Which-way marker interferometer simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep the marker angle and tabulate V, D_geo, D_lik, E.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// First marker angle (radians; accepts expressions such as `pi/4`).
        #[arg(long, default_value = "0", value_parser = angle)]
        phi_start: f64,
        #[arg(long, default_value = "5*pi/4", value_parser = angle)]
        phi_end: f64,
        #[arg(long, default_value = "pi/16", value_parser = angle)]
        phi_step: f64,
        /// Worker threads (0 = all cores).
        #[arg(long, default_value_t = 0)]
        workers: usize,
    },
    /// Sample one interference fringe.
    Fringe {
        #[command(flatten)]
        common: Common,
        /// Marker angle φ = φ₋ − φ₊.
        #[arg(long, default_value = "0", value_parser = angle)]
        phi: f64,
    },
    /// Compile a pulse program to its two-spin unitary.
    Compile {
        /// Pulse program file.
        file: PathBuf,
        /// Parameter binding `name=value`; repeatable.
        #[arg(long = "param", value_parser = binding)]
        params: Vec<(String, f64)>,
        /// Score against `marked` (marked state from |00⟩), `u2` (phase gate), `identity` or `none`.
        #[arg(long, default_value = "none")]
        reference: Reference,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long, default_value = "pi/2", value_parser = angle)]
    phi_plus: f64,
    #[arg(long, default_value_t = 32)]
    phase_points: usize,
    /// Pulse-angle miscalibration ε; enables the noisy pulse simulation.
    #[arg(long)]
    noise_miscal: Option<f64>,
    #[arg(long, default_value_t = T2_PROTON)]
    t2a: f64,
    #[arg(long, default_value_t = T2_CARBON)]
    t2b: f64,
    #[arg(long, default_value_t = J_CH)]
    j: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Shot count per readout, or `ensemble`.
    #[arg(long, default_value = "ensemble")]
    shots: String,
    /// Use max/min contrast instead of the sinusoid fit.
    #[arg(long)]
    maxmin: bool,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value = "csv")]
    format: OutputFormat,
}

fn angle(s: &str) -> Result<f64, String> {
    parse_angle(s).map_err(|e| e.to_string())
}

fn binding(s: &str) -> Result<(String, f64), String> {
    let (name, value) = s
        .split_once('=')
        .ok_or_else(|| format!("expected name=value, got `{s}`"))?;
    Ok((name.trim().to_string(), angle(value)?))
}

impl Common {
    fn config(&self) -> anyhow::Result<SweepConfig> {
        let noise = self.noise_miscal.map(|eps| NoiseModel {
            miscalibration: eps,
            t2_a: self.t2a,
            t2_b: self.t2b,
            j_coupling: self.j,
            rng_seed: self.seed,
        });
        Ok(SweepConfig {
            phi_plus: self.phi_plus,
            phase_grid_points: self.phase_points,
            noise,
            readout: parse_readout(&self.shots)?,
            seed: self.seed,
            estimator: if self.maxmin {
                VisibilityEstimator::MaxMin
            } else {
                VisibilityEstimator::SinusoidFit
            },
            output_path: self.out.clone(),
            output_format: self.format,
            ..SweepConfig::default()
        })
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Sweep {
            common,
            phi_start,
            phi_end,
            phi_step,
            workers,
        } => {
            let config = SweepConfig {
                phi_range: PhiRange {
                    start: phi_start,
                    end: phi_end,
                    step: phi_step,
                },
                workers,
                ..common.config()?
            };
            sweep::run_sweep(&config)?;
        }
        Command::Fringe { common, phi } => {
            let config = common.config()?;
            config.validate()?;
            fringe::run_fringe(
                &MarkerPair::from_marker_angle(config.phi_plus, phi),
                &config,
            )?;
        }
        Command::Compile {
            file,
            params,
            reference,
        } => {
            let program = std::fs::read_to_string(&file)
                .with_context(|| format!("reading {}", file.display()))?;
            let mut bindings = BTreeMap::new();
            for (name, value) in params {
                if bindings.insert(name.clone(), value).is_some() {
                    bail!("parameter `{name}` bound twice");
                }
            }
            print!("{}", compile_sequence(&program, bindings, reference)?);
        }
    }
    Ok(())
}
