//! Front end for the formula engine, the series solvers and the simulator.
//!
//! Exit codes: 0 success, 1 other failures (including a FAIL verdict from
//! `compare`), 2 invalid geometry, 3 solver convergence failure, 4 censored
//! simulation.

pub mod commands;
pub mod render;
pub mod spec;

use clap::{Parser, Subcommand, ValueEnum};
use narrow_escape::asymptotics::AsymptoticsError;
use narrow_escape::dualseries::DualSeriesError;
use narrow_escape::geometry::GeometryError;
use narrow_escape_mc::McError;
use std::path::PathBuf;
use thiserror::Error;

#[derive(Debug, Parser)]
#[command(name = "narrow-escape", version, about = "Narrow escape MFPT formulas, series solvers and simulation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Asymptotic,
    Series,
    Simulate,
    Sweep,
    Compare,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate the asymptotic MFPT formula for the geometry.
    Asymptotic(RunArgs),
    /// Solve the dual series problem of the geometry.
    Series(RunArgs),
    /// Estimate the MFPT by simulation.
    Simulate(RunArgs),
    /// Simulate over a list of window sizes.
    Sweep(RunArgs),
    /// Simulate and compare with the formula.
    Compare(RunArgs),
}

impl Command {
    pub fn split(self) -> (CommandKind, RunArgs) {
        match self {
            Command::Asymptotic(a) => (CommandKind::Asymptotic, a),
            Command::Series(a) => (CommandKind::Series, a),
            Command::Simulate(a) => (CommandKind::Simulate, a),
            Command::Sweep(a) => (CommandKind::Sweep, a),
            Command::Compare(a) => (CommandKind::Compare, a),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Table,
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolverChoice {
    Collocation,
    Neumann,
}

#[derive(Debug, Clone, Default, clap::Args)]
pub struct RunArgs {
    /// Geometry file (JSON, or key = value lines).
    #[arg(long)]
    pub geometry: Option<PathBuf>,
    /// Geometry JSON with an added "run" block; flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Window half-width(s), in the window's convention.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub eps: Vec<f64>,
    /// Cap angle of a decapitated sphere.
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long)]
    pub paths: Option<u64>,
    #[arg(long)]
    pub dt: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub max_steps: Option<u64>,
    /// Diffusion coefficient D.
    #[arg(long)]
    pub diffusivity: Option<f64>,
    /// `uniform`, `x,y` (plane) or `theta,phi` (sphere).
    #[arg(long)]
    pub start: Option<String>,
    /// Absorb on a whole boundary component instead of the window.
    #[arg(long)]
    pub absorb: Option<String>,
    /// Truncation order of the series.
    #[arg(long)]
    pub order: Option<usize>,
    #[arg(long, value_enum)]
    pub method: Option<SolverChoice>,
    #[arg(long, value_enum)]
    pub output: Option<Format>,
    /// Write the output here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid geometry: {0}")]
    Geometry(#[from] GeometryError),
    #[error("{0}")]
    Asymptotics(#[from] AsymptoticsError),
    #[error("{0}")]
    Series(#[from] DualSeriesError),
    #[error("{0}")]
    Simulation(#[from] McError),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("comparison failed: {0}")]
    Fail(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Geometry(_) | CliError::Simulation(McError::Geometry(_)) => 2,
            CliError::Asymptotics(AsymptoticsError::Domain { .. }) => 2,
            CliError::Series(DualSeriesError::Domain { .. }) => 2,
            CliError::Series(
                DualSeriesError::Contraction { .. }
                | DualSeriesError::IllConditioned { .. }
                | DualSeriesError::Singular(_),
            ) => 3,
            CliError::Simulation(McError::Censored { .. }) => 4,
            _ => 1,
        }
    }
}

/// Runs one command and returns the rendered output. A FAIL verdict from
/// `compare` is returned together with its report.
pub fn execute(kind: CommandKind, args: RunArgs) -> Result<(String, Option<CliError>), CliError> {
    let spec = spec::RunSpec::resolve(kind, &args)?;
    let report = commands::run(&spec)?;
    let text = render::render(&report, spec.output)?;
    let verdict = match &report {
        commands::Report::Compare(c) if !c.pass => Some(CliError::Fail(format!(
            "relative error {:.4} exceeds tolerance {:.4}",
            c.relative_error, c.tolerance
        ))),
        _ => None,
    };
    match &spec.out {
        Some(path) => {
            std::fs::write(path, &text)?;
            Ok((String::new(), verdict))
        }
        None => Ok((text, verdict)),
    }
}
