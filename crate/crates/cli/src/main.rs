//! `gravwit`: protocols, witness sweeps, estimates and negative controls.
//!
//! Exit codes: 0 success, 1 usage or configuration error, 2 numerical
//! contract violation.

mod commands;
mod config;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Contract(String),
}

impl From<gravwit::Error> for CliError {
    fn from(e: gravwit::Error) -> Self {
        match e {
            gravwit::Error::InvalidParameter(_) | gravwit::Error::DimensionMismatch(_) => {
                CliError::Usage(e.to_string())
            }
            _ => CliError::Contract(e.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "gravwit", version, about = "Quantum-memory witnesses for gravitationally coupled probes")]
pub struct Cli {
    /// JSON configuration for the chosen command.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output file (stdout if omitted).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Seed for randomized commands.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Solver tolerance.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Worker threads (default: number of cores).
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Default)]
pub struct GridArgs {
    /// Explicit angles gτ (comma separated); overrides the min/max/steps grid.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub theta: Option<Vec<f64>>,
    #[arg(long, allow_hyphen_values = true)]
    pub theta_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub theta_max: Option<f64>,
    #[arg(long)]
    pub theta_steps: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Correlators and analytical witness of the two-qubit protocol (CSV).
    TwoQubit {
        #[command(flatten)]
        grid: GridArgs,
        /// Positive prefactor of the analytical witness.
        #[arg(long)]
        lambda: Option<f64>,
    },
    /// Optimal witness per angle (CSV).
    SdpSweep {
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long)]
        max_iter: Option<usize>,
    },
    /// Concurrence witness of the qubit-oscillator model (CSV).
    Jc {
        /// Coupling rates (comma separated).
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        g: Option<Vec<f64>>,
        /// Detunings (comma separated).
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        delta: Option<Vec<f64>>,
        /// Add the -2g²/Δ² column.
        #[arg(long)]
        quadratic: bool,
    },
    /// Experimental estimates for both setups (JSON).
    Estimate,
    /// Witness values on random classical-memory dynamics (JSON).
    LoccCheck {
        #[arg(long)]
        count: Option<usize>,
        #[arg(long)]
        memory_dim: Option<usize>,
        /// Prepend the identity realization.
        #[arg(long)]
        include_identity: bool,
    },
}

fn output(path: Option<&PathBuf>) -> Result<Box<dyn Write>, CliError> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| CliError::Usage(format!("cannot create {}: {e}", p.display())))?,
        )),
        None => Box::new(BufWriter::new(io::stdout())),
    })
}

fn run(cli: Cli) -> Result<(), CliError> {
    let mut out = output(cli.out.as_ref())?;
    commands::dispatch(&cli, &mut out)?;
    out.flush().map_err(|e| CliError::Usage(format!("write failed: {e}")))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Contract(msg)) => {
            eprintln!("numerical contract violated: {msg}");
            ExitCode::from(2)
        }
    }
}
