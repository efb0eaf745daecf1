//! Command-line runner for the two-mode Kerr/angular-momentum simulator.
//!
//! Exit codes: 0 success, 2 configuration error, 3 truncation failure,
//! 4 numerical failure.

mod commands;
mod config;
mod csvout;
mod presets;
mod report;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use commands::SweepAxis;
use config::RunConfig;

#[derive(Debug)]
pub enum CliError {
    /// Invalid configuration (exit 2).
    Config(String),
    /// Truncated basis too small for the requested state or run (exit 3).
    Truncation(String),
    /// Numerical or i/o failure during the run (exit 4).
    Numerical(String),
    /// Failure already written into an emitted run report; carries the code.
    Reported(u8),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Truncation(_) => 3,
            CliError::Numerical(_) => 4,
            CliError::Reported(code) => *code,
        }
    }

    pub fn message(&self) -> String {
        match self {
            CliError::Config(msg) => format!("config error: {msg}"),
            CliError::Truncation(msg) => format!("truncation failure: {msg}"),
            CliError::Numerical(msg) => format!("numerical failure: {msg}"),
            CliError::Reported(_) => String::new(),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "kerrmodes",
    version,
    about = "Two quantum harmonic modes coupled through angular momentum with per-mode Kerr anharmonicities: exact diagonalization in a truncated Fock basis, coherent-state dynamics, and entanglement/non-gaussianity/photon-statistics/squeezing observables"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunArgs {
    /// Load configuration from a flat key = value file
    #[arg(long, conflicts_with = "preset")]
    config: Option<PathBuf>,
    /// Start from a built-in figure preset (fig1..fig5)
    #[arg(long)]
    preset: Option<String>,
    /// Override one configuration key, repeatable (e.g. --set omega=0.45)
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Reuse and store eigendecompositions under this directory
    #[arg(long)]
    cache_dir: Option<PathBuf>,
}

impl RunArgs {
    fn build_config(&self) -> Result<RunConfig, CliError> {
        let mut config = match &self.preset {
            Some(name) => presets::preset(name)?,
            None => RunConfig::default(),
        };
        if let Some(path) = &self.config {
            let body = std::fs::read_to_string(path).map_err(|e| {
                CliError::Config(format!("cannot read '{}': {e}", path.display()))
            })?;
            config.apply_file(&body, &path.display().to_string())?;
        }
        for assignment in &self.set {
            config.apply_override(assignment)?;
        }
        Ok(config)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Eigenvalue table of the truncated Hamiltonian
    Spectrum(RunArgs),
    /// Coherent-state time evolution with the full observable column set
    Evolve(RunArgs),
    /// Truncation-convergence study over a ladder of cutoffs
    Converge {
        #[command(flatten)]
        run: RunArgs,
        /// Ascending list of cutoffs to compare
        #[arg(long = "m-list", value_delimiter = ',', default_value = "12,16,20,24")]
        m_list: Vec<usize>,
    },
    /// Parameter sweep emitting one long-format CSV
    Sweep {
        #[command(flatten)]
        run: RunArgs,
        /// Swept parameter
        #[arg(long, value_enum)]
        axis: SweepAxis,
        /// Values to sweep, comma separated
        #[arg(long, value_delimiter = ',')]
        values: Vec<f64>,
        /// Concurrent sweep points (default: available parallelism)
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Short-time expansion convergence-ratio report
    ShorttimeCheck(RunArgs),
}

fn run() -> Result<(), CliError> {
    let cli = Cli::parse();
    match &cli.command {
        Command::Spectrum(args) => {
            let resolved = commands::resolve(args.build_config()?)?;
            commands::cmd_spectrum(&resolved, args.cache_dir.as_deref())
        }
        Command::Evolve(args) => {
            let resolved = commands::resolve(args.build_config()?)?;
            commands::cmd_evolve(&resolved, args.cache_dir.as_deref())
        }
        Command::Converge { run, m_list } => {
            let resolved = commands::resolve(run.build_config()?)?;
            commands::cmd_converge(&resolved, m_list, run.cache_dir.as_deref())
        }
        Command::Sweep {
            run,
            axis,
            values,
            jobs,
        } => {
            let resolved = commands::resolve(run.build_config()?)?;
            commands::cmd_sweep(&resolved, *axis, values, *jobs, run.cache_dir.as_deref())
        }
        Command::ShorttimeCheck(args) => {
            let resolved = commands::resolve(args.build_config()?)?;
            commands::cmd_shorttime_check(&resolved, args.cache_dir.as_deref())
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            let message = err.message();
            if !message.is_empty() {
                eprintln!("error: {message}");
            }
            ExitCode::from(err.exit_code())
        }
    }
}
