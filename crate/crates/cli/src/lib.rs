//! Command-line driver: scenario runs, sweeps and CSV artifacts.

pub mod config;
pub mod output;
pub mod run;
pub mod sweep;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

pub use config::{ConfigError, Method, Scenario, ScenarioArgs, ScenarioConfig};
pub use run::{run, RunReport};
pub use sweep::{sweep, SweepParameter, SweepRow};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Numerical(#[from] coherent_ladder::Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {reason}")]
    Parse { path: PathBuf, reason: String },
}

impl CliError {
    /// 2 for configuration problems, 3 for numerical failures, 1 for I/O.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(coherent_ladder::Error::InvalidParameter { .. }) => 2,
            CliError::Numerical(_) => 3,
            CliError::Io { .. } | CliError::Parse { .. } => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "ladder", version, about = "Coherent dynamics of laser-driven ladder systems")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simulate one scenario and write populations, observables and a plot script.
    Run(RunArgs),
    /// Repeat a scenario over a list of N or epsilon values.
    Sweep(SweepArgs),
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub scenario: ScenarioArgs,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub scenario: ScenarioArgs,
    #[arg(long, value_enum)]
    pub vary: SweepParameter,
    /// Comma-separated values.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub values: Vec<String>,
}

pub fn execute(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Run(args) => {
            let config = args.scenario.resolve()?;
            let report = run(&config)?;
            if let (Some(pop), Some(amp)) = (report.max_pop_err_vs_oracle, report.max_amp_err_vs_oracle) {
                println!("max |rho err| vs oracle: {pop:.3e}, max |amp err|: {amp:.3e}");
            }
            println!("wrote {}", config.output_dir.display());
        }
        Command::Sweep(args) => {
            let config = args.scenario.resolve()?;
            let rows = sweep(&config, args.vary, &args.values)?;
            println!("wrote {} entries to {}", rows.len(), config.output_dir.display());
        }
    }
    Ok(())
}

/// Parse the process arguments, run, and map failures onto exit codes.
pub fn main_entry() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
