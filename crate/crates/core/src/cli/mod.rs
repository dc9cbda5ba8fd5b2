//! Batch front end: config parsing, single runs, sweeps, rate tables and
//! protocol comparisons.

pub mod commands;
pub mod config;
pub mod output;
pub mod units;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use thiserror::Error;

use crate::error::{CycleError, ModelError};
use config::{OutputFormat, RunConfig};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{source_name}:{line}:{column}: {message}")]
    Parse {
        source_name: String,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("invalid field `{field}`: {message}")]
    Invalid { field: String, message: String },
    #[error(transparent)]
    Cycle(#[from] CycleError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("{context}: {source}")]
    Run { context: String, source: CycleError },
    #[error("first-law closure violated at emission: relative residual {0}")]
    FirstLaw(f64),
    #[error("writing output: {0}")]
    Output(String),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn invalid(field: &str, message: &str) -> Self {
        CliError::Invalid {
            field: field.to_string(),
            message: message.to_string(),
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "sudden-otto",
    version,
    about = "Two-level-system Otto refrigerator simulator"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// JSON run configuration.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output file; standard output when omitted.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<OutputFormat>,
    /// Report dimensioned columns in SI units (needs `si.reference_kelvin` in the config).
    #[arg(long, global = true)]
    pub si: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Solve one limit cycle and attach closed-form comparators.
    Simulate,
    /// Evaluate the configuration over 1 or 2 sweep axes.
    Sweep,
    /// Tabulate resonator-filtered rates against level splitting.
    Rates,
    /// Run all three protocols on identical rates and temperatures.
    Compare,
}

pub fn execute(command: Command, config: &RunConfig) -> Result<output::Table, CliError> {
    match command {
        Command::Simulate => commands::simulate(config),
        Command::Sweep => commands::sweep(config),
        Command::Rates => commands::rates(config),
        Command::Compare => commands::compare(config),
    }
}

pub fn run(cli: &Cli) -> Result<(), CliError> {
    let path = cli
        .config
        .as_ref()
        .ok_or_else(|| CliError::Usage("--config <path> is required".into()))?;
    let config = RunConfig::load(path)?;
    let mut table = execute(cli.command, &config)?;
    if cli.si {
        let units = config.si.ok_or_else(|| {
            CliError::Usage("--si needs `si.reference_kelvin` in the config".into())
        })?;
        table = table.to_si(&units);
    }
    let format = cli.format.or(config.output.format).unwrap_or_default();
    let target = cli
        .output
        .clone()
        .or_else(|| config.output.path.as_ref().map(PathBuf::from));
    match target {
        Some(p) => {
            let file = File::create(&p).map_err(|e| CliError::Io {
                path: p.display().to_string(),
                message: e.to_string(),
            })?;
            let mut w = BufWriter::new(file);
            table.write(format, &mut w)?;
            w.flush().map_err(|e| CliError::Output(e.to_string()))
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            table.write(format, &mut lock)
        }
    }
}

/// Entry point of the binary; returns the process exit code.
pub fn main() -> i32 {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}
