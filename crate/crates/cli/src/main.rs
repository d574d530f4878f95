mod args;
mod commands;
mod output;
mod verify;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};

/// Worker-count override for the thread pool.
const WORKERS_ENV: &str = "NCST_WORKERS";

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, config or inputs: exit 2.
    Usage(String),
    /// A computation could not produce a trustworthy number: exit 3.
    Numerical(String),
    Io(String),
}

impl CliError {
    fn io(e: impl std::fmt::Display) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<ncst_core::Error> for CliError {
    fn from(e: ncst_core::Error) -> Self {
        use ncst_core::Error::*;
        match e {
            Positivity { .. } | ImaginaryNorm { .. } | BranchCut(_) | NullWorldFunction => {
                CliError::Numerical(e.to_string())
            }
            _ => CliError::Usage(e.to_string()),
        }
    }
}

/// How a successful run ended.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    VerificationFailed,
    NotConverged,
}

fn configure_workers() -> Result<(), CliError> {
    let Ok(raw) = std::env::var(WORKERS_ENV) else {
        return Ok(());
    };
    let n: usize = raw.parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        CliError::Usage(format!(
            "{WORKERS_ENV} must be a positive integer, got {raw:?}"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Usage(e.to_string()))
}

fn run(cli: Cli) -> Result<Status, CliError> {
    configure_workers()?;
    match cli.command {
        Command::Distance(a) => commands::distance(&a),
        Command::Causal(a) => commands::causal(&a),
        Command::Verify(a) => verify::run(&a),
        Command::Sweep(a) => commands::sweep(&a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::VerificationFailed) => ExitCode::from(1),
        Ok(Status::NotConverged) => {
            eprintln!("warning: quadrature did not reach the requested tolerance");
            ExitCode::from(3)
        }
        Err(CliError::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(CliError::Numerical(m)) => {
            eprintln!("numerical failure: {m}");
            ExitCode::from(3)
        }
        Err(CliError::Io(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}
