//! `adopt`: price ad options, study lattice convergence, test price series
//! for the GBM assumption, validate the SV lattice by Monte Carlo, and
//! simulate advertiser and publisher outcomes.
//!
//! Exit codes: 0 on success, 1 when a computation or validation fails,
//! 2 on a usage error.

mod args;
mod commands;
mod output;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};

/// Failure classes mapped onto exit codes.
#[derive(Debug)]
pub enum Failure {
    /// Bad flags or parameters, detected before any computation.
    Usage(String),
    /// The computation ran and failed, or a validation did not pass.
    Compute(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Compute(e)
    }
}

impl From<adopt::Error> for Failure {
    fn from(e: adopt::Error) -> Self {
        Failure::Compute(e.into())
    }
}

/// Wraps parameter-construction errors as usage errors.
pub fn usage<T>(r: adopt::Result<T>) -> Result<T, Failure> {
    r.map_err(|e| Failure::Usage(e.to_string()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Price(a) => commands::price(a),
        Command::Converge(a) => commands::converge(a),
        Command::Diagnose(a) => commands::diagnose(a),
        Command::Validate(a) => commands::validate(a),
        Command::Simulate(a) => commands::simulate(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Compute(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
