//! `ordeval` command-line tool.
//!
//! Exit codes: 0 success, 1 internal failure, 2 bad input (CSV, spec,
//! flags), 3 `verify` found a category mismatch.

mod args;
mod commands;
mod output;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};

#[derive(Debug)]
pub enum CliError {
    Input(String),
    Internal(String),
}

impl CliError {
    pub fn input(msg: impl Into<String>) -> Self {
        CliError::Input(msg.into())
    }

    pub fn internal(msg: impl Into<String>) -> Self {
        CliError::Internal(msg.into())
    }

    fn code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Internal(_) => 1,
        }
    }
}

impl From<ordeval_core::Error> for CliError {
    fn from(e: ordeval_core::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Analyze(a) => commands::analyze(a),
        Command::Rank(a) => commands::rank(a),
        Command::Classify(a) => commands::classify(a),
        Command::Simulate(a) => commands::simulate(a),
        Command::Render(a) => commands::render(a),
        Command::Verify(a) => commands::verify(a),
    };
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            let (CliError::Input(msg) | CliError::Internal(msg)) = &e;
            eprintln!("ordeval: {msg}");
            ExitCode::from(e.code())
        }
    }
}
