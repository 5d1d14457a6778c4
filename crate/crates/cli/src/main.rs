//! `mgtf`: scans and reports for the MGT-Fourier system.
//!
//! Exit codes: 0 on success (a flagged blow-up counts as success), 1 for bad
//! arguments, 2 for numerical failures and failed report checks.

mod args;
mod commands;
mod output;

use std::fs;
use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use mgt_fourier::Error;

use crate::args::{Cli, RunConfig};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Numerical(String),
    Io(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => 1,
            CliError::Numerical(_) => 2,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "invalid arguments: {m}"),
            CliError::Numerical(m) => write!(f, "numerical failure: {m}"),
            CliError::Io(m) => write!(f, "output error: {m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParams(_) => CliError::Usage(e.to_string()),
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

fn run(cli: &Cli) -> Result<bool, CliError> {
    let cfg = RunConfig::from_cli(cli)?;
    let out = commands::run(&cfg)?;
    match &cfg.out {
        Some(path) => fs::write(path, &out.text)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?,
        None => std::io::stdout()
            .lock()
            .write_all(out.text.as_bytes())
            .map_err(|e| CliError::Io(e.to_string()))?,
    }
    Ok(!out.failed)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("mgtf: one or more checks failed");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("mgtf: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
