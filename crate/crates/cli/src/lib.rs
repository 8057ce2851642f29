//! Batch driver for the `qcong` engine: configuration, case sweeps and
//! report emission.

pub mod bench;
pub mod cases;
pub mod config;
pub mod report;

use std::path::Path;

use thiserror::Error;

pub use cases::{expand, run_all, Case, ClassicalCase};
pub use config::{Check, ExponentPolicy, Format, RunConfig};
pub use report::{parse_csv, CsvRow, Entry, ReportSet};

/// Environment variable that overrides the worker count.
pub const PARALLELISM_ENV: &str = "QCONG_PARALLELISM";

pub const EXIT_OK: i32 = 0;
pub const EXIT_ASSERTED_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_WRITE: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("config: {0}")]
    Config(String),
    #[error("cannot write report: {0}")]
    Write(String),
    #[error("{0}")]
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Config(_) => EXIT_USAGE,
            CliError::Write(_) => EXIT_WRITE,
            CliError::Runtime(_) => EXIT_ASSERTED_FAILURE,
        }
    }
}

/// Worker count from the environment override, else the configured value.
pub fn effective_parallelism(configured: usize) -> Result<usize, CliError> {
    match std::env::var(PARALLELISM_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(n),
            _ => Err(CliError::Usage(format!("{PARALLELISM_ENV} = `{v}` must be a positive integer"))),
        },
        Err(_) => Ok(configured),
    }
}

/// Expands and runs a configuration.
pub fn sweep(cfg: &RunConfig, parallelism: usize) -> Result<ReportSet, CliError> {
    cfg.validate()?;
    let cases = expand(cfg)?;
    let entries = run_all(&cases, parallelism)?;
    Ok(ReportSet::new(entries, cfg.digest(), cfg.deterministic))
}

/// Writes the emitted report to `path`, or to stdout without one.
pub fn write_report(set: &ReportSet, format: Format, path: Option<&Path>) -> Result<(), CliError> {
    let bytes = set.emit(format)?;
    match path {
        Some(p) => std::fs::write(p, &bytes).map_err(|e| CliError::Write(format!("{}: {e}", p.display()))),
        None => {
            use std::io::Write;
            std::io::stdout()
                .write_all(&bytes)
                .map_err(|e| CliError::Write(format!("stdout: {e}")))
        }
    }
}

/// Exit code for a finished report.
pub fn exit_code_for(set: &ReportSet) -> i32 {
    if set.meta.asserted_failures == 0 {
        EXIT_OK
    } else {
        EXIT_ASSERTED_FAILURE
    }
}
