//! The `sawlab` command line: argument grammar, dispatch and report encoding.

pub mod commands;
pub mod config;
pub mod report;

use std::io::Write;
use std::time::Instant;

use thiserror::Error;

use config::{Format, RunConfig};
use report::{write_csv, RunReport};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid argument: {0}")]
    Validation(String),
    #[error(transparent)]
    Core(#[from] sawlab::Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("{0} reference check(s) failed")]
    CheckFailed(usize),
}

impl CliError {
    /// 2 for bad input, 3 for refused budgets, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Core(sawlab::Error::Budget { .. }) => 3,
            CliError::Core(e) if is_precondition(e) => 2,
            _ => 1,
        }
    }
}

fn is_precondition(e: &sawlab::Error) -> bool {
    use sawlab::Error::*;
    matches!(
        e,
        Domain(_) | InsufficientData { .. } | AbsentPerimeter(_) | AbsentDisplacement(_) | AbsentLength(_) | Coverage { .. }
    )
}

/// Runs the configured computation and builds its report.
pub fn execute(config: &RunConfig) -> Result<RunReport, CliError> {
    let start = Instant::now();
    let outcome = commands::run(config)?;
    Ok(RunReport {
        config: config.clone(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        timing_ms: start.elapsed().as_secs_f64() * 1e3,
        results: outcome.results,
        golden_checks: outcome.checks,
    })
}

pub fn render(report: &RunReport, format: Format, mut out: impl Write) -> Result<(), CliError> {
    match format {
        Format::Json => {
            out.write_all(report.to_json()?.as_bytes())?;
            out.write_all(b"\n")?;
        }
        Format::Csv => write_csv(&report.results, out)?,
    }
    Ok(())
}
