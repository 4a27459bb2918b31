use std::fs::File;
use std::io::{self, BufWriter};
use std::process::ExitCode;

use clap::Parser;

use sawlab_cli::config::{Cli, RunConfig};
use sawlab_cli::{execute, render, CliError};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("sawlab: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let config = RunConfig::from_cli(cli)?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build_global()
        .map_err(|e| CliError::Validation(e.to_string()))?;
    let report = execute(&config)?;
    match &config.common.out {
        Some(path) => render(&report, config.common.format, BufWriter::new(File::create(path)?))?,
        None => render(&report, config.common.format, io::stdout().lock())?,
    }
    if config.common.check {
        let mut failed = 0;
        for c in &report.golden_checks {
            let verdict = if c.passed { "PASS" } else { "FAIL" };
            eprintln!("{verdict} {}: computed {:e}, reference {:e}, rel err {:.2e} ({})", c.name, c.computed, c.reference, c.rel_err, c.citation);
            failed += usize::from(!c.passed);
        }
        if failed > 0 {
            return Err(CliError::CheckFailed(failed));
        }
    }
    Ok(())
}
