//! Configuration, parallel sweeps and result files for `qfric-core`.

pub mod config;
pub mod output;
pub mod sweep;
pub mod validate;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use config::{ConfigError, Mode, RawConfig, RunConfig};

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const CONFIG: i32 = 2;
    pub const NUMERICAL: i32 = 3;
    pub const IO: i32 = 4;
}

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("I/O error: {0}")]
    Io(#[from] io::Error),
    #[error("numerical error: {0}")]
    Numerical(#[from] qfric_core::Error),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) => exit::CONFIG,
            RunError::Io(_) => exit::IO,
            RunError::Numerical(_) => exit::NUMERICAL,
        }
    }
}

/// Read the optional config file and apply overrides in order.
pub fn load_config(path: Option<&Path>, overrides: &[String]) -> Result<RunConfig, RunError> {
    let mut raw = match path {
        Some(p) => RawConfig::parse(&std::fs::read_to_string(p)?)?,
        None => RawConfig::default(),
    };
    for o in overrides {
        raw.set(o)?;
    }
    Ok(RunConfig::from_raw(&raw)?)
}

/// Execute a validated run, writing to `out`. Returns the exit code.
pub fn execute<W: Write>(cfg: &RunConfig, out: W) -> Result<i32, RunError> {
    match cfg.mode {
        Mode::Validate => {
            let checks = validate::run_invariants(&cfg.spectrum);
            validate::write_checks(out, &checks)?;
            Ok(if checks.iter().all(|c| c.passed) {
                exit::OK
            } else {
                exit::NUMERICAL
            })
        }
        Mode::Spectrum | Mode::TotalPower => {
            let report = sweep::run_sweep(&cfg.spectrum)?;
            if cfg.mode == Mode::Spectrum {
                output::write_spectrum(out, cfg, &report)?;
            } else {
                output::write_totals(out, cfg, &report)?;
            }
            let clean = report.rows_not_converged() == 0
                && (cfg.mode == Mode::Spectrum || report.totals.is_some());
            Ok(if clean { exit::OK } else { exit::NUMERICAL })
        }
    }
}

/// Execute to the configured destination (a file or standard output).
pub fn execute_to_destination(cfg: &RunConfig) -> Result<i32, RunError> {
    match &cfg.output {
        Some(path) => execute(cfg, BufWriter::new(File::create(path)?)),
        None => execute(cfg, io::stdout().lock()),
    }
}
