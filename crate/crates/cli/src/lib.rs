//! Experiment runner: configuration, dispatch, report and figure output.

pub mod config;
pub mod experiments;
pub mod oracle;
pub mod output;

use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use bvlab_core::{CheckRow, LabError};
use thiserror::Error;

pub use config::{Experiment, ExperimentConfig};
pub use experiments::{canonical_suite, SuiteCase};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    Lab(#[from] LabError),
    #[error("i/o: {0}")]
    Io(#[from] io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Lab(LabError::InvalidArgument(_)) => 2,
            CliError::Lab(LabError::ResolutionInsufficient(_)) => 3,
            _ => 4,
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunReport {
    pub experiment: Experiment,
    pub config_echo: String,
    pub rows: Vec<CheckRow>,
    /// Written artifacts in creation order.
    pub files: Vec<PathBuf>,
    pub elapsed: Duration,
}

impl RunReport {
    pub fn failures(&self) -> impl Iterator<Item = &CheckRow> {
        self.rows.iter().filter(|r| r.failed())
    }

    /// 0 when no asserted row failed, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        i32::from(self.failures().next().is_some())
    }

    pub fn summary(&self) -> String {
        let count = |s| self.rows.iter().filter(|r| r.status == s).count();
        use bvlab_core::Status::*;
        format!(
            "{}: {} pass, {} fail, {} untrusted, {} info in {:.1} s",
            self.experiment,
            count(Pass),
            count(Fail),
            count(Untrusted),
            count(Info),
            self.elapsed.as_secs_f64()
        )
    }
}

/// Runs the experiment and writes `report.csv`, `config.txt`, one
/// `profile_<name>.csv` per profile and, if enabled, one SVG per figure into
/// `cfg.out_dir`.
pub fn run(cfg: &ExperimentConfig) -> Result<RunReport, CliError> {
    let start = Instant::now();
    let outcome = experiments::execute(cfg)?;
    let dir = &cfg.out_dir;
    fs::create_dir_all(dir)?;
    let mut files = Vec::new();
    let mut record = |p: PathBuf| -> PathBuf {
        files.push(p.clone());
        p
    };
    output::write_report(&record(dir.join("report.csv")), &outcome.rows)?;
    let echo = cfg.echo();
    fs::write(record(dir.join("config.txt")), &echo)?;
    for p in &outcome.profiles {
        output::write_profile(&record(dir.join(format!("profile_{}.csv", p.name))), p)?;
    }
    if cfg.svg {
        for f in &outcome.figures {
            output::emit_svg(&f.space, &f.layers, &record(dir.join(format!("{}.svg", f.name))))?;
        }
    }
    Ok(RunReport {
        experiment: cfg.experiment,
        config_echo: echo,
        rows: outcome.rows,
        files,
        elapsed: start.elapsed(),
    })
}

/// Reads a config file and applies the overrides.
pub fn load_config(path: &Path, overrides: &[String]) -> Result<ExperimentConfig, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    ExperimentConfig::parse(&text, overrides)
}
