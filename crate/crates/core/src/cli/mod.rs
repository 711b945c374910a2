//! Config-driven experiment runner behind the `zeno-lab` binary.
//!
//! A run parses one JSON [`ExperimentConfig`], executes it and writes
//! `survival.csv`, `summary.json` and `plot.svg` into an output directory.
//! Nothing touches the file system until the config has validated.

mod config;
mod output;
mod presets;
mod run;

use std::path::{Path, PathBuf};

pub use config::{ConfigError, Experiment, ExperimentConfig, Format, ModelSpec, OutputSpec, RunSpec};
pub use output::{render_csv, render_summary, render_svg, write_artifacts};
pub use presets::{apply_override, list_presets, list_presets_json, preset, Preset, PRESETS};
pub use run::{execute, Check, Outcome, Relation, Summary, Table};

use crate::Error;

/// Environment variable naming the default output directory.
pub const OUT_ENV: &str = "ZENO_LAB_OUT";
pub const DEFAULT_OUT: &str = "zeno-lab-out";

/// Why a run did not succeed, with the matching process exit code.
#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("{0}")]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Runtime(Error),
    #[error("cannot write {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) => 2,
            RunError::Runtime(Error::Config(_) | Error::Contract(_)) => 2,
            RunError::Runtime(_) | RunError::Io { .. } => 3,
        }
    }
}

impl From<Error> for RunError {
    fn from(e: Error) -> Self {
        match e {
            Error::Config(m) | Error::Contract(m) => RunError::Config(ConfigError { line: None, message: m }),
            other => RunError::Runtime(other),
        }
    }
}

/// A finished run: where it landed and whether every check passed.
#[derive(Debug)]
pub struct RunReport {
    pub outcome: Outcome,
    pub dir: PathBuf,
    pub files: Vec<PathBuf>,
}

impl RunReport {
    pub fn passed(&self) -> bool {
        self.outcome.summary.passed
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }
}

/// `--out`, then `output.dir` in the config, then `$ZENO_LAB_OUT`, then
/// `./zeno-lab-out`.
pub fn resolve_out_dir(cli: Option<&Path>, cfg: &ExperimentConfig) -> PathBuf {
    cli.map(Path::to_path_buf)
        .or_else(|| cfg.output.dir.clone())
        .or_else(|| std::env::var_os(OUT_ENV).filter(|v| !v.is_empty()).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT))
}

/// Execute `cfg` on a pool of `jobs` threads (all cores when `None`) and
/// write its artifacts. Simulation errors leave the directory untouched.
pub fn run_config(cfg: &ExperimentConfig, out: Option<&Path>, jobs: Option<usize>) -> Result<RunReport, RunError> {
    let dir = resolve_out_dir(out, cfg);
    let outcome = match jobs {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| RunError::Runtime(Error::Numeric(format!("thread pool: {e}"))))?
            .install(|| execute(cfg))?,
        None => execute(cfg)?,
    };
    let files = write_artifacts(&outcome, &dir, &cfg.output.formats, cfg.output.log_scale)
        .map_err(|source| RunError::Io { path: dir.clone(), source })?;
    log::info!("wrote {} file(s) to {}", files.len(), dir.display());
    Ok(RunReport { outcome, dir, files })
}

/// Read, parse and run a config file.
pub fn run_config_file(path: &Path, out: Option<&Path>, jobs: Option<usize>) -> Result<RunReport, RunError> {
    let src = std::fs::read_to_string(path).map_err(|e| ConfigError {
        line: None,
        message: format!("cannot read {}: {e}", path.display()),
    })?;
    run_config(&ExperimentConfig::from_json_str(&src)?, out, jobs)
}

/// Build a preset, apply `path=value` overrides and run it.
pub fn run_preset(name: &str, overrides: &[String], out: Option<&Path>, jobs: Option<usize>) -> Result<RunReport, RunError> {
    let mut doc = preset(name).ok_or_else(|| ConfigError {
        line: None,
        message: format!(
            "unknown preset `{name}`; available: {}",
            PRESETS.iter().map(|p| p.name).collect::<Vec<_>>().join(", ")
        ),
    })?;
    for o in overrides {
        apply_override(&mut doc, o)?;
    }
    run_config(&ExperimentConfig::from_value(doc)?, out, jobs)
}
