//! Config-driven experiment runner.
//!
//! A run reads one [`ExperimentConfig`], builds the graph, performs the named
//! experiment on a rayon pool of `workers` threads and writes its CSV/JSON
//! artifacts plus `manifest.json` into `output_dir`. Results never depend on
//! the worker count: replica `k` always uses the seed `mix_seed(seed, k)` and
//! results are collected in replica order.

mod config;
mod experiments;
mod manifest;

use std::collections::BTreeMap;
use std::path::{Path as FsPath, PathBuf};
use std::time::Instant;

use thiserror::Error;

pub use config::{validate, ExperimentConfig, ExperimentSpec, GraphSpec, ShellSpec};
pub use manifest::{sha256_hex, RunManifest};

/// Exit status of a run that did not succeed cleanly.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum RunError {
    #[error("invalid configuration:\n  {}", .0.join("\n  "))]
    Config(Vec<String>),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("starved estimate: {0}")]
    Starved(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Io(_) => 1,
            RunError::Config(_) => 2,
            RunError::Numerical(_) => 3,
            RunError::Starved(_) => 4,
        }
    }
}

/// What an experiment produced before anything is written to disk.
#[derive(Debug, Default)]
pub(crate) struct Artifacts {
    pub files: BTreeMap<String, String>,
    pub replica_seeds: Vec<u64>,
    /// A result-level problem: artifacts are still written, then reported.
    pub status: Option<RunError>,
}

impl Artifacts {
    pub fn add(&mut self, name: &str, content: String) {
        self.files.insert(name.to_string(), content);
    }

    pub fn add_json<T: serde::Serialize>(&mut self, name: &str, value: &T) {
        let mut text = serde_json::to_string_pretty(value).expect("artifact serialises");
        text.push('\n');
        self.add(name, text);
    }
}

/// Outcome of a run whose artifacts were written.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub output_dir: PathBuf,
    pub manifest: RunManifest,
    /// Set when the run wrote its artifacts but flagged a starved estimate or
    /// a failed exactness check.
    pub status: Option<RunError>,
}

impl RunOutcome {
    pub fn exit_code(&self) -> i32 {
        self.status.as_ref().map_or(0, RunError::exit_code)
    }
}

/// Reads a TOML config from disk.
pub fn load_config(path: &FsPath) -> Result<ExperimentConfig, RunError> {
    let text = std::fs::read_to_string(path).map_err(|e| RunError::Io(format!("{}: {e}", path.display())))?;
    ExperimentConfig::from_toml(&text).map_err(|e| RunError::Config(vec![e]))
}

/// Validates and runs `config`. Relative paths inside the config (graph
/// files) are resolved against `base`; `output_dir` is used as given.
///
/// Configuration and numerical errors that occur before the results exist
/// produce no files. Starved estimates and failed exactness checks still
/// write every artifact and the manifest, and are reported in
/// [`RunOutcome::status`].
pub fn run(config: &ExperimentConfig, base: Option<&FsPath>) -> Result<RunOutcome, RunError> {
    let issues = validate(config, base);
    if !issues.is_empty() {
        return Err(RunError::Config(issues));
    }
    let graph = config.graph.build(base).map_err(|e| RunError::Config(vec![e]))?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|e| RunError::Io(e.to_string()))?;
    let started = std::time::SystemTime::now();
    let clock = Instant::now();
    let artifacts = pool.install(|| experiments::dispatch(config, &graph))?;
    let wall = clock.elapsed().as_secs_f64();

    let dir = config.output_dir.clone().expect("validated");
    std::fs::create_dir_all(&dir).map_err(|e| RunError::Io(format!("{}: {e}", dir.display())))?;
    let mut outputs = BTreeMap::new();
    for (name, content) in &artifacts.files {
        let path = dir.join(name);
        std::fs::write(&path, content).map_err(|e| RunError::Io(format!("{}: {e}", path.display())))?;
        outputs.insert(name.clone(), sha256_hex(content.as_bytes()));
    }
    let manifest = RunManifest::new(config, &graph, started, wall, artifacts.replica_seeds, outputs, &artifacts.status);
    let path = dir.join("manifest.json");
    std::fs::write(&path, manifest.to_json()).map_err(|e| RunError::Io(format!("{}: {e}", path.display())))?;
    Ok(RunOutcome { output_dir: dir, manifest, status: artifacts.status })
}
