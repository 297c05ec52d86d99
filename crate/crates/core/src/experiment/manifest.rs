use std::collections::BTreeMap;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{ExperimentConfig, RunError};
use crate::signed_graph::SignedGraph;

/// Record of one run, written as `manifest.json`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub experiment: String,
    pub library_version: String,
    /// The effective configuration (after command-line overrides) as TOML.
    pub config_toml: String,
    pub config: serde_json::Value,
    pub graph_vertices: usize,
    pub graph_edges: usize,
    pub graph_digest: String,
    pub started_unix_seconds: u64,
    pub wall_clock_seconds: f64,
    pub workers: usize,
    pub replica_seeds: Vec<u64>,
    /// File name to SHA-256 of its contents.
    pub outputs: BTreeMap<String, String>,
    pub status: String,
    pub exit_code: i32,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

impl RunManifest {
    pub(crate) fn new(
        config: &ExperimentConfig,
        graph: &SignedGraph,
        started: SystemTime,
        wall_clock_seconds: f64,
        replica_seeds: Vec<u64>,
        outputs: BTreeMap<String, String>,
        status: &Option<RunError>,
    ) -> Self {
        RunManifest {
            experiment: config.experiment.name().to_string(),
            library_version: env!("CARGO_PKG_VERSION").to_string(),
            config_toml: config.to_toml(),
            config: serde_json::to_value(config).expect("config serialises"),
            graph_vertices: graph.vertex_count(),
            graph_edges: graph.edge_count(),
            graph_digest: format!("{:016x}", graph.digest()),
            started_unix_seconds: started.duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs()),
            wall_clock_seconds,
            workers: config.workers,
            replica_seeds,
            outputs,
            status: status.as_ref().map_or_else(|| "ok".to_string(), |e| e.to_string()),
            exit_code: status.as_ref().map_or(0, RunError::exit_code),
        }
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("manifest serialises");
        text.push('\n');
        text
    }

    pub fn from_json(text: &str) -> Result<Self, String> {
        serde_json::from_str(text).map_err(|e| e.to_string())
    }

    /// The configuration recorded in the manifest.
    pub fn config(&self) -> Result<ExperimentConfig, String> {
        ExperimentConfig::from_toml(&self.config_toml)
    }
}
