use std::path::{Path as FsPath, PathBuf};

use serde::{Deserialize, Serialize};

use crate::exact::DEFAULT_STATE_CAP;
use crate::signed_graph::{
    build_frustrated_cycle, build_lattice_window, build_paired_tree, build_z4_staircase, staircase_scales,
    Boundary, GraphError, SignRule, SignedGraph,
};

/// A whole experiment description, usually read from a TOML file.
///
/// Top-level keys are optional at parse time so that [`validate`] can report
/// every missing one instead of stopping at the first.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub seed: Option<u64>,
    pub samples: Option<u64>,
    #[serde(default = "default_workers")]
    pub workers: usize,
    pub output_dir: Option<PathBuf>,
    pub graph: GraphSpec,
    pub experiment: ExperimentSpec,
}

fn default_workers() -> usize {
    1
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "builder", rename_all = "kebab-case", deny_unknown_fields)]
pub enum GraphSpec {
    Lattice {
        dim: usize,
        extent: Vec<usize>,
        boundary: Boundary,
        #[serde(default = "all_positive")]
        signs: SignRule,
    },
    FrustratedCycle {
        n: usize,
        negative: usize,
    },
    PairedTree {
        children: Vec<usize>,
        #[serde(default)]
        pairing_generations: Vec<usize>,
        depth: usize,
    },
    Z4Staircase {
        /// Explicit scales; if absent they are generated from `first`,
        /// `count` and `kappa`.
        scales: Option<Vec<usize>>,
        first: Option<usize>,
        count: Option<usize>,
        kappa: Option<f64>,
        extent: usize,
    },
    File {
        path: PathBuf,
    },
}

fn all_positive() -> SignRule {
    SignRule::AllPositive
}

impl GraphSpec {
    /// Builds the graph; relative file paths are resolved against `base`.
    pub fn build(&self, base: Option<&FsPath>) -> Result<SignedGraph, String> {
        let graph = match self {
            GraphSpec::Lattice { dim, extent, boundary, signs } => build_lattice_window(*dim, extent, *boundary, signs),
            GraphSpec::FrustratedCycle { n, negative } => build_frustrated_cycle(*n, *negative),
            GraphSpec::PairedTree { children, pairing_generations, depth } => {
                build_paired_tree(children, pairing_generations, *depth)
            }
            GraphSpec::Z4Staircase { scales, first, count, kappa, extent } => {
                let scales = match (scales, first, count, kappa) {
                    (Some(s), None, None, None) => s.clone(),
                    (None, Some(f), Some(c), Some(k)) => staircase_scales(*f, *c, *k),
                    _ => return Err("z4-staircase needs either `scales` or all of `first`, `count`, `kappa`".into()),
                };
                build_z4_staircase(&scales, *extent)
            }
            GraphSpec::File { path } => {
                let full = match base {
                    Some(b) if path.is_relative() => b.join(path),
                    _ => path.clone(),
                };
                let text = std::fs::read_to_string(&full).map_err(|e| format!("reading {}: {e}", full.display()))?;
                SignedGraph::from_text(&text)
            }
        };
        graph.map_err(|e: GraphError| e.to_string())
    }
}

/// Shell layout for the shell-based experiments.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShellSpec {
    pub center: usize,
    /// Ball radii; defaults to `2, 4, ..., 2^count`.
    pub radii: Option<Vec<f64>>,
    pub count: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ExperimentSpec {
    /// Forward evolution against dual reconstruction, `samples` seeds.
    DualityCheck { t_grid: Vec<f64> },
    Balance,
    Exact {
        #[serde(default = "default_cap")]
        cap: usize,
    },
    /// Parity table from `start` to the stop set.
    Parity {
        start: usize,
        stop: Vec<usize>,
        #[serde(default = "default_min_hits")]
        min_hits: u64,
        #[serde(default)]
        allow_starved: bool,
    },
    /// Truncated `I` and `H` over the shells.
    Shells {
        shells: ShellSpec,
        n_max: usize,
        #[serde(default = "default_min_hits")]
        min_hits: u64,
        #[serde(default)]
        allow_starved: bool,
    },
    MuGap { start: usize, t_grid: Vec<f64> },
    Loops { start: usize, horizon: f64 },
    Couple {
        start: usize,
        shifts: Vec<f64>,
        horizon: f64,
        /// Deadline for counting a run as coupled.
        deadline: f64,
    },
    CanonicalEq {
        /// Sites to sample; all vertices when absent.
        sites: Option<Vec<usize>>,
        horizon: f64,
    },
}

fn default_cap() -> usize {
    DEFAULT_STATE_CAP
}

fn default_min_hits() -> u64 {
    25
}

impl ExperimentSpec {
    pub fn name(&self) -> &'static str {
        match self {
            ExperimentSpec::DualityCheck { .. } => "duality-check",
            ExperimentSpec::Balance => "balance",
            ExperimentSpec::Exact { .. } => "exact",
            ExperimentSpec::Parity { .. } => "parity",
            ExperimentSpec::Shells { .. } => "shells",
            ExperimentSpec::MuGap { .. } => "mu-gap",
            ExperimentSpec::Loops { .. } => "loops",
            ExperimentSpec::Couple { .. } => "couple",
            ExperimentSpec::CanonicalEq { .. } => "canonical-eq",
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self, String> {
        toml::from_str(text).map_err(|e| e.to_string())
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serialises")
    }

    pub fn seed(&self) -> u64 {
        self.seed.expect("validated config has a seed")
    }

    pub fn samples(&self) -> u64 {
        self.samples.expect("validated config has samples")
    }
}

fn check_times(name: &str, times: &[f64], allow_zero: bool, issues: &mut Vec<String>) {
    if times.is_empty() {
        issues.push(format!("{name} must not be empty"));
    }
    for &t in times {
        if !t.is_finite() || t < 0.0 || (!allow_zero && t == 0.0) {
            issues.push(format!("{name} contains invalid time {t}"));
        }
    }
}

fn check_vertex(name: &str, v: usize, n: usize, issues: &mut Vec<String>) {
    if v >= n {
        issues.push(format!("{name} = {v} is not a vertex (graph has {n})"));
    }
}

/// Every problem that would stop `config` from running; empty iff runnable.
/// `base` resolves relative graph file paths.
pub fn validate(config: &ExperimentConfig, base: Option<&FsPath>) -> Vec<String> {
    let mut issues = Vec::new();
    if config.seed.is_none() {
        issues.push("missing `seed`".to_string());
    }
    match config.samples {
        None => issues.push("missing `samples`".to_string()),
        Some(0) => issues.push("`samples` must be positive".to_string()),
        _ => {}
    }
    if config.workers == 0 {
        issues.push("`workers` must be at least 1".to_string());
    }
    if config.output_dir.is_none() {
        issues.push("missing `output_dir`".to_string());
    }
    let graph = match config.graph.build(base) {
        Ok(g) => g,
        Err(e) => {
            issues.push(format!("graph: {e}"));
            return issues;
        }
    };
    let n = graph.vertex_count();
    match &config.experiment {
        ExperimentSpec::DualityCheck { t_grid } => check_times("t_grid", t_grid, true, &mut issues),
        ExperimentSpec::Balance => {}
        ExperimentSpec::Exact { cap } => {
            if n > *cap {
                issues.push(format!("exact solver needs at most {cap} vertices, graph has {n}"));
            }
            if *cap > 24 {
                issues.push(format!("cap {cap} is above the supported maximum of 24"));
            }
        }
        ExperimentSpec::Parity { start, stop, .. } => {
            check_vertex("start", *start, n, &mut issues);
            if stop.is_empty() {
                issues.push("stop set must not be empty".into());
            }
            for &v in stop {
                check_vertex("stop vertex", v, n, &mut issues);
            }
            if stop.contains(start) {
                issues.push("start lies in the stop set".into());
            }
        }
        ExperimentSpec::Shells { shells, n_max, .. } => {
            check_vertex("shells.center", shells.center, n, &mut issues);
            let count = shells.radii.as_ref().map(Vec::len).or(shells.count).unwrap_or(0);
            if count == 0 {
                issues.push("shells need `radii` or a positive `count`".into());
            }
            if *n_max == 0 || n_max + 1 > count {
                issues.push(format!("n_max = {n_max} needs 1 <= n_max < shell count ({count})"));
            }
        }
        ExperimentSpec::MuGap { start, t_grid } => {
            check_vertex("start", *start, n, &mut issues);
            check_times("t_grid", t_grid, false, &mut issues);
        }
        ExperimentSpec::Loops { start, horizon } => {
            check_vertex("start", *start, n, &mut issues);
            check_times("horizon", &[*horizon], false, &mut issues);
        }
        ExperimentSpec::Couple { start, shifts, horizon, deadline } => {
            check_vertex("start", *start, n, &mut issues);
            check_times("shifts", shifts, true, &mut issues);
            check_times("horizon", &[*horizon], false, &mut issues);
            check_times("deadline", &[*deadline], true, &mut issues);
            if deadline > horizon {
                issues.push("deadline must not exceed horizon".into());
            }
        }
        ExperimentSpec::CanonicalEq { sites, horizon } => {
            check_times("horizon", &[*horizon], false, &mut issues);
            match sites {
                Some(s) if s.is_empty() => issues.push("sites must not be empty".into()),
                Some(s) => s.iter().for_each(|&v| check_vertex("site", v, n, &mut issues)),
                None => {}
            }
        }
    }
    issues
}
