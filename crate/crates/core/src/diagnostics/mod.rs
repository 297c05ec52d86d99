//! Monte Carlo ergodicity diagnostics.
//!
//! Parity statistics of walks between nested shells, sign classification and
//! compatibility of shell points, the even/odd occupation measures `mu_+` and
//! `mu_-` with their L1 gap, and the signed-harmonic residual of one-point
//! functions.

mod occupation;
mod parity;
mod shells;
mod signs;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::walkers::WalkError;

pub use occupation::{estimate_mu_pm, signed_harmonic_residual, tv_gap, OccupationMeasurePair};
pub use parity::{
    estimate_parity, estimate_shell_statistics, ParityEstimate, ParityTable, ShellStatistics, ShellTerm,
};
pub use shells::ShellSystem;
pub use signs::{
    assign_site_signs, check_compatibility, classify_sign, Compatibility, CompatibilityCheck, CompatibilityKind,
    SignClass, SiteSigns, SAME_SIGN_ODD_LIMIT,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DiagnosticsError {
    #[error("geometric shells need vertex coordinates")]
    MissingLabels,
    #[error("radii must be positive and strictly increasing")]
    RadiiNotIncreasing,
    #[error("shell {0} is empty")]
    EmptyShell(usize),
    #[error("shells {0} and {1} overlap")]
    OverlappingShells(usize, usize),
    #[error("ball of shell {0} reaches the window boundary; use a larger window or smaller radii")]
    ShellOutsideWindow(usize),
    #[error("shell index {index} outside 1..={count}")]
    ShellOutOfRange { index: usize, count: usize },
    #[error("vertex {vertex} is not on shell {shell}")]
    WrongShell { vertex: usize, shell: usize },
    #[error("start vertex {0} already lies in the stop set")]
    StartInStopSet(usize),
    #[error("stop set cannot be reached from vertex {0}")]
    StopUnreachable(usize),
    #[error("a walk from vertex {0} did not reach the stop set within {1} steps")]
    StepCapExceeded(usize, u64),
    #[error("reference path never reaches shell {0}")]
    ReferenceMissesShell(usize),
    #[error("sample count must be positive")]
    ZeroSamples,
    #[error(transparent)]
    Walk(#[from] WalkError),
}

/// Knobs shared by the parity-based estimators.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ParityOptions {
    /// Walks per start vertex.
    pub samples: u64,
    pub seed: u64,
    /// Endpoints with fewer conditioned hits are reported as starved.
    pub min_hits: u64,
    /// Sign classification threshold on the conditional even/odd probability.
    pub threshold: f64,
    /// Per-walk jump cap before giving up with an error.
    pub max_steps: u64,
}

impl Default for ParityOptions {
    fn default() -> Self {
        ParityOptions { samples: 10_000, seed: 0, min_hits: 25, threshold: 0.75, max_steps: 50_000_000 }
    }
}

impl ParityOptions {
    pub fn new(samples: u64, seed: u64) -> Self {
        ParityOptions { samples, seed, ..Default::default() }
    }
}

/// 95% Wilson score interval `(center, half_width)` for `k` successes in `n`.
pub fn wilson_interval(k: u64, n: u64) -> (f64, f64) {
    if n == 0 {
        return (0.5, 0.5);
    }
    const Z: f64 = 1.959_963_984_540_054;
    let n = n as f64;
    let p = k as f64 / n;
    let z2 = Z * Z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = Z / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    (center, half)
}
