use std::fmt::Write;

use rand_distr::{Distribution, Exp1};
use rayon::prelude::*;
use serde::Serialize;

use super::DiagnosticsError;
use crate::rng::{mix_seed, stream_rng, Domain};
use crate::signed_graph::{SignedGraph, VertexId};
use crate::walkers::{step, WalkError};

/// Empirical `mu_{x,t,+}(y) = P(X(t) = y, path even)` and its odd twin.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OccupationMeasurePair {
    pub start: VertexId,
    pub t: f64,
    pub samples: u64,
    pub mu_plus: Vec<f64>,
    pub mu_minus: Vec<f64>,
}

impl OccupationMeasurePair {
    pub fn total_mass(&self) -> f64 {
        self.mu_plus.iter().chain(&self.mu_minus).sum()
    }

    /// CSV `y,mu_plus,mu_minus`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("y,mu_plus,mu_minus\n");
        for (y, (p, m)) in self.mu_plus.iter().zip(&self.mu_minus).enumerate() {
            let _ = writeln!(out, "{y},{p},{m}");
        }
        out
    }
}

/// Runs `samples` independent signed walks from `x` to time `t`.
pub fn estimate_mu_pm(
    graph: &SignedGraph,
    x: VertexId,
    t: f64,
    samples: u64,
    seed: u64,
) -> Result<OccupationMeasurePair, DiagnosticsError> {
    if !(t > 0.0) {
        return Err(WalkError::NonPositiveHorizon(t).into());
    }
    if samples == 0 {
        return Err(DiagnosticsError::ZeroSamples);
    }
    if x.index() >= graph.vertex_count() {
        return Err(WalkError::UnknownVertex(x.index()).into());
    }
    let n = graph.vertex_count();
    let key = mix_seed(seed, x.index() as u64);
    // counts[2y] even endings at y, counts[2y+1] odd endings
    let counts = (0..samples)
        .into_par_iter()
        .fold(
            || vec![0u64; 2 * n],
            |mut acc, k| {
                let mut rng = stream_rng(key, Domain::Walk, k);
                let (mut at, mut odd, mut clock) = (x, false, 0.0);
                loop {
                    let hold: f64 = Exp1.sample(&mut rng);
                    clock += hold;
                    if clock > t {
                        break;
                    }
                    let (to, s) = step(graph, at, &mut rng);
                    at = to;
                    odd ^= s.is_minus();
                }
                acc[2 * at.index() + odd as usize] += 1;
                acc
            },
        )
        .reduce(
            || vec![0u64; 2 * n],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(u, v)| *u += v);
                a
            },
        );
    let total = samples as f64;
    Ok(OccupationMeasurePair {
        start: x,
        t,
        samples,
        mu_plus: (0..n).map(|y| counts[2 * y] as f64 / total).collect(),
        mu_minus: (0..n).map(|y| counts[2 * y + 1] as f64 / total).collect(),
    })
}

/// `sum_y |mu_plus(y) - mu_minus(y)|` (unnormalised L1; equals 1 at `t = 0`).
pub fn tv_gap(pair: &OccupationMeasurePair) -> f64 {
    pair.mu_plus.iter().zip(&pair.mu_minus).map(|(p, m)| (p - m).abs()).sum()
}

/// `max_x |h(x) - (1/d(x)) sum_{y ~ x} s(x, y) h(y)|`.
pub fn signed_harmonic_residual(graph: &SignedGraph, h: &[f64]) -> f64 {
    assert_eq!(h.len(), graph.vertex_count(), "one value per vertex");
    graph
        .vertices()
        .map(|x| {
            let avg: f64 = graph.adjacency(x).map(|(y, s)| s.to_f64() * h[y.index()]).sum::<f64>()
                / graph.degree(x) as f64;
            (h[x.index()] - avg).abs()
        })
        .fold(0.0, f64::max)
}
