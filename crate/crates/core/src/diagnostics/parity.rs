use std::collections::BTreeMap;
use std::fmt::Write;

use rayon::prelude::*;
use serde::Serialize;

use super::{wilson_interval, DiagnosticsError, ParityOptions, ShellSystem};
use crate::rng::{mix_seed, stream_rng, Domain};
use crate::signed_graph::{SignedGraph, VertexId};
use crate::walkers::walk_until_hit;

/// Parity of the walk from a start to its first hit of a stop set,
/// conditioned on the hit landing at `endpoint`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ParityEstimate {
    pub endpoint: VertexId,
    /// Walks that ended at `endpoint`.
    pub hits: u64,
    pub even_hits: u64,
    pub p_even: f64,
    pub p_odd: f64,
    /// `min(p_even, p_odd)`.
    pub n_value: f64,
    /// 95% Wilson half-width for `p_even`.
    pub ci_halfwidth: f64,
    pub starved: bool,
}

impl ParityEstimate {
    fn from_counts(endpoint: VertexId, hits: u64, even_hits: u64, min_hits: u64) -> Self {
        let p_even = even_hits as f64 / hits as f64;
        let p_odd = (hits - even_hits) as f64 / hits as f64;
        ParityEstimate {
            endpoint,
            hits,
            even_hits,
            p_even,
            p_odd,
            n_value: p_even.min(p_odd),
            ci_halfwidth: wilson_interval(even_hits, hits).1,
            starved: hits < min_hits,
        }
    }

    /// Fraction of all walks from the start that ended here.
    pub fn hit_fraction(&self, samples: u64) -> f64 {
        self.hits as f64 / samples as f64
    }
}

/// All endpoint estimates from one start vertex and stop set.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ParityTable {
    pub start: VertexId,
    pub samples: u64,
    pub endpoints: BTreeMap<VertexId, ParityEstimate>,
}

impl ParityTable {
    pub fn get(&self, y: VertexId) -> Option<&ParityEstimate> {
        self.endpoints.get(&y)
    }

    /// Rows `n,x,y,p_even,p_odd,N,ci,samples` for shell index `n`; `samples`
    /// is the number of conditioned hits.
    pub fn write_csv_rows(&self, n: usize, out: &mut String) {
        for e in self.endpoints.values() {
            let _ = writeln!(
                out,
                "{n},{},{},{},{},{},{},{}",
                self.start.0, e.endpoint.0, e.p_even, e.p_odd, e.n_value, e.ci_halfwidth, e.hits
            );
        }
    }
}

pub(crate) const PARITY_CSV_HEADER: &str = "n,x,y,p_even,p_odd,N,ci,samples\n";

fn reaches(graph: &SignedGraph, x: VertexId, stop: &[bool]) -> bool {
    let mut seen = vec![false; graph.vertex_count()];
    let mut stack = vec![x];
    seen[x.index()] = true;
    while let Some(v) = stack.pop() {
        if stop[v.index()] {
            return true;
        }
        for &y in graph.neighbors(v) {
            if !seen[y.index()] {
                seen[y.index()] = true;
                stack.push(y);
            }
        }
    }
    false
}

/// Runs `opts.samples` walks from `x` until they enter `stop` and tabulates,
/// per entry point `y`, the conditional probabilities that the path was even
/// or odd.
///
/// Walk `k` uses its own stream, so the table does not depend on how the
/// samples are spread over threads.
pub fn estimate_parity(
    graph: &SignedGraph,
    x: VertexId,
    stop: &[bool],
    opts: &ParityOptions,
) -> Result<ParityTable, DiagnosticsError> {
    if opts.samples == 0 {
        return Err(DiagnosticsError::ZeroSamples);
    }
    if x.index() >= graph.vertex_count() {
        return Err(crate::walkers::WalkError::UnknownVertex(x.index()).into());
    }
    if stop[x.index()] {
        return Err(DiagnosticsError::StartInStopSet(x.index()));
    }
    if !reaches(graph, x, stop) {
        return Err(DiagnosticsError::StopUnreachable(x.index()));
    }
    let key = mix_seed(opts.seed, x.index() as u64);
    let counts = (0..opts.samples)
        .into_par_iter()
        .map(|k| {
            let mut rng = stream_rng(key, Domain::Parity, k);
            walk_until_hit(graph, x, stop, opts.max_steps, &mut rng)
                .map(|hit| (hit.vertex, hit.sign.is_plus()))
                .ok_or(DiagnosticsError::StepCapExceeded(x.index(), opts.max_steps))
        })
        .try_fold(BTreeMap::<VertexId, (u64, u64)>::new, |mut acc, hit| {
            let (y, even) = hit?;
            let e = acc.entry(y).or_default();
            e.0 += 1;
            e.1 += even as u64;
            Ok::<_, DiagnosticsError>(acc)
        })
        .try_reduce(BTreeMap::new, |mut a, b| {
            for (y, (h, e)) in b {
                let entry = a.entry(y).or_default();
                entry.0 += h;
                entry.1 += e;
            }
            Ok(a)
        })?;
    let endpoints = counts
        .into_iter()
        .map(|(y, (hits, even))| (y, ParityEstimate::from_counts(y, hits, even, opts.min_hits)))
        .collect();
    Ok(ParityTable { start: x, samples: opts.samples, endpoints })
}

/// One `(x, y)` term of the truncated sums, `x` in `C_n`, `y` in `C_{n+1}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ShellTerm {
    pub n: usize,
    pub x: VertexId,
    pub y: VertexId,
    pub estimate: ParityEstimate,
    /// `2^{-(4n+2)} N`, zero for starved pairs (which are excluded).
    pub i_contrib: f64,
    /// `P_z(X(T_{C_n}) = x) P_x(X(T_{C_{n+1}}) = y) N`, zero for starved pairs.
    pub h_contrib: f64,
}

/// Truncated `I` and `H(center)` with their per-pair breakdown.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ShellStatistics {
    pub n_max: usize,
    pub i_trunc: f64,
    pub h_trunc: f64,
    pub terms: Vec<ShellTerm>,
    /// Pairs left out because they had fewer than `min_hits` conditioned walks.
    pub starved: Vec<(usize, VertexId, VertexId)>,
    /// Per-start parity tables, keyed by shell index `n` of the start.
    pub tables: Vec<(usize, ParityTable)>,
}

impl ShellStatistics {
    pub fn i_by_shell(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.n_max];
        for t in &self.terms {
            out[t.n - 1] += t.i_contrib;
        }
        out
    }

    /// CSV `n,term,I_contrib`, one row per non-starved pair (`term` is `x>y`).
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,term,I_contrib\n");
        for t in self.terms.iter().filter(|t| !t.estimate.starved) {
            let _ = writeln!(out, "{},{}>{},{}", t.n, t.x.0, t.y.0, t.i_contrib);
        }
        out
    }

    pub fn parity_csv(&self) -> String {
        let mut out = String::from(PARITY_CSV_HEADER);
        for (n, table) in &self.tables {
            table.write_csv_rows(*n, &mut out);
        }
        out
    }
}

/// Estimates the truncated `I = sum_{n <= n_max} sum_{x in C_n, y in C_{n+1}}
/// 2^{-(4n+2)} N_n^{x,y}` and `H(z)` for `z` the shell center, with all
/// hitting kernels and `N` values from Monte Carlo.
pub fn estimate_shell_statistics(
    graph: &SignedGraph,
    shells: &ShellSystem,
    n_max: usize,
    opts: &ParityOptions,
) -> Result<ShellStatistics, DiagnosticsError> {
    if n_max == 0 || n_max + 1 > shells.count() {
        return Err(DiagnosticsError::ShellOutOfRange { index: n_max + 1, count: shells.count() });
    }
    let mut terms = Vec::new();
    let mut starved = Vec::new();
    let mut tables = Vec::new();
    let (mut i_trunc, mut h_trunc) = (0.0, 0.0);
    for n in 1..=n_max {
        let inner = shells.mask(n)?;
        let outer = shells.mask(n + 1)?;
        // hitting kernel of C_n from the center
        let from_center = if inner[shells.center.index()] {
            None
        } else {
            Some(estimate_parity(graph, shells.center, inner, opts)?)
        };
        let entry_weight = |x: VertexId| match &from_center {
            None => (x == shells.center) as u8 as f64,
            Some(t) => t.get(x).map_or(0.0, |e| e.hit_fraction(t.samples)),
        };
        for &x in shells.shell(n)? {
            let table = estimate_parity(graph, x, outer, opts)?;
            for (&y, e) in &table.endpoints {
                let (i_contrib, h_contrib) = if e.starved {
                    starved.push((n, x, y));
                    (0.0, 0.0)
                } else {
                    let weight = 0.5f64.powi(4 * n as i32 + 2);
                    (weight * e.n_value, entry_weight(x) * e.hit_fraction(table.samples) * e.n_value)
                };
                i_trunc += i_contrib;
                h_trunc += h_contrib;
                terms.push(ShellTerm { n, x, y, estimate: e.clone(), i_contrib, h_contrib });
            }
            tables.push((n, table));
        }
    }
    Ok(ShellStatistics { n_max, i_trunc, h_trunc, terms, starved, tables })
}
