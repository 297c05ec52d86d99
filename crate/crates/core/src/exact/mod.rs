//! Exact analysis of the spin system on small graphs.
//!
//! States are bitmasks (bit `i` set means `eta(i) = +1`). The generator has
//! off-diagonal rates `q(eta, eta^x) = k / d(x)` with `k` the number of
//! neighbours `y` of `x` for which `eta(x) eta(y) != s(x, y)`.

mod stationary;
mod transient;

use serde::Serialize;
use thiserror::Error;

use crate::harris::SpinConfig;
use crate::signed_graph::{SignedGraph, VertexId};

pub use stationary::{one_point_function, stationary_analysis, StationaryResult, Verdict};
pub use transient::{transient_distribution, transient_from, total_variation};

/// Largest vertex count accepted by [`build_generator`].
pub const DEFAULT_STATE_CAP: usize = 14;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExactError {
    #[error("graph has {vertices} vertices, above the exact-solver cap of {cap}")]
    TooManyVertices { vertices: usize, cap: usize },
    #[error("time must be non-negative, got {0}")]
    NegativeTime(f64),
    #[error("initial configuration has length {got}, generator has {expected} vertices")]
    LengthMismatch { got: usize, expected: usize },
    #[error("initial vector is not a probability distribution over {0} states")]
    NotADistribution(usize),
    #[error("stationary solve for a closed class of {size} states left residual {residual:e}")]
    Numerical { size: usize, residual: f64 },
}

/// Continuous-time generator on `{-1, +1}^V`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GeneratorMatrix {
    vertices: usize,
    /// `flip[state * vertices + x]` = rate of flipping `x` in `state`.
    flip: Vec<f64>,
    exit: Vec<f64>,
}

impl GeneratorMatrix {
    pub fn vertex_count(&self) -> usize {
        self.vertices
    }

    /// Number of states, `2^|V|`.
    pub fn dimension(&self) -> usize {
        self.exit.len()
    }

    pub fn flip_rate(&self, state: u64, x: usize) -> f64 {
        self.flip[state as usize * self.vertices + x]
    }

    /// Total rate out of `state`; the diagonal entry is its negative.
    pub fn exit_rate(&self, state: u64) -> f64 {
        self.exit[state as usize]
    }

    pub fn max_exit_rate(&self) -> f64 {
        self.exit.iter().copied().fold(0.0, f64::max)
    }

    /// Positive off-diagonal entries of row `state` as `(target, rate)`.
    pub fn row(&self, state: u64) -> impl Iterator<Item = (u64, f64)> + '_ {
        let base = state as usize * self.vertices;
        self.flip[base..base + self.vertices]
            .iter()
            .enumerate()
            .filter(|(_, &r)| r > 0.0)
            .map(move |(x, &r)| (state ^ (1 << x), r))
    }

    /// Entry `Q[from][to]`.
    pub fn entry(&self, from: u64, to: u64) -> f64 {
        if from == to {
            return -self.exit_rate(from);
        }
        let diff = from ^ to;
        if diff.count_ones() == 1 {
            self.flip_rate(from, diff.trailing_zeros() as usize)
        } else {
            0.0
        }
    }

    /// Row vector times generator: `(p Q)`.
    pub fn left_multiply(&self, p: &[f64]) -> Vec<f64> {
        let mut out: Vec<f64> = p.iter().zip(&self.exit).map(|(a, e)| -a * e).collect();
        for (state, &mass) in p.iter().enumerate() {
            if mass != 0.0 {
                for (to, r) in self.row(state as u64) {
                    out[to as usize] += mass * r;
                }
            }
        }
        out
    }

    /// States with no outgoing rate.
    pub fn absorbing_states(&self) -> Vec<u64> {
        (0..self.dimension() as u64).filter(|&s| self.exit_rate(s) == 0.0).collect()
    }
}

/// The generator with the default cap of [`DEFAULT_STATE_CAP`] vertices.
pub fn build_generator(graph: &SignedGraph) -> Result<GeneratorMatrix, ExactError> {
    build_generator_with_cap(graph, DEFAULT_STATE_CAP)
}

pub fn build_generator_with_cap(graph: &SignedGraph, cap: usize) -> Result<GeneratorMatrix, ExactError> {
    let n = graph.vertex_count();
    if n > cap || n > 30 {
        return Err(ExactError::TooManyVertices { vertices: n, cap: cap.min(30) });
    }
    let dim = 1usize << n;
    let mut flip = vec![0.0; dim * n];
    let mut exit = vec![0.0; dim];
    for state in 0..dim {
        let spin = |v: VertexId| (state >> v.index()) & 1 == 1;
        let mut total = 0.0;
        for x in graph.vertices() {
            let disagree = graph
                .adjacency(x)
                .filter(|&(y, s)| (spin(x) == spin(y)) != s.is_plus())
                .count();
            let rate = disagree as f64 / graph.degree(x) as f64;
            flip[state * n + x.index()] = rate;
            total += rate;
        }
        exit[state] = total;
    }
    Ok(GeneratorMatrix { vertices: n, flip, exit })
}

pub(crate) fn state_of(eta: &SpinConfig) -> u64 {
    eta.to_bitmask()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signed_graph::build_frustrated_cycle;
    use crate::Sign;

    #[test]
    fn single_edge_absorbing_states() {
        let pos = build_generator(&SignedGraph::from_edges(2, &[(0, 1, Sign::Plus)]).unwrap()).unwrap();
        assert_eq!(pos.absorbing_states(), vec![0b00, 0b11]);
        assert_eq!(pos.exit_rate(0b01), 2.0);
        assert_eq!(pos.exit_rate(0b10), 2.0);
        let neg = build_generator(&SignedGraph::from_edges(2, &[(0, 1, Sign::Minus)]).unwrap()).unwrap();
        assert_eq!(neg.absorbing_states(), vec![0b01, 0b10]);
    }

    #[test]
    fn frustrated_triangle_has_no_absorbing_state() {
        let q = build_generator(&build_frustrated_cycle(3, 1).unwrap()).unwrap();
        assert!(q.absorbing_states().is_empty());
        for s in 0..8 {
            let row_sum: f64 = q.row(s).map(|(_, r)| r).sum::<f64>() - q.exit_rate(s);
            assert!(row_sum.abs() < 1e-15);
            for (to, r) in q.row(s) {
                assert_eq!((s ^ to).count_ones(), 1);
                assert!(r == 0.5 || r == 1.0);
            }
        }
    }

    #[test]
    fn cap_is_enforced() {
        let g = build_frustrated_cycle(15, 1).unwrap();
        assert_eq!(
            build_generator(&g).unwrap_err(),
            ExactError::TooManyVertices { vertices: 15, cap: 14 }
        );
        assert!(build_generator_with_cap(&g, 15).is_ok());
    }
}
