use serde::Serialize;

use super::DiagnosticsError;
use crate::signed_graph::{SignedGraph, VertexId};

/// Nested shells `C_1, C_2, ...` around a center.
///
/// For geometric shells `C_r` is the external boundary of the Euclidean ball
/// `B(center, R_r)` in the vertex coordinates: the vertices outside the ball
/// that have a neighbour inside it. Shell indices are 1-based.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ShellSystem {
    pub center: VertexId,
    pub radii: Vec<f64>,
    shells: Vec<Vec<VertexId>>,
    masks: Vec<Vec<bool>>,
}

fn squared_distance(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

impl ShellSystem {
    /// Shells at radii `2^1, ..., 2^count`.
    pub fn powers_of_two(graph: &SignedGraph, center: VertexId, count: usize) -> Result<Self, DiagnosticsError> {
        let radii: Vec<f64> = (1..=count).map(|r| (1u64 << r) as f64).collect();
        Self::geometric(graph, center, &radii)
    }

    /// External boundaries of the balls `B(center, R)` for the given radii.
    ///
    /// Every vertex inside the largest ball must have the window's maximal
    /// degree, so that the shells are not cut off by the window boundary.
    pub fn geometric(graph: &SignedGraph, center: VertexId, radii: &[f64]) -> Result<Self, DiagnosticsError> {
        let labels = graph.labels().ok_or(DiagnosticsError::MissingLabels)?;
        if radii.is_empty() || radii[0] <= 0.0 || radii.windows(2).any(|w| w[1] <= w[0]) {
            return Err(DiagnosticsError::RadiiNotIncreasing);
        }
        let origin = &labels[center.index()];
        let full_degree = graph.max_degree();
        let dist2: Vec<f64> = labels.iter().map(|l| squared_distance(l, origin) as f64).collect();
        let mut shells = Vec::with_capacity(radii.len());
        for (k, &r) in radii.iter().enumerate() {
            let inside = |v: VertexId| dist2[v.index()] <= r * r;
            if graph.vertices().any(|v| inside(v) && graph.degree(v) < full_degree) {
                return Err(DiagnosticsError::ShellOutsideWindow(k + 1));
            }
            let shell: Vec<VertexId> = graph
                .vertices()
                .filter(|&v| !inside(v) && graph.neighbors(v).iter().any(|&y| inside(y)))
                .collect();
            shells.push(shell);
        }
        Self::from_sets(graph, center, shells).map(|mut s| {
            s.radii = radii.to_vec();
            s
        })
    }

    /// Shells given as explicit vertex sets (for non-lattice graphs).
    pub fn from_sets(graph: &SignedGraph, center: VertexId, shells: Vec<Vec<VertexId>>) -> Result<Self, DiagnosticsError> {
        let n = graph.vertex_count();
        let mut owner = vec![0usize; n];
        let mut masks = Vec::with_capacity(shells.len());
        for (k, shell) in shells.iter().enumerate() {
            if shell.is_empty() {
                return Err(DiagnosticsError::EmptyShell(k + 1));
            }
            let mut mask = vec![false; n];
            for v in shell {
                if let Some(&prev) = owner.get(v.index()).filter(|&&o| o != 0) {
                    return Err(DiagnosticsError::OverlappingShells(prev, k + 1));
                }
                owner[v.index()] = k + 1;
                mask[v.index()] = true;
            }
            masks.push(mask);
        }
        let mut shells = shells;
        shells.iter_mut().for_each(|s| s.sort_unstable());
        Ok(ShellSystem { center, radii: (1..=shells.len()).map(|k| k as f64).collect(), shells, masks })
    }

    pub fn count(&self) -> usize {
        self.shells.len()
    }

    fn check(&self, index: usize) -> Result<usize, DiagnosticsError> {
        if index == 0 || index > self.shells.len() {
            return Err(DiagnosticsError::ShellOutOfRange { index, count: self.shells.len() });
        }
        Ok(index - 1)
    }

    /// Vertices of `C_index`.
    pub fn shell(&self, index: usize) -> Result<&[VertexId], DiagnosticsError> {
        Ok(&self.shells[self.check(index)?])
    }

    pub fn mask(&self, index: usize) -> Result<&[bool], DiagnosticsError> {
        Ok(&self.masks[self.check(index)?])
    }

    pub fn contains(&self, index: usize, v: VertexId) -> bool {
        self.check(index).is_ok_and(|k| self.masks[k].get(v.index()).copied().unwrap_or(false))
    }

    pub(crate) fn require(&self, index: usize, v: VertexId) -> Result<(), DiagnosticsError> {
        self.check(index)?;
        if self.contains(index, v) {
            Ok(())
        } else {
            Err(DiagnosticsError::WrongShell { vertex: v.index(), shell: index })
        }
    }
}
