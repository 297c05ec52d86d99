//! Finite signed graphs.
//!
//! A [`SignedGraph`] is immutable once built. Adjacency is stored in CSR form
//! with each vertex's neighbour list sorted, which gives every ordered
//! neighbour pair `(x, y)` a dense id (`offset(x) + k`) and every unordered
//! edge a canonical id (its rank in lexicographic `(min, max)` order). Both ids
//! are used to key random streams, so they only depend on the graph itself.

mod balance;
mod builders;
mod io;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::Sign;

pub use balance::{find_unsatisfied_cycle, gauge_partition, path_sign, switch};
pub use builders::{
    build_frustrated_cycle, build_lattice_window, build_paired_tree, build_z4_staircase,
    lattice_index, staircase_scales, Boundary, SignRule,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for a graph with {count} vertices")]
    VertexOutOfRange { vertex: usize, count: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("parallel edge {0}-{1}")]
    ParallelEdge(usize, usize),
    #[error("vertex {0} has no neighbours")]
    IsolatedVertex(usize),
    #[error("{0} is not an edge of the graph")]
    NotAnEdge(String),
    #[error("consecutive path vertices {0} and {1} are not adjacent")]
    NotAdjacent(usize, usize),
    #[error("lattice dimension must be 1..=4, got {0}")]
    UnsupportedDimension(usize),
    #[error("extent has {got} axes but dimension is {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("extent along axis {axis} is {extent}; at least 2 is required")]
    ExtentTooSmall { axis: usize, extent: usize },
    #[error("probability {0} outside [0, 1]")]
    InvalidProbability(f64),
    #[error("a cycle needs at least 3 vertices, got {0}")]
    CycleTooShort(usize),
    #[error("{negatives} negative edges requested on a cycle with {edges} edges")]
    TooManyNegatives { negatives: usize, edges: usize },
    #[error("pairing generation {generation} has {children} children per parent, which is odd")]
    OddPairingBlock { generation: usize, children: usize },
    #[error("invalid tree parameters: {0}")]
    InvalidTree(String),
    #[error("staircase scales must be positive and strictly increasing")]
    ScalesNotIncreasing,
    #[error("window half-width {extent} cannot hold scale {scale} (need at least {needed})")]
    WindowTooSmall { extent: usize, scale: usize, needed: usize },
    #[error("expected {expected} labels, got {got}")]
    LabelCount { expected: usize, got: usize },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// Dense vertex index, contiguous in `0..vertex_count`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub u32);

impl VertexId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl From<usize> for VertexId {
    fn from(i: usize) -> Self {
        VertexId(u32::try_from(i).expect("vertex index exceeds u32"))
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A nearest-neighbour path given by its vertex sequence.
///
/// A cycle is a path with at least three edges whose endpoints coincide.
#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Path {
    pub vertices: Vec<VertexId>,
}

impl Path {
    pub fn new(vertices: Vec<VertexId>) -> Self {
        Path { vertices }
    }

    pub fn from_indices(indices: &[usize]) -> Self {
        Path::new(indices.iter().map(|&i| VertexId::from(i)).collect())
    }

    pub fn edge_count(&self) -> usize {
        self.vertices.len().saturating_sub(1)
    }

    pub fn is_cycle(&self) -> bool {
        self.edge_count() >= 3 && self.vertices.first() == self.vertices.last()
    }

    pub fn reversed(&self) -> Path {
        let mut v = self.vertices.clone();
        v.reverse();
        Path::new(v)
    }

    /// Concatenation `self` then `other`; `other` must start where `self` ends
    /// (the shared vertex appears once).
    pub fn concat(&self, other: &Path) -> Path {
        let mut v = self.vertices.clone();
        match (v.last(), other.vertices.first()) {
            (Some(a), Some(b)) => {
                assert_eq!(a, b, "paths do not join");
                v.extend_from_slice(&other.vertices[1..]);
            }
            (None, _) => v.extend_from_slice(&other.vertices),
            (_, None) => {}
        }
        Path::new(v)
    }
}

/// A split `V = V+ ∪ V-` with `side(x) * side(y) == s(x, y)` on every edge.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GaugePartition {
    pub side: Vec<Sign>,
}

impl GaugePartition {
    pub fn identity(vertex_count: usize) -> Self {
        GaugePartition { side: vec![Sign::Plus; vertex_count] }
    }

    pub fn side(&self, x: VertexId) -> Sign {
        self.side[x.index()]
    }

    /// Whether the edge identity holds on every edge of `graph`.
    pub fn is_valid_for(&self, graph: &SignedGraph) -> bool {
        self.side.len() == graph.vertex_count()
            && graph.edges().all(|(u, v, s)| self.side(u) * self.side(v) == s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedGraph {
    offsets: Vec<usize>,
    neighbors: Vec<VertexId>,
    signs: Vec<Sign>,
    pair_source: Vec<VertexId>,
    pair_edge: Vec<usize>,
    edge_count: usize,
    labels: Option<Vec<Vec<i64>>>,
}

impl SignedGraph {
    /// Builds a graph from an undirected edge list. Edge orientation in the
    /// input does not matter.
    pub fn from_edges(
        vertex_count: usize,
        edges: &[(usize, usize, Sign)],
    ) -> Result<Self, GraphError> {
        let mut adjacency: Vec<Vec<(VertexId, Sign)>> = vec![Vec::new(); vertex_count];
        for &(u, v, s) in edges {
            for w in [u, v] {
                if w >= vertex_count {
                    return Err(GraphError::VertexOutOfRange { vertex: w, count: vertex_count });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            adjacency[u].push((VertexId::from(v), s));
            adjacency[v].push((VertexId::from(u), s));
        }
        for (x, list) in adjacency.iter_mut().enumerate() {
            list.sort_unstable_by_key(|&(y, _)| y);
            if let Some(w) = list.windows(2).find(|w| w[0].0 == w[1].0) {
                return Err(GraphError::ParallelEdge(x.min(w[0].0.index()), x.max(w[0].0.index())));
            }
            if list.is_empty() {
                return Err(GraphError::IsolatedVertex(x));
            }
        }
        Ok(Self::from_sorted_adjacency(adjacency))
    }

    fn from_sorted_adjacency(adjacency: Vec<Vec<(VertexId, Sign)>>) -> Self {
        let n = adjacency.len();
        let mut offsets = Vec::with_capacity(n + 1);
        let mut neighbors = Vec::new();
        let mut signs = Vec::new();
        let mut pair_source = Vec::new();
        offsets.push(0);
        for (x, list) in adjacency.iter().enumerate() {
            for &(y, s) in list {
                neighbors.push(y);
                signs.push(s);
                pair_source.push(VertexId::from(x));
            }
            offsets.push(neighbors.len());
        }
        // Canonical edge ids: rank of (min, max) in lexicographic order. Pairs
        // with x < y are visited in exactly that order.
        let mut pair_edge = vec![usize::MAX; neighbors.len()];
        let mut next = 0;
        for x in 0..n {
            for p in offsets[x]..offsets[x + 1] {
                if neighbors[p].index() > x {
                    pair_edge[p] = next;
                    next += 1;
                }
            }
        }
        let mut g = SignedGraph {
            offsets,
            neighbors,
            signs,
            pair_source,
            pair_edge,
            edge_count: next,
            labels: None,
        };
        for p in 0..g.pair_edge.len() {
            if g.pair_edge[p] == usize::MAX {
                let x = g.pair_source[p];
                let y = g.neighbors[p];
                let back = g.pair_id(y, x).expect("adjacency is symmetric");
                g.pair_edge[p] = g.pair_edge[back];
            }
        }
        g
    }

    pub fn with_labels(mut self, labels: Vec<Vec<i64>>) -> Result<Self, GraphError> {
        if labels.len() != self.vertex_count() {
            return Err(GraphError::LabelCount { expected: self.vertex_count(), got: labels.len() });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn vertex_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Number of ordered neighbour pairs, i.e. `2 * edge_count`.
    pub fn pair_count(&self) -> usize {
        self.neighbors.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.vertex_count()).map(VertexId::from)
    }

    #[inline]
    pub fn degree(&self, x: VertexId) -> usize {
        self.offsets[x.index() + 1] - self.offsets[x.index()]
    }

    pub fn max_degree(&self) -> usize {
        self.vertices().map(|x| self.degree(x)).max().unwrap_or(0)
    }

    #[inline]
    pub fn neighbors(&self, x: VertexId) -> &[VertexId] {
        &self.neighbors[self.offsets[x.index()]..self.offsets[x.index() + 1]]
    }

    #[inline]
    pub fn neighbor_signs(&self, x: VertexId) -> &[Sign] {
        &self.signs[self.offsets[x.index()]..self.offsets[x.index() + 1]]
    }

    /// `(neighbour, sign)` pairs of `x` in increasing neighbour order.
    pub fn adjacency(&self, x: VertexId) -> impl Iterator<Item = (VertexId, Sign)> + '_ {
        self.neighbors(x).iter().copied().zip(self.neighbor_signs(x).iter().copied())
    }

    /// Id of the ordered pair `(x, y)`, if `{x, y}` is an edge.
    pub fn pair_id(&self, x: VertexId, y: VertexId) -> Option<usize> {
        let start = self.offsets[x.index()];
        self.neighbors(x).binary_search(&y).ok().map(|k| start + k)
    }

    #[inline]
    pub fn pair_offset(&self, x: VertexId) -> usize {
        self.offsets[x.index()]
    }

    /// `(source, target, sign)` of an ordered pair id.
    #[inline]
    pub fn pair(&self, pair: usize) -> (VertexId, VertexId, Sign) {
        (self.pair_source[pair], self.neighbors[pair], self.signs[pair])
    }

    /// Canonical id of the unordered edge underlying an ordered pair.
    pub fn pair_edge_id(&self, pair: usize) -> usize {
        self.pair_edge[pair]
    }

    pub fn edge_id(&self, x: VertexId, y: VertexId) -> Option<usize> {
        self.pair_id(x, y).map(|p| self.pair_edge[p])
    }

    pub fn sign(&self, x: VertexId, y: VertexId) -> Option<Sign> {
        self.pair_id(x, y).map(|p| self.signs[p])
    }

    /// Undirected edges `(u, v, s)` with `u < v`, in canonical id order.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId, Sign)> + '_ {
        (0..self.pair_count())
            .filter(|&p| self.pair_source[p] < self.neighbors[p])
            .map(|p| (self.pair_source[p], self.neighbors[p], self.signs[p]))
    }

    pub fn negative_edges(&self) -> Vec<(VertexId, VertexId)> {
        self.edges().filter(|e| e.2.is_minus()).map(|(u, v, _)| (u, v)).collect()
    }

    pub fn labels(&self) -> Option<&[Vec<i64>]> {
        self.labels.as_deref()
    }

    pub fn label(&self, x: VertexId) -> Option<&[i64]> {
        self.labels.as_ref().map(|l| l[x.index()].as_slice())
    }

    /// Same graph with each edge sign replaced by `f(u, v, s)` (`u < v`).
    pub fn map_signs(&self, mut f: impl FnMut(VertexId, VertexId, Sign) -> Sign) -> SignedGraph {
        let mut g = self.clone();
        for p in 0..g.pair_count() {
            let (x, y, s) = self.pair(p);
            if x < y {
                let new = f(x, y, s);
                g.signs[p] = new;
                let back = self.pair_id(y, x).expect("symmetric");
                g.signs[back] = new;
            }
        }
        g
    }

    pub fn all_positive(&self) -> SignedGraph {
        self.map_signs(|_, _, _| Sign::Plus)
    }

    /// Same topology with exactly the listed edges negative.
    pub fn with_negative_edges(&self, negatives: &[(VertexId, VertexId)]) -> Result<SignedGraph, GraphError> {
        let mut negative = vec![false; self.edge_count()];
        for &(u, v) in negatives {
            let id = self
                .edge_id(u, v)
                .ok_or_else(|| GraphError::NotAnEdge(format!("{u}-{v}")))?;
            negative[id] = true;
        }
        Ok(self.map_signs(|u, v, _| {
            let id = self.edge_id(u, v).expect("edge exists");
            Sign::from_bool(!negative[id])
        }))
    }

    /// Connected component index per vertex, numbered in order of first vertex.
    pub fn components(&self) -> Vec<usize> {
        let n = self.vertex_count();
        let mut comp = vec![usize::MAX; n];
        let mut next = 0;
        let mut stack = Vec::new();
        for root in 0..n {
            if comp[root] != usize::MAX {
                continue;
            }
            comp[root] = next;
            stack.push(VertexId::from(root));
            while let Some(x) = stack.pop() {
                for &y in self.neighbors(x) {
                    if comp[y.index()] == usize::MAX {
                        comp[y.index()] = next;
                        stack.push(y);
                    }
                }
            }
            next += 1;
        }
        comp
    }

    pub fn is_connected(&self) -> bool {
        self.components().iter().all(|&c| c == 0)
    }

    /// Vertices reachable from `x`.
    pub fn reachable_from(&self, x: VertexId) -> Vec<bool> {
        let comp = self.components();
        let c = comp[x.index()];
        comp.iter().map(|&k| k == c).collect()
    }

    /// FNV-1a digest of the canonical text form; identifies a graph in
    /// manifests without storing it.
    pub fn digest(&self) -> u64 {
        let text = self.to_text();
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for b in text.bytes() {
            h ^= u64::from(b);
            h = h.wrapping_mul(0x0100_0000_01b3);
        }
        h
    }

    pub fn to_text(&self) -> String {
        io::write_text(self)
    }

    pub fn from_text(text: &str) -> Result<Self, GraphError> {
        io::parse_text(text)
    }
}
