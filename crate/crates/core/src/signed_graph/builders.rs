//! Builders for the graph families used in experiments.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{GraphError, SignedGraph, VertexId};
use crate::rng::{stream_rng, Domain};
use crate::Sign;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Boundary {
    Periodic,
    Open,
}

/// How edge signs are assigned by [`build_lattice_window`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "kebab-case", deny_unknown_fields)]
pub enum SignRule {
    AllPositive,
    /// Exactly these edges (vertex index pairs) are negative.
    Negatives { edges: Vec<(usize, usize)> },
    /// Each edge is negative independently with probability `p`. The draw for
    /// an edge uses the stream keyed by `(seed, canonical edge id)`.
    IidNegative { p: f64, seed: u64 },
}

impl SignRule {
    pub fn apply(&self, graph: &SignedGraph) -> Result<SignedGraph, GraphError> {
        match self {
            SignRule::AllPositive => Ok(graph.all_positive()),
            SignRule::Negatives { edges } => {
                let pairs: Vec<_> = edges
                    .iter()
                    .map(|&(u, v)| {
                        for w in [u, v] {
                            if w >= graph.vertex_count() {
                                return Err(GraphError::VertexOutOfRange {
                                    vertex: w,
                                    count: graph.vertex_count(),
                                });
                            }
                        }
                        Ok((VertexId::from(u), VertexId::from(v)))
                    })
                    .collect::<Result<_, _>>()?;
                graph.with_negative_edges(&pairs)
            }
            SignRule::IidNegative { p, seed } => {
                if !(0.0..=1.0).contains(p) {
                    return Err(GraphError::InvalidProbability(*p));
                }
                Ok(graph.map_signs(|u, v, _| {
                    let id = graph.edge_id(u, v).expect("edge exists") as u64;
                    let draw: f64 = stream_rng(*seed, Domain::EdgeSigns, id).random();
                    Sign::from_bool(draw >= *p)
                }))
            }
        }
    }
}

/// Row-major index of a lattice point with axis 0 varying fastest.
pub fn lattice_index(coords: &[usize], extent: &[usize]) -> usize {
    let mut index = 0;
    let mut stride = 1;
    for (c, e) in coords.iter().zip(extent) {
        index += c * stride;
        stride *= e;
    }
    index
}

fn lattice_topology(extent: &[usize], boundary: Boundary) -> Result<SignedGraph, GraphError> {
    let n: usize = extent.iter().product();
    let mut edges = Vec::with_capacity(n * extent.len());
    let mut coords = vec![0usize; extent.len()];
    let mut labels = Vec::with_capacity(n);
    for x in 0..n {
        let mut rem = x;
        for (axis, e) in extent.iter().enumerate() {
            coords[axis] = rem % e;
            rem /= e;
        }
        labels.push(coords.iter().map(|&c| c as i64).collect::<Vec<_>>());
        for (axis, &e) in extent.iter().enumerate() {
            let next = if coords[axis] + 1 < e {
                coords[axis] + 1
            } else if boundary == Boundary::Periodic {
                0
            } else {
                continue;
            };
            let mut nb = coords.clone();
            nb[axis] = next;
            let y = lattice_index(&nb, extent);
            if x != y {
                edges.push((x.min(y), x.max(y), Sign::Plus));
            }
        }
    }
    // A periodic axis of length 2 produces each edge twice.
    edges.sort_unstable_by_key(|&(u, v, _)| (u, v));
    edges.dedup_by_key(|e| (e.0, e.1));
    SignedGraph::from_edges(n, &edges)?.with_labels(labels)
}

/// Finite window of `Z^d` (`d` in 1..=4) with the given boundary. Labels carry
/// the integer coordinates `0..extent[axis]`.
pub fn build_lattice_window(
    dimension: usize,
    extent: &[usize],
    boundary: Boundary,
    signs: &SignRule,
) -> Result<SignedGraph, GraphError> {
    if !(1..=4).contains(&dimension) {
        return Err(GraphError::UnsupportedDimension(dimension));
    }
    if extent.len() != dimension {
        return Err(GraphError::DimensionMismatch { expected: dimension, got: extent.len() });
    }
    if let Some((axis, &e)) = extent.iter().enumerate().find(|(_, &e)| e < 2) {
        return Err(GraphError::ExtentTooSmall { axis, extent: e });
    }
    signs.apply(&lattice_topology(extent, boundary)?)
}

/// Cycle `0-1-...-(n-1)-0` whose first `negative_count` edges, starting at
/// `{0, 1}`, are negative. It is unsatisfied iff `negative_count` is odd.
pub fn build_frustrated_cycle(n: usize, negative_count: usize) -> Result<SignedGraph, GraphError> {
    if n < 3 {
        return Err(GraphError::CycleTooShort(n));
    }
    if negative_count > n {
        return Err(GraphError::TooManyNegatives { negatives: negative_count, edges: n });
    }
    let edges: Vec<_> = (0..n)
        .map(|i| (i, (i + 1) % n, Sign::from_bool(i >= negative_count)))
        .collect();
    SignedGraph::from_edges(n, &edges)
}

/// Rooted tree with positive edges where every vertex of generation `g` has
/// `children_per_generation[g]` children, truncated at `depth`. At each
/// generation listed in `pairing_generations`, siblings are paired in label
/// order (1st with 2nd, 3rd with 4th, ...) by a negative edge.
///
/// Vertices are numbered generation by generation; the label of a vertex is
/// its address (child indices from the root).
pub fn build_paired_tree(
    children_per_generation: &[usize],
    pairing_generations: &[usize],
    depth: usize,
) -> Result<SignedGraph, GraphError> {
    if depth == 0 {
        return Err(GraphError::InvalidTree("depth must be at least 1".into()));
    }
    if depth > children_per_generation.len() {
        return Err(GraphError::InvalidTree(format!(
            "depth {depth} exceeds the {} generations given",
            children_per_generation.len()
        )));
    }
    if children_per_generation[..depth].contains(&0) {
        return Err(GraphError::InvalidTree("every generation needs at least one child".into()));
    }
    if pairing_generations.windows(2).any(|w| w[0] >= w[1]) {
        return Err(GraphError::InvalidTree("pairing generations must be strictly increasing".into()));
    }
    for &g in pairing_generations {
        if g == 0 || g > depth {
            return Err(GraphError::InvalidTree(format!(
                "pairing generation {g} outside 1..={depth}"
            )));
        }
        let block = children_per_generation[g - 1];
        if !block.is_multiple_of(2) {
            return Err(GraphError::OddPairingBlock { generation: g, children: block });
        }
    }

    let mut labels: Vec<Vec<i64>> = vec![Vec::new()];
    let mut edges = Vec::new();
    let mut generation: Vec<usize> = vec![0];
    for g in 1..=depth {
        let children = children_per_generation[g - 1];
        let paired = pairing_generations.contains(&g);
        let mut next = Vec::with_capacity(generation.len() * children);
        for &parent in &generation {
            let first = labels.len();
            for k in 0..children {
                let id = labels.len();
                let mut address = labels[parent].clone();
                address.push(k as i64);
                labels.push(address);
                edges.push((parent, id, Sign::Plus));
                next.push(id);
            }
            if paired {
                for k in (0..children).step_by(2) {
                    edges.push((first + k, first + k + 1, Sign::Minus));
                }
            }
        }
        generation = next;
    }
    SignedGraph::from_edges(labels.len(), &edges)?.with_labels(labels)
}

/// Open window `[-extent, extent]^4` of `Z^4` where the edges `(x, x + e1)`
/// with `x` in `{R_j} x [-R_j, R_j]^3` are negative and all others positive.
/// Labels carry centred coordinates.
pub fn build_z4_staircase(scales: &[usize], extent: usize) -> Result<SignedGraph, GraphError> {
    if scales.is_empty() || scales[0] == 0 || scales.windows(2).any(|w| w[0] >= w[1]) {
        return Err(GraphError::ScalesNotIncreasing);
    }
    let largest = *scales.last().expect("non-empty");
    if extent < 2 * largest {
        return Err(GraphError::WindowTooSmall { extent, scale: largest, needed: 2 * largest });
    }
    let side = 2 * extent + 1;
    let dims = [side; 4];
    let base = lattice_topology(&dims, Boundary::Open)?;
    let offset = extent as i64;
    let labels: Vec<Vec<i64>> = base
        .labels()
        .expect("lattice labels")
        .iter()
        .map(|c| c.iter().map(|v| v - offset).collect())
        .collect();

    let mut negatives = Vec::new();
    for &r in scales {
        let r = r as i64;
        for a in -r..=r {
            for b in -r..=r {
                for c in -r..=r {
                    let x = [r, a, b, c];
                    let mut y = x;
                    y[0] += 1;
                    let to_index = |p: [i64; 4]| {
                        let coords: Vec<usize> = p.iter().map(|v| (v + offset) as usize).collect();
                        VertexId::from(lattice_index(&coords, &dims))
                    };
                    negatives.push((to_index(x), to_index(y)));
                }
            }
        }
    }
    base.with_negative_edges(&negatives)?.with_labels(labels)
}

/// Scale sequence `R_1 = first`, `R_j = max(R_{j-1} + 1, ceil(2 j^2 R_{j-1} / kappa))`.
///
/// `kappa` stands in for the non-explicit constants of the ergodic staircase
/// construction; smaller values give faster-growing scales.
pub fn staircase_scales(first: usize, count: usize, kappa: f64) -> Vec<usize> {
    assert!(kappa > 0.0, "kappa must be positive");
    let mut scales = Vec::with_capacity(count);
    if count == 0 {
        return scales;
    }
    scales.push(first.max(1));
    for j in 2..=count {
        let prev = *scales.last().expect("non-empty");
        let grown = (2.0 * (j * j) as f64 * prev as f64 / kappa).ceil() as usize;
        scales.push(grown.max(prev + 1));
    }
    scales
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_graph_on_three_vertices() {
        let g = build_lattice_window(1, &[3], Boundary::Open, &SignRule::AllPositive).unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.edge_count(), 2);
        assert!(g.edges().all(|e| e.2.is_plus()));
    }

    #[test]
    fn torus_degree_count() {
        let g = build_lattice_window(2, &[3, 3], Boundary::Periodic, &SignRule::AllPositive).unwrap();
        assert_eq!(g.vertex_count(), 9);
        assert_eq!(g.edge_count(), 18);
        assert!(g.vertices().all(|x| g.degree(x) == 4));
        assert_eq!(g.label(VertexId(5)), Some(&[2, 1][..]));
    }

    #[test]
    fn periodic_axis_of_two_has_no_parallel_edges() {
        let g = build_lattice_window(2, &[2, 3], Boundary::Periodic, &SignRule::AllPositive).unwrap();
        assert!(g.vertices().all(|x| g.degree(x) == 3));
    }

    #[test]
    fn lattice_errors() {
        let all = SignRule::AllPositive;
        assert_eq!(
            build_lattice_window(2, &[3, 0], Boundary::Open, &all),
            Err(GraphError::ExtentTooSmall { axis: 1, extent: 0 })
        );
        assert_eq!(build_lattice_window(5, &[2; 5], Boundary::Open, &all), Err(GraphError::UnsupportedDimension(5)));
        assert!(matches!(
            build_lattice_window(2, &[3], Boundary::Open, &all),
            Err(GraphError::DimensionMismatch { .. })
        ));
        let bad = SignRule::Negatives { edges: vec![(0, 2)] };
        assert!(matches!(
            build_lattice_window(1, &[3], Boundary::Open, &bad),
            Err(GraphError::NotAnEdge(_))
        ));
        let p = SignRule::IidNegative { p: 1.5, seed: 0 };
        assert!(matches!(build_lattice_window(1, &[3], Boundary::Open, &p), Err(GraphError::InvalidProbability(_))));
    }

    #[test]
    fn explicit_negatives() {
        let rule = SignRule::Negatives { edges: vec![(1, 0)] };
        let g = build_lattice_window(1, &[3], Boundary::Open, &rule).unwrap();
        assert_eq!(g.negative_edges(), vec![(VertexId(0), VertexId(1))]);
    }

    #[test]
    fn frustrated_cycle_counts() {
        let g = build_frustrated_cycle(5, 3).unwrap();
        assert_eq!(g.negative_edges().len(), 3);
        assert_eq!(g.sign(VertexId(0), VertexId(1)), Some(Sign::Minus));
        assert_eq!(g.sign(VertexId(3), VertexId(4)), Some(Sign::Plus));
        assert_eq!(build_frustrated_cycle(2, 0), Err(GraphError::CycleTooShort(2)));
        assert!(build_frustrated_cycle(3, 4).is_err());
        assert_eq!(build_frustrated_cycle(4, 4).unwrap().negative_edges().len(), 4);
    }

    #[test]
    fn paired_tree_small() {
        let g = build_paired_tree(&[2, 2], &[2], 2).unwrap();
        assert_eq!(g.vertex_count(), 7);
        assert_eq!(g.negative_edges().len(), 2);
        assert_eq!(g.label(VertexId(0)), Some(&[][..]));
        assert_eq!(g.label(VertexId(6)), Some(&[1, 1][..]));
        // siblings 3,4 (children of 1) and 5,6 (children of 2)
        assert_eq!(g.negative_edges(), vec![(VertexId(3), VertexId(4)), (VertexId(5), VertexId(6))]);
    }

    #[test]
    fn paired_tree_errors() {
        assert_eq!(
            build_paired_tree(&[3, 3], &[1], 2),
            Err(GraphError::OddPairingBlock { generation: 1, children: 3 })
        );
        assert!(build_paired_tree(&[2], &[], 2).is_err());
        assert!(build_paired_tree(&[2, 2], &[3], 2).is_err());
        assert!(build_paired_tree(&[2, 2], &[2, 1], 2).is_err());
        assert!(build_paired_tree(&[2, 2], &[], 0).is_err());
    }

    #[test]
    fn staircase_slab_counts() {
        let g = build_z4_staircase(&[1], 4).unwrap();
        assert_eq!(g.vertex_count(), 9usize.pow(4));
        let neg = g.negative_edges();
        assert_eq!(neg.len(), 27);
        for (u, v) in neg {
            let (a, b) = (g.label(u).unwrap(), g.label(v).unwrap());
            let (lo, hi) = if a[0] < b[0] { (a, b) } else { (b, a) };
            assert_eq!(lo[0], 1);
            assert_eq!(hi[0], 2);
            assert!(lo[1..].iter().all(|c| c.abs() <= 1));
            assert_eq!(&lo[1..], &hi[1..]);
        }
        assert_eq!(build_z4_staircase(&[1, 3], 8).unwrap().negative_edges().len(), 370);
    }

    #[test]
    fn staircase_errors() {
        assert_eq!(build_z4_staircase(&[2, 2], 8), Err(GraphError::ScalesNotIncreasing));
        assert_eq!(build_z4_staircase(&[], 8), Err(GraphError::ScalesNotIncreasing));
        assert!(matches!(build_z4_staircase(&[3], 5), Err(GraphError::WindowTooSmall { .. })));
    }

    #[test]
    fn staircase_scale_helper() {
        let s = staircase_scales(1, 4, 1.0);
        assert_eq!(s, vec![1, 8, 144, 4608]);
        let slow = staircase_scales(3, 3, 100.0);
        assert_eq!(slow, vec![3, 4, 5]);
    }
}
