//! Path signs, frustration detection and switching.

use std::collections::VecDeque;

use super::{GaugePartition, GraphError, Path, SignedGraph, VertexId};
use crate::Sign;

/// Product of edge signs along `path`, counting repeated traversals.
pub fn path_sign(graph: &SignedGraph, path: &Path) -> Result<Sign, GraphError> {
    let mut sign = Sign::Plus;
    for w in path.vertices.windows(2) {
        let s = graph
            .sign(w[0], w[1])
            .ok_or(GraphError::NotAdjacent(w[0].index(), w[1].index()))?;
        sign *= s;
    }
    Ok(sign)
}

/// BFS forest with multiplicative sign potentials from each component root.
struct SignForest {
    potential: Vec<Sign>,
    parent: Vec<Option<VertexId>>,
    depth: Vec<usize>,
}

impl SignForest {
    fn build(graph: &SignedGraph) -> Self {
        let n = graph.vertex_count();
        let mut potential = vec![Sign::Plus; n];
        let mut parent = vec![None; n];
        let mut depth = vec![usize::MAX; n];
        let mut queue = VecDeque::new();
        for root in 0..n {
            if depth[root] != usize::MAX {
                continue;
            }
            depth[root] = 0;
            queue.push_back(VertexId::from(root));
            while let Some(x) = queue.pop_front() {
                for (y, s) in graph.adjacency(x) {
                    if depth[y.index()] == usize::MAX {
                        depth[y.index()] = depth[x.index()] + 1;
                        parent[y.index()] = Some(x);
                        potential[y.index()] = potential[x.index()] * s;
                        queue.push_back(y);
                    }
                }
            }
        }
        SignForest { potential, parent, depth }
    }

    /// First edge (canonical order) violating `p(x) p(y) s(x,y) = +1`.
    fn conflict(&self, graph: &SignedGraph) -> Option<(VertexId, VertexId)> {
        graph
            .edges()
            .find(|&(u, v, s)| self.potential[u.index()] * self.potential[v.index()] * s == Sign::Minus)
            .map(|(u, v, _)| (u, v))
    }

    /// Tree path `x -> lca -> y`.
    fn tree_path(&self, x: VertexId, y: VertexId) -> Vec<VertexId> {
        let (mut a, mut b) = (x, y);
        let mut left = vec![a];
        let mut right = vec![b];
        while self.depth[a.index()] > self.depth[b.index()] {
            a = self.parent[a.index()].expect("non-root");
            left.push(a);
        }
        while self.depth[b.index()] > self.depth[a.index()] {
            b = self.parent[b.index()].expect("non-root");
            right.push(b);
        }
        while a != b {
            a = self.parent[a.index()].expect("same component");
            b = self.parent[b.index()].expect("same component");
            left.push(a);
            right.push(b);
        }
        right.pop();
        left.extend(right.into_iter().rev());
        left
    }
}

/// Rotates a closed walk to start at its smallest vertex and orients it so the
/// second vertex is the smaller of the two neighbours of the start.
fn canonical_cycle(mut cycle: Vec<VertexId>) -> Vec<VertexId> {
    cycle.pop();
    let k = cycle.len();
    let start = (0..k).min_by_key(|&i| cycle[i]).expect("non-empty");
    cycle.rotate_left(start);
    if cycle[k - 1] < cycle[1] {
        cycle[1..].reverse();
    }
    cycle.push(cycle[0]);
    cycle
}

/// Some unsatisfied cycle of `graph`, or `None` if every component is
/// balanced.
///
/// Each component gets a BFS spanning tree with sign potentials; a non-tree
/// edge whose endpoints' potentials disagree with its sign closes an odd
/// cycle through the tree.
pub fn find_unsatisfied_cycle(graph: &SignedGraph) -> Option<Path> {
    let forest = SignForest::build(graph);
    let (x, y) = forest.conflict(graph)?;
    let mut cycle = forest.tree_path(x, y);
    cycle.push(x);
    Some(Path::new(canonical_cycle(cycle)))
}

/// The gauge partition of a balanced graph, with each component root on the
/// positive side. `None` if the graph is frustrated.
pub fn gauge_partition(graph: &SignedGraph) -> Option<GaugePartition> {
    let forest = SignForest::build(graph);
    match forest.conflict(graph) {
        Some(_) => None,
        None => Some(GaugePartition { side: forest.potential }),
    }
}

/// Switching: `s'(x, y) = side(x) s(x, y) side(y)`.
pub fn switch(graph: &SignedGraph, partition: &GaugePartition) -> SignedGraph {
    assert_eq!(partition.side.len(), graph.vertex_count(), "partition size mismatch");
    graph.map_signs(|u, v, s| partition.side(u) * s * partition.side(v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signed_graph::build_frustrated_cycle;

    #[test]
    fn empty_and_single_edge_paths() {
        let g = build_frustrated_cycle(3, 1).unwrap();
        assert_eq!(path_sign(&g, &Path::from_indices(&[2])), Ok(Sign::Plus));
        assert_eq!(path_sign(&g, &Path::default()), Ok(Sign::Plus));
        assert_eq!(path_sign(&g, &Path::from_indices(&[0, 1])), Ok(Sign::Minus));
        assert_eq!(path_sign(&g, &Path::from_indices(&[0, 1, 0])), Ok(Sign::Plus));
    }

    #[test]
    fn loop_around_odd_cycle() {
        let g = build_frustrated_cycle(5, 3).unwrap();
        let lap = Path::from_indices(&[0, 1, 2, 3, 4, 0]);
        assert_eq!(path_sign(&g, &lap), Ok(Sign::Minus));
        assert_eq!(
            path_sign(&g, &Path::from_indices(&[0, 2])),
            Err(GraphError::NotAdjacent(0, 2))
        );
    }

    #[test]
    fn frustrated_triangle_certificate() {
        let g = build_frustrated_cycle(3, 1).unwrap();
        let c = find_unsatisfied_cycle(&g).unwrap();
        assert_eq!(c, Path::from_indices(&[0, 1, 2, 0]));
        assert!(c.is_cycle());
        assert_eq!(path_sign(&g, &c), Ok(Sign::Minus));
        assert!(gauge_partition(&g).is_none());
    }

    #[test]
    fn balanced_cycles() {
        assert!(find_unsatisfied_cycle(&build_frustrated_cycle(3, 0).unwrap()).is_none());
        let g = build_frustrated_cycle(4, 2).unwrap();
        assert!(find_unsatisfied_cycle(&g).is_none());
        let p = gauge_partition(&g).unwrap();
        assert!(p.is_valid_for(&g));
        assert_eq!(p.side[0], Sign::Plus);
    }

    #[test]
    fn single_edge_partitions() {
        let pos = SignedGraph::from_edges(2, &[(0, 1, Sign::Plus)]).unwrap();
        let neg = SignedGraph::from_edges(2, &[(0, 1, Sign::Minus)]).unwrap();
        assert_eq!(gauge_partition(&pos).unwrap().side, vec![Sign::Plus, Sign::Plus]);
        assert_eq!(gauge_partition(&neg).unwrap().side, vec![Sign::Plus, Sign::Minus]);
    }

    #[test]
    fn switching_balanced_graph_gives_all_positive() {
        let g = build_frustrated_cycle(6, 4).unwrap();
        let p = gauge_partition(&g).unwrap();
        let s = switch(&g, &p);
        assert!(s.edges().all(|e| e.2.is_plus()));
        assert_eq!(switch(&s, &p), g);
        assert_eq!(switch(&g, &GaugePartition::identity(6)), g);
    }

    #[test]
    fn components_get_their_own_roots() {
        let g = SignedGraph::from_edges(4, &[(0, 1, Sign::Minus), (2, 3, Sign::Minus)]).unwrap();
        let p = gauge_partition(&g).unwrap();
        assert_eq!(p.side, vec![Sign::Plus, Sign::Minus, Sign::Plus, Sign::Minus]);
    }

    #[test]
    fn cycle_found_in_second_component() {
        let edges = [
            (0, 1, Sign::Plus),
            (2, 3, Sign::Plus),
            (3, 4, Sign::Plus),
            (4, 5, Sign::Minus),
            (5, 2, Sign::Plus),
        ];
        let g = SignedGraph::from_edges(6, &edges).unwrap();
        let c = find_unsatisfied_cycle(&g).unwrap();
        assert_eq!(c, Path::from_indices(&[2, 3, 4, 5, 2]));
    }
}
