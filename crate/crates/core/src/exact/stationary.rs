use std::fmt::Write;

use nalgebra::{DMatrix, DVector};
use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};
use serde::Serialize;

use super::{ExactError, GeneratorMatrix};

/// Classes up to this many states are solved with a dense LU factorisation.
const DENSE_LIMIT: usize = 1536;
const RESIDUAL_TOLERANCE: f64 = 1e-10;

/// Closed classes of the generator and their stationary laws.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StationaryResult {
    pub vertices: usize,
    /// Sorted states of each closed communicating class, ordered by smallest state.
    pub closed_classes: Vec<Vec<u64>>,
    /// Stationary law of each class as a full vector over all `2^|V|` states.
    pub distributions: Vec<Vec<f64>>,
    /// True iff there is exactly one closed class and every state reaches it.
    pub ergodic: bool,
    /// Largest `|pi Q|` entry over all classes.
    pub residual: f64,
}

/// Summary written as the verdict artifact.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verdict {
    pub ergodic: bool,
    pub n_closed_classes: usize,
    pub residual: f64,
}

impl StationaryResult {
    pub fn verdict(&self) -> Verdict {
        Verdict {
            ergodic: self.ergodic,
            n_closed_classes: self.closed_classes.len(),
            residual: self.residual,
        }
    }

    /// CSV `state_bitmask,probability` over the states of class `k`.
    pub fn distribution_csv(&self, k: usize) -> String {
        let mut out = String::from("state_bitmask,probability\n");
        for &s in &self.closed_classes[k] {
            let _ = writeln!(out, "{s},{:.17e}", self.distributions[k][s as usize]);
        }
        out
    }
}

fn transition_digraph(q: &GeneratorMatrix) -> DiGraph<(), ()> {
    let dim = q.dimension();
    let mut g = DiGraph::with_capacity(dim, dim * q.vertex_count());
    for _ in 0..dim {
        g.add_node(());
    }
    for s in 0..dim as u64 {
        for (to, _) in q.row(s) {
            g.add_edge(NodeIndex::new(s as usize), NodeIndex::new(to as usize), ());
        }
    }
    g
}

/// Finds the closed communicating classes, solves `pi Q = 0, sum pi = 1` on
/// each one and decides ergodicity.
pub fn stationary_analysis(q: &GeneratorMatrix) -> Result<StationaryResult, ExactError> {
    let dim = q.dimension();
    let digraph = transition_digraph(q);
    let mut component = vec![usize::MAX; dim];
    let sccs = tarjan_scc(&digraph);
    for (c, scc) in sccs.iter().enumerate() {
        for node in scc {
            component[node.index()] = c;
        }
    }
    let mut closed_classes: Vec<Vec<u64>> = sccs
        .iter()
        .enumerate()
        .filter(|(c, scc)| {
            scc.iter().all(|node| q.row(node.index() as u64).all(|(to, _)| component[to as usize] == *c))
        })
        .map(|(_, scc)| {
            let mut states: Vec<u64> = scc.iter().map(|n| n.index() as u64).collect();
            states.sort_unstable();
            states
        })
        .collect();
    closed_classes.sort_by_key(|c| c[0]);

    let mut distributions = Vec::with_capacity(closed_classes.len());
    let mut residual = 0.0f64;
    for class in &closed_classes {
        let pi = solve_class(q, class)?;
        let r = max_abs(&q.left_multiply(&pi));
        if !(r <= RESIDUAL_TOLERANCE) {
            return Err(ExactError::Numerical { size: class.len(), residual: r });
        }
        residual = residual.max(r);
        distributions.push(pi);
    }

    let ergodic = closed_classes.len() == 1 && reaches_everywhere(&digraph, &closed_classes[0]);
    Ok(StationaryResult { vertices: q.vertex_count(), closed_classes, distributions, ergodic, residual })
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Every state has a path into `class`: reverse search from the class.
fn reaches_everywhere(digraph: &DiGraph<(), ()>, class: &[u64]) -> bool {
    let mut seen = vec![false; digraph.node_count()];
    let mut stack: Vec<NodeIndex> = class.iter().map(|&s| NodeIndex::new(s as usize)).collect();
    for n in &stack {
        seen[n.index()] = true;
    }
    while let Some(n) = stack.pop() {
        for m in digraph.neighbors_directed(n, petgraph::Direction::Incoming) {
            if !seen[m.index()] {
                seen[m.index()] = true;
                stack.push(m);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

fn solve_class(q: &GeneratorMatrix, class: &[u64]) -> Result<Vec<f64>, ExactError> {
    let mut pi = vec![0.0; q.dimension()];
    if class.len() == 1 {
        pi[class[0] as usize] = 1.0;
        return Ok(pi);
    }
    let local = if class.len() <= DENSE_LIMIT { solve_dense(q, class) } else { solve_iterative(q, class) }?;
    for (&s, &p) in class.iter().zip(&local) {
        if p < -RESIDUAL_TOLERANCE {
            return Err(ExactError::Numerical { size: class.len(), residual: -p });
        }
        pi[s as usize] = p.max(0.0);
    }
    let total: f64 = pi.iter().sum();
    pi.iter_mut().for_each(|p| *p /= total);
    Ok(pi)
}

/// `Q_C^T pi = 0` with the last equation replaced by `sum pi = 1`.
fn solve_dense(q: &GeneratorMatrix, class: &[u64]) -> Result<Vec<f64>, ExactError> {
    let m = class.len();
    let index = |s: u64| class.binary_search(&s).expect("closed class is closed");
    let mut a = DMatrix::<f64>::zeros(m, m);
    for (i, &s) in class.iter().enumerate() {
        a[(i, i)] = -q.exit_rate(s);
        for (to, r) in q.row(s) {
            a[(index(to), i)] += r;
        }
    }
    for j in 0..m {
        a[(m - 1, j)] = 1.0;
    }
    let mut b = DVector::<f64>::zeros(m);
    b[m - 1] = 1.0;
    a.lu()
        .solve(&b)
        .map(|x| x.iter().copied().collect())
        .ok_or(ExactError::Numerical { size: m, residual: f64::INFINITY })
}

/// Gauss-Seidel sweeps on the balance equations
/// `pi(j) exit(j) = sum_i pi(i) q(i, j)`, renormalised after every sweep.
fn solve_iterative(q: &GeneratorMatrix, class: &[u64]) -> Result<Vec<f64>, ExactError> {
    let m = class.len();
    let index = |s: u64| class.binary_search(&s).expect("closed class is closed");
    // incoming[j] = list of (i, q(i, j))
    let mut incoming: Vec<Vec<(usize, f64)>> = vec![Vec::new(); m];
    for (i, &s) in class.iter().enumerate() {
        for (to, r) in q.row(s) {
            incoming[index(to)].push((i, r));
        }
    }
    let exit: Vec<f64> = class.iter().map(|&s| q.exit_rate(s)).collect();
    let mut pi = vec![1.0 / m as f64; m];
    let mut full = vec![0.0; q.dimension()];
    for sweep in 0..200_000 {
        for j in 0..m {
            let inflow: f64 = incoming[j].iter().map(|&(i, r)| pi[i] * r).sum();
            pi[j] = inflow / exit[j];
        }
        let total: f64 = pi.iter().sum();
        pi.iter_mut().for_each(|p| *p /= total);
        if sweep % 25 == 24 {
            for (&s, &p) in class.iter().zip(&pi) {
                full[s as usize] = p;
            }
            if max_abs(&q.left_multiply(&full)) <= RESIDUAL_TOLERANCE * 0.1 {
                return Ok(pi);
            }
        }
    }
    for (&s, &p) in class.iter().zip(&pi) {
        full[s as usize] = p;
    }
    Err(ExactError::Numerical { size: m, residual: max_abs(&q.left_multiply(&full)) })
}

/// `h(x) = sum_eta pi(eta) eta(x)` for each stationary law.
pub fn one_point_function(result: &StationaryResult) -> Vec<Vec<f64>> {
    result
        .distributions
        .iter()
        .map(|pi| {
            (0..result.vertices)
                .map(|x| {
                    pi.iter()
                        .enumerate()
                        .map(|(s, p)| if (s >> x) & 1 == 1 { *p } else { -p })
                        .sum()
                })
                .collect()
        })
        .collect()
}
