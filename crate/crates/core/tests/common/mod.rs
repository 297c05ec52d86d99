//! Independent reference computations for the integration tests.
//!
//! Nothing here calls into the library's estimators or solvers: the chains are
//! rebuilt from the graph's adjacency and solved with dense linear algebra or
//! the matrix exponential.
#![allow(clippy::needless_range_loop)]
#![allow(dead_code)]

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use signed_voter::{Sign, SignedGraph, VertexId};
use statrs::distribution::{ChiSquared, ContinuousCDF};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Connected graph on `n` vertices: a random spanning tree plus each other
/// pair with probability `p`, signs negative with probability `q`.
pub fn random_connected_graph(n: usize, p: f64, q: f64, r: &mut ChaCha8Rng) -> SignedGraph {
    let mut edges = Vec::new();
    let mut present = vec![vec![false; n]; n];
    for v in 1..n {
        let u = r.random_range(0..v);
        present[u][v] = true;
    }
    for u in 0..n {
        for v in u + 1..n {
            if !present[u][v] && r.random::<f64>() < p {
                present[u][v] = true;
            }
            if present[u][v] {
                edges.push((u, v, Sign::from_bool(r.random::<f64>() >= q)));
            }
        }
    }
    SignedGraph::from_edges(n, &edges).unwrap()
}

/// Whether any simple cycle has negative sign, by depth-first enumeration of
/// every simple cycle through its smallest vertex.
pub fn has_negative_simple_cycle(g: &SignedGraph) -> bool {
    let n = g.vertex_count();
    let adj: Vec<Vec<(usize, bool)>> = (0..n)
        .map(|x| g.adjacency(VertexId(x as u32)).map(|(y, s)| (y.index(), s.is_minus())).collect())
        .collect();
    fn dfs(start: usize, at: usize, odd: bool, len: usize, on: &mut [bool], adj: &[Vec<(usize, bool)>]) -> bool {
        for &(y, neg) in &adj[at] {
            let parity = odd ^ neg;
            if y == start && len >= 2 && parity {
                return true;
            }
            if y > start && !on[y] {
                on[y] = true;
                if dfs(start, y, parity, len + 1, on, adj) {
                    return true;
                }
                on[y] = false;
            }
        }
        false
    }
    (0..n).any(|s| {
        let mut on = vec![false; n];
        on[s] = true;
        dfs(s, s, false, 0, &mut on, &adj)
    })
}

/// Index of `(vertex, odd)` in the parity-augmented chain.
fn aug(v: usize, odd: bool) -> usize {
    2 * v + odd as usize
}

/// Jump-chain transition matrix of the parity-augmented walk.
fn augmented_jump_matrix(g: &SignedGraph) -> DMatrix<f64> {
    let n = g.vertex_count();
    let mut p = DMatrix::zeros(2 * n, 2 * n);
    for x in 0..n {
        let xv = VertexId(x as u32);
        let d = g.degree(xv) as f64;
        for (y, s) in g.adjacency(xv) {
            for odd in [false, true] {
                p[(aug(x, odd), aug(y.index(), odd ^ s.is_minus()))] += 1.0 / d;
            }
        }
    }
    p
}

/// Exact `P_x(enter stop at y with even path)` and the odd twin, for every
/// `y` in the stop set, by solving the absorbing parity-augmented chain.
pub fn parity_absorption(g: &SignedGraph, x: usize, stop: &[usize]) -> BTreeMap<usize, (f64, f64)> {
    let n = g.vertex_count();
    let p = augmented_jump_matrix(g);
    let in_stop = |v: usize| stop.contains(&v);
    let transient: Vec<usize> = (0..2 * n).filter(|&s| !in_stop(s / 2)).collect();
    let pos = |s: usize| transient.iter().position(|&t| t == s);
    let m = transient.len();
    let mut a = DMatrix::<f64>::identity(m, m);
    for (i, &s) in transient.iter().enumerate() {
        for (j, &t) in transient.iter().enumerate() {
            a[(i, j)] -= p[(s, t)];
        }
    }
    let lu = a.lu();
    let start = pos(aug(x, false)).expect("start outside the stop set");
    let mut out = BTreeMap::new();
    for &y in stop {
        let mut pair = (0.0, 0.0);
        for odd in [false, true] {
            let b = DVector::from_iterator(m, transient.iter().map(|&s| p[(s, aug(y, odd))]));
            let h = lu.solve(&b).expect("absorbing chain is solvable");
            if odd {
                pair.1 = h[start];
            } else {
                pair.0 = h[start];
            }
        }
        out.insert(y, pair);
    }
    out
}

/// Exact `(mu_plus, mu_minus)` at time `t` for the rate-one walk from `x`,
/// from the matrix exponential of the augmented generator.
pub fn parity_occupation(g: &SignedGraph, x: usize, t: f64) -> (Vec<f64>, Vec<f64>) {
    let n = g.vertex_count();
    let q = augmented_jump_matrix(g) - DMatrix::<f64>::identity(2 * n, 2 * n);
    let pt = (q * t).exp();
    let row = pt.row(aug(x, false));
    ((0..n).map(|y| row[aug(y, false)]).collect(), (0..n).map(|y| row[aug(y, true)]).collect())
}

/// Dense spin-system generator built directly from the flip rule.
pub fn dense_spin_generator(g: &SignedGraph) -> DMatrix<f64> {
    let n = g.vertex_count();
    let dim = 1usize << n;
    let mut q = DMatrix::zeros(dim, dim);
    for s in 0..dim {
        let spin = |v: usize| if s >> v & 1 == 1 { 1i32 } else { -1 };
        for x in 0..n {
            let xv = VertexId(x as u32);
            let bad = g
                .adjacency(xv)
                .filter(|&(y, sign)| spin(x) * spin(y.index()) != sign.to_i8() as i32)
                .count();
            let rate = bad as f64 / g.degree(xv) as f64;
            q[(s, s ^ (1 << x))] += rate;
            q[(s, s)] -= rate;
        }
    }
    q
}

/// Law at time `t` of the spin system from the distribution `p0`.
pub fn spin_law(g: &SignedGraph, p0: &[f64], t: f64) -> Vec<f64> {
    let q = dense_spin_generator(g);
    let pt = (q * t).exp();
    let row = DVector::from_column_slice(p0).transpose() * pt;
    row.iter().copied().collect()
}

/// Probability that independent rate-one walks from `x` and `y` have met by
/// time `t` (exact pair chain with the diagonal absorbing).
pub fn meeting_probability(g: &SignedGraph, x: usize, y: usize, t: f64) -> f64 {
    let n = g.vertex_count();
    let idx = |a: usize, b: usize| a * n + b;
    let mut q = DMatrix::<f64>::zeros(n * n, n * n);
    for a in 0..n {
        for b in 0..n {
            if a == b {
                continue;
            }
            for (walker, other) in [(a, b), (b, a)] {
                let wv = VertexId(walker as u32);
                let d = g.degree(wv) as f64;
                for &z in g.neighbors(wv) {
                    let target = if walker == a { idx(z.index(), other) } else { idx(other, z.index()) };
                    q[(idx(a, b), target)] += 1.0 / d;
                    q[(idx(a, b), idx(a, b))] -= 1.0 / d;
                }
            }
        }
    }
    let pt = (q * t).exp();
    (0..n).map(|d| pt[(idx(x, y), idx(d, d))]).sum()
}

/// Two-sample Kolmogorov-Smirnov p-value (asymptotic).
pub fn ks_two_sample_p(a: &[f64], b: &[f64]) -> f64 {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (n, m) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j, mut d) = (0, 0, 0.0f64);
    while i < a.len() && j < b.len() {
        let v = a[i].min(b[j]);
        while i < a.len() && a[i] <= v {
            i += 1;
        }
        while j < b.len() && b[j] <= v {
            j += 1;
        }
        d = d.max((i as f64 / n - j as f64 / m).abs());
    }
    let en = (n * m / (n + m)).sqrt();
    let lambda = (en + 0.12 + 0.11 / en) * d;
    let mut sum = 0.0;
    for k in 1..=100 {
        let term = 2.0 * (-1.0f64).powi(k - 1) * (-2.0 * (k * k) as f64 * lambda * lambda).exp();
        sum += term;
        if term.abs() < 1e-12 {
            break;
        }
    }
    sum.clamp(0.0, 1.0)
}

/// Chi-square homogeneity p-value for two count vectors over the same bins,
/// pooling bins whose combined count is below 10 into one.
pub fn chi_square_two_sample_p(a: &[u64], b: &[u64]) -> f64 {
    let (na, nb) = (a.iter().sum::<u64>() as f64, b.iter().sum::<u64>() as f64);
    let mut bins: Vec<(f64, f64)> = Vec::new();
    let mut pooled = (0.0, 0.0);
    for (&x, &y) in a.iter().zip(b) {
        if x + y < 10 {
            pooled.0 += x as f64;
            pooled.1 += y as f64;
        } else {
            bins.push((x as f64, y as f64));
        }
    }
    if pooled.0 + pooled.1 > 0.0 {
        bins.push(pooled);
    }
    let mut stat = 0.0;
    for (x, y) in &bins {
        let total = x + y;
        let ea = total * na / (na + nb);
        let eb = total * nb / (na + nb);
        stat += (x - ea).powi(2) / ea + (y - eb).powi(2) / eb;
    }
    let dof = (bins.len() - 1).max(1) as f64;
    1.0 - ChiSquared::new(dof).unwrap().cdf(stat)
}

/// `(1/2) sum |p - q|`.
pub fn tv(p: &[f64], q: &[f64]) -> f64 {
    0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>()
}

/// Edge lists of all connected simple graphs on `n >= 2` vertices, one per
/// isomorphism class, as pairs over `0..n`.
pub fn connected_graphs_up_to_isomorphism(n: usize) -> Vec<Vec<(usize, usize)>> {
    use rayon::prelude::*;
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    let index = |a: usize, b: usize| pairs.iter().position(|&p| p == (a.min(b), a.max(b))).unwrap();
    let mut perms = vec![];
    permutations(&mut (0..n).collect(), 0, &mut perms);
    let maps: Vec<Vec<usize>> =
        perms.iter().map(|p| pairs.iter().map(|&(a, b)| index(p[a], p[b])).collect()).collect();
    let m = pairs.len();
    let connected = |mask: u32| {
        let mut seen = 1u32;
        loop {
            let mut next = seen;
            for (k, &(a, b)) in pairs.iter().enumerate() {
                if mask >> k & 1 == 1 && (seen >> a & 1 == 1 || seen >> b & 1 == 1) {
                    next |= 1 << a | 1 << b;
                }
            }
            if next == seen {
                return seen == (1 << n) - 1;
            }
            seen = next;
        }
    };
    (0u32..1 << m)
        .into_par_iter()
        .filter(|&mask| {
            connected(mask)
                && maps.iter().all(|map| {
                    let image = (0..m).filter(|&k| mask >> k & 1 == 1).fold(0u32, |acc, k| acc | 1 << map[k]);
                    image >= mask
                })
        })
        .map(|mask| (0..m).filter(|&k| mask >> k & 1 == 1).map(|k| pairs[k]).collect())
        .collect()
}

fn permutations(items: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == items.len() {
        out.push(items.clone());
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permutations(items, k + 1, out);
        items.swap(k, i);
    }
}

/// The graph with the given topology and sign pattern (bit `k` set means
/// edge `k` is negative).
pub fn with_sign_pattern(n: usize, edges: &[(usize, usize)], pattern: u64) -> SignedGraph {
    let list: Vec<_> = edges.iter().enumerate().map(|(k, &(a, b))| (a, b, Sign::from_bool(pattern >> k & 1 == 0))).collect();
    SignedGraph::from_edges(n, &list).unwrap()
}
