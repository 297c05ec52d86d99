use rand_distr::{Distribution, Exp1};
use rand::Rng;
use serde::Serialize;

use super::{check_vertex, step, SignedWalkPath, WalkError};
use crate::rng::{stream_rng, Domain};
use crate::signed_graph::{SignedGraph, VertexId};

/// Result of [`coalescing_walks`].
#[derive(Clone, Debug, Serialize)]
pub struct CoalescingRun {
    /// `meeting[j][k]`: first time walkers `j` and `k` shared a site.
    pub meeting: Vec<Vec<Option<f64>>>,
    /// One signed trajectory per start; merged walkers move together.
    pub paths: Vec<SignedWalkPath>,
}

impl CoalescingRun {
    pub fn meeting_time(&self, j: usize, k: usize) -> Option<f64> {
        self.meeting[j][k]
    }
}

/// Walks that move independently until they meet and together afterwards.
///
/// Each occupied site (cluster) jumps at rate one; the simulation is the usual
/// next-event scheme over clusters.
pub fn coalescing_walks(
    graph: &SignedGraph,
    starts: &[VertexId],
    horizon: f64,
    seed: u64,
) -> Result<CoalescingRun, WalkError> {
    if starts.is_empty() {
        return Err(WalkError::EmptyStarts);
    }
    if !(horizon > 0.0) {
        return Err(WalkError::NonPositiveHorizon(horizon));
    }
    for &x in starts {
        check_vertex(graph, x)?;
    }
    let r = starts.len();
    let mut meeting = vec![vec![None; r]; r];
    for (j, row) in meeting.iter_mut().enumerate() {
        row[j] = Some(0.0);
    }
    let mut paths: Vec<_> = starts.iter().map(|&x| SignedWalkPath::new(x, horizon)).collect();

    const EMPTY: usize = usize::MAX;
    let mut occupant = vec![EMPTY; graph.vertex_count()];
    let mut members: Vec<Vec<usize>> = Vec::new();
    let mut site: Vec<VertexId> = Vec::new();
    let mut alive: Vec<usize> = Vec::new();

    let merge = |meeting: &mut Vec<Vec<Option<f64>>>, a: &[usize], b: &[usize], t: f64| {
        for &j in a {
            for &k in b {
                meeting[j][k] = Some(t);
                meeting[k][j] = Some(t);
            }
        }
    };

    for (tag, &x) in starts.iter().enumerate() {
        match occupant[x.index()] {
            EMPTY => {
                occupant[x.index()] = members.len();
                alive.push(members.len());
                members.push(vec![tag]);
                site.push(x);
            }
            c => {
                let existing = members[c].clone();
                merge(&mut meeting, &existing, &[tag], 0.0);
                members[c].push(tag);
            }
        }
    }

    let mut rng = stream_rng(seed, Domain::Coalescing, 0);
    let mut t = 0.0;
    loop {
        let hold: f64 = Exp1.sample(&mut rng);
        t += hold / alive.len() as f64;
        if t > horizon {
            break;
        }
        let pick = rng.random_range(0..alive.len());
        let c = alive[pick];
        let from = site[c];
        let (to, s) = step(graph, from, &mut rng);
        for &tag in &members[c] {
            paths[tag].push_jump(t, to, s);
        }
        occupant[from.index()] = EMPTY;
        match occupant[to.index()] {
            EMPTY => {
                occupant[to.index()] = c;
                site[c] = to;
            }
            other => {
                let moving = std::mem::take(&mut members[c]);
                merge(&mut meeting, &moving, &members[other], t);
                members[other].extend(moving);
                alive.swap_remove(pick);
            }
        }
    }
    Ok(CoalescingRun { meeting, paths })
}
