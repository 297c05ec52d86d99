//! Continuous-time signed random walks.
//!
//! A walk holds for an `Exp(1)` time at each site and then jumps to a
//! uniformly chosen neighbour, multiplying its running sign by the sign of the
//! crossed edge. This is the law of a dual walk in the graphical construction,
//! where each of the `d(x)` ordered pairs out of `x` fires at rate `1/d(x)`.

mod coalescing;
mod coupling;
mod loops;

use std::fmt::Write;

use rand::Rng;
use rand_distr::{Distribution, Exp1};
use serde::Serialize;
use thiserror::Error;

use crate::rng::{stream_rng, Domain};
use crate::signed_graph::{Path, SignedGraph, VertexId};
use crate::Sign;

pub use coalescing::{coalescing_walks, CoalescingRun};
pub use coupling::{timeshift_couple, CouplingResult};
pub use loops::{count_unsatisfied_loops, LoopRecord};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WalkError {
    #[error("horizon must be positive, got {0}")]
    NonPositiveHorizon(f64),
    #[error("segment [{from}, {to}] is not inside [0, {end}]")]
    SegmentOutOfRange { from: f64, to: f64, end: f64 },
    #[error("time shift must be non-negative, got {0}")]
    NegativeShift(f64),
    #[error("start set must be non-empty")]
    EmptyStarts,
    #[error("target set must be non-empty")]
    EmptyTarget,
    #[error("vertex {0} is not in the graph")]
    UnknownVertex(usize),
}

/// Trajectory of a signed walk on `[0, horizon]`.
///
/// The state is right-continuous: at a jump time the walk is already at the
/// new site with the updated sign.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SignedWalkPath {
    pub start: VertexId,
    pub jump_times: Vec<f64>,
    pub positions: Vec<VertexId>,
    pub cumulative_sign: Vec<Sign>,
    pub horizon: f64,
}

impl SignedWalkPath {
    pub fn new(start: VertexId, horizon: f64) -> Self {
        SignedWalkPath {
            start,
            jump_times: Vec::new(),
            positions: Vec::new(),
            cumulative_sign: Vec::new(),
            horizon,
        }
    }

    pub fn push_jump(&mut self, time: f64, to: VertexId, edge_sign: Sign) {
        debug_assert!(self.jump_times.last().is_none_or(|&t| t <= time));
        let sign = self.end_sign() * edge_sign;
        self.jump_times.push(time);
        self.positions.push(to);
        self.cumulative_sign.push(sign);
    }

    pub fn jump_count(&self) -> usize {
        self.jump_times.len()
    }

    pub fn end_position(&self) -> VertexId {
        self.positions.last().copied().unwrap_or(self.start)
    }

    pub fn end_sign(&self) -> Sign {
        self.cumulative_sign.last().copied().unwrap_or(Sign::Plus)
    }

    /// Number of jumps at times `<= t`.
    pub fn jumps_by(&self, t: f64) -> usize {
        self.jump_times.partition_point(|&u| u <= t)
    }

    pub fn position_at(&self, t: f64) -> VertexId {
        match self.jumps_by(t) {
            0 => self.start,
            k => self.positions[k - 1],
        }
    }

    pub fn sign_at(&self, t: f64) -> Sign {
        match self.jumps_by(t) {
            0 => Sign::Plus,
            k => self.cumulative_sign[k - 1],
        }
    }

    /// Visited vertex sequence (with repeats) up to and including time `t`.
    pub fn vertices_until(&self, t: f64) -> Path {
        let k = self.jumps_by(t);
        let mut v = Vec::with_capacity(k + 1);
        v.push(self.start);
        v.extend_from_slice(&self.positions[..k]);
        Path::new(v)
    }

    /// `t,vertex,sign` rows: the start at time 0, then one row per jump.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,vertex,sign\n");
        writeln!(out, "0,{},+1", self.start).unwrap();
        for ((t, v), s) in self.jump_times.iter().zip(&self.positions).zip(&self.cumulative_sign) {
            writeln!(out, "{t},{v},{s}").unwrap();
        }
        out
    }
}

/// Simulates a signed walk from `x` on `[0, horizon]` with the stream
/// `(seed, Walk, 0)`.
pub fn simulate_walk(
    graph: &SignedGraph,
    x: VertexId,
    horizon: f64,
    seed: u64,
) -> Result<SignedWalkPath, WalkError> {
    let mut rng = stream_rng(seed, Domain::Walk, 0);
    simulate_walk_with(graph, x, horizon, &mut rng)
}

pub fn simulate_walk_with<R: Rng + ?Sized>(
    graph: &SignedGraph,
    x: VertexId,
    horizon: f64,
    rng: &mut R,
) -> Result<SignedWalkPath, WalkError> {
    if !(horizon > 0.0) {
        return Err(WalkError::NonPositiveHorizon(horizon));
    }
    check_vertex(graph, x)?;
    let mut path = SignedWalkPath::new(x, horizon);
    let mut t = 0.0;
    let mut at = x;
    loop {
        let hold: f64 = Exp1.sample(rng);
        t += hold;
        if t > horizon {
            return Ok(path);
        }
        let (to, s) = step(graph, at, rng);
        path.push_jump(t, to, s);
        at = to;
    }
}

/// One jump-chain step: a uniform neighbour of `at` and the crossed sign.
#[inline]
pub fn step<R: Rng + ?Sized>(graph: &SignedGraph, at: VertexId, rng: &mut R) -> (VertexId, Sign) {
    let k = rng.random_range(0..graph.degree(at));
    (graph.neighbors(at)[k], graph.neighbor_signs(at)[k])
}

pub(crate) fn check_vertex(graph: &SignedGraph, x: VertexId) -> Result<(), WalkError> {
    if x.index() < graph.vertex_count() {
        Ok(())
    } else {
        Err(WalkError::UnknownVertex(x.index()))
    }
}

/// Sign of the path segment over `(s1, t1]`.
pub fn segment_sign(path: &SignedWalkPath, s1: f64, t1: f64) -> Result<Sign, WalkError> {
    if !(0.0 <= s1 && s1 <= t1 && t1 <= path.horizon) {
        return Err(WalkError::SegmentOutOfRange { from: s1, to: t1, end: path.horizon });
    }
    Ok(path.sign_at(s1) * path.sign_at(t1))
}

/// First time the path occupies a vertex of `target` (membership mask).
pub fn hitting_time(path: &SignedWalkPath, target: &[bool]) -> Result<Option<f64>, WalkError> {
    if !target.iter().any(|&b| b) {
        return Err(WalkError::EmptyTarget);
    }
    if target[path.start.index()] {
        return Ok(Some(0.0));
    }
    Ok(path
        .positions
        .iter()
        .position(|v| target[v.index()])
        .map(|k| path.jump_times[k]))
}

/// Where and with which running sign a live walk first entered a target set.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Hit {
    pub vertex: VertexId,
    pub sign: Sign,
    pub steps: u64,
}

/// Runs the jump chain from `x` until it enters `target`, giving up after
/// `max_steps` jumps. Holding times are irrelevant for where and with which
/// parity the set is entered, so only the jump chain is simulated.
pub fn walk_until_hit<R: Rng + ?Sized>(
    graph: &SignedGraph,
    x: VertexId,
    target: &[bool],
    max_steps: u64,
    rng: &mut R,
) -> Option<Hit> {
    let mut at = x;
    let mut sign = Sign::Plus;
    if target[at.index()] {
        return Some(Hit { vertex: at, sign, steps: 0 });
    }
    for steps in 1..=max_steps {
        let (to, s) = step(graph, at, rng);
        at = to;
        sign *= s;
        if target[at.index()] {
            return Some(Hit { vertex: at, sign, steps });
        }
    }
    None
}

/// Membership mask for a vertex list.
pub fn vertex_mask(graph: &SignedGraph, set: &[VertexId]) -> Vec<bool> {
    let mut mask = vec![false; graph.vertex_count()];
    for v in set {
        mask[v.index()] = true;
    }
    mask
}
