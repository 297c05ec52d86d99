//! Graphical (Harris) construction of the signed voter model.
//!
//! Each ordered neighbour pair `(x, y)` carries a Poisson process `N^{x,y}` of
//! rate `1/d(x)`. Going forward in time, an event of `N^{x,y}` sets
//! `eta(x) <- s(x, y) * eta(y)`. Reading the same events backward from a time
//! `t` yields the dual signed walks, and
//! `eta_t(x) = eta_0(X^{x,t}(t)) * i^{x,t}(t)` holds for every realisation.

mod canonical;
mod dual;

use std::ops::Neg;

use rand::Rng;
use rand_distr::{Distribution, Exp1};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rng::{stream_rng, Domain};
use crate::signed_graph::{GaugePartition, SignedGraph, VertexId};
use crate::Sign;

pub use canonical::{sample_canonical_equilibrium, CanonicalSample};
pub use dual::{
    dual_ensemble, dual_walk, meeting_path, meeting_sign, reconstruct_spins, Coalescence, DualEnsemble,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HarrisError {
    #[error("horizon must be positive, got {0}")]
    NonPositiveHorizon(f64),
    #[error("time {t} lies beyond the event horizon {horizon}")]
    TimeBeyondHorizon { t: f64, horizon: f64 },
    #[error("two event streams share the time {0}; rerun with another seed")]
    EventTie(f64),
    #[error("event stream has {stream} ordered pairs but the graph has {graph}")]
    StreamMismatch { stream: usize, graph: usize },
    #[error("spin configuration has length {got}, graph has {expected} vertices")]
    LengthMismatch { got: usize, expected: usize },
    #[error("site list must be non-empty")]
    EmptySites,
    #[error("vertex {0} is not in the graph")]
    UnknownVertex(usize),
}

/// One point of the superposed event process.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Event {
    pub time: f64,
    /// Ordered pair id, see [`SignedGraph::pair`].
    pub pair: u32,
}

/// Poisson event times for every ordered neighbour pair on `(0, horizon]`.
///
/// The events are kept merged into a single time-sorted timeline; the times of
/// one pair are recovered with [`EventStream::times_for_pair`].
#[derive(Clone, Debug, PartialEq)]
pub struct EventStream {
    pub horizon: f64,
    pub seed: u64,
    pair_count: usize,
    timeline: Vec<Event>,
}

impl EventStream {
    /// Builds a stream from explicit per-pair times (mainly for hand-made
    /// scenarios in tests and examples).
    pub fn from_pair_times(
        graph: &SignedGraph,
        horizon: f64,
        times: &[(usize, f64)],
    ) -> Result<Self, HarrisError> {
        if !(horizon > 0.0) {
            return Err(HarrisError::NonPositiveHorizon(horizon));
        }
        let mut timeline = Vec::with_capacity(times.len());
        for &(pair, time) in times {
            if !(time > 0.0 && time <= horizon) {
                return Err(HarrisError::TimeBeyondHorizon { t: time, horizon });
            }
            assert!(pair < graph.pair_count(), "pair id {pair} out of range");
            timeline.push(Event { time, pair: pair as u32 });
        }
        Self::finish(horizon, 0, graph.pair_count(), timeline)
    }

    fn finish(horizon: f64, seed: u64, pair_count: usize, mut timeline: Vec<Event>) -> Result<Self, HarrisError> {
        timeline.sort_by(|a, b| a.time.total_cmp(&b.time));
        if let Some(w) = timeline.windows(2).find(|w| w[0].time == w[1].time) {
            return Err(HarrisError::EventTie(w[0].time));
        }
        Ok(EventStream { horizon, seed, pair_count, timeline })
    }

    pub fn pair_count(&self) -> usize {
        self.pair_count
    }

    pub fn len(&self) -> usize {
        self.timeline.len()
    }

    pub fn is_empty(&self) -> bool {
        self.timeline.is_empty()
    }

    /// All events sorted by time.
    pub fn timeline(&self) -> &[Event] {
        &self.timeline
    }

    /// Events with time at most `t`.
    pub fn until(&self, t: f64) -> &[Event] {
        let end = self.timeline.partition_point(|e| e.time <= t);
        &self.timeline[..end]
    }

    pub fn times_for_pair(&self, pair: usize) -> Vec<f64> {
        self.timeline.iter().filter(|e| e.pair as usize == pair).map(|e| e.time).collect()
    }

    /// Number of events per ordered pair.
    pub fn counts(&self) -> Vec<u32> {
        let mut counts = vec![0u32; self.pair_count];
        for e in &self.timeline {
            counts[e.pair as usize] += 1;
        }
        counts
    }

    fn check(&self, graph: &SignedGraph, t: f64) -> Result<(), HarrisError> {
        if graph.pair_count() != self.pair_count {
            return Err(HarrisError::StreamMismatch { stream: self.pair_count, graph: graph.pair_count() });
        }
        if !(t >= 0.0 && t <= self.horizon) {
            return Err(HarrisError::TimeBeyondHorizon { t, horizon: self.horizon });
        }
        Ok(())
    }
}

/// Samples independent Poisson processes of rate `1/d(x)` for all ordered
/// pairs `(x, y)`. The times of pair `p` come from their own stream
/// `(seed, Events, p)`.
pub fn sample_events(graph: &SignedGraph, horizon: f64, seed: u64) -> Result<EventStream, HarrisError> {
    if !(horizon > 0.0) {
        return Err(HarrisError::NonPositiveHorizon(horizon));
    }
    let mut timeline = Vec::new();
    for pair in 0..graph.pair_count() {
        let (x, _, _) = graph.pair(pair);
        let mean_gap = graph.degree(x) as f64;
        let mut rng = stream_rng(seed, Domain::Events, pair as u64);
        let mut time = 0.0;
        loop {
            let gap: f64 = Exp1.sample(&mut rng);
            time += gap * mean_gap;
            if time > horizon {
                break;
            }
            timeline.push(Event { time, pair: pair as u32 });
        }
    }
    EventStream::finish(horizon, seed, graph.pair_count(), timeline)
}

/// A configuration in `{-1, +1}^V`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SpinConfig {
    pub spins: Vec<Sign>,
}

impl SpinConfig {
    pub fn new(spins: Vec<Sign>) -> Self {
        SpinConfig { spins }
    }

    pub fn constant(n: usize, value: Sign) -> Self {
        SpinConfig { spins: vec![value; n] }
    }

    /// Bit `i` set means `+1` at vertex `i`.
    pub fn from_bitmask(n: usize, mask: u64) -> Self {
        SpinConfig { spins: (0..n).map(|i| Sign::from_bool(mask >> i & 1 == 1)).collect() }
    }

    pub fn to_bitmask(&self) -> u64 {
        assert!(self.spins.len() <= 64, "bitmask encoding needs at most 64 vertices");
        self.spins.iter().enumerate().filter(|(_, s)| s.is_plus()).fold(0, |m, (i, _)| m | 1 << i)
    }

    /// Independent fair spins.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        SpinConfig { spins: (0..n).map(|_| Sign::from_bool(rng.random())).collect() }
    }

    pub fn len(&self) -> usize {
        self.spins.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spins.is_empty()
    }

    pub fn get(&self, x: VertexId) -> Sign {
        self.spins[x.index()]
    }

    pub fn set(&mut self, x: VertexId, value: Sign) {
        self.spins[x.index()] = value;
    }

    /// Multiplies each spin by the side of the partition it lies on.
    pub fn switched(&self, partition: &GaugePartition) -> SpinConfig {
        SpinConfig {
            spins: self.spins.iter().enumerate().map(|(i, &s)| s * partition.side(VertexId(i as u32))).collect(),
        }
    }

    pub fn to_i8(&self) -> Vec<i8> {
        self.spins.iter().map(|s| s.to_i8()).collect()
    }
}

impl Neg for SpinConfig {
    type Output = SpinConfig;
    fn neg(self) -> SpinConfig {
        SpinConfig { spins: self.spins.into_iter().map(|s| -s).collect() }
    }
}

impl Neg for &SpinConfig {
    type Output = SpinConfig;
    fn neg(self) -> SpinConfig {
        -self.clone()
    }
}

/// Forward dynamics: the configuration at time `t` started from `eta0`.
pub fn evolve(graph: &SignedGraph, eta0: &SpinConfig, events: &EventStream, t: f64) -> Result<SpinConfig, HarrisError> {
    evolve_observed(graph, eta0, events, t, |_, _, _| {})
}

/// Like [`evolve`], calling `observe(time, site, new_spin)` after every event
/// that changes a spin.
pub fn evolve_observed(
    graph: &SignedGraph,
    eta0: &SpinConfig,
    events: &EventStream,
    t: f64,
    mut observe: impl FnMut(f64, VertexId, Sign),
) -> Result<SpinConfig, HarrisError> {
    events.check(graph, t)?;
    if eta0.len() != graph.vertex_count() {
        return Err(HarrisError::LengthMismatch { got: eta0.len(), expected: graph.vertex_count() });
    }
    let mut eta = eta0.clone();
    for e in events.until(t) {
        let (x, y, s) = graph.pair(e.pair as usize);
        let next = s * eta.get(y);
        if next != eta.get(x) {
            eta.set(x, next);
            observe(e.time, x, next);
        }
    }
    Ok(eta)
}
