//! Signed voter models on finite signed graphs.
//!
//! A signed voter model lives on a graph whose edges carry a sign `s(x, y)` in
//! `{-1, +1}`. At the points of a Poisson process of rate `1/d(x)` attached to
//! each ordered neighbour pair `(x, y)`, site `x` adopts `s(x, y) * eta(y)`.
//! With all signs positive this is the classical voter model.
//!
//! The crate is organised around the objects one needs to study these
//! processes on desk-sized graphs:
//!
//! - [`signed_graph`]: graph storage, builders for the standard example
//!   families, path signs, frustration detection and switching.
//! - [`harris`]: the graphical construction. One seeded [`harris::EventStream`]
//!   drives both forward dynamics and backward (dual) signed walks, so the
//!   duality identities hold path by path.
//! - [`walkers`]: standalone continuous-time signed random walks, unsatisfied
//!   loop counting, hitting times, coalescing walks and the time-shift coupling.
//! - [`diagnostics`]: Monte Carlo parity statistics, sign classification,
//!   compatibility checks, the even/odd occupation measures and their gap.
//! - [`exact`]: the generator on `{-1,+1}^V`, closed classes, stationary
//!   distributions and transient laws by uniformization.
//! - [`experiment`]: a config-driven runner producing CSV/JSON artifacts and a
//!   run manifest.
//!
//! Rate convention: every ordered pair fires at rate `1/d(x)`, which matches the
//! `1/d(x)` weight in the generator. A walk therefore jumps at total rate one to
//! a uniformly chosen neighbour.
// `!(x > 0.0)` deliberately rejects NaN along with non-positive values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod diagnostics;
pub mod exact;
pub mod experiment;
pub mod harris;
pub mod rng;
pub mod sign;
pub mod signed_graph;
pub mod walkers;

pub use sign::Sign;
pub use signed_graph::{GaugePartition, Path, SignedGraph, VertexId};
