use rand::Rng;
use serde::Serialize;

use super::{dual_ensemble, sample_events, HarrisError};
use crate::rng::{stream_rng, Domain};
use crate::signed_graph::{SignedGraph, VertexId};
use crate::Sign;

/// One draw from the coalescing-walk construction of the equilibrium.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CanonicalSample {
    pub spins: Vec<Sign>,
    /// Coalesced tag groups, each sorted, ordered by smallest tag.
    pub classes: Vec<Vec<usize>>,
    pub last_meeting: Option<f64>,
    /// False when a merge happened in the second half of the horizon, so more
    /// time could still have changed the classes.
    pub converged: bool,
}

/// Runs coalescing signed walks from `sites` for `horizon`, gives every
/// coalesced class an independent fair spin, and sets each site to the class
/// spin times the sign of its walker relative to the class representative.
///
/// At a finite horizon this is exactly the law of `eta_horizon` on `sites`
/// started from independent fair spins.
pub fn sample_canonical_equilibrium(
    graph: &SignedGraph,
    sites: &[VertexId],
    horizon: f64,
    seed: u64,
) -> Result<CanonicalSample, HarrisError> {
    let events = sample_events(graph, horizon, seed)?;
    let ensemble = dual_ensemble(graph, &events, sites, horizon)?;
    let classes = ensemble.classes();
    let mut spins = vec![Sign::Plus; sites.len()];
    for (k, class) in classes.iter().enumerate() {
        let mut rng = stream_rng(seed, Domain::Canonical, k as u64);
        let class_spin = Sign::from_bool(rng.random());
        let rep = ensemble.paths[class[0]].end_sign();
        for &tag in class {
            spins[tag] = class_spin * rep * ensemble.paths[tag].end_sign();
        }
    }
    let last_meeting = ensemble.last_meeting();
    Ok(CanonicalSample {
        spins,
        converged: last_meeting.is_none_or(|m| m <= horizon / 2.0),
        classes,
        last_meeting,
    })
}
