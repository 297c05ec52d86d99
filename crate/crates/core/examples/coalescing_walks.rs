//! Coalescing random walks from every site of a ring: how many clusters
//! remain over time, and when the first pair meets.
//!
//! ```text
//! cargo run --example coalescing_walks
//! ```

use signed_voter::signed_graph::{build_lattice_window, Boundary, SignRule};
use signed_voter::walkers::coalescing_walks;
use signed_voter::VertexId;

fn main() {
    let ring = build_lattice_window(1, &[12], Boundary::Periodic, &SignRule::AllPositive).unwrap();
    let starts: Vec<VertexId> = ring.vertices().collect();
    let run = coalescing_walks(&ring, &starts, 200.0, 5).unwrap();
    for t in [0.5, 2.0, 10.0, 50.0, 200.0] {
        let mut clusters: Vec<VertexId> = run.paths.iter().map(|p| p.position_at(t)).collect();
        clusters.sort();
        clusters.dedup();
        println!("t = {t:>5}: {} clusters", clusters.len());
    }
    let first = (0..12)
        .flat_map(|j| (j + 1..12).map(move |k| (j, k)))
        .filter_map(|(j, k)| run.meeting_time(j, k).map(|t| (t, j, k)))
        .min_by(|a, b| a.0.total_cmp(&b.0));
    if let Some((t, j, k)) = first {
        println!("first meeting: walkers {j} and {k} at t = {t:.3}");
    }
}
