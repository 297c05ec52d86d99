//! A continuous-time signed walk on the frustrated triangle: its running
//! sign, hitting times and the odd loops it closes.
//!
//! ```text
//! cargo run --example signed_walks
//! ```

use signed_voter::signed_graph::{build_frustrated_cycle, build_lattice_window, Boundary, SignRule};
use signed_voter::walkers::{count_unsatisfied_loops, hitting_time, segment_sign, simulate_walk, vertex_mask};
use signed_voter::VertexId;

fn main() {
    let triangle = build_frustrated_cycle(3, 1).unwrap();
    let walk = simulate_walk(&triangle, VertexId(0), 6.0, 1).unwrap();
    print!("{}", walk.to_csv());
    println!("sign over (1, 4]: {}", segment_sign(&walk, 1.0, 4.0).unwrap());
    println!("first visit to vertex 2: {:?}", hitting_time(&walk, &vertex_mask(&triangle, &[VertexId(2)])).unwrap());

    for horizon in [100.0, 1000.0, 10_000.0] {
        let loops = count_unsatisfied_loops(&simulate_walk(&triangle, VertexId(0), horizon, 7).unwrap());
        println!("horizon {horizon:>6}: {} disjoint odd loops", loops.len());
    }

    let balanced = build_lattice_window(2, &[4, 4], Boundary::Periodic, &SignRule::AllPositive).unwrap();
    let loops = count_unsatisfied_loops(&simulate_walk(&balanced, VertexId(0), 10_000.0, 7).unwrap());
    println!("all-positive torus, horizon 10000: {} odd loops", loops.len());
}
