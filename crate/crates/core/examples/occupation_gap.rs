//! Even and odd occupation measures of the signed walk and the distance
//! between them as time grows.
//!
//! ```text
//! cargo run --release --example occupation_gap
//! ```

use signed_voter::diagnostics::{estimate_mu_pm, tv_gap};
use signed_voter::signed_graph::{build_frustrated_cycle, build_lattice_window, Boundary, SignRule};
use signed_voter::VertexId;

fn main() {
    let triangle = build_frustrated_cycle(3, 1).unwrap();
    let balanced = build_frustrated_cycle(6, 2).unwrap();
    let torus = build_lattice_window(2, &[5, 5], Boundary::Periodic, &SignRule::IidNegative { p: 0.5, seed: 0 }).unwrap();
    println!("{:>5} {:>10} {:>10} {:>10}", "t", "triangle", "5x5 torus", "balanced");
    for t in [0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 50.0] {
        let gap = |g| tv_gap(&estimate_mu_pm(g, VertexId(0), t, 50_000, 1).unwrap());
        println!("{t:>5} {:>10.4} {:>10.4} {:>10.4}", gap(&triangle), gap(&torus), gap(&balanced));
    }
    let at_10 = estimate_mu_pm(&triangle, VertexId(0), 10.0, 50_000, 1).unwrap();
    print!("\ntriangle at t = 10:\n{}", at_10.to_csv());
}
