//! Sign classification, the compatibility test on a quad, and site signs
//! assigned along a reference walk.
//!
//! ```text
//! cargo run --release --example site_signs
//! ```

use signed_voter::diagnostics::{assign_site_signs, check_compatibility, CompatibilityKind, ParityOptions, ShellSystem};
use signed_voter::signed_graph::{build_lattice_window, lattice_index, Boundary, SignRule};
use signed_voter::walkers::simulate_walk;
use signed_voter::{Sign, SignedGraph, VertexId};

fn main() {
    // Center 0, first shell {1, 2}, second shell {3, 4}; the edge 1-3 is a
    // negative gate that most walks from 1 to 3 cross.
    let gate = SignedGraph::from_edges(
        5,
        &[(0, 1, Sign::Plus), (0, 2, Sign::Plus), (1, 3, Sign::Minus), (1, 4, Sign::Plus), (2, 3, Sign::Plus), (2, 4, Sign::Plus)],
    )
    .unwrap();
    let shells = ShellSystem::from_sets(&gate, VertexId(0), vec![vec![VertexId(1), VertexId(2)], vec![VertexId(3), VertexId(4)]]).unwrap();
    let quad = [VertexId(1), VertexId(2), VertexId(3), VertexId(4)];
    let check = check_compatibility(&gate, &shells, CompatibilityKind::One, 1, quad, &ParityOptions::new(20_000, 3)).unwrap();
    let factors: Vec<i8> = check.factors.iter().map(|f| f.value).collect();
    println!("gate quad: factors {factors:?} -> {:?}", check.verdict);

    let extent = [13, 13];
    let plane = build_lattice_window(2, &extent, Boundary::Open, &SignRule::AllPositive).unwrap();
    let center = VertexId::from(lattice_index(&[6, 6], &extent));
    let shells = ShellSystem::geometric(&plane, center, &[1.0, 2.0, 3.0]).unwrap();
    // Flip every edge leaving the ball of radius 2.
    let labels = plane.labels().unwrap().to_vec();
    let inside = |v: VertexId| {
        let l = &labels[v.index()];
        (l[0] - 6).pow(2) + (l[1] - 6).pow(2) <= 4
    };
    let slab = plane.map_signs(|a, b, s| if inside(a) != inside(b) { -s } else { s });
    let reference = simulate_walk(&plane, center, 2000.0, 3).unwrap();
    let signs = assign_site_signs(&slab, &shells, &reference, &ParityOptions::new(8000, 5)).unwrap();
    for r in 1..=shells.count() {
        let row: String = shells
            .shell(r)
            .unwrap()
            .iter()
            .map(|&v| match signs.sign(v) {
                Some(Sign::Plus) => '+',
                Some(Sign::Minus) => '-',
                None => '?',
            })
            .collect();
        println!("shell {r}: {row}");
    }
}
