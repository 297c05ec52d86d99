//! Build a few signed graphs, test them for balance and switch a balanced one
//! to the all-positive graph.
//!
//! ```text
//! cargo run --example graph_balance
//! ```

use signed_voter::signed_graph::{
    build_frustrated_cycle, build_lattice_window, find_unsatisfied_cycle, gauge_partition, path_sign, switch, Boundary,
    SignRule,
};
use signed_voter::SignedGraph;

fn describe(name: &str, g: &SignedGraph) {
    print!("{name}: {} vertices, {} edges, {} negative; ", g.vertex_count(), g.edge_count(), g.negative_edges().len());
    match find_unsatisfied_cycle(g) {
        Some(cycle) => {
            let ids: Vec<u32> = cycle.vertices.iter().map(|v| v.0).collect();
            println!("frustrated, cycle {ids:?} has sign {}", path_sign(g, &cycle).unwrap());
        }
        None => {
            let p = gauge_partition(g).expect("balanced graphs have a partition");
            let minus = p.side.iter().filter(|s| s.is_minus()).count();
            let switched = switch(g, &p);
            println!("balanced, {minus} vertices on the minus side, switched graph has {} negative edges", switched.negative_edges().len());
        }
    }
}

fn main() {
    describe("triangle with one negative edge", &build_frustrated_cycle(3, 1).unwrap());
    describe("hexagon with two negative edges", &build_frustrated_cycle(6, 2).unwrap());
    let torus = build_lattice_window(2, &[6, 6], Boundary::Periodic, &SignRule::IidNegative { p: 0.2, seed: 3 }).unwrap();
    describe("6x6 torus, iid negative p=0.2", &torus);

    // The text format round-trips exactly.
    let text = build_frustrated_cycle(4, 1).unwrap().to_text();
    println!("\nsquare with one negative edge in the text format:\n{text}");
    assert_eq!(SignedGraph::from_text(&text).unwrap().to_text(), text);
}
