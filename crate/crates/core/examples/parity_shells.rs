//! Parity of walks between nested shells around the center of a planar
//! window, and the truncated sums built from them.
//!
//! ```text
//! cargo run --release --example parity_shells
//! ```

use signed_voter::diagnostics::{estimate_parity, estimate_shell_statistics, ParityOptions, ShellSystem};
use signed_voter::signed_graph::{build_frustrated_cycle, build_lattice_window, lattice_index, Boundary, SignRule};
use signed_voter::walkers::vertex_mask;
use signed_voter::VertexId;

fn main() {
    // Antipodal stop on an 8-cycle with one negative edge: left and right
    // routes have opposite signs and equal weight.
    let cycle = build_frustrated_cycle(8, 1).unwrap();
    let stop = vertex_mask(&cycle, &[VertexId(4)]);
    let table = estimate_parity(&cycle, VertexId(0), &stop, &ParityOptions::new(20_000, 1)).unwrap();
    let e = table.get(VertexId(4)).unwrap();
    println!("8-cycle, 0 -> 4: p_even {:.3} +- {:.3}, N {:.3}", e.p_even, e.ci_halfwidth, e.n_value);

    let extent = [15, 15];
    let g = build_lattice_window(2, &extent, Boundary::Open, &SignRule::IidNegative { p: 0.1, seed: 4 }).unwrap();
    let center = VertexId::from(lattice_index(&[7, 7], &extent));
    let shells = ShellSystem::geometric(&g, center, &[1.0, 2.0, 4.0]).unwrap();
    for r in 1..=shells.count() {
        println!("shell {r}: {} vertices", shells.shell(r).unwrap().len());
    }
    let stats = estimate_shell_statistics(&g, &shells, 2, &ParityOptions::new(4000, 2)).unwrap();
    println!("I_trunc = {:.6}, H_trunc = {:.4}, starved pairs = {}", stats.i_trunc, stats.h_trunc, stats.starved.len());
    for (n, i) in stats.i_by_shell().iter().enumerate() {
        println!("  shell {} contributes {i:.6}", n + 1);
    }
}
