//! Sample the equilibrium of the frustrated triangle from coalescing dual
//! walkers and compare it with the exact stationary law.
//!
//! ```text
//! cargo run --release --example canonical_equilibrium
//! ```

use signed_voter::exact::{build_generator, stationary_analysis, total_variation};
use signed_voter::harris::{sample_canonical_equilibrium, SpinConfig};
use signed_voter::signed_graph::build_frustrated_cycle;
use signed_voter::VertexId;

fn main() {
    let g = build_frustrated_cycle(3, 1).unwrap();
    let sites: Vec<VertexId> = g.vertices().collect();
    let samples = 50_000u64;
    let mut counts = [0u64; 8];
    let mut unconverged = 0;
    for seed in 0..samples {
        let s = sample_canonical_equilibrium(&g, &sites, 40.0, seed).unwrap();
        unconverged += !s.converged as u64;
        counts[SpinConfig::new(s.spins).to_bitmask() as usize] += 1;
    }
    let empirical: Vec<f64> = counts.iter().map(|&c| c as f64 / samples as f64).collect();
    let exact = &stationary_analysis(&build_generator(&g).unwrap()).unwrap().distributions[0];
    println!("state sampled  exact");
    for s in 0..8 {
        println!("{s:03b}  {:.4}   {:.4}", empirical[s], exact[s]);
    }
    println!("TV = {:.4}; {unconverged} samples merged late", total_variation(&empirical, exact));
}
