//! One event stream drives the forward dynamics and the backward signed
//! walks. The spins read off the dual endpoints agree with the forward run
//! site by site.
//!
//! ```text
//! cargo run --example harris_duality
//! ```

use signed_voter::harris::{dual_ensemble, evolve, meeting_sign, reconstruct_spins, sample_events, SpinConfig};
use signed_voter::rng::{stream_rng, Domain};
use signed_voter::signed_graph::{build_lattice_window, Boundary, SignRule};
use signed_voter::VertexId;

fn show(spins: &SpinConfig, side: usize) {
    for row in spins.to_i8().chunks(side) {
        let line: String = row.iter().map(|&s| if s > 0 { '+' } else { '-' }).collect();
        println!("  {line}");
    }
}

fn main() {
    let g = build_lattice_window(2, &[5, 5], Boundary::Periodic, &SignRule::IidNegative { p: 0.3, seed: 8 }).unwrap();
    let t = 4.0;
    let events = sample_events(&g, t, 42).unwrap();
    println!("{} events on {} ordered pairs up to t = {t}", events.len(), events.pair_count());

    let eta0 = SpinConfig::random(25, &mut stream_rng(42, Domain::InitialSpins, 0));
    let forward = evolve(&g, &eta0, &events, t).unwrap();
    println!("eta_0:");
    show(&eta0, 5);
    println!("eta_t by forward evolution:");
    show(&forward, 5);

    let sites: Vec<VertexId> = g.vertices().collect();
    let ensemble = dual_ensemble(&g, &events, &sites, t).unwrap();
    let dual = SpinConfig::new(reconstruct_spins(&eta0, &ensemble));
    println!("eta_t read from the dual walkers ({} coalesced classes):", ensemble.classes().len());
    show(&dual, 5);
    assert_eq!(forward, dual);

    let (x, y) = (VertexId(0), VertexId(12));
    match meeting_sign(&g, &events, x, y, t).unwrap() {
        Some(s) => println!("duals of 0 and 12 met; meeting sign {s} = eta_t(0) eta_t(12) = {}", forward.get(x) * forward.get(y)),
        None => println!("duals of 0 and 12 did not meet by t"),
    }
}
