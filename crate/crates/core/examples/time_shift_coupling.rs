//! Couple a walk with a copy of itself delayed by `s`, and measure how often
//! the two lock together by time 200.
//!
//! ```text
//! cargo run --release --example time_shift_coupling
//! ```

use signed_voter::signed_graph::{build_lattice_window, Boundary, SignRule};
use signed_voter::walkers::timeshift_couple;
use signed_voter::VertexId;

fn main() {
    let torus = build_lattice_window(2, &[6, 6], Boundary::Periodic, &SignRule::AllPositive).unwrap();
    let runs = 2000;
    for shift in [0.0, 1.0, 2.5, 5.0] {
        let mut coupled = 0;
        let mut times = Vec::new();
        for seed in 0..runs {
            let r = timeshift_couple(&torus, VertexId(0), shift, 200.0, seed).unwrap();
            if let Some(t0) = r.coupling_time {
                assert!(r.shift_property_holds());
                coupled += 1;
                times.push(t0);
            }
        }
        times.sort_by(f64::total_cmp);
        let median = times.get(times.len() / 2).copied().unwrap_or(f64::NAN);
        println!("shift {shift:>3}: coupled by 200 in {:.3} of runs, median t0 {median:.2}", coupled as f64 / runs as f64);
    }
}
