//! Exact analysis on small graphs: closed classes, stationary laws, one-point
//! functions and transient laws.
//!
//! ```text
//! cargo run --example exact_solver
//! ```

use signed_voter::diagnostics::signed_harmonic_residual;
use signed_voter::exact::{build_generator, one_point_function, stationary_analysis, total_variation, transient_distribution};
use signed_voter::harris::SpinConfig;
use signed_voter::signed_graph::{build_frustrated_cycle, build_lattice_window, Boundary, SignRule};
use signed_voter::{Sign, SignedGraph};

fn report(name: &str, g: &SignedGraph) {
    let q = build_generator(g).unwrap();
    let result = stationary_analysis(&q).unwrap();
    let sizes: Vec<usize> = result.closed_classes.iter().map(Vec::len).collect();
    println!("{name}: ergodic {}, closed class sizes {sizes:?}, residual {:.1e}", result.ergodic, result.residual);
    for h in one_point_function(&result) {
        println!("  h = {:?}, signed-harmonic residual {:.1e}", h.iter().map(|x| (x * 1e6).round() / 1e6 + 0.0).collect::<Vec<_>>(), signed_harmonic_residual(g, &h));
    }
    if result.ergodic {
        let eta0 = SpinConfig::constant(g.vertex_count(), Sign::Plus);
        for t in [1.0, 5.0, 20.0] {
            let p = transient_distribution(&q, &eta0, t).unwrap();
            println!("  TV(law at t = {t}, stationary) = {:.2e}", total_variation(&p, &result.distributions[0]));
        }
    }
}

fn main() {
    report("frustrated triangle", &build_frustrated_cycle(3, 1).unwrap());
    report("balanced square", &build_frustrated_cycle(4, 2).unwrap());
    report("2x3 grid, one negative edge", &build_lattice_window(2, &[2, 3], Boundary::Open, &SignRule::Negatives { edges: vec![(0, 1)] }).unwrap());

    let triangle = build_frustrated_cycle(3, 1).unwrap();
    let result = stationary_analysis(&build_generator(&triangle).unwrap()).unwrap();
    print!("\ntriangle stationary law:\n{}", result.distribution_csv(0));
}
