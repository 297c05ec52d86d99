mod common;

use rand::Rng;
use signed_voter::diagnostics::{
    assign_site_signs, check_compatibility, classify_sign, estimate_mu_pm, estimate_parity, estimate_shell_statistics,
    signed_harmonic_residual, tv_gap, wilson_interval, Compatibility, CompatibilityKind, OccupationMeasurePair, ParityOptions,
    ShellSystem,
};
use signed_voter::signed_graph::{build_frustrated_cycle, build_lattice_window, gauge_partition, lattice_index, switch, Boundary, SignRule};
use signed_voter::walkers::{simulate_walk, vertex_mask};
use signed_voter::{GaugePartition, Sign, SignedGraph, VertexId};

fn v(i: usize) -> VertexId {
    VertexId::from(i)
}

#[test]
fn parity_estimates_match_the_absorbing_chain() {
    let mut r = common::rng(31);
    let (mut cells, mut inside) = (0, 0);
    for trial in 0..40 {
        let n = r.random_range(3..=5);
        let g = common::random_connected_graph(n, 0.5, 0.5, &mut r);
        let x = r.random_range(0..n);
        let stop: Vec<usize> = (0..n).filter(|&y| y != x && r.random::<f64>() < 0.5).collect();
        if stop.is_empty() {
            continue;
        }
        let exact = common::parity_absorption(&g, x, &stop);
        let stop_ids: Vec<VertexId> = stop.iter().map(|&y| v(y)).collect();
        let table = estimate_parity(&g, v(x), &vertex_mask(&g, &stop_ids), &ParityOptions::new(4000, trial)).unwrap();
        for (&y, &(even, odd)) in &exact {
            let Some(e) = table.get(v(y)) else {
                assert!(even + odd < 2e-3, "endpoint {y} never hit but has mass {}", even + odd);
                continue;
            };
            let p_even = even / (even + odd);
            cells += 1;
            if (e.p_even - p_even).abs() <= 3.0 * e.ci_halfwidth {
                inside += 1;
            }
            assert!(e.n_value <= 0.5);
        }
    }
    assert!(inside as f64 >= 0.99 * cells as f64, "{inside}/{cells}");
}

#[test]
fn antipodal_stop_on_a_symmetric_cycle_is_exactly_fair() {
    for k in 2..5 {
        let g = build_frustrated_cycle(2 * k, 1).unwrap();
        // the negative edge is {0, 1}; its antipode is the edge {k, k+1}
        let exact = common::parity_absorption(&g, 0, &[k]);
        let (even, odd) = exact[&k];
        assert!((even - 0.5).abs() < 1e-12 && (odd - 0.5).abs() < 1e-12);
    }
}

#[test]
fn all_positive_graphs_are_always_even() {
    let g = build_lattice_window(2, &[4, 4], Boundary::Open, &SignRule::AllPositive).unwrap();
    let t = estimate_parity(&g, v(0), &vertex_mask(&g, &[v(15), v(12)]), &ParityOptions::new(500, 1)).unwrap();
    for e in t.endpoints.values() {
        assert_eq!((e.p_odd, e.n_value), (0.0, 0.0));
    }
}

/// Center `c = 0`, `x = 1`, `y = 2`, `v = 3`, `w = 4`; the only negative edge
/// is `x - v`.
fn gate_graph() -> (SignedGraph, ShellSystem) {
    let g = SignedGraph::from_edges(
        5,
        &[(0, 1, Sign::Plus), (0, 2, Sign::Plus), (1, 3, Sign::Minus), (1, 4, Sign::Plus), (2, 3, Sign::Plus), (2, 4, Sign::Plus)],
    )
    .unwrap();
    let shells = ShellSystem::from_sets(&g, v(0), vec![vec![v(1), v(2)], vec![v(3), v(4)]]).unwrap();
    (g, shells)
}

#[test]
fn one_odd_leg_makes_the_quad_incompatible() {
    let (g, shells) = gate_graph();
    // Exact classification of the four legs first.
    let mut exact_product = 1i8;
    for (a, b) in [(1, 3), (1, 4), (2, 3), (2, 4)] {
        let (even, odd) = common::parity_absorption(&g, a, &[3, 4])[&b];
        let p_even = even / (even + odd);
        let class = if p_even > 0.75 {
            1
        } else if p_even < 0.25 {
            -1
        } else {
            0
        };
        assert_ne!(class, 0, "leg {a}->{b} is not decisive: {p_even}");
        exact_product *= class;
    }
    let (even, odd) = common::parity_absorption(&g, 1, &[3, 4])[&3];
    assert!((odd / (even + odd) - 5.0 / 6.0).abs() < 1e-12);
    assert_eq!(exact_product, -1);

    let check =
        check_compatibility(&g, &shells, CompatibilityKind::One, 1, [v(1), v(2), v(3), v(4)], &ParityOptions::new(20_000, 3))
            .unwrap();
    assert_eq!(check.verdict, Compatibility::Incompatible);
    assert_eq!(check.factors.iter().map(|f| f.value).collect::<Vec<_>>(), vec![-1, 1, 1, 1]);
}

#[test]
fn single_forced_crossing_gives_negative_sign() {
    // path 0 - 1 - 2 with the negative edge in the middle: every walk from
    // C_1 = {1} to C_2 = {2} crosses it exactly once
    let g = SignedGraph::from_edges(3, &[(0, 1, Sign::Plus), (1, 2, Sign::Minus)]).unwrap();
    let shells = ShellSystem::from_sets(&g, v(0), vec![vec![v(1)], vec![v(2)]]).unwrap();
    let c = classify_sign(&g, &shells, 1, v(1), v(2), &ParityOptions::new(200, 0)).unwrap();
    assert_eq!((c.value, c.starved), (-1, false));
}

#[test]
fn starved_factor_leaves_the_quad_undecided() {
    let (g, shells) = gate_graph();
    let opts = ParityOptions { min_hits: 1_000_000, ..ParityOptions::new(100, 0) };
    let check = check_compatibility(&g, &shells, CompatibilityKind::One, 1, [v(1), v(2), v(3), v(4)], &opts).unwrap();
    assert_eq!(check.verdict, Compatibility::Undecided);
    assert!(check.factors.iter().all(|f| f.starved));
}

fn plane() -> (SignedGraph, ShellSystem, usize) {
    let ext = [13, 13];
    let g = build_lattice_window(2, &ext, Boundary::Open, &SignRule::AllPositive).unwrap();
    let c = lattice_index(&[6, 6], &ext);
    let shells = ShellSystem::geometric(&g, v(c), &[1.0, 2.0, 3.0]).unwrap();
    (g, shells, c)
}

#[test]
fn flipping_a_separating_slab_flips_the_next_shells() {
    let (g, shells, c) = plane();
    let labels = g.labels().unwrap().to_vec();
    // every edge leaving the ball of radius 2 crosses the slab
    let inner = |x: VertexId| {
        let l = &labels[x.index()];
        (l[0] - 6).pow(2) + (l[1] - 6).pow(2) <= 4
    };
    let slab = g.map_signs(|a, b, s| if inner(a) != inner(b) { -s } else { s });
    let opts = ParityOptions::new(8000, 5);
    let reference = simulate_walk(&g, v(c), 2000.0, 3).unwrap();
    let plain = assign_site_signs(&g, &shells, &reference, &opts).unwrap();
    let flipped = assign_site_signs(&slab, &shells, &reference, &opts).unwrap();
    assert!(plain.unassigned.is_empty() && flipped.unassigned.is_empty());
    for r in 1..=3 {
        for &y in shells.shell(r).unwrap() {
            assert_eq!(plain.sign(y), Some(Sign::Plus));
            let expected = if r == 1 { Sign::Plus } else { Sign::Minus };
            assert_eq!(flipped.sign(y), Some(expected), "shell {r} vertex {}", y.index());
        }
    }
    // deterministic given (path, seed, samples)
    assert_eq!(assign_site_signs(&slab, &shells, &reference, &opts).unwrap(), flipped);
}

#[test]
fn positive_plane_has_zero_truncated_sums() {
    let (g, shells, _) = plane();
    let stats = estimate_shell_statistics(&g, &shells, 2, &ParityOptions::new(300, 0)).unwrap();
    assert_eq!(stats.i_trunc, 0.0);
    assert_eq!(stats.h_trunc, 0.0);
}

#[test]
fn shell_sum_is_stable_under_doubling_the_samples() {
    let (g, shells, c) = plane();
    let labels = g.labels().unwrap().to_vec();
    // one negative edge on the first shell's outer side
    let right = lattice_index(&[8, 6], &[13, 13]);
    let right2 = lattice_index(&[9, 6], &[13, 13]);
    assert_eq!(labels[c], vec![6, 6]);
    let g = g.with_negative_edges(&[(v(right), v(right2))]).unwrap();
    let run = |samples| estimate_shell_statistics(&g, &shells, 2, &ParityOptions::new(samples, 9)).unwrap();
    let (a, b) = (run(2000), run(4000));
    let half_width = |s: &signed_voter::diagnostics::ShellStatistics| -> f64 {
        s.terms.iter().filter(|t| !t.estimate.starved).map(|t| 0.5f64.powi(4 * t.n as i32 + 2) * t.estimate.ci_halfwidth).sum()
    };
    assert!(a.i_trunc > 0.0);
    assert!((a.i_trunc - b.i_trunc).abs() <= half_width(&a) + half_width(&b));
}

#[test]
fn occupation_measures_match_the_parity_chain() {
    let mut r = common::rng(77);
    for trial in 0..6 {
        let n = r.random_range(3..=8);
        let g = common::random_connected_graph(n, 0.4, 0.5, &mut r);
        let t = r.random_range(0.5..6.0);
        let est = estimate_mu_pm(&g, v(0), t, 100_000, trial).unwrap();
        let (plus, minus) = common::parity_occupation(&g, 0, t);
        for y in 0..n {
            assert!((est.mu_plus[y] - plus[y]).abs() < 0.02);
            assert!((est.mu_minus[y] - minus[y]).abs() < 0.02);
        }
        assert!((est.total_mass() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn frustrated_triangle_gap_decays() {
    let g = build_frustrated_cycle(3, 1).unwrap();
    let grid = [1.0, 2.0, 5.0, 10.0, 20.0, 50.0];
    let mut previous = f64::INFINITY;
    for (k, &t) in grid.iter().enumerate() {
        let est = estimate_mu_pm(&g, v(0), t, 100_000, k as u64).unwrap();
        let (plus, minus) = common::parity_occupation(&g, 0, t);
        let exact: f64 = plus.iter().zip(&minus).map(|(a, b)| (a - b).abs()).sum();
        let gap = tv_gap(&est);
        // six cells, each off by at most a few standard errors
        let slack = 6.0 * 4.0 * (0.25 / 100_000f64).sqrt();
        assert!((gap - exact).abs() < slack, "t={t}: {gap} vs {exact}");
        assert!(gap <= previous + slack);
        previous = gap;
    }
    assert!(previous < 0.05);
}

#[test]
fn trivial_gap_and_residual_values() {
    let pair = |plus: Vec<f64>, minus: Vec<f64>| OccupationMeasurePair { start: v(0), t: 1.0, samples: 1, mu_plus: plus, mu_minus: minus };
    assert_eq!(tv_gap(&pair(vec![0.25, 0.75], vec![0.0, 0.0])), 1.0);
    assert_eq!(tv_gap(&pair(vec![0.25, 0.25], vec![0.25, 0.25])), 0.0);
    let g = build_frustrated_cycle(5, 2).unwrap();
    assert_eq!(signed_harmonic_residual(&g, &[0.0; 5]), 0.0);
    let p = gauge_partition(&g).unwrap();
    let h: Vec<f64> = p.side.iter().map(|s| s.to_f64()).collect();
    assert!(signed_harmonic_residual(&g, &h) < 1e-15);
}

#[test]
fn balanced_switched_walks_carry_no_odd_mass() {
    let g = build_lattice_window(2, &[4, 4], Boundary::Periodic, &SignRule::AllPositive).unwrap();
    let sides = GaugePartition { side: (0..16).map(|x| Sign::from_bool(x % 3 != 0)).collect() };
    let signed = switch(&g, &sides);
    let back = switch(&signed, &gauge_partition(&signed).unwrap());
    let est = estimate_mu_pm(&back, v(5), 7.0, 5000, 1).unwrap();
    assert!(est.mu_minus.iter().all(|&m| m == 0.0));
}

#[test]
fn wilson_interval_contains_the_truth_at_the_nominal_rate() {
    let mut r = common::rng(3);
    let (p, n) = (0.3, 200u64);
    let mut covered = 0;
    for _ in 0..2000 {
        let k = (0..n).filter(|_| r.random::<f64>() < p).count() as u64;
        let (c, h) = wilson_interval(k, n);
        covered += ((c - p).abs() <= h) as u32;
    }
    let rate = covered as f64 / 2000.0;
    assert!((0.93..0.97).contains(&rate), "coverage {rate}");
}

#[test]
fn negative_edge_in_the_second_band_is_invisible_to_the_first() {
    let ext = [15, 15];
    let at = |x: usize, y: usize| v(lattice_index(&[x, y], &ext));
    let g = build_lattice_window(2, &ext, Boundary::Open, &SignRule::AllPositive)
        .unwrap()
        .with_negative_edges(&[(at(10, 8), at(10, 9))])
        .unwrap();
    let shells = ShellSystem::geometric(&g, at(7, 7), &[1.0, 2.0, 4.0, 6.0]).unwrap();
    // both endpoints lie outside the radius-2 ball and off its boundary shell
    for end in [at(10, 8), at(10, 9)] {
        assert!(!shells.contains(2, end) && !shells.contains(3, end));
    }
    let stats = estimate_shell_statistics(&g, &shells, 3, &ParityOptions::new(4000, 1)).unwrap();
    let by_shell = stats.i_by_shell();
    assert!(stats.terms.iter().filter(|t| t.n == 1).all(|t| t.estimate.p_odd == 0.0));
    assert_eq!(by_shell[0], 0.0);
    assert!(by_shell[1] > 0.0);
}
