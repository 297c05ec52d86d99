use std::fmt::Write;

use rayon::prelude::*;
use serde::Serialize;

use super::{Artifacts, ExperimentConfig, ExperimentSpec, RunError};
use crate::diagnostics::{
    estimate_mu_pm, estimate_parity, estimate_shell_statistics, signed_harmonic_residual, tv_gap, DiagnosticsError,
    ParityOptions, ShellSystem,
};
use crate::exact::{build_generator_with_cap, one_point_function, stationary_analysis};
use crate::harris::{
    dual_ensemble, evolve, reconstruct_spins, sample_canonical_equilibrium, sample_events, HarrisError, SpinConfig,
};
use crate::rng::{mix_seed, stream_rng, Domain};
use crate::signed_graph::{find_unsatisfied_cycle, gauge_partition, SignedGraph, VertexId};
use crate::walkers::{count_unsatisfied_loops, simulate_walk, timeshift_couple, vertex_mask};

fn numerical<E: std::fmt::Display>(e: E) -> RunError {
    RunError::Numerical(e.to_string())
}

fn harris_error(e: HarrisError) -> RunError {
    match e {
        HarrisError::EventTie(_) => RunError::Numerical(e.to_string()),
        other => RunError::Config(vec![other.to_string()]),
    }
}

fn diagnostics_error(e: DiagnosticsError) -> RunError {
    match e {
        DiagnosticsError::StepCapExceeded(..) => RunError::Numerical(e.to_string()),
        other => RunError::Config(vec![other.to_string()]),
    }
}

fn replica_seeds(seed: u64, count: u64) -> Vec<u64> {
    (0..count).map(|k| mix_seed(seed, k)).collect()
}

pub(crate) fn dispatch(config: &ExperimentConfig, graph: &SignedGraph) -> Result<Artifacts, RunError> {
    let seed = config.seed();
    let samples = config.samples();
    match &config.experiment {
        ExperimentSpec::DualityCheck { t_grid } => duality_check(graph, t_grid, seed, samples),
        ExperimentSpec::Balance => Ok(balance(graph)),
        ExperimentSpec::Exact { cap } => exact(graph, *cap),
        ExperimentSpec::Parity { start, stop, min_hits, allow_starved } => {
            let opts = ParityOptions { min_hits: *min_hits, ..ParityOptions::new(samples, seed) };
            let stop: Vec<VertexId> = stop.iter().map(|&v| VertexId::from(v)).collect();
            parity(graph, VertexId::from(*start), &stop, &opts, *allow_starved)
        }
        ExperimentSpec::Shells { shells, n_max, min_hits, allow_starved } => {
            let center = VertexId::from(shells.center);
            let system = match (&shells.radii, shells.count) {
                (Some(radii), _) => ShellSystem::geometric(graph, center, radii),
                (None, Some(count)) => ShellSystem::powers_of_two(graph, center, count),
                (None, None) => unreachable!("validated"),
            }
            .map_err(diagnostics_error)?;
            let opts = ParityOptions { min_hits: *min_hits, ..ParityOptions::new(samples, seed) };
            shell_statistics(graph, &system, *n_max, &opts, *allow_starved)
        }
        ExperimentSpec::MuGap { start, t_grid } => mu_gap(graph, VertexId::from(*start), t_grid, samples, seed),
        ExperimentSpec::Loops { start, horizon } => loops(graph, VertexId::from(*start), *horizon, samples, seed),
        ExperimentSpec::Couple { start, shifts, horizon, deadline } => {
            couple(graph, VertexId::from(*start), shifts, *horizon, *deadline, samples, seed)
        }
        ExperimentSpec::CanonicalEq { sites, horizon } => {
            let sites: Vec<VertexId> = match sites {
                Some(s) => s.iter().map(|&v| VertexId::from(v)).collect(),
                None => graph.vertices().collect(),
            };
            canonical(graph, &sites, *horizon, samples, seed)
        }
    }
}

#[derive(Serialize)]
struct DualitySummary {
    mismatches: u64,
    checks: u64,
    replicas: u64,
}

fn duality_check(graph: &SignedGraph, t_grid: &[f64], seed: u64, samples: u64) -> Result<Artifacts, RunError> {
    let seeds = replica_seeds(seed, samples);
    let horizon = t_grid.iter().copied().fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let all: Vec<VertexId> = graph.vertices().collect();
    let per_replica: Vec<Vec<u64>> = seeds
        .par_iter()
        .map(|&s| {
            let events = sample_events(graph, horizon, s).map_err(harris_error)?;
            let eta0 = SpinConfig::random(graph.vertex_count(), &mut stream_rng(s, Domain::InitialSpins, 0));
            t_grid
                .iter()
                .map(|&t| {
                    let forward = evolve(graph, &eta0, &events, t).map_err(harris_error)?;
                    let ensemble = dual_ensemble(graph, &events, &all, t).map_err(harris_error)?;
                    let dual = reconstruct_spins(&eta0, &ensemble);
                    Ok(forward.spins.iter().zip(&dual).filter(|(a, b)| a != b).count() as u64)
                })
                .collect::<Result<Vec<u64>, RunError>>()
        })
        .collect::<Result<_, _>>()?;
    let mut csv = String::from("replica,t,mismatches\n");
    let mut mismatches = 0;
    for (k, row) in per_replica.iter().enumerate() {
        for (t, m) in t_grid.iter().zip(row) {
            let _ = writeln!(csv, "{k},{t},{m}");
            mismatches += m;
        }
    }
    let mut a = Artifacts { replica_seeds: seeds, ..Default::default() };
    a.add("duality.csv", csv);
    a.add_json(
        "duality.json",
        &DualitySummary { mismatches, checks: samples * t_grid.len() as u64 * all.len() as u64, replicas: samples },
    );
    if mismatches > 0 {
        a.status = Some(RunError::Numerical(format!("{mismatches} duality mismatches")));
    }
    Ok(a)
}

#[derive(Serialize)]
struct BalanceReport {
    balanced: bool,
    certificate: Option<Vec<u32>>,
    partition: Option<Vec<i8>>,
}

fn balance(graph: &SignedGraph) -> Artifacts {
    let cycle = find_unsatisfied_cycle(graph);
    let partition = gauge_partition(graph);
    let mut a = Artifacts::default();
    a.add_json(
        "balance.json",
        &BalanceReport {
            balanced: cycle.is_none(),
            certificate: cycle.map(|c| c.vertices.iter().map(|v| v.0).collect()),
            partition: partition.map(|p| graph.vertices().map(|v| p.side(v).to_i8()).collect()),
        },
    );
    a
}

#[derive(Serialize)]
struct ExactSummary {
    vertices: usize,
    states: usize,
    closed_class_sizes: Vec<usize>,
    max_harmonic_residual: f64,
}

fn exact(graph: &SignedGraph, cap: usize) -> Result<Artifacts, RunError> {
    let q = build_generator_with_cap(graph, cap).map_err(|e| RunError::Config(vec![e.to_string()]))?;
    let result = stationary_analysis(&q).map_err(numerical)?;
    let h = one_point_function(&result);
    let mut a = Artifacts::default();
    a.add_json("verdict.json", &result.verdict());
    for k in 0..result.closed_classes.len() {
        a.add(&format!("stationary_{k}.csv"), result.distribution_csv(k));
    }
    let mut csv = String::from("class,vertex,h\n");
    let mut worst = 0.0f64;
    for (k, hk) in h.iter().enumerate() {
        for (x, v) in hk.iter().enumerate() {
            let _ = writeln!(csv, "{k},{x},{v}");
        }
        worst = worst.max(signed_harmonic_residual(graph, hk));
    }
    a.add("one_point.csv", csv);
    a.add_json(
        "exact_summary.json",
        &ExactSummary {
            vertices: graph.vertex_count(),
            states: q.dimension(),
            closed_class_sizes: result.closed_classes.iter().map(Vec::len).collect(),
            max_harmonic_residual: worst,
        },
    );
    if worst > 1e-8 {
        a.status = Some(RunError::Numerical(format!("signed-harmonic residual {worst:e} above 1e-8")));
    }
    Ok(a)
}

fn starved_status(count: usize, allow: bool, what: &str) -> Option<RunError> {
    (count > 0 && !allow).then(|| RunError::Starved(format!("{count} {what} had too few conditioned hits")))
}

fn parity(
    graph: &SignedGraph,
    start: VertexId,
    stop: &[VertexId],
    opts: &ParityOptions,
    allow_starved: bool,
) -> Result<Artifacts, RunError> {
    let table = estimate_parity(graph, start, &vertex_mask(graph, stop), opts).map_err(diagnostics_error)?;
    let mut csv = String::from("n,x,y,p_even,p_odd,N,ci,samples\n");
    table.write_csv_rows(0, &mut csv);
    let starved = table.endpoints.values().filter(|e| e.starved).count();
    let mut a = Artifacts::default();
    a.add("parity.csv", csv);
    a.status = starved_status(starved, allow_starved, "endpoints");
    Ok(a)
}

#[derive(Serialize)]
struct ShellSummary {
    i_trunc: f64,
    h_trunc: f64,
    i_by_shell: Vec<f64>,
    starved_pairs: Vec<(usize, u32, u32)>,
}

fn shell_statistics(
    graph: &SignedGraph,
    shells: &ShellSystem,
    n_max: usize,
    opts: &ParityOptions,
    allow_starved: bool,
) -> Result<Artifacts, RunError> {
    let stats = estimate_shell_statistics(graph, shells, n_max, opts).map_err(diagnostics_error)?;
    let mut a = Artifacts::default();
    a.add("shells.csv", stats.to_csv());
    a.add("parity.csv", stats.parity_csv());
    a.add_json(
        "shells.json",
        &ShellSummary {
            i_trunc: stats.i_trunc,
            h_trunc: stats.h_trunc,
            i_by_shell: stats.i_by_shell(),
            starved_pairs: stats.starved.iter().map(|&(n, x, y)| (n, x.0, y.0)).collect(),
        },
    );
    a.status = starved_status(stats.starved.len(), allow_starved, "shell pairs");
    Ok(a)
}

fn mu_gap(graph: &SignedGraph, start: VertexId, t_grid: &[f64], samples: u64, seed: u64) -> Result<Artifacts, RunError> {
    let mut a = Artifacts::default();
    let mut gaps = String::from("t,tv_gap\n");
    for (i, &t) in t_grid.iter().enumerate() {
        let pair = estimate_mu_pm(graph, start, t, samples, mix_seed(seed, i as u64)).map_err(diagnostics_error)?;
        let _ = writeln!(gaps, "{t},{}", tv_gap(&pair));
        a.add(&format!("occupation_{i}.csv"), pair.to_csv());
    }
    a.add("gap.csv", gaps);
    Ok(a)
}

fn loops(graph: &SignedGraph, start: VertexId, horizon: f64, samples: u64, seed: u64) -> Result<Artifacts, RunError> {
    let seeds = replica_seeds(seed, samples);
    let counts: Vec<usize> = seeds
        .par_iter()
        .map(|&s| {
            simulate_walk(graph, start, horizon, s)
                .map(|p| count_unsatisfied_loops(&p).len())
                .map_err(|e| RunError::Config(vec![e.to_string()]))
        })
        .collect::<Result<_, _>>()?;
    let first = simulate_walk(graph, start, horizon, seeds[0]).map_err(|e| RunError::Config(vec![e.to_string()]))?;
    let mut csv = String::from("replica,count\n");
    for (k, c) in counts.iter().enumerate() {
        let _ = writeln!(csv, "{k},{c}");
    }
    let mut a = Artifacts { replica_seeds: seeds, ..Default::default() };
    a.add("loops.csv", count_unsatisfied_loops(&first).to_csv());
    a.add("walk.csv", first.to_csv());
    a.add("loop_counts.csv", csv);
    Ok(a)
}

fn couple(
    graph: &SignedGraph,
    start: VertexId,
    shifts: &[f64],
    horizon: f64,
    deadline: f64,
    samples: u64,
    seed: u64,
) -> Result<Artifacts, RunError> {
    let seeds = replica_seeds(seed, samples);
    let mut summary = String::from("s,samples,coupled,fraction\n");
    let mut times = String::from("s,replica,coupling_time\n");
    let mut violations = 0u64;
    for (si, &s) in shifts.iter().enumerate() {
        let runs: Vec<(Option<f64>, bool)> = seeds
            .par_iter()
            .map(|&rs| {
                let r = timeshift_couple(graph, start, s, horizon, mix_seed(rs, si as u64))
                    .map_err(|e| RunError::Config(vec![e.to_string()]))?;
                let ok = r.coupling_time.is_none() || (r.visited_prefix_equal && r.shift_property_holds());
                Ok((r.coupling_time, ok))
            })
            .collect::<Result<_, RunError>>()?;
        let coupled = runs.iter().filter(|(t, _)| t.is_some_and(|t| t <= deadline)).count();
        violations += runs.iter().filter(|(_, ok)| !ok).count() as u64;
        let _ = writeln!(summary, "{s},{samples},{coupled},{}", coupled as f64 / samples as f64);
        for (k, (t, _)) in runs.iter().enumerate() {
            match t {
                Some(t) => writeln!(times, "{s},{k},{t}"),
                None => writeln!(times, "{s},{k},"),
            }
            .expect("string write");
        }
    }
    let mut a = Artifacts { replica_seeds: seeds, ..Default::default() };
    a.add("couple.csv", summary);
    a.add("coupling_times.csv", times);
    if violations > 0 {
        a.status = Some(RunError::Numerical(format!("{violations} coupled runs violate the shift properties")));
    }
    Ok(a)
}

#[derive(Serialize)]
struct CanonicalSummary {
    replicas: u64,
    unconverged: u64,
}

fn canonical(graph: &SignedGraph, sites: &[VertexId], horizon: f64, samples: u64, seed: u64) -> Result<Artifacts, RunError> {
    let seeds = replica_seeds(seed, samples);
    let draws: Vec<_> = seeds
        .par_iter()
        .map(|&s| sample_canonical_equilibrium(graph, sites, horizon, s).map_err(harris_error))
        .collect::<Result<_, _>>()?;
    let mut plus = vec![0u64; sites.len()];
    let mut unconverged = 0;
    let mut configs = String::from("replica,spins\n");
    for (k, d) in draws.iter().enumerate() {
        for (c, s) in plus.iter_mut().zip(&d.spins) {
            *c += s.is_plus() as u64;
        }
        unconverged += !d.converged as u64;
        let bits: String = d.spins.iter().map(|s| if s.is_plus() { '+' } else { '-' }).collect();
        let _ = writeln!(configs, "{k},{bits}");
    }
    let mut marginals = String::from("site,p_plus\n");
    for (x, c) in sites.iter().zip(&plus) {
        let _ = writeln!(marginals, "{},{}", x.0, *c as f64 / samples as f64);
    }
    let events = sample_events(graph, horizon, seeds[0]).map_err(harris_error)?;
    let ensemble = dual_ensemble(graph, &events, sites, horizon).map_err(harris_error)?;
    let mut a = Artifacts { replica_seeds: seeds, ..Default::default() };
    a.add("canonical.csv", marginals);
    a.add("canonical_samples.csv", configs);
    a.add("trajectory.csv", ensemble.to_csv());
    a.add_json("canonical.json", &CanonicalSummary { replicas: samples, unconverged });
    Ok(a)
}
