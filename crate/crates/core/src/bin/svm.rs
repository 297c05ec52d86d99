//! Command-line front end: `svm run`, `svm validate`, `svm graph`.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use signed_voter::experiment::{self, load_config, validate, ExperimentConfig, RunError};
use signed_voter::signed_graph::{
    build_frustrated_cycle, build_lattice_window, build_paired_tree, build_z4_staircase, staircase_scales,
    Boundary, SignRule,
};

#[derive(Parser)]
#[command(name = "svm", version, about = "Signed voter model experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Overrides {
    /// Replaces the config seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Replaces the config sample count.
    #[arg(long)]
    samples: Option<u64>,
    /// Replaces the config worker count.
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a TOML config.
    Run {
        config: PathBuf,
        #[command(flatten)]
        overrides: Overrides,
        /// Write artifacts here instead of the config's output_dir.
        #[arg(long)]
        output_dir: Option<PathBuf>,
    },
    /// Check a config without running it.
    Validate {
        config: PathBuf,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Build a graph and write it in the svmgraph text format.
    Graph {
        #[command(subcommand)]
        builder: GraphBuilder,
        #[arg(long, global = true)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum GraphBuilder {
    /// Box of Z^dim with `--extent` points per axis.
    Lattice {
        #[arg(long)]
        dim: usize,
        #[arg(long, value_delimiter = ',')]
        extent: Vec<usize>,
        #[arg(long, default_value = "open")]
        boundary: String,
        /// Each edge negative with this probability.
        #[arg(long, default_value_t = 0.0)]
        negative_prob: f64,
        /// Seed for the sign draws.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Cycle of length n whose first `negative` edges are negative.
    FrustratedCycle {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        negative: usize,
    },
    /// Tree with negative sibling pairings at chosen generations.
    PairedTree {
        #[arg(long, value_delimiter = ',')]
        children: Vec<usize>,
        #[arg(long, value_delimiter = ',')]
        pairing_generations: Vec<usize>,
        #[arg(long)]
        depth: usize,
    },
    /// Window of Z^4 with negative slabs at the staircase scales.
    Z4Staircase {
        #[arg(long, value_delimiter = ',')]
        scales: Option<Vec<usize>>,
        #[arg(long, default_value_t = 1)]
        first: usize,
        #[arg(long, default_value_t = 2)]
        count: usize,
        #[arg(long, default_value_t = 2.0)]
        kappa: f64,
        #[arg(long)]
        extent: usize,
    },
}

fn apply(mut config: ExperimentConfig, o: &Overrides) -> ExperimentConfig {
    config.seed = o.seed.or(config.seed);
    config.samples = o.samples.or(config.samples);
    config.workers = o.workers.unwrap_or(config.workers);
    config
}

fn base_dir(path: &Path) -> Option<&Path> {
    path.parent()
}

fn fail(e: &RunError) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(e.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run { config, overrides, output_dir } => {
            let parsed = match load_config(&config) {
                Ok(c) => c,
                Err(e) => return fail(&e),
            };
            let mut parsed = apply(parsed, &overrides);
            if output_dir.is_some() {
                parsed.output_dir = output_dir;
            }
            match experiment::run(&parsed, base_dir(&config)) {
                Ok(outcome) => {
                    for (file, digest) in &outcome.manifest.outputs {
                        println!("{digest}  {}", outcome.output_dir.join(file).display());
                    }
                    match &outcome.status {
                        Some(e) => fail(e),
                        None => ExitCode::SUCCESS,
                    }
                }
                Err(e) => fail(&e),
            }
        }
        Command::Validate { config, overrides } => {
            let parsed = match load_config(&config) {
                Ok(c) => apply(c, &overrides),
                Err(e) => return fail(&e),
            };
            let issues = validate(&parsed, base_dir(&config));
            if issues.is_empty() {
                println!("ok");
                ExitCode::SUCCESS
            } else {
                fail(&RunError::Config(issues))
            }
        }
        Command::Graph { builder, out } => {
            let graph = match builder {
                GraphBuilder::Lattice { dim, extent, boundary, negative_prob, seed } => {
                    let boundary = match boundary.as_str() {
                        "open" => Boundary::Open,
                        "periodic" => Boundary::Periodic,
                        other => return fail(&RunError::Config(vec![format!("unknown boundary `{other}`")])),
                    };
                    let rule = if negative_prob > 0.0 {
                        SignRule::IidNegative { p: negative_prob, seed }
                    } else {
                        SignRule::AllPositive
                    };
                    build_lattice_window(dim, &extent, boundary, &rule)
                }
                GraphBuilder::FrustratedCycle { n, negative } => build_frustrated_cycle(n, negative),
                GraphBuilder::PairedTree { children, pairing_generations, depth } => {
                    build_paired_tree(&children, &pairing_generations, depth)
                }
                GraphBuilder::Z4Staircase { scales, first, count, kappa, extent } => {
                    let scales = scales.unwrap_or_else(|| staircase_scales(first, count, kappa));
                    build_z4_staircase(&scales, extent)
                }
            };
            let text = match graph {
                Ok(g) => g.to_text(),
                Err(e) => return fail(&RunError::Config(vec![e.to_string()])),
            };
            match out {
                Some(path) => match std::fs::write(&path, text) {
                    Ok(()) => ExitCode::SUCCESS,
                    Err(e) => fail(&RunError::Io(format!("{}: {e}", path.display()))),
                },
                None => {
                    print!("{text}");
                    ExitCode::SUCCESS
                }
            }
        }
    }
}
