//! Drive the config-based runner from code: parse a TOML config, run it and
//! list the artifacts recorded in the manifest.
//!
//! ```text
//! cargo run --example run_experiment
//! ```
//!
//! The `svm` binary does the same from the command line:
//! `svm run configs/mu_gap_triangle.toml`.

use signed_voter::experiment::{run, validate, ExperimentConfig};

const CONFIG: &str = r#"
seed = 7
samples = 20000
workers = 2

[graph]
builder = "frustrated-cycle"
n = 3
negative = 1

[experiment]
kind = "mu-gap"
start = 0
t_grid = [1.0, 5.0, 20.0]
"#;

fn main() {
    let mut config = ExperimentConfig::from_toml(CONFIG).unwrap();
    config.output_dir = Some(std::env::temp_dir().join("svm-example-mu-gap"));
    let issues = validate(&config, None);
    assert!(issues.is_empty(), "{issues:?}");
    let outcome = run(&config, None).unwrap();
    println!("wrote {}", outcome.output_dir.display());
    for (file, digest) in &outcome.manifest.outputs {
        println!("  {file:<18} sha256 {}", &digest[..16]);
    }
    print!("\n{}", std::fs::read_to_string(outcome.output_dir.join("gap.csv")).unwrap());
}
