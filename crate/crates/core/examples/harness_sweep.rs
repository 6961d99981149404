//! Runs a config-driven amplitude sweep through the same entry point as the
//! `pspec` binary and prints the resulting table.
//!
//! cargo run --release --example harness_sweep -- [OUT_DIR]

use std::path::PathBuf;

use principal_spectrum::harness::{parse_config, run, Experiment};

fn main() -> principal_spectrum::Result<()> {
    let text = include_str!("configs/sweep.toml");
    let cfg = parse_config(text)?;
    let out = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("pspec-sweep"));
    let outcome = run(&cfg, Experiment::Sweep, &out)?;
    println!("{}", outcome.summary);
    print!("{}", std::fs::read_to_string(out.join("sweep.csv"))?);
    std::process::exit(outcome.exit_code)
}
