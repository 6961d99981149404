use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use principal_spectrum::harness::{parse_config, run, Experiment, EXIT_ERROR};
use principal_spectrum::Error;

#[derive(Clone, Copy, ValueEnum)]
enum Command {
    Eigen,
    Lyapunov,
    Spectrum,
    Compare,
    Sweep,
}

/// Principal spectrum experiments for 1D parabolic equations.
#[derive(Parser)]
#[command(name = "pspec", version)]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    /// TOML experiment config
    #[arg(long)]
    config: PathBuf,
    /// Overrides the config seed
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory (default: config [output] dir, else ./out)
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    quiet: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let experiment = match cli.command {
        Command::Eigen => Experiment::Eigen,
        Command::Lyapunov => Experiment::Lyapunov,
        Command::Spectrum => Experiment::Spectrum,
        Command::Compare => Experiment::Compare,
        Command::Sweep => Experiment::Sweep,
    };
    let result = std::fs::read_to_string(&cli.config)
        .map_err(Error::from)
        .and_then(|text| parse_config(&text))
        .and_then(|mut cfg| {
            if let Some(s) = cli.seed {
                cfg.seed = s;
            }
            let out = cli
                .out
                .clone()
                .or_else(|| cfg.output_dir.clone())
                .unwrap_or_else(|| PathBuf::from("out"));
            run(&cfg, experiment, &out)
        });
    match result {
        Ok(outcome) => {
            if !cli.quiet {
                println!("{}", outcome.summary);
                for f in &outcome.files {
                    println!("  wrote {}", f.display());
                }
            }
            ExitCode::from(outcome.exit_code as u8)
        }
        Err(Error::Config(list)) => {
            eprintln!("config errors:");
            for e in list {
                eprintln!("  - {e}");
            }
            ExitCode::from(EXIT_ERROR as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_ERROR as u8)
        }
    }
}
