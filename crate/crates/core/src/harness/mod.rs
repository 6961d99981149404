//! Config-driven experiments with reproducible file outputs.
//!
//! Seeds: the Haar phase of sample `i` is drawn from `ChaCha8Rng` seeded with
//! the run seed and switched to stream `i`, so results never depend on how
//! samples are scheduled across threads.

pub mod config;
pub mod expr;
pub mod run;

pub use config::{parse_config, Experiment, ExperimentConfig};
pub use run::{run, RunOutcome, EXIT_ERROR, EXIT_OK, EXIT_VIOLATED};
