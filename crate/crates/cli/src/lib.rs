//! Configuration parsing and experiment execution behind the `configeo`
//! binary.

pub mod config;
pub mod run;

pub use config::{Command, ConfigError, ExperimentConfig, RawConfig};
pub use run::{run, Outcome, RunError, Status};
