//! Experiment orchestration around `rima-core`: config files, parallel
//! sweeps, and plot-ready CSV emission.

pub mod commands;
pub mod config;
pub mod emit;
pub mod error;
pub mod parallel;

pub use config::{parse_config, parse_config_str, ResolvedConfig};
pub use emit::{build_manifest, emit_results, RunManifest};
pub use error::CliError;
pub use parallel::run_sweep_parallel;
