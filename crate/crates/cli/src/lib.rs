//! Experiment driver for the color488 decoders: flag parsing, configuration
//! and the commands behind the `color488` binary.

pub mod commands;
pub mod config;

pub use commands::Report;
pub use config::{ExitKind, ExperimentConfig, VERSION};
