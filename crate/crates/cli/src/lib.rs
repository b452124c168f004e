//! Experiment runner for the `qdf` command-line tool: JSON run
//! configurations, single trajectories, figure sweeps, the collective
//! dephasing baseline and the self-check suite.

pub mod config;
pub mod csv;
mod error;
pub mod runner;
pub mod verify;

pub use config::RunConfig;
pub use csv::Table;
pub use error::CliError;
pub use runner::{run_baseline, run_figure, run_single, FigureKind, RunReport};
pub use verify::{run_verify, Check};
