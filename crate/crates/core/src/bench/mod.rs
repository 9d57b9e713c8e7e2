//! Problem files, the mass-spring benchmark and plot output used by the
//! `mpiset` binary.

pub mod cse;
pub mod plot;
pub mod problem;

pub use cse::{cse_generate, run_cse_sweep, write_sweep_csv, CseParams, GainMode, KcVariant, LtiSystem, SweepRow};
pub use plot::{emit_plot_data, write_plot_data};
pub use problem::{run_problem, ProblemFile, ResultReport};
