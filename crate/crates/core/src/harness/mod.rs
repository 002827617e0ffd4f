//! Configuration, the simulation loop, persistence, evaluation and sweeps.

mod config;
mod log;
mod run;
mod sweep;

pub use config::{Method, SimConfig};
pub use log::{read_metrics_csv, write_metrics_csv, LogRow, PeriodMetric, TrajectoryLog, VERSION};
pub use run::{evaluate_periods, evaluate_run, ga_seed, run_simulation, run_simulation_with, sim_seed};
pub use sweep::{run_cell, sweep, SweepAxis, SweepCell, SweepMean, SweepSummary};
