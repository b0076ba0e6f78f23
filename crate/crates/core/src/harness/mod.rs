//! Experiment configuration, presets, the trial runner and CSV I/O.

mod config;
mod csv_io;
mod preset;
mod runner;
mod summary;

pub use config::{ConfigFile, ExperimentConfig, GraphFamily, PresetRef};
pub use csv_io::{read_rows, write_rows, ResultRow, Status, CSV_HEADER};
pub use preset::{potentially_infeasible, preset, PresetName, TABLE1_ROWS, TABLE2_KS, TABLE2_NOISE};
pub use runner::{build_fixed_graph, run_configs, run_trial, trial_seed};
pub use summary::{render, summarize, CellKey, CellSummary};
