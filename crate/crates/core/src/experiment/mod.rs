//! Config-driven experiment runners and their tabular reports.

mod config;
mod report;
mod runners;

pub use config::{ExperimentConfig, ExperimentKind, OutputFormat};
pub use report::{emit, read_csv, read_json, write_report, ExperimentReport, ReportRow, Value};
pub use runners::{
    run, run_bound_profile, run_depth_sweep, run_genbound, run_sdpi_table, run_table1, sweep_bound,
};
