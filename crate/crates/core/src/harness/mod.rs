//! Monte Carlo campaigns, reports and the command-line interface.

pub mod cli;
pub mod config;
pub mod experiment;
pub mod report;

pub use config::{ExperimentConfig, ProcedureSpec, CONFIG_KEYS};
pub use experiment::{
    ppv_consistency_check, run_convergence_study, run_experiment, run_pi1_sweep, ExperimentReport,
    PointSummary, PpvCheck, Targets, TauSummary,
};
pub use report::{fmt_f64, write_rates_csv, ReportRow, FRAGMENT_COLUMNS, REPORT_COLUMNS};
