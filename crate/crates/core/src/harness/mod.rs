//! Multi-snapshot experiment driver: configuration, solver chains over a
//! scenario's snapshots, CSV reporting and the command line front end.

pub mod cli;
mod config;
mod report;
mod run;

use std::path::PathBuf;

use thiserror::Error;

use crate::netgraph::GraphError;
use crate::radio::RadioError;
use crate::scenario::ScenarioError;
use crate::solvers::SolveError;
use crate::uprmodel::ModelError;

pub use config::{
    ClusterSection, ExperimentConfig, MobilitySection, OutputSection, PropagationSection, RegionSection, SolveSection,
    SolverMode, TrafficSection,
};
pub use report::{
    read_results_csv, report, summarize, write_results_csv, write_summary_csv, SummaryRow, RESULTS_FILE, SUMMARY_FILE,
};
pub use run::{
    run_experiment, run_on_scenario, run_snapshot_sequence, scenario_for_run, snapshot_graphs, RunTrace,
    SnapshotMetrics, SnapshotStatus, StepRecord,
};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("configuration: {0}")]
    Config(String),
    #[error("{path}: {source}", path = .0.display(), source = .1)]
    Io(PathBuf, #[source] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Radio(#[from] RadioError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Solve(#[from] SolveError),
}
