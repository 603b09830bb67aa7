//! Benchmark harness: experiment configs, trial grids, convergence CSVs,
//! quartile aggregation, SVG plots, and improvement-probability maps.

mod config;
mod plot;
mod poi_map;
mod quartiles;
mod records;
mod runner;

pub use config::{load_config, parse_config, AlgorithmId, ExperimentConfig};
pub use plot::emit_plot;
pub use poi_map::{compute_poi_map, emit_poi_map, PoiMap, PoiMapArgs};
pub use quartiles::{
    aggregate_quartiles, default_checkpoints, quantile_interpolated, read_quartiles_csv,
    write_quartiles_csv, QuartileRow,
};
pub use records::{
    audit_runs, format_float, read_records_csv, records_to_csv, write_records_csv,
    ConvergenceRecord, RECORDS_CSV_HEADER,
};
pub use runner::{
    instance_ids, run_cell, run_cell_audited, run_experiment, run_experiment_to_csv, trial_seed,
    CellSpec,
};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("config error: {0}")]
    Config(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error at line {line}: {message}")]
    Csv { line: usize, message: String },
    #[error("data integrity violation: {0}")]
    Integrity(String),
    #[error("{0}")]
    Runtime(String),
}

impl HarnessError {
    /// Process exit code: 2 for config/usage problems, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Config(_) => 2,
            _ => 1,
        }
    }
}
