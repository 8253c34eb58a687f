//! Experiment configuration, shipped presets, the replication runner and
//! output files.

mod config;
mod emit;
pub mod presets;
mod run;

pub use config::{
    parse_config, validate_config, Diagnostic, DistanceConvention, ExperimentConfig,
    DEFAULT_REPLICATIONS,
};
pub use emit::{
    emit_plot_data, format_diagnostics, write_outputs, write_points_csv, write_results_csv,
    ESTIMATED_BOUNDARY_CSV, HULL_CSV, RESULTS_CSV, SAMPLES_CSV, SUMMARY_JSON, TRUE_BOUNDARY_CSV,
};
pub use presets::{list_presets, preset, PRESET_NAMES};
pub use run::{run_experiment, run_with, Artifacts, ExperimentResult, ReplicationRow, Setting, Summary};
