pub mod commands;
pub mod config;

pub use commands::{cmd_counts, cmd_decomp_check, cmd_export_qasm, cmd_run, cmd_sweep};
pub use config::{ExperimentConfig, RawConfig};
