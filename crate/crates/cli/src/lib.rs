//! Library surface of the `zenosim` binary: configuration resolution, table
//! construction, and experiment execution, split out so integration tests can
//! drive the exact code paths the binary uses.

pub mod config;
pub mod run;
pub mod table;

pub use config::{Cli, CliCommand, CliError, Experiment, ExperimentConfig, DEFAULT_SEED};
pub use run::execute;
pub use table::{Cell, CsvTable};
