//! Configuration, ingestion, pipelines and report emission for the
//! `corrspec` command-line tool.

pub mod config;
pub mod error;
pub mod ingest;
pub mod pipeline;
pub mod report;

pub use config::RunConfig;
pub use error::{CliError, CliResult};
pub use pipeline::{run_pipeline, Command};
pub use report::AnalysisReport;
