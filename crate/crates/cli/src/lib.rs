//! Command-line driver for the chronon checks and experiments.
//!
//! Each run produces a [`Report`] plus named artifacts (CSV tables, SVG
//! plots); [`write_outputs`] puts them on disk next to `report.txt` and a
//! reproducible `manifest.txt`.

pub mod config;
pub mod plot;
pub mod report;
pub mod runs;
pub mod table;

use std::path::PathBuf;

pub use config::{parse_config, Command, RunConfig};
pub use report::{Report, ReportLine, Status};
pub use runs::{
    execute, run_averaging, run_snyder, run_verify_algebra, run_zitterbewegung, write_outputs, Artifact,
    RunOutput,
};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("{0}")]
    Usage(clap::Error),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Usage(e) if !e.use_stderr() => EXIT_PASS,
            RunError::Usage(_) | RunError::Config(_) => EXIT_USAGE,
            RunError::Io { .. } => EXIT_IO,
        }
    }
}

impl From<chronon_core::Error> for RunError {
    fn from(e: chronon_core::Error) -> Self {
        RunError::Config(e.to_string())
    }
}
