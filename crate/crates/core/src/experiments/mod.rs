//! Configuration, dispatch, result files and the validation suite behind
//! the `proxmatch` command line.

mod config;
mod manifest;
mod runner;
pub mod validate;

pub use config::{
    from_table, parse_config, parse_config_text, CountingArg, EnumerateArgs, EnumerateJob,
    ExactArgs, ExactJob, ExactOp, ExperimentConfig, Format, GlobalArgs, LineArgs, MetricArg,
    RpmpArgs, Suite, SuiteArgs, SuiteConfig, TieArg, ValidateArgs, ValidateJob,
    DEFAULT_VALIDATE_SEED,
};
pub use manifest::{manifest_path, RunManifest, ARTIFACT};
pub use runner::{run, write_outputs, RunOutput, CSV_HEADERS};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConfigError {
    #[error("unknown key `{0}`")]
    UnknownKey(String),
    #[error("missing required key `{0}`")]
    Missing(&'static str),
    #[error("invalid value for `{key}`: {message}")]
    Invalid { key: String, message: String },
    #[error("contradictory settings: {0}")]
    Contradiction(String),
    #[error("config file: {0}")]
    Syntax(String),
}

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("rpmp: {0}")]
    Hypercube(#[from] crate::hypercube::HypercubeError),
    #[error("line: {0}")]
    Line(#[from] crate::line::LineError),
    #[error("exact: {0}")]
    Exact(#[from] crate::exact::ExactError),
    #[error("enumerate: {0}")]
    Instance(#[from] crate::matching::InstanceError),
    #[error("enumerate: {0}")]
    Enumeration(#[from] crate::matching::EnumerationError),
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("output: {0}")]
    Output(String),
}

impl ExperimentError {
    pub(crate) fn io(path: &std::path::Path, e: impl std::fmt::Display) -> Self {
        ExperimentError::Io { path: path.display().to_string(), message: e.to_string() }
    }
}
