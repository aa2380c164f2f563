use std::path::{Path, PathBuf};
use std::time::{Duration, SystemTime, UNIX_EPOCH};

use serde::Serialize;

use super::config::ExperimentConfig;
use crate::rng::RNG_ALGORITHM;

pub const ARTIFACT: &str = "proxmatch";

/// Written next to each result file.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RunManifest {
    pub artifact: &'static str,
    pub version: &'static str,
    pub suite: String,
    /// The resolved configuration as flat TOML; feeding it back through
    /// `--config` repeats the run.
    pub config: String,
    pub seed: Option<u64>,
    pub rng_algorithm: &'static str,
    pub started_unix_seconds: f64,
    pub wall_clock_seconds: f64,
    pub result_file: Option<String>,
    pub summary: serde_json::Value,
}

impl RunManifest {
    pub fn new(cfg: &ExperimentConfig, summary: serde_json::Value, started: SystemTime, elapsed: Duration) -> Self {
        RunManifest {
            artifact: ARTIFACT,
            version: env!("CARGO_PKG_VERSION"),
            suite: cfg.suite_kind().to_string(),
            config: cfg.to_toml(),
            seed: cfg.seed,
            rng_algorithm: RNG_ALGORITHM,
            started_unix_seconds: started.duration_since(UNIX_EPOCH).unwrap_or_default().as_secs_f64(),
            wall_clock_seconds: elapsed.as_secs_f64(),
            result_file: cfg.out.as_ref().map(|p| p.display().to_string()),
            summary,
        }
    }
}

/// `results/run.csv` gets `results/run.manifest.json`.
pub fn manifest_path(out: &Path) -> PathBuf {
    out.with_extension("manifest.json")
}
