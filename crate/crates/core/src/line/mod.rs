//! Red/blue Poisson points on a line: blues (passengers, rate `lambda`) are
//! matched to reds (cabs, rate `mu`), and the matching distance of a blue
//! is the distance to its partner.

mod busy;
mod config;
mod experiment;
mod matching;
mod waves;

pub use busy::{busy_cycle_cdf_sorted, busy_cycle_pdf, BusyCycleParams};
pub use config::{sample_configuration, Color, LineConfiguration, Point};
pub use experiment::{
    boundary_margin, corollary_bound, line_experiment, line_experiment_with_references,
    reference_samples, run_trial, mean_distance_bound,
    BlueRecord, LineExperimentConfig, LineStats, LineTrial, Matcher, ReferenceSamples,
};
pub use matching::{
    is_nested, line_blocking_pairs, queue_match, stable_match_line, Direction, LineMatching,
};
pub use waves::{discrepancy, potential_waves, PotentialWave, WaveDecomposition};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LineError {
    #[error("rates must satisfy lambda >= 0 and mu > 0, got lambda = {lambda}, mu = {mu}")]
    BadRates { lambda: f64, mu: f64 },
    #[error("lambda < mu is required (got lambda = {lambda}, mu = {mu}); the balanced and overloaded regimes are heavy tailed")]
    NotSubcritical { lambda: f64, mu: f64 },
    #[error("window length must be positive, got {0}")]
    BadWindow(f64),
    #[error("{color:?} coordinates must be strictly increasing and inside [0, {window}]")]
    BadCoordinates { color: Color, window: f64 },
    #[error("density is defined for t > 0, got {0}")]
    Domain(f64),
    #[error("window {window} leaves no interior after the boundary margin {margin}")]
    NoInterior { window: f64, margin: f64 },
}
