//! Random profile matching on the hypercube `{0,1}^k`: every agent answers
//! `k` yes/no questions and ranks the other side by profile distance, with
//! a private random list breaking ties.

mod experiment;
mod metric;
mod population;
mod profile;

pub use experiment::{
    rpmp_experiment, rpmp_trial, PartnerCounting, RpmpConfig, RpmpStats, RpmpTrial,
};
pub use metric::{
    hamming_distance, weighted_hamming_distance, Distance, DyadicDistance, MetricKind,
};
pub use population::{
    build_instance, matching_distance, profile_groups, sample_population, uniqueness_certificate,
    Population, ProfileGroup,
};
pub use profile::Profile;

use thiserror::Error;

use crate::matching::AgentId;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HypercubeError {
    #[error("profiles have lengths {0} and {1}")]
    LengthMismatch(usize, usize),
    #[error("{0} is unmatched, so its matching distance is undefined")]
    Unmatched(AgentId),
    #[error("invalid weights: {0}")]
    BadWeights(String),
    #[error("metric weights cover {weights} questions, profiles have {k}")]
    WeightLength { weights: usize, k: usize },
    #[error("invalid profile string {0:?}")]
    BadProfile(String),
    #[error("invalid rpmp configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Enumeration(#[from] crate::matching::EnumerationError),
}
