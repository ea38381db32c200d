//! Randomized verification campaigns.
//!
//! A campaign draws `trials` members `(g, w, φ)` and runs the configured
//! checks on each. Trial `i` seeds its own generator from `(seed, i)`, so
//! results do not depend on scheduling and any trial can be replayed alone.

mod campaign;
mod config;
mod report;

use thiserror::Error;

use crate::generators::GeneratorError;
use crate::phi::PhiError;

pub use campaign::{replay_trial, run_campaign, trial_rng, CampaignRun, RNG_ALGORITHM};
pub use config::{CampaignConfig, CheckKind};
pub use report::{
    CampaignReport, CheckRecord, CheckSummary, Finding, Location, Outcome, TrialRecord, WorstCase,
    SCHEMA_VERSION,
};

/// Tolerances applied by campaign checks.
pub mod tol {
    /// Slack allowed on coefficient-functional bounds.
    pub const BOUND: f64 = 1e-8;
    /// Required accuracy of witness attainment.
    pub const WITNESS: f64 = 1e-9;
    /// Coefficient identities and the inverse-function identity.
    pub const IDENTITY: f64 = 1e-12;
    /// Keogh–Merkes slack.
    pub const SCHWARZ: f64 = 1e-12;
    /// Slack on distortion/growth samples, on top of the truncation tail.
    pub const SAMPLE: f64 = 1e-9;
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CampaignError {
    #[error("invalid campaign config: {0}")]
    Invalid(String),
    #[error("trial {trial} is outside the campaign (trials = {trials})")]
    TrialOutOfRange { trial: usize, trials: usize },
    #[error(transparent)]
    Phi(#[from] PhiError),
    #[error(transparent)]
    Generator(#[from] GeneratorError),
}
