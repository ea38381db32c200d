use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::CampaignError;
use crate::bounds;
use crate::phi::{MaMindaFunction, PhiKind};
use crate::subord::GridConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    Fs,
    InverseFs,
    A2a3,
    Distortion,
    Growth,
    Membership,
    Stankiewicz,
}

impl CheckKind {
    pub const ALL: [CheckKind; 7] = [
        CheckKind::Fs,
        CheckKind::InverseFs,
        CheckKind::A2a3,
        CheckKind::Distortion,
        CheckKind::Growth,
        CheckKind::Membership,
        CheckKind::Stankiewicz,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CheckKind::Fs => "fs",
            CheckKind::InverseFs => "inverse_fs",
            CheckKind::A2a3 => "a2a3",
            CheckKind::Distortion => "distortion",
            CheckKind::Growth => "growth",
            CheckKind::Membership => "membership",
            CheckKind::Stankiewicz => "stankiewicz",
        }
    }

    /// Checks that evaluate members inside the disk rather than reading
    /// low-order coefficients.
    pub fn needs_check_order(self) -> bool {
        matches!(
            self,
            CheckKind::Distortion | CheckKind::Growth | CheckKind::Membership | CheckKind::Stankiewicz
        )
    }
}

impl fmt::Display for CheckKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CheckKind {
    type Err = CampaignError;

    fn from_str(s: &str) -> Result<Self, CampaignError> {
        CheckKind::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| CampaignError::Invalid(format!("unknown check {s:?}")))
    }
}

fn default_seed() -> u64 {
    42
}
fn default_trials() -> usize {
    1000
}
fn default_phi_specs() -> Vec<String> {
    ["halfplane", "gamma:0.25", "gamma:0.5", "gamma:0.75"]
        .into_iter()
        .map(String::from)
        .collect()
}
fn default_mu_grid() -> Vec<Complex64> {
    bounds::mu_grid_disk()
}
fn default_radii() -> Vec<f64> {
    vec![0.3, 0.6, 0.9]
}
fn default_order() -> usize {
    24
}
fn default_checks() -> Vec<CheckKind> {
    CheckKind::ALL.to_vec()
}
fn default_check_order() -> usize {
    160
}
fn default_angles() -> usize {
    72
}
fn default_delta() -> f64 {
    0.05
}
fn default_samples() -> usize {
    3
}

/// Campaign parameters. Every field has a default, so `{}` is a valid
/// config file and describes the default campaign.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CampaignConfig {
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default = "default_phi_specs")]
    pub phi_specs: Vec<String>,
    /// `[re, im]` pairs; the structural points of each φ are always added.
    #[serde(default = "default_mu_grid")]
    pub mu_grid: Vec<Complex64>,
    #[serde(default = "default_radii")]
    pub radii: Vec<f64>,
    /// Truncation order for coefficient checks.
    #[serde(default = "default_order")]
    pub order: usize,
    #[serde(default = "default_checks")]
    pub checks: Vec<CheckKind>,
    /// Truncation order for checks that evaluate inside the disk.
    #[serde(default = "default_check_order")]
    pub check_order: usize,
    /// Angles per radius for distortion and growth sampling.
    #[serde(default = "default_angles")]
    pub angles: usize,
    #[serde(default)]
    pub subordination: GridConfig,
    #[serde(default = "default_delta")]
    pub stankiewicz_delta: f64,
    #[serde(default = "default_samples")]
    pub stankiewicz_samples: usize,
}

impl Default for CampaignConfig {
    fn default() -> Self {
        serde_json::from_str("{}").expect("all fields have defaults")
    }
}

impl CampaignConfig {
    /// Rejects anything that would make a trial fail for reasons other
    /// than the mathematics, and returns the parsed targets.
    pub fn validate(&self) -> Result<Vec<PhiKind>, CampaignError> {
        let invalid = |m: String| Err(CampaignError::Invalid(m));
        if self.trials == 0 {
            return invalid("trials must be at least 1".into());
        }
        if self.order < 8 {
            return invalid(format!("order must be at least 8, got {}", self.order));
        }
        if self.checks.is_empty() {
            return invalid("at least one check is required".into());
        }
        if self.phi_specs.is_empty() {
            return invalid("at least one phi spec is required".into());
        }
        if self.radii.is_empty() || self.radii.iter().any(|&r| !(r > 0.0 && r <= 0.9)) {
            return invalid("radii must lie in (0, 0.9]".into());
        }
        if self.mu_grid.iter().any(|m| !(m.re.is_finite() && m.im.is_finite())) {
            return invalid("mu grid has non-finite entries".into());
        }
        if self.check_order < 32 {
            return invalid(format!("check_order must be at least 32, got {}", self.check_order));
        }
        if self.angles == 0 {
            return invalid("angles must be at least 1".into());
        }
        if !(self.stankiewicz_delta > 0.0) || self.stankiewicz_samples == 0 {
            return invalid("stankiewicz delta must be positive with at least one sample".into());
        }
        let grid = &self.subordination;
        if grid.angles == 0 || grid.radii.is_empty() || grid.radii.iter().any(|&r| !(r > 0.0 && r <= 0.9)) {
            return invalid("subordination grid radii must lie in (0, 0.9]".into());
        }
        let needs_minmax = self
            .checks
            .iter()
            .any(|c| matches!(c, CheckKind::Distortion | CheckKind::Growth));
        self.phi_specs
            .iter()
            .map(|spec| {
                let kind: PhiKind = spec.parse()?;
                let phi = MaMindaFunction::new(kind.clone(), self.order)?;
                if needs_minmax && !phi.is_attested() {
                    return Err(CampaignError::Invalid(format!(
                        "phi {spec:?} is not attested; distortion and growth checks need mpoly:"
                    )));
                }
                Ok(kind)
            })
            .collect()
    }
}
