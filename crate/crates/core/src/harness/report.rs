use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::config::{CampaignConfig, CheckKind};
use crate::generators::Provenance;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Pass,
    Fail,
    Inconclusive,
}

/// Where in parameter space a margin was observed.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Location {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu: Option<Complex64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub z: Option<Complex64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub check: CheckKind,
    pub outcome: Outcome,
    /// Smallest slack seen; negative beyond tolerance means a violation.
    pub margin: f64,
    pub at: Location,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub provenance: Provenance,
    pub checks: Vec<CheckRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WorstCase {
    pub trial: usize,
    pub margin: f64,
    pub at: Location,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckSummary {
    pub check: CheckKind,
    pub pass: usize,
    pub fail: usize,
    pub inconclusive: usize,
    pub worst: Option<WorstCase>,
}

/// A violated bound or an inconsistent theorem instance. Replayable with
/// the report's config and `trial`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Finding {
    pub trial: usize,
    pub check: CheckKind,
    pub margin: f64,
    pub at: Location,
    pub detail: Option<String>,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignReport {
    pub schema: u32,
    pub rng: String,
    pub config: CampaignConfig,
    pub checks: Vec<CheckSummary>,
    pub findings: Vec<Finding>,
    pub wall_time_s: f64,
}

impl CampaignReport {
    /// Folds trial records, in trial order, into per-check summaries.
    pub(crate) fn assemble(rng: &str, config: &CampaignConfig, records: &[TrialRecord], wall_time_s: f64) -> Self {
        let mut checks: Vec<CheckSummary> = config
            .checks
            .iter()
            .map(|&check| CheckSummary {
                check,
                pass: 0,
                fail: 0,
                inconclusive: 0,
                worst: None,
            })
            .collect();
        let mut findings = Vec::new();
        for rec in records {
            for (summary, c) in checks.iter_mut().zip(&rec.checks) {
                match c.outcome {
                    Outcome::Pass => summary.pass += 1,
                    Outcome::Fail => summary.fail += 1,
                    Outcome::Inconclusive => summary.inconclusive += 1,
                }
                let worse = match &summary.worst {
                    None => true,
                    Some(w) => c.margin < w.margin,
                };
                if worse && !c.margin.is_nan() {
                    summary.worst = Some(WorstCase {
                        trial: rec.trial,
                        margin: c.margin,
                        at: c.at,
                        provenance: rec.provenance.clone(),
                    });
                }
                if c.outcome == Outcome::Fail {
                    findings.push(Finding {
                        trial: rec.trial,
                        check: c.check,
                        margin: c.margin,
                        at: c.at,
                        detail: c.detail.clone(),
                        provenance: rec.provenance.clone(),
                    });
                }
            }
        }
        Self {
            schema: SCHEMA_VERSION,
            rng: rng.to_string(),
            config: config.clone(),
            checks,
            findings,
            wall_time_s,
        }
    }

    /// 0 when there are no findings, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.findings.is_empty() {
            0
        } else {
            1
        }
    }

    /// The report with the timing field zeroed, for reproducibility checks.
    pub fn without_wall_time(&self) -> Self {
        Self {
            wall_time_s: 0.0,
            ..self.clone()
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report is always serializable")
    }
}
