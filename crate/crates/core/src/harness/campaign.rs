use std::f64::consts::TAU;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;

use super::config::{CampaignConfig, CheckKind};
use super::report::{CampaignReport, CheckRecord, Location, Outcome, TrialRecord};
use super::{tol, CampaignError};
use crate::bounds;
use crate::generators::{ClassMember, SchwarzMap, StarlikeAtomic};
use crate::phi::{MaMindaFunction, PhiKind};
use crate::subord::{self, Verdict};

/// Recorded in every report so runs can be reproduced by other tools.
pub const RNG_ALGORITHM: &str = "ChaCha20 (rand_chacha 0.9): key from SeedableRng::seed_from_u64(seed) \
(PCG32 key expansion), stream = trial index, word position 0";

/// The generator for trial `trial` of a campaign seeded with `seed`.
pub fn trial_rng(seed: u64, trial: usize) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

/// A finished campaign: the summary report plus one record per trial.
#[derive(Debug, Clone, PartialEq)]
pub struct CampaignRun {
    pub report: CampaignReport,
    pub records: Vec<TrialRecord>,
}

pub fn run_campaign(config: &CampaignConfig) -> Result<CampaignRun, CampaignError> {
    let phis = config.validate()?;
    let start = Instant::now();
    let records: Vec<TrialRecord> = (0..config.trials)
        .into_par_iter()
        .map(|i| run_trial(config, &phis, i))
        .collect::<Result<_, _>>()?;
    let wall = start.elapsed().as_secs_f64();
    let report = CampaignReport::assemble(RNG_ALGORITHM, config, &records, wall);
    Ok(CampaignRun { report, records })
}

/// Re-runs one trial of a campaign.
pub fn replay_trial(config: &CampaignConfig, trial: usize) -> Result<TrialRecord, CampaignError> {
    let phis = config.validate()?;
    if trial >= config.trials {
        return Err(CampaignError::TrialOutOfRange {
            trial,
            trials: config.trials,
        });
    }
    run_trial(config, &phis, trial)
}

struct Trial<'a> {
    config: &'a CampaignConfig,
    member: ClassMember,
    /// The same member at `check_order`, built only when a check needs it.
    member_hi: Option<ClassMember>,
    mus: Vec<Complex64>,
    witness_mu: Complex64,
}

fn run_trial(config: &CampaignConfig, phis: &[PhiKind], index: usize) -> Result<TrialRecord, CampaignError> {
    let mut rng = trial_rng(config.seed, index);
    let kind = phis[rng.random_range(0..phis.len())].clone();
    let g = StarlikeAtomic::random(&mut rng, config.order)?;
    let w = SchwarzMap::random(&mut rng, config.order)?;
    let witness_mu = Complex64::from_polar(3.0 * rng.random_range(0.0..1.0f64).sqrt(), rng.random_range(0.0..TAU));

    let phi = MaMindaFunction::new(kind, config.order)?;
    let mut mus = config.mu_grid.clone();
    mus.extend(bounds::structural_mus(&phi));
    let member = ClassMember::from_parts(g, w, phi)?;
    let member_hi = if config.checks.iter().any(|c| c.needs_check_order()) {
        Some(member.provenance().rebuild(config.check_order)?)
    } else {
        None
    };
    let trial = Trial {
        config,
        member,
        member_hi,
        mus,
        witness_mu,
    };
    let checks = config.checks.iter().map(|&c| trial.run(c)).collect();
    Ok(TrialRecord {
        trial: index,
        provenance: trial.member.provenance(),
        checks,
    })
}

/// Running minimum of a slack and where it occurred.
struct Slack {
    margin: f64,
    at: Location,
}

impl Slack {
    fn new() -> Self {
        Self {
            margin: f64::INFINITY,
            at: Location::default(),
        }
    }

    fn see(&mut self, margin: f64, at: Location) {
        if margin < self.margin || margin.is_nan() {
            self.margin = margin;
            self.at = at;
        }
    }
}

fn record(check: CheckKind, outcome: Outcome, slack: Slack, detail: Option<String>) -> CheckRecord {
    CheckRecord {
        check,
        outcome,
        margin: slack.margin,
        at: slack.at,
        detail,
    }
}

fn pass_unless(violated: bool) -> Outcome {
    if violated {
        Outcome::Fail
    } else {
        Outcome::Pass
    }
}

impl Trial<'_> {
    fn run(&self, check: CheckKind) -> CheckRecord {
        let result = match check {
            CheckKind::Fs => self.fs(),
            CheckKind::InverseFs => self.inverse_fs(),
            CheckKind::A2a3 => self.a2a3(),
            CheckKind::Distortion => self.distortion(),
            CheckKind::Growth => self.growth(),
            CheckKind::Membership => self.membership(),
            CheckKind::Stankiewicz => self.stankiewicz(),
        };
        result.unwrap_or_else(|e| CheckRecord {
            check,
            outcome: Outcome::Fail,
            margin: f64::NAN,
            at: Location::default(),
            detail: Some(format!("error: {e}")),
        })
    }

    fn hi(&self) -> &ClassMember {
        self.member_hi.as_ref().expect("built for evaluation checks")
    }

    fn fs(&self) -> Result<CheckRecord, Box<dyn std::error::Error>> {
        let phi = self.member.phi();
        let mut slack = Slack::new();
        for &mu in &self.mus {
            let m = bounds::fs_bound(phi, mu) - bounds::fs_value(&self.member, mu);
            slack.see(m, Location { mu: Some(mu), ..Location::default() });
        }
        let violated = slack.margin < -tol::BOUND;
        let witness = bounds::fs_witness(phi, self.witness_mu)?;
        let gap = (bounds::fs_value(&witness, self.witness_mu) - bounds::fs_bound(phi, self.witness_mu)).abs();
        let detail = if gap > tol::WITNESS {
            Some(format!("witness at mu = {} misses the bound by {gap:e}", self.witness_mu))
        } else if violated {
            Some("|a3 - mu a2^2| exceeds the bound".to_string())
        } else {
            None
        };
        Ok(record(CheckKind::Fs, pass_unless(detail.is_some()), slack, detail))
    }

    fn inverse_fs(&self) -> Result<CheckRecord, Box<dyn std::error::Error>> {
        let m = &self.member;
        let inv = m.f().functional_inverse()?;
        let (d2, d3) = (inv.coeff(2), inv.coeff(3));
        let (a2, a3) = (m.a2(), m.a3());
        let mut slack = Slack::new();
        let mut identity_gap: f64 = 0.0;
        for &mu in &self.mus {
            let lhs = (d3 - mu * d2 * d2).norm();
            let rhs = (a3 - (Complex64::new(2.0, 0.0) - mu) * a2 * a2).norm();
            identity_gap = identity_gap.max((lhs - rhs).abs());
            slack.see(
                bounds::inverse_fs_bound(m.phi(), mu) - lhs,
                Location { mu: Some(mu), ..Location::default() },
            );
        }
        let detail = if identity_gap > tol::IDENTITY {
            Some(format!("inverse identity off by {identity_gap:e}"))
        } else if slack.margin < -tol::BOUND {
            Some("|d3 - mu d2^2| exceeds the bound".to_string())
        } else {
            None
        };
        Ok(record(CheckKind::InverseFs, pass_unless(detail.is_some()), slack, detail))
    }

    fn a2a3(&self) -> Result<CheckRecord, Box<dyn std::error::Error>> {
        let m = &self.member;
        let (r2, r3) = m.identity_residuals();
        let (a2_bound, a3_bound) = bounds::coefficient_bounds(m.phi());
        let mut slack = Slack::new();
        slack.see(a2_bound - m.a2().norm(), Location::default());
        slack.see(a3_bound - m.a3().norm(), Location::default());
        let mut bound_violated = slack.margin < -tol::BOUND;
        let (w1, w2) = (m.w().w1(), m.w().w2());
        for &mu in &self.mus {
            let t = bounds::keogh_merkes_parameter(m.phi(), mu);
            let s = bounds::schwarz_functional_bound(t) - (w2 - t * w1 * w1).norm();
            bound_violated |= s < -tol::SCHWARZ;
            slack.see(s, Location { mu: Some(mu), ..Location::default() });
        }
        let detail = if r2 > tol::IDENTITY || r3 > tol::IDENTITY {
            Some(format!("coefficient identities off by {r2:e}, {r3:e}"))
        } else if bound_violated {
            Some("coefficient or Keogh-Merkes bound exceeded".to_string())
        } else {
            None
        };
        Ok(record(CheckKind::A2a3, pass_unless(detail.is_some()), slack, detail))
    }

    /// Samples `|s(z)|` against `[lower(r), upper(r)]` on every radius.
    fn envelope(
        &self,
        check: CheckKind,
        series: &crate::series::PowerSeries,
        bounds_at: impl Fn(f64) -> Result<(f64, f64), bounds::BoundError>,
    ) -> Result<CheckRecord, Box<dyn std::error::Error>> {
        let mut slack = Slack::new();
        let mut violated = false;
        for &r in &self.config.radii {
            let (lo, hi) = bounds_at(r)?;
            let tail = series.tail_bound(r);
            for j in 0..self.config.angles {
                let z = Complex64::from_polar(r, TAU * j as f64 / self.config.angles as f64);
                let v = series.evaluate(z)?.value.norm();
                let s = (v - lo).min(hi - v);
                violated |= s < -(tail + tol::SAMPLE);
                slack.see(
                    s,
                    Location {
                        r: Some(r),
                        z: Some(z),
                        ..Location::default()
                    },
                );
            }
        }
        let detail = violated.then(|| format!("{check} envelope violated beyond the truncation tail"));
        Ok(record(check, pass_unless(violated), slack, detail))
    }

    fn distortion(&self) -> Result<CheckRecord, Box<dyn std::error::Error>> {
        let m = self.hi();
        self.envelope(CheckKind::Distortion, &m.f().derivative(), |r| {
            bounds::distortion_bounds(m.phi(), r)
        })
    }

    fn growth(&self) -> Result<CheckRecord, Box<dyn std::error::Error>> {
        let m = self.hi();
        self.envelope(CheckKind::Growth, m.f(), |r| bounds::growth_bounds(m.phi(), r))
    }

    fn membership(&self) -> Result<CheckRecord, Box<dyn std::error::Error>> {
        let m = self.hi();
        let v = subord::ks_membership(m.f(), m.g(), m.phi(), &self.config.subordination)?;
        let outcome = match v.verdict {
            Verdict::Holds => Outcome::Pass,
            Verdict::Fails => Outcome::Fail,
            Verdict::Inconclusive => Outcome::Inconclusive,
        };
        let detail = (outcome == Outcome::Fail).then(|| "constructed member fails the membership test".to_string());
        let at = Location {
            z: v.witness.map(|p| p.z),
            ..Location::default()
        };
        Ok(record(
            CheckKind::Membership,
            outcome,
            Slack { margin: v.margin, at },
            detail,
        ))
    }

    fn stankiewicz(&self) -> Result<CheckRecord, Box<dyn std::error::Error>> {
        let m = self.hi();
        let out = subord::stankiewicz_check(
            m.f(),
            m.g(),
            self.config.stankiewicz_delta,
            self.config.stankiewicz_samples,
            &self.config.subordination,
        )?;
        let outcome = if !out.consistent {
            Outcome::Fail
        } else if out.conclusion.verdict == Verdict::Inconclusive {
            Outcome::Inconclusive
        } else {
            Outcome::Pass
        };
        let detail = (!out.consistent).then(|| "all criterion samples hold but the conclusion fails".to_string());
        let at = Location {
            z: out.conclusion.witness.map(|p| p.z),
            ..Location::default()
        };
        Ok(record(
            CheckKind::Stankiewicz,
            outcome,
            Slack {
                margin: out.conclusion.margin,
                at,
            },
            detail,
        ))
    }
}
