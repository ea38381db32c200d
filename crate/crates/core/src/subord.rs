//! Numerical subordination tests on truncated series.
//!
//! `F ≺ f` is tested by solving `f ∘ w = F` for the series of `w` and
//! sampling `|w|` on a polar grid. Every sample carries the truncation tail
//! of `w`, so a verdict is only decisive when the sampled quantity clears
//! its threshold by more than the tail.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::generators::StarlikeAtomic;
use crate::phi::{MaMindaFunction, PhiKind};
use crate::series::{PowerSeries, SeriesError, COEFF_TOL, MAX_EVAL_RADIUS};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SubordError {
    #[error("F(0) = {big} differs from f(0) = {small}")]
    ConstantMismatch { big: Complex64, small: Complex64 },
    #[error("f has vanishing linear coefficient")]
    DegenerateLinearTerm,
    #[error("f is not normalized (need f(0) = 0, f'(0) = 1)")]
    NotNormalized,
    #[error("grid radii must lie in (0, {MAX_EVAL_RADIUS}] and there must be at least one angle")]
    BadGrid,
    #[error("delta must be positive, got {0}")]
    BadDelta(f64),
    #[error("at least one sample of t is required")]
    NoSamples,
    #[error(transparent)]
    Series(#[from] SeriesError),
}

pub type Result<T> = std::result::Result<T, SubordError>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridConfig {
    pub radii: Vec<f64>,
    pub angles: usize,
    pub margin_floor: f64,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            radii: vec![0.5, 0.7, 0.9],
            angles: 720,
            margin_floor: 1e-3,
        }
    }
}

impl GridConfig {
    fn validate(&self) -> Result<()> {
        let radii_ok = !self.radii.is_empty()
            && self.radii.iter().all(|&r| r > 0.0 && r <= MAX_EVAL_RADIUS);
        if !radii_ok || self.angles == 0 {
            return Err(SubordError::BadGrid);
        }
        Ok(())
    }

    fn points(&self) -> impl Iterator<Item = Complex64> + '_ {
        self.radii.iter().flat_map(move |&r| {
            (0..self.angles).map(move |j| Complex64::from_polar(r, TAU * j as f64 / self.angles as f64))
        })
    }

    fn max_radius(&self) -> f64 {
        self.radii.iter().copied().fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    Fails,
    Inconclusive,
}

/// A grid point and the sampled quantity there.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridPoint {
    pub z: Complex64,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubordinationVerdict {
    pub verdict: Verdict,
    /// `1 − sup|w|` for subordination tests, `min Re P` for half-plane tests.
    pub margin: f64,
    pub radii: Vec<f64>,
    pub angles: usize,
    pub tail_estimate: f64,
    /// The extremal grid point; always present when the verdict is `fails`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<GridPoint>,
}

/// Tests `F ≺ f` through the Schwarz map `w = f⁻¹ ∘ F`.
pub fn is_subordinate(big: &PowerSeries, f: &PowerSeries, cfg: &GridConfig) -> Result<SubordinationVerdict> {
    cfg.validate()?;
    let (b0, f0) = (big.coeff(0), f.coeff(0));
    if (b0 - f0).norm() > COEFF_TOL * (1.0 + f0.norm()) {
        return Err(SubordError::ConstantMismatch { big: b0, small: f0 });
    }
    if f.coeff(1) == Complex64::new(0.0, 0.0) {
        return Err(SubordError::DegenerateLinearTerm);
    }
    let w = f.solve_inner(big)?;
    let tail = w.tail_bound(cfg.max_radius());

    let mut sup = GridPoint {
        z: Complex64::new(0.0, 0.0),
        value: f64::NEG_INFINITY,
    };
    for z in cfg.points() {
        let m = w.horner(z).norm();
        if !(m <= sup.value) {
            sup = GridPoint { z, value: m };
        }
    }
    let verdict = if sup.value + tail < 1.0 - cfg.margin_floor {
        Verdict::Holds
    } else if sup.value - w.tail_bound(sup.z.norm()) > 1.0 {
        Verdict::Fails
    } else {
        Verdict::Inconclusive
    };
    Ok(SubordinationVerdict {
        verdict,
        margin: 1.0 - sup.value,
        radii: cfg.radii.clone(),
        angles: cfg.angles,
        tail_estimate: tail,
        witness: Some(sup),
    })
}

/// `Re P > 0` on the grid, with `P(0)` assumed to be 1.
pub fn positive_real_part(p: &PowerSeries, cfg: &GridConfig) -> Result<SubordinationVerdict> {
    cfg.validate()?;
    let tail = p.tail_bound(cfg.max_radius());
    let mut inf = GridPoint {
        z: Complex64::new(0.0, 0.0),
        value: f64::INFINITY,
    };
    for z in cfg.points() {
        let re = p.horner(z).re;
        if !(re >= inf.value) {
            inf = GridPoint { z, value: re };
        }
    }
    let verdict = if inf.value - tail > cfg.margin_floor {
        Verdict::Holds
    } else if inf.value + p.tail_bound(inf.z.norm()) < 0.0 {
        Verdict::Fails
    } else {
        Verdict::Inconclusive
    };
    Ok(SubordinationVerdict {
        verdict,
        margin: inf.value,
        radii: cfg.radii.clone(),
        angles: cfg.angles,
        tail_estimate: tail,
        witness: Some(inf),
    })
}

/// `P(z) = −z²f′(z)/(g(z)g(−z)) = f′(z)·z/G(z)`, one order below `f`.
pub fn defining_quotient(f: &PowerSeries, g: &StarlikeAtomic) -> Result<PowerSeries> {
    check_normalized(f)?;
    let g = if g.order() == f.order() {
        g.clone()
    } else {
        g.with_order(f.order()).map_err(|_| SubordError::NotNormalized)?
    };
    Ok(f.derivative().mul(&g.g_over_z_even_part().reciprocal()?)?)
}

fn check_normalized(f: &PowerSeries) -> Result<()> {
    if f.order() < 2
        || f.coeff(0).norm() > COEFF_TOL
        || (f.coeff(1) - Complex64::new(1.0, 0.0)).norm() > COEFF_TOL
    {
        return Err(SubordError::NotNormalized);
    }
    Ok(())
}

/// Tests `−z²f′/(g(z)g(−z)) ≺ φ`. For the half-plane target this is
/// `Re P > 0`; otherwise it is a subordination test against the series of φ.
pub fn ks_membership(
    f: &PowerSeries,
    g: &StarlikeAtomic,
    phi: &MaMindaFunction,
    cfg: &GridConfig,
) -> Result<SubordinationVerdict> {
    let p = defining_quotient(f, g)?;
    match phi.kind() {
        PhiKind::Halfplane => positive_real_part(&p, cfg),
        _ => is_subordinate(&p, &phi.series().with_order(p.order()), cfg),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionSample {
    pub t: f64,
    pub verdict: SubordinationVerdict,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StankiewiczOutcome {
    pub criteria: Vec<CriterionSample>,
    pub conclusion: SubordinationVerdict,
    /// False only when every criterion holds while the conclusion fails.
    pub consistent: bool,
}

/// Samples the hypothesis `f + t·g(z)g(−z)/z ≺ f` at
/// `t_j = δ·j/(samples + 1)` and independently tests the conclusion
/// `Re(z²f′/(g(z)g(−z))) < 0`, i.e. `Re P > 0`.
pub fn stankiewicz_check(
    f: &PowerSeries,
    g: &StarlikeAtomic,
    delta: f64,
    samples: usize,
    cfg: &GridConfig,
) -> Result<StankiewiczOutcome> {
    if !(delta > 0.0) {
        return Err(SubordError::BadDelta(delta));
    }
    if samples == 0 {
        return Err(SubordError::NoSamples);
    }
    check_normalized(f)?;
    cfg.validate()?;
    let g_n = g.with_order(f.order()).map_err(|_| SubordError::NotNormalized)?;
    // g(z)g(−z)/z = −G(z)
    let big_g = g_n.odd_companion();
    let criteria = (1..=samples)
        .map(|j| {
            let t = delta * j as f64 / (samples + 1) as f64;
            let shifted = f.sub(&big_g.scale(Complex64::new(t, 0.0)))?;
            Ok(CriterionSample {
                t,
                verdict: is_subordinate(&shifted, f, cfg)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let conclusion = positive_real_part(&defining_quotient(f, &g_n)?, cfg)?;
    let all_hold = criteria.iter().all(|c| c.verdict.verdict == Verdict::Holds);
    let consistent = !(all_hold && conclusion.verdict == Verdict::Fails);
    Ok(StankiewiczOutcome {
        criteria,
        conclusion,
        consistent,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{ClassMember, ExtremalKind, SchwarzMap};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    const N: usize = 200;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_normalized(seed: u64, order: usize) -> PowerSeries {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        ClassMember::from_parts(
            StarlikeAtomic::random(&mut rng, order).unwrap(),
            SchwarzMap::random(&mut rng, order).unwrap(),
            MaMindaFunction::halfplane(order),
        )
        .unwrap()
        .f()
        .clone()
    }

    #[test]
    fn dilation_is_subordinate() {
        let f = random_normalized(7, N);
        let v = is_subordinate(&f.dilate(c(0.5, 0.0)), &f, &GridConfig::default()).unwrap();
        assert_eq!(v.verdict, Verdict::Holds);
        // w = z/2, so sup |w| on the 0.9 circle is 0.45
        assert!((v.margin - 0.55).abs() < 1e-10, "{}", v.margin);
    }

    #[test]
    fn expansion_is_not_subordinate() {
        let f = PowerSeries::identity(40);
        let big = PowerSeries::monomial(40, 1, c(1.5, 0.0));
        let v = is_subordinate(&big, &f, &GridConfig::default()).unwrap();
        assert_eq!(v.verdict, Verdict::Fails);
        let wit = v.witness.unwrap();
        assert!((wit.z.norm() - 0.9).abs() < 1e-12);
        assert!((wit.value - 1.35).abs() < 1e-12);
    }

    #[test]
    fn reflexive_subordination_holds() {
        let f = random_normalized(11, N);
        let v = is_subordinate(&f, &f, &GridConfig::default()).unwrap();
        assert_eq!(v.verdict, Verdict::Holds);
        assert!((v.margin - 0.1).abs() < 1e-10);
    }

    #[test]
    fn subordination_rejects_bad_input() {
        let f = PowerSeries::identity(8);
        let shifted = PowerSeries::one(8).add(&f).unwrap();
        assert!(matches!(
            is_subordinate(&shifted, &f, &GridConfig::default()),
            Err(SubordError::ConstantMismatch { .. })
        ));
        let flat = PowerSeries::monomial(8, 2, c(1.0, 0.0));
        assert_eq!(
            is_subordinate(&flat, &flat, &GridConfig::default()).unwrap_err(),
            SubordError::DegenerateLinearTerm
        );
        let cfg = GridConfig {
            radii: vec![0.99],
            ..GridConfig::default()
        };
        assert_eq!(is_subordinate(&f, &f, &cfg).unwrap_err(), SubordError::BadGrid);
    }

    #[test]
    fn membership_examples() {
        let phi = MaMindaFunction::halfplane(N);
        let m = ClassMember::extremal(ExtremalKind::FsMax, &phi).unwrap();
        let v = ks_membership(m.f(), m.g(), &phi, &GridConfig::default()).unwrap();
        assert_eq!(v.verdict, Verdict::Holds);
        // P = φ(z), min Re on the 0.9 circle is (1 − 0.9)/(1 + 0.9)
        assert!((v.margin - 0.1 / 1.9).abs() < 1e-9);

        let f = PowerSeries::from_real(&[0.0, 1.0, -3.0]).unwrap().with_order(N);
        let g = StarlikeAtomic::koebe_half(N).unwrap();
        let v = ks_membership(&f, &g, &phi, &GridConfig::default()).unwrap();
        assert_eq!(v.verdict, Verdict::Fails);
        assert!(v.witness.unwrap().value < 0.0);

        let gphi = MaMindaFunction::order_gamma(0.4, N).unwrap();
        let m = ClassMember::extremal(ExtremalKind::DistMin, &gphi).unwrap();
        let v = ks_membership(m.f(), m.g(), &gphi, &GridConfig::default()).unwrap();
        assert_eq!(v.verdict, Verdict::Holds);
        assert!((v.margin - 0.1).abs() < 1e-9);

        assert_eq!(
            ks_membership(&PowerSeries::one(N), &g, &phi, &GridConfig::default()).unwrap_err(),
            SubordError::NotNormalized
        );
    }

    #[test]
    fn stankiewicz_examples() {
        let phi = MaMindaFunction::halfplane(N);
        let m = ClassMember::extremal(ExtremalKind::FsMax, &phi).unwrap();
        let out = stankiewicz_check(m.f(), m.g(), 0.05, 5, &GridConfig::default()).unwrap();
        assert_eq!(out.conclusion.verdict, Verdict::Holds);
        assert_eq!(out.criteria.len(), 5);
        assert!((out.criteria[0].t - 0.05 / 6.0).abs() < 1e-15);
        assert!(out.consistent);

        let f = PowerSeries::from_real(&[0.0, 1.0, -3.0]).unwrap().with_order(N);
        let g = StarlikeAtomic::koebe_half(N).unwrap();
        let out = stankiewicz_check(&f, &g, 0.05, 5, &GridConfig::default()).unwrap();
        assert_eq!(out.conclusion.verdict, Verdict::Fails);
        let all_hold = out.criteria.iter().all(|c| c.verdict.verdict == Verdict::Holds);
        assert_eq!(out.consistent, !all_hold);

        assert_eq!(
            stankiewicz_check(m.f(), m.g(), 0.0, 5, &GridConfig::default()).unwrap_err(),
            SubordError::BadDelta(0.0)
        );
        assert_eq!(
            stankiewicz_check(m.f(), m.g(), 0.1, 0, &GridConfig::default()).unwrap_err(),
            SubordError::NoSamples
        );
    }

    #[test]
    fn verdict_serializes() {
        let f = PowerSeries::identity(20);
        let v = is_subordinate(&f.dilate(c(0.5, 0.0)), &f, &GridConfig::default()).unwrap();
        let json = serde_json::to_value(&v).unwrap();
        assert_eq!(json["verdict"], "holds");
        assert_eq!(json["angles"], 720);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn dilations_hold_for_random_members(seed in any::<u64>(), rho in 0.05f64..0.9) {
            let f = random_normalized(seed, N);
            let v = is_subordinate(&f.dilate(c(rho, 0.0)), &f, &GridConfig::default()).unwrap();
            prop_assert_eq!(v.verdict, Verdict::Holds);
            prop_assert!(v.margin > v.tail_estimate);
        }

        #[test]
        fn finer_grid_never_flips_holds_to_fails(seed in any::<u64>(), rho in 0.05f64..1.2) {
            let f = random_normalized(seed, N);
            let big = f.dilate(c(rho, 0.0));
            let coarse = GridConfig { radii: vec![0.5, 0.9], angles: 90, margin_floor: 1e-3 };
            let fine = GridConfig { radii: vec![0.5, 0.7, 0.8, 0.9], angles: 1440, margin_floor: 1e-3 };
            let a = is_subordinate(&big, &f, &coarse);
            let b = is_subordinate(&big, &f, &fine);
            if let (Ok(a), Ok(b)) = (a, b) {
                prop_assert!(!(a.verdict == Verdict::Holds && b.verdict == Verdict::Fails));
            }
        }
    }
}
