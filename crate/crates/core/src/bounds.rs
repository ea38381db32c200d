//! Closed-form coefficient, distortion, growth and covering bounds for
//! `K_s(φ)`, with witnesses that attain them.

use std::f64::consts::{FRAC_PI_4, LN_2, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::generators::{
    ClassMember, ExtremalKind, GeneratorError, Provenance, SchwarzKind, SchwarzMap, StarlikeAtomic,
};
use crate::phi::{MaMindaFunction, PhiError};
use crate::quadrature::{self, QuadratureError};
use crate::series::SeriesError;

/// Largest radius accepted by [`growth_bounds`].
pub const MAX_GROWTH_RADIUS: f64 = 0.99;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BoundError {
    #[error("radius must lie in (0, {max}], got {r}")]
    RadiusOutOfRange { r: f64, max: f64 },
    #[error("gamma must lie in [0, 1), got {0}")]
    GammaOutOfRange(f64),
    #[error(transparent)]
    Phi(#[from] PhiError),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
    #[error(transparent)]
    Generator(#[from] GeneratorError),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

pub type Result<T> = std::result::Result<T, BoundError>;

fn check_radius(r: f64, max: f64) -> Result<()> {
    if r > 0.0 && r <= max && r < 1.0 {
        Ok(())
    } else {
        Err(BoundError::RadiusOutOfRange { r, max })
    }
}

/// `B₂/3 − μB₁²/4`.
fn fs_term(phi: &MaMindaFunction, mu: Complex64) -> Complex64 {
    let b1 = phi.b1();
    phi.b(2) / 3.0 - mu * (b1 * b1 / 4.0)
}

/// `1/3 + max(B₁/3, |B₂/3 − μB₁²/4|)`.
pub fn fs_bound(phi: &MaMindaFunction, mu: Complex64) -> f64 {
    1.0 / 3.0 + (phi.b1() / 3.0).max(fs_term(phi, mu).norm())
}

/// `|a₃ − μa₂²|`.
pub fn fs_value(f: &ClassMember, mu: Complex64) -> f64 {
    (f.a3() - mu * f.a2() * f.a2()).norm()
}

/// A member attaining [`fs_bound`]: `fs_odd` when `B₁/3` dominates,
/// otherwise `g = z/(1−z)` with the rotation `w = e^{iθ}z`,
/// `θ = −arg(B₂/3 − μB₁²/4)/2`.
pub fn fs_witness(phi: &MaMindaFunction, mu: Complex64) -> Result<ClassMember> {
    let term = fs_term(phi, mu);
    if phi.b1() / 3.0 >= term.norm() {
        return Ok(ClassMember::extremal(ExtremalKind::FsOdd, phi)?);
    }
    let n = phi.order();
    let w = SchwarzMap::new(
        SchwarzKind::Monomial {
            k: 1,
            theta: -term.arg() / 2.0,
        },
        n,
    )?;
    Ok(ClassMember::from_parts(
        StarlikeAtomic::koebe_half(n)?,
        w,
        phi.clone(),
    )?)
}

/// `(B₁/2, 1/3 + (B₁/3)·max(1, |B₂|/B₁))`.
pub fn coefficient_bounds(phi: &MaMindaFunction) -> (f64, f64) {
    let b1 = phi.b1();
    (b1 / 2.0, 1.0 / 3.0 + (b1 / 3.0) * (phi.b(2).norm() / b1).max(1.0))
}

/// Bound on `|d₃ − μd₂²|` for the inverse function: `fs_bound(φ, 2 − μ)`.
pub fn inverse_fs_bound(phi: &MaMindaFunction, mu: Complex64) -> f64 {
    fs_bound(phi, Complex64::new(2.0, 0.0) - mu)
}

/// `|d₃ − μd₂²|` with `d₂, d₃` taken from the series inverse of `f`.
pub fn inverse_fs_value(f: &ClassMember, mu: Complex64) -> Result<f64> {
    let inv = f.f().functional_inverse()?;
    let (d2, d3) = (inv.coeff(2), inv.coeff(3));
    Ok((d3 - mu * d2 * d2).norm())
}

/// `(φ(−r)/(1 + r²), φ(r)/(1 − r²))`.
pub fn distortion_bounds(phi: &MaMindaFunction, r: f64) -> Result<(f64, f64)> {
    check_radius(r, 1.0)?;
    let (lo, hi) = phi.minmax(r)?;
    Ok((lo / (1.0 + r * r), hi / (1.0 - r * r)))
}

/// `(∫₀^r φ(−t)/(1 + t²) dt, ∫₀^r φ(t)/(1 − t²) dt)` by adaptive quadrature.
pub fn growth_bounds(phi: &MaMindaFunction, r: f64) -> Result<(f64, f64)> {
    check_radius(r, MAX_GROWTH_RADIUS)?;
    phi.minmax(r)?;
    let lower = quadrature::integrate(
        |t| phi.eval_real(-t).unwrap_or(f64::NAN) / (1.0 + t * t),
        0.0,
        r,
        quadrature::DEFAULT_TOL,
    )?;
    let upper = quadrature::integrate(
        |t| phi.eval_real(t).unwrap_or(f64::NAN) / (1.0 - t * t),
        0.0,
        r,
        quadrature::DEFAULT_TOL,
    )?;
    Ok((lower.value, upper.value))
}

/// `k = ∫₀¹ φ(−t)/(1 + t²) dt`; the disk `|w| ≤ k` lies in every `f(D)`.
pub fn covering_radius(phi: &MaMindaFunction) -> Result<f64> {
    phi.minmax(0.5)?;
    let q = quadrature::integrate(
        |t| phi.eval_real(-t).unwrap_or(f64::NAN) / (1.0 + t * t),
        0.0,
        1.0,
        quadrature::DEFAULT_TOL,
    )?;
    Ok(q.value)
}

/// Closed-form distortion and growth bounds for `φ = (1 + (1 − 2γ)z)/(1 − z)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KowalczykForms {
    pub fprime_lo: f64,
    pub fprime_hi: f64,
    pub f_lo: f64,
    pub f_hi: f64,
}

pub fn kowalczyk_forms(gamma: f64, r: f64) -> Result<KowalczykForms> {
    if !(0.0..1.0).contains(&gamma) {
        return Err(BoundError::GammaOutOfRange(gamma));
    }
    check_radius(r, 1.0)?;
    let c = 1.0 - 2.0 * gamma;
    Ok(KowalczykForms {
        fprime_lo: (1.0 - c * r) / ((1.0 + r) * (1.0 + r * r)),
        fprime_hi: (1.0 + c * r) / ((1.0 - r) * (1.0 - r * r)),
        f_lo: (1.0 - gamma) * ((1.0 + r) / (1.0 + r * r).sqrt()).ln() + gamma * r.atan(),
        f_hi: gamma / 2.0 * ((1.0 + r) / (1.0 - r)).ln() + (1.0 - gamma) * r / (1.0 - r),
    })
}

/// Closed-form covering radius for the `order_gamma` family.
pub fn kowalczyk_covering(gamma: f64) -> f64 {
    (1.0 - gamma) * LN_2 / 2.0 + gamma * FRAC_PI_4
}

/// Keogh–Merkes bound `max(1, |t|)` on `|w₂ − t w₁²|`.
pub fn schwarz_functional_bound(t: Complex64) -> f64 {
    t.norm().max(1.0)
}

/// The Keogh–Merkes parameter `t = B₂/B₁ − 3μB₁/4` tied to `μ`.
pub fn keogh_merkes_parameter(phi: &MaMindaFunction, mu: Complex64) -> Complex64 {
    let b1 = phi.b1();
    phi.b(2) / b1 - mu * (3.0 * b1 / 4.0)
}

/// 64 points on `|μ| ≤ 3`: four rings of 16 equally spaced angles.
pub fn mu_grid_disk() -> Vec<Complex64> {
    let mut out = Vec::with_capacity(64);
    for ring in 1..=4 {
        let rho = 0.75 * ring as f64;
        for j in 0..16 {
            out.push(Complex64::from_polar(rho, TAU * j as f64 / 16.0));
        }
    }
    out
}

/// The points where the `max` in [`fs_bound`] can switch branch:
/// `0, 1, 2` and `(2/3)(B₂/B₁)(4/B₁)`.
pub fn structural_mus(phi: &MaMindaFunction) -> Vec<Complex64> {
    let b1 = phi.b1();
    vec![
        Complex64::new(0.0, 0.0),
        Complex64::new(1.0, 0.0),
        Complex64::new(2.0, 0.0),
        phi.b(2) / b1 * (2.0 / 3.0) * (4.0 / b1),
    ]
}

/// Echo of the inputs of a bound query.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundQuery {
    pub bound: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phi: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu: Option<Complex64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
}

impl BoundQuery {
    fn new(bound: &str) -> Self {
        Self {
            bound: bound.to_string(),
            phi: None,
            mu: None,
            r: None,
            gamma: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BoundValue {
    Single(f64),
    Pair { lower: f64, upper: f64 },
    Kowalczyk(KowalczykForms),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub provenance: Provenance,
    pub attained_value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub query: BoundQuery,
    pub value: BoundValue,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    /// `bound − attained_value`; never below `−1e-9` when present.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub margin: Option<f64>,
}

pub fn fs_report(phi: &MaMindaFunction, mu: Complex64) -> Result<BoundReport> {
    let bound = fs_bound(phi, mu);
    let witness = fs_witness(phi, mu)?;
    let attained = fs_value(&witness, mu);
    Ok(BoundReport {
        query: BoundQuery {
            phi: Some(phi.kind().to_string()),
            mu: Some(mu),
            ..BoundQuery::new("fs")
        },
        value: BoundValue::Single(bound),
        witness: Some(Witness {
            provenance: witness.provenance(),
            attained_value: attained,
        }),
        margin: Some(bound - attained),
    })
}

/// The witness for `fs_bound(φ, 2 − μ)` attains the inverse bound, since
/// `|d₃ − μd₂²| = |a₃ − (2 − μ)a₂²|`.
pub fn inverse_fs_report(phi: &MaMindaFunction, mu: Complex64) -> Result<BoundReport> {
    let bound = inverse_fs_bound(phi, mu);
    let witness = fs_witness(phi, Complex64::new(2.0, 0.0) - mu)?;
    let attained = inverse_fs_value(&witness, mu)?;
    Ok(BoundReport {
        query: BoundQuery {
            phi: Some(phi.kind().to_string()),
            mu: Some(mu),
            ..BoundQuery::new("inverse-fs")
        },
        value: BoundValue::Single(bound),
        witness: Some(Witness {
            provenance: witness.provenance(),
            attained_value: attained,
        }),
        margin: Some(bound - attained),
    })
}

pub fn distortion_report(phi: &MaMindaFunction, r: f64) -> Result<BoundReport> {
    let (lower, upper) = distortion_bounds(phi, r)?;
    Ok(BoundReport {
        query: BoundQuery {
            phi: Some(phi.kind().to_string()),
            r: Some(r),
            ..BoundQuery::new("distortion")
        },
        value: BoundValue::Pair { lower, upper },
        witness: None,
        margin: None,
    })
}

pub fn growth_report(phi: &MaMindaFunction, r: f64) -> Result<BoundReport> {
    let (lower, upper) = growth_bounds(phi, r)?;
    Ok(BoundReport {
        query: BoundQuery {
            phi: Some(phi.kind().to_string()),
            r: Some(r),
            ..BoundQuery::new("growth")
        },
        value: BoundValue::Pair { lower, upper },
        witness: None,
        margin: None,
    })
}

pub fn covering_report(phi: &MaMindaFunction) -> Result<BoundReport> {
    Ok(BoundReport {
        query: BoundQuery {
            phi: Some(phi.kind().to_string()),
            ..BoundQuery::new("covering")
        },
        value: BoundValue::Single(covering_radius(phi)?),
        witness: None,
        margin: None,
    })
}

pub fn kowalczyk_report(gamma: f64, r: f64) -> Result<BoundReport> {
    Ok(BoundReport {
        query: BoundQuery {
            gamma: Some(gamma),
            r: Some(r),
            ..BoundQuery::new("kowalczyk")
        },
        value: BoundValue::Kowalczyk(kowalczyk_forms(gamma, r)?),
        witness: None,
        margin: None,
    })
}
