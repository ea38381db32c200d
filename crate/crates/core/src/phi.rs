//! Ma–Minda target functions `φ(z) = 1 + B₁z + B₂z² + …` with `B₁ > 0`.
//!
//! Two families have closed forms and are used throughout:
//!
//! * `halfplane`: `(1 + z)/(1 − z)`, with `B_n = 2`;
//! * `order_gamma(γ)`: `(1 + (1 − 2γ)z)/(1 − z)`, with `B_n = 2(1 − γ)`.
//!
//! Polynomial targets are accepted for coefficient work. Distortion and
//! growth bounds need the caller's attestation that `φ(−r)` and `φ(r)` are
//! the modulus extremes on `|z| = r`, since that cannot be checked from a
//! truncation.

use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::series::{PowerSeries, SeriesError};

/// Radii of the positivity grid for `Re φ`.
pub const POSITIVITY_RADII: [f64; 3] = [0.5, 0.9, 0.95];
/// Angles per radius on the positivity grid.
pub const POSITIVITY_ANGLES: usize = 1440;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PhiError {
    #[error("gamma must lie in [0, 1), got {0}")]
    GammaOutOfRange(f64),
    #[error("B1 must be real and positive, got {0}")]
    NonPositiveB1(Complex64),
    #[error("polynomial target needs at least B1")]
    EmptyPolynomial,
    #[error("polynomial target is not attested as Ma-Minda monotone")]
    Unattested,
    #[error("polynomial target has non-real coefficients")]
    ComplexCoefficients,
    #[error("argument {0} outside the real evaluation range")]
    OutOfDomain(f64),
    #[error("radius must lie in (0, 1), got {0}")]
    RadiusOutOfRange(f64),
    #[error("cannot parse phi spec {spec:?}: {reason}")]
    Parse { spec: String, reason: String },
    #[error(transparent)]
    Series(#[from] SeriesError),
}

pub type Result<T> = std::result::Result<T, PhiError>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PhiKind {
    Halfplane,
    OrderGamma {
        gamma: f64,
    },
    /// `1 + Σ b[n-1] z^n`; `monotone` is the caller's attestation that
    /// `φ(∓r)` give the min/max of `|φ|` on `|z| = r`.
    Polynomial {
        b: Vec<Complex64>,
        monotone: bool,
    },
}

impl fmt::Display for PhiKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PhiKind::Halfplane => write!(f, "halfplane"),
            PhiKind::OrderGamma { gamma } => write!(f, "gamma:{gamma}"),
            PhiKind::Polynomial { b, monotone } => {
                let tag = if *monotone { "mpoly" } else { "poly" };
                let list: Vec<String> = b
                    .iter()
                    .map(|c| {
                        if c.im == 0.0 {
                            format!("{}", c.re)
                        } else {
                            format!("{c}")
                        }
                    })
                    .collect();
                write!(f, "{tag}:{}", list.join(","))
            }
        }
    }
}

impl FromStr for PhiKind {
    type Err = PhiError;

    /// `halfplane`, `gamma:<γ>`, `poly:<B1>,<B2>,…` or `mpoly:<B1>,…`
    /// (the latter attests monotonicity).
    fn from_str(spec: &str) -> Result<Self> {
        let bad = |reason: &str| PhiError::Parse {
            spec: spec.to_string(),
            reason: reason.to_string(),
        };
        let s = spec.trim();
        if s == "halfplane" {
            return Ok(PhiKind::Halfplane);
        }
        let (head, rest) = s.split_once(':').ok_or_else(|| bad("unknown kind"))?;
        match head {
            "gamma" => {
                let gamma: f64 = rest.trim().parse().map_err(|_| bad("gamma is not a number"))?;
                Ok(PhiKind::OrderGamma { gamma })
            }
            "poly" | "mpoly" => {
                let b = rest
                    .split(',')
                    .map(|t| Complex64::from_str(t.trim()).map_err(|_| bad("bad coefficient")))
                    .collect::<Result<Vec<_>>>()?;
                Ok(PhiKind::Polynomial {
                    b,
                    monotone: head == "mpoly",
                })
            }
            _ => Err(bad("unknown kind")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MaMindaFunction {
    kind: PhiKind,
    series: PowerSeries,
    grid_min_re: f64,
}

impl MaMindaFunction {
    pub fn new(kind: PhiKind, order: usize) -> Result<Self> {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); order + 1];
        coeffs[0] = Complex64::new(1.0, 0.0);
        match &kind {
            PhiKind::Halfplane => coeffs[1..].fill(Complex64::new(2.0, 0.0)),
            PhiKind::OrderGamma { gamma } => {
                if !(0.0..1.0).contains(gamma) {
                    return Err(PhiError::GammaOutOfRange(*gamma));
                }
                coeffs[1..].fill(Complex64::new(2.0 * (1.0 - gamma), 0.0));
            }
            PhiKind::Polynomial { b, .. } => {
                let b1 = *b.first().ok_or(PhiError::EmptyPolynomial)?;
                if !(b1.im == 0.0 && b1.re > 0.0) {
                    return Err(PhiError::NonPositiveB1(b1));
                }
                for (slot, &c) in coeffs[1..].iter_mut().zip(b) {
                    *slot = c;
                }
            }
        }
        let series = PowerSeries::new(coeffs)?;
        let mut phi = Self {
            kind,
            series,
            grid_min_re: f64::NAN,
        };
        phi.grid_min_re = phi.min_real_part_on_grid();
        Ok(phi)
    }

    pub fn halfplane(order: usize) -> Self {
        Self::new(PhiKind::Halfplane, order).expect("halfplane is always valid")
    }

    pub fn order_gamma(gamma: f64, order: usize) -> Result<Self> {
        Self::new(PhiKind::OrderGamma { gamma }, order)
    }

    pub fn kind(&self) -> &PhiKind {
        &self.kind
    }

    pub fn series(&self) -> &PowerSeries {
        &self.series
    }

    pub fn order(&self) -> usize {
        self.series.order()
    }

    /// Same target at another truncation order.
    pub fn with_order(&self, order: usize) -> Self {
        Self::new(self.kind.clone(), order).expect("kind already validated")
    }

    pub fn b1(&self) -> f64 {
        self.series.coeff(1).re
    }

    /// Series coefficient `B_n`, computed independently of the truncation
    /// order for the closed-form kinds.
    pub fn b(&self, n: usize) -> Complex64 {
        match &self.kind {
            _ if n == 0 => Complex64::new(1.0, 0.0),
            PhiKind::Halfplane => Complex64::new(2.0, 0.0),
            PhiKind::OrderGamma { gamma } => Complex64::new(2.0 * (1.0 - gamma), 0.0),
            PhiKind::Polynomial { b, .. } => b.get(n - 1).copied().unwrap_or_default(),
        }
    }

    /// Smallest `Re φ` seen on the positivity grid.
    pub fn grid_min_re(&self) -> f64 {
        self.grid_min_re
    }

    pub fn is_attested(&self) -> bool {
        match &self.kind {
            PhiKind::Polynomial { monotone, .. } => *monotone,
            _ => true,
        }
    }

    /// Closed-form value at a point of the open unit disk.
    pub fn value(&self, z: Complex64) -> Complex64 {
        let one = Complex64::new(1.0, 0.0);
        match &self.kind {
            PhiKind::Halfplane => (one + z) / (one - z),
            PhiKind::OrderGamma { gamma } => (one + (1.0 - 2.0 * gamma) * z) / (one - z),
            PhiKind::Polynomial { b, .. } => {
                b.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| (acc + c) * z) + one
            }
        }
    }

    /// `φ(t)` on the real segment. `t = −1` is accepted as the boundary
    /// limit; `t ≥ 1` is the pole for the rational kinds.
    pub fn eval_real(&self, t: f64) -> Result<f64> {
        let upper_ok = match self.kind {
            PhiKind::Polynomial { .. } => t <= 1.0,
            _ => t < 1.0,
        };
        if !(t >= -1.0 && upper_ok) {
            return Err(PhiError::OutOfDomain(t));
        }
        match &self.kind {
            PhiKind::Halfplane => Ok((1.0 + t) / (1.0 - t)),
            PhiKind::OrderGamma { gamma } => Ok((1.0 + (1.0 - 2.0 * gamma) * t) / (1.0 - t)),
            PhiKind::Polynomial { b, .. } => {
                if b.iter().any(|c| c.im != 0.0) {
                    return Err(PhiError::ComplexCoefficients);
                }
                Ok(b.iter().rev().fold(0.0, |acc, c| (acc + c.re) * t) + 1.0)
            }
        }
    }

    /// `(φ(−r), φ(r))`, the modulus extremes on `|z| = r`.
    pub fn minmax(&self, r: f64) -> Result<(f64, f64)> {
        if !(r > 0.0 && r < 1.0) {
            return Err(PhiError::RadiusOutOfRange(r));
        }
        if !self.is_attested() {
            return Err(PhiError::Unattested);
        }
        Ok((self.eval_real(-r)?, self.eval_real(r)?))
    }

    /// `φ ∘ w` as a series. The rational kinds go through a reciprocal,
    /// which is quadratic in the order; polynomials use Horner.
    pub fn compose(&self, w: &PowerSeries) -> Result<PowerSeries> {
        let n = w.order();
        let one = PowerSeries::one(n);
        let out = match &self.kind {
            PhiKind::Halfplane => {
                let den = one.sub(w)?.reciprocal()?;
                one.add(w)?.mul(&den)?
            }
            PhiKind::OrderGamma { gamma } => {
                let den = one.sub(w)?.reciprocal()?;
                let num = one.add(&w.scale(Complex64::new(1.0 - 2.0 * gamma, 0.0)))?;
                num.mul(&den)?
            }
            PhiKind::Polynomial { .. } => self.with_order(n).series.compose(w)?,
        };
        Ok(out)
    }

    fn min_real_part_on_grid(&self) -> f64 {
        let mut min = f64::INFINITY;
        for &r in &POSITIVITY_RADII {
            for j in 0..POSITIVITY_ANGLES {
                let theta = TAU * j as f64 / POSITIVITY_ANGLES as f64;
                min = min.min(self.value(Complex64::from_polar(r, theta)).re);
            }
        }
        min
    }
}
