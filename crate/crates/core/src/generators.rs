//! Constructors for the data that defines a member of `K_s(φ)`.
//!
//! A member `f` is determined by a starlike function `g` of order 1/2, a
//! Schwarz map `w` and a target `φ` through
//!
//! ```text
//! −z² f′(z) / (g(z) g(−z)) = φ(w(z)),
//! ```
//!
//! so `f′ = (G(z)/z)·φ(w(z))` with the odd starlike function
//! `G(z) = −g(z)g(−z)/z`. Writing `g = z·h`, `G/z = h(z)h(−z)`, and every
//! division by a power of `z` happens by index shift.

use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::phi::{MaMindaFunction, PhiError, PhiKind};
use crate::series::{PowerSeries, SeriesError, COEFF_TOL};

/// Tolerance on atom moduli and on the total weight.
pub const ATOM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeneratorError {
    #[error("at least one atom is required")]
    NoAtoms,
    #[error("atom {index} is not unimodular: |x| = {modulus}")]
    NotUnimodular { index: usize, modulus: f64 },
    #[error("atom {index} has non-positive weight {weight}")]
    NonPositiveWeight { index: usize, weight: f64 },
    #[error("atom weights sum to {0}, expected 1")]
    WeightSum(f64),
    #[error("monomial power must be at least 1")]
    ZeroPower,
    #[error("rotation radius must lie in [0, 1), got {0}")]
    RadiusOutOfRange(f64),
    #[error("Blaschke zero {0} is not inside the unit disk")]
    ZeroOutsideDisk(Complex64),
    #[error("order mismatch between g ({g}), w ({w}) and phi ({phi})")]
    OrderMismatch { g: usize, w: usize, phi: usize },
    #[error("truncation order must be at least 3, got {0}")]
    OrderTooSmall(usize),
    #[error("cannot parse {what} spec {spec:?}")]
    Parse { what: &'static str, spec: String },
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Phi(#[from] PhiError),
}

pub type Result<T> = std::result::Result<T, GeneratorError>;

/// One Herglotz atom: the factor `(1 − x z)^{−λ}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub x: Complex64,
    pub weight: f64,
}

/// `g(z) = z ∏ (1 − x_k z)^{−λ_k}` with `|x_k| = 1`, `λ_k > 0`, `Σ λ_k = 1`.
///
/// Then `z g′/g = Σ λ_k / (1 − x_k z)`, whose real part exceeds 1/2 on the
/// disk, so every such `g` is starlike of order 1/2.
#[derive(Debug, Clone, PartialEq)]
pub struct StarlikeAtomic {
    atoms: Vec<Atom>,
    /// `g(z)/z`, one order below `g`.
    h: PowerSeries,
}

impl StarlikeAtomic {
    pub fn new(atoms: Vec<Atom>, order: usize) -> Result<Self> {
        if order < 3 {
            return Err(GeneratorError::OrderTooSmall(order));
        }
        if atoms.is_empty() {
            return Err(GeneratorError::NoAtoms);
        }
        for (index, a) in atoms.iter().enumerate() {
            let modulus = a.x.norm();
            if (modulus - 1.0).abs() > ATOM_TOL {
                return Err(GeneratorError::NotUnimodular { index, modulus });
            }
            if !(a.weight > 0.0) {
                return Err(GeneratorError::NonPositiveWeight {
                    index,
                    weight: a.weight,
                });
            }
        }
        let total: f64 = atoms.iter().map(|a| a.weight).sum();
        if (total - 1.0).abs() > ATOM_TOL {
            return Err(GeneratorError::WeightSum(total));
        }
        let mut h = PowerSeries::one(order - 1);
        for a in &atoms {
            h = h.mul(&binomial_factor(a.x, a.weight, order - 1))?;
        }
        Ok(Self { atoms, h })
    }

    /// `z/(1 − z)`.
    pub fn koebe_half(order: usize) -> Result<Self> {
        Self::new(
            vec![Atom {
                x: Complex64::new(1.0, 0.0),
                weight: 1.0,
            }],
            order,
        )
    }

    /// `z/√(1 + z²)`.
    pub fn odd_root(order: usize) -> Result<Self> {
        let i = Complex64::new(0.0, 1.0);
        Self::new(
            vec![Atom { x: i, weight: 0.5 }, Atom { x: -i, weight: 0.5 }],
            order,
        )
    }

    /// 1–4 atoms, uniform positions on the circle, flat simplex weights.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, order: usize) -> Result<Self> {
        let count = rng.random_range(1..=4);
        let mut atoms = Vec::with_capacity(count);
        for _ in 0..count {
            let theta = rng.random_range(0.0..TAU);
            let e = -rng.random_range(f64::MIN_POSITIVE..1.0f64).ln();
            atoms.push(Atom {
                x: Complex64::from_polar(1.0, theta),
                weight: e,
            });
        }
        let total: f64 = atoms.iter().map(|a| a.weight).sum();
        for a in &mut atoms {
            a.weight /= total;
        }
        Self::new(atoms, order)
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn order(&self) -> usize {
        self.h.order() + 1
    }

    pub fn with_order(&self, order: usize) -> Result<Self> {
        Self::new(self.atoms.clone(), order)
    }

    /// Series of `g`.
    pub fn series(&self) -> PowerSeries {
        self.h.mul_z_pow(1)
    }

    /// Series of `g(z)/z`.
    pub fn over_z(&self) -> &PowerSeries {
        &self.h
    }

    pub fn g2(&self) -> Complex64 {
        self.h.coeff(1)
    }

    pub fn g3(&self) -> Complex64 {
        self.h.coeff(2)
    }

    /// Closed-form value `z ∏ (1 − x z)^{−λ}` (principal branch).
    pub fn value(&self, z: Complex64) -> Complex64 {
        let one = Complex64::new(1.0, 0.0);
        z * self
            .atoms
            .iter()
            .map(|a| (-a.weight * (one - a.x * z).ln()).exp())
            .product::<Complex64>()
    }

    /// `Re(z g′(z)/g(z))` from the atomic form.
    pub fn starlike_real_part(&self, z: Complex64) -> f64 {
        let one = Complex64::new(1.0, 0.0);
        self.atoms
            .iter()
            .map(|a| (a.weight / (one - a.x * z)).re)
            .sum()
    }

    /// `G(z) = −g(z)g(−z)/z = z·h(z)h(−z)`, an odd series of the same order.
    pub fn odd_companion(&self) -> PowerSeries {
        self.g_over_z_even_part().mul_z_pow(1)
    }

    /// `G(z)/z = h(z)h(−z)`, one order below `g`.
    pub fn g_over_z_even_part(&self) -> PowerSeries {
        self.h
            .mul(&self.h.reflect())
            .expect("reflection preserves order")
    }

    pub fn spec(&self) -> String {
        let list: Vec<String> = self
            .atoms
            .iter()
            .map(|a| format!("{}@{}", a.x, a.weight))
            .collect();
        format!("atoms:{}", list.join(","))
    }

    /// Parses `atoms:<x>@<λ>,<x>@<λ>,…`.
    pub fn parse(spec: &str, order: usize) -> Result<Self> {
        let bad = || GeneratorError::Parse {
            what: "g",
            spec: spec.to_string(),
        };
        let rest = spec.trim().strip_prefix("atoms:").ok_or_else(bad)?;
        let atoms = rest
            .split(',')
            .map(|item| {
                let (x, w) = item.split_once('@').ok_or_else(bad)?;
                let x = parse_complex(x).ok_or_else(bad)?;
                let weight: f64 = w.trim().parse().map_err(|_| bad())?;
                Ok(Atom { x, weight })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(atoms, order)
    }
}

/// Coefficients of `(1 − x z)^{−λ}` via `c_n = c_{n−1}·x·(λ + n − 1)/n`.
fn binomial_factor(x: Complex64, lambda: f64, order: usize) -> PowerSeries {
    let mut coeffs = Vec::with_capacity(order + 1);
    let mut c = Complex64::new(1.0, 0.0);
    coeffs.push(c);
    for n in 1..=order {
        c = c * x * ((lambda + n as f64 - 1.0) / n as f64);
        coeffs.push(c);
    }
    PowerSeries::new(coeffs).expect("finite by construction")
}

/// Complex literal parsing that also accepts bare `i` and `-i`.
pub(crate) fn parse_complex(s: &str) -> Option<Complex64> {
    let s = s.trim();
    match s {
        "i" | "+i" => Some(Complex64::new(0.0, 1.0)),
        "-i" => Some(Complex64::new(0.0, -1.0)),
        _ => Complex64::from_str(s).ok(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SchwarzKind {
    /// `e^{iθ} z^k`.
    Monomial { k: usize, theta: f64 },
    /// `ρ e^{iθ} z`.
    Scaled { rho: f64, theta: f64 },
    /// `z ∏ (z − a_j)/(1 − ā_j z)`.
    Blaschke { zeros: Vec<Complex64> },
}

impl fmt::Display for SchwarzKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SchwarzKind::Monomial { k, theta } => write!(f, "mono:{k},{theta}"),
            SchwarzKind::Scaled { rho, theta } => write!(f, "rot:{rho},{theta}"),
            SchwarzKind::Blaschke { zeros } => {
                let list: Vec<String> = zeros.iter().map(|a| a.to_string()).collect();
                write!(f, "blaschke:{}", list.join(","))
            }
        }
    }
}

impl FromStr for SchwarzKind {
    type Err = GeneratorError;

    /// `mono:<k>[,<θ>]`, `rot:<ρ>,<θ>` or `blaschke:<a1>[,<a2>…]`.
    fn from_str(spec: &str) -> Result<Self> {
        let bad = || GeneratorError::Parse {
            what: "w",
            spec: spec.to_string(),
        };
        let (head, rest) = spec.trim().split_once(':').ok_or_else(bad)?;
        let parts: Vec<&str> = rest.split(',').map(str::trim).collect();
        let real = |s: &str| s.parse::<f64>().map_err(|_| bad());
        match head {
            "mono" => {
                let k: usize = parts[0].parse().map_err(|_| bad())?;
                let theta = match parts.get(1) {
                    Some(t) => real(t)?,
                    None => 0.0,
                };
                if parts.len() > 2 {
                    return Err(bad());
                }
                Ok(SchwarzKind::Monomial { k, theta })
            }
            "rot" => {
                if parts.len() != 2 {
                    return Err(bad());
                }
                Ok(SchwarzKind::Scaled {
                    rho: real(parts[0])?,
                    theta: real(parts[1])?,
                })
            }
            "blaschke" => {
                let zeros = parts
                    .iter()
                    .map(|p| parse_complex(p).ok_or_else(bad))
                    .collect::<Result<Vec<_>>>()?;
                Ok(SchwarzKind::Blaschke { zeros })
            }
            _ => Err(bad()),
        }
    }
}

/// An analytic self-map of the disk fixing the origin.
#[derive(Debug, Clone, PartialEq)]
pub struct SchwarzMap {
    kind: SchwarzKind,
    series: PowerSeries,
}

impl SchwarzMap {
    pub fn new(kind: SchwarzKind, order: usize) -> Result<Self> {
        let series = match &kind {
            SchwarzKind::Monomial { k, theta } => {
                if *k == 0 {
                    return Err(GeneratorError::ZeroPower);
                }
                PowerSeries::monomial(order, *k, Complex64::from_polar(1.0, *theta))
            }
            SchwarzKind::Scaled { rho, theta } => {
                if !(0.0..1.0).contains(rho) {
                    return Err(GeneratorError::RadiusOutOfRange(*rho));
                }
                PowerSeries::monomial(order, 1, Complex64::from_polar(*rho, *theta))
            }
            SchwarzKind::Blaschke { zeros } => {
                let mut prod = PowerSeries::one(order);
                for &a in zeros {
                    if !(a.norm() < 1.0) {
                        return Err(GeneratorError::ZeroOutsideDisk(a));
                    }
                    let linear = PowerSeries::from_prefix(&[-a, Complex64::new(1.0, 0.0)], order)?;
                    let factor = linear.mul(&PowerSeries::geometric(order, a.conj()))?;
                    prod = prod.mul(&factor)?;
                }
                prod.with_order(order.saturating_sub(1)).mul_z_pow(1)
            }
        };
        Ok(Self { kind, series })
    }

    pub fn identity(order: usize) -> Self {
        Self::new(SchwarzKind::Monomial { k: 1, theta: 0.0 }, order).expect("valid")
    }

    /// Uniform over {monomial k ≤ 3, scaled rotation ρ ≤ 0.9, one-factor
    /// Blaschke |a| ≤ 0.8}, with uniform phases.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, order: usize) -> Result<Self> {
        let theta = rng.random_range(0.0..TAU);
        let kind = match rng.random_range(0..3) {
            0 => SchwarzKind::Monomial {
                k: rng.random_range(1..=3),
                theta,
            },
            1 => SchwarzKind::Scaled {
                rho: rng.random_range(0.0..=0.9),
                theta,
            },
            _ => {
                let r = 0.8 * rng.random_range(0.0..1.0f64).sqrt();
                SchwarzKind::Blaschke {
                    zeros: vec![Complex64::from_polar(r, theta)],
                }
            }
        };
        Self::new(kind, order)
    }

    pub fn kind(&self) -> &SchwarzKind {
        &self.kind
    }

    pub fn series(&self) -> &PowerSeries {
        &self.series
    }

    pub fn order(&self) -> usize {
        self.series.order()
    }

    pub fn with_order(&self, order: usize) -> Self {
        Self::new(self.kind.clone(), order).expect("kind already validated")
    }

    pub fn w1(&self) -> Complex64 {
        self.series.coeff(1)
    }

    pub fn w2(&self) -> Complex64 {
        self.series.coeff(2)
    }

    /// Closed-form value.
    pub fn value(&self, z: Complex64) -> Complex64 {
        let one = Complex64::new(1.0, 0.0);
        match &self.kind {
            SchwarzKind::Monomial { k, theta } => Complex64::from_polar(1.0, *theta) * z.powu(*k as u32),
            SchwarzKind::Scaled { rho, theta } => Complex64::from_polar(*rho, *theta) * z,
            SchwarzKind::Blaschke { zeros } => {
                z * zeros
                    .iter()
                    .map(|&a| (z - a) / (one - a.conj() * z))
                    .product::<Complex64>()
            }
        }
    }
}

/// The data a member was built from, in serializable form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub g: Vec<Atom>,
    pub w: SchwarzKind,
    pub phi: PhiKind,
}

impl Provenance {
    /// Rebuilds the member at the given order.
    pub fn rebuild(&self, order: usize) -> Result<ClassMember> {
        let g = StarlikeAtomic::new(self.g.clone(), order)?;
        let w = SchwarzMap::new(self.w.clone(), order)?;
        let phi = MaMindaFunction::new(self.phi.clone(), order)?;
        ClassMember::from_parts(g, w, phi)
    }
}

/// A member `f ∈ K_s(φ)` together with the `(g, w, φ)` that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassMember {
    f: PowerSeries,
    g: StarlikeAtomic,
    w: SchwarzMap,
    phi: MaMindaFunction,
}

impl ClassMember {
    /// Solves `−z²f′/(g(z)g(−z)) = φ(w(z))` for `f`.
    pub fn from_parts(g: StarlikeAtomic, w: SchwarzMap, phi: MaMindaFunction) -> Result<Self> {
        let n = g.order();
        if w.order() != n || phi.order() != n {
            return Err(GeneratorError::OrderMismatch {
                g: n,
                w: w.order(),
                phi: phi.order(),
            });
        }
        let phi_w = phi.compose(w.series())?.with_order(n - 1);
        let f = g.g_over_z_even_part().mul(&phi_w)?.antiderivative();
        Ok(Self { f, g, w, phi })
    }

    pub fn extremal(kind: ExtremalKind, phi: &MaMindaFunction) -> Result<Self> {
        let n = phi.order();
        let (g, w) = match kind {
            ExtremalKind::FsMax => (StarlikeAtomic::koebe_half(n)?, SchwarzMap::identity(n)),
            ExtremalKind::FsOdd => (
                StarlikeAtomic::koebe_half(n)?,
                SchwarzMap::new(SchwarzKind::Monomial { k: 2, theta: 0.0 }, n)?,
            ),
            ExtremalKind::DistMin => (StarlikeAtomic::odd_root(n)?, SchwarzMap::identity(n)),
        };
        Self::from_parts(g, w, phi.clone())
    }

    pub fn f(&self) -> &PowerSeries {
        &self.f
    }

    pub fn g(&self) -> &StarlikeAtomic {
        &self.g
    }

    pub fn w(&self) -> &SchwarzMap {
        &self.w
    }

    pub fn phi(&self) -> &MaMindaFunction {
        &self.phi
    }

    pub fn order(&self) -> usize {
        self.f.order()
    }

    pub fn a2(&self) -> Complex64 {
        self.f.coeff(2)
    }

    pub fn a3(&self) -> Complex64 {
        self.f.coeff(3)
    }

    pub fn provenance(&self) -> Provenance {
        Provenance {
            g: self.g.atoms().to_vec(),
            w: self.w.kind().clone(),
            phi: self.phi.kind().clone(),
        }
    }

    /// `(|2a₂ − B₁w₁|, |3a₃ − (2g₃ − g₂² + B₁w₂ + B₂w₁²)|)`.
    pub fn identity_residuals(&self) -> (f64, f64) {
        let (b1, b2) = (self.phi.b(1), self.phi.b(2));
        let (w1, w2) = (self.w.w1(), self.w.w2());
        let (g2, g3) = (self.g.g2(), self.g.g3());
        let r2 = (2.0 * self.a2() - b1 * w1).norm();
        let r3 = (3.0 * self.a3() - (2.0 * g3 - g2 * g2 + b1 * w2 + b2 * w1 * w1)).norm();
        (r2, r3)
    }

    /// Largest coefficient of `−z²f′/(g(z)g(−z)) − φ(w(z))`, with the
    /// quotient formed by index shift and a series reciprocal.
    pub fn defining_residual(&self) -> Result<f64> {
        let n = self.order();
        let p = self.f.derivative().mul(&self.g.g_over_z_even_part().reciprocal()?)?;
        let phi_w = self.phi.series().compose(self.w.series())?.with_order(n - 1);
        Ok(p.max_abs_diff(&phi_w)?)
    }

    /// True when both coefficient identities hold to [`COEFF_TOL`].
    pub fn identities_hold(&self) -> bool {
        let (r2, r3) = self.identity_residuals();
        r2 <= COEFF_TOL && r3 <= COEFF_TOL
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtremalKind {
    /// `g = z/(1−z)`, `w = z`.
    FsMax,
    /// `g = z/(1−z)`, `w = z²`.
    FsOdd,
    /// `g = z/√(1+z²)`, `w = z`.
    DistMin,
}

impl fmt::Display for ExtremalKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::FsMax => "fs_max",
            Self::FsOdd => "fs_odd",
            Self::DistMin => "dist_min",
        })
    }
}

impl FromStr for ExtremalKind {
    type Err = GeneratorError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fs_max" => Ok(Self::FsMax),
            "fs_odd" => Ok(Self::FsOdd),
            "dist_min" => Ok(Self::DistMin),
            _ => Err(GeneratorError::Parse {
                what: "extremal kind",
                spec: s.to_string(),
            }),
        }
    }
}
