//! Truncated complex power series about the origin.
//!
//! A [`PowerSeries`] of order `N` stores the coefficients `c_0..=c_N` of
//! `Σ c_k z^k`. Every operation here is exact up to truncation: coefficient
//! `k` of a product, reciprocal, composition or inverse depends only on input
//! coefficients of index `≤ k`, so nothing below the truncation degree is
//! ever contaminated by the discarded tail.
//!
//! Evaluation is limited to `|z| ≤ 0.95` and always reports an estimate of the
//! discarded tail, assuming the coefficients grow at most linearly
//! (`|c_k| ≤ C·k`, with `C` measured from the stored coefficients).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default truncation degree.
pub const DEFAULT_ORDER: usize = 24;

/// Absolute tolerance for coefficient comparisons.
pub const COEFF_TOL: f64 = 1e-12;

/// Largest modulus accepted by [`PowerSeries::evaluate`].
pub const MAX_EVAL_RADIUS: f64 = 0.95;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SeriesError {
    #[error("order mismatch: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },
    #[error("series has zero constant term and cannot be inverted")]
    Singular,
    #[error("inner series must vanish at the origin, got c0 = {0}")]
    InnerNotAtOrigin(Complex64),
    #[error("series is not normalized (need c0 = 0, c1 = 1), got c0 = {c0}, c1 = {c1}")]
    NotNormalized { c0: Complex64, c1: Complex64 },
    #[error("outer series has c0 = {outer} but target has c0 = {target}")]
    ConstantMismatch { outer: Complex64, target: Complex64 },
    #[error("leading coefficient c1 vanishes")]
    DegenerateLinearTerm,
    #[error("|z| = {0} exceeds the evaluation radius {MAX_EVAL_RADIUS}")]
    OutsideRadius(f64),
    #[error("non-finite coefficient at index {0}")]
    NonFinite(usize),
    #[error("coefficient list is empty")]
    Empty,
    #[error("cannot divide by z^{power}: coefficient {index} is {value}")]
    NotDivisible {
        power: usize,
        index: usize,
        value: Complex64,
    },
}

pub type Result<T> = std::result::Result<T, SeriesError>;

/// A point value together with a bound on the truncated tail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation {
    pub value: Complex64,
    pub tail: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Complex64>", into = "Vec<Complex64>")]
pub struct PowerSeries {
    coeffs: Vec<Complex64>,
}

impl TryFrom<Vec<Complex64>> for PowerSeries {
    type Error = SeriesError;

    fn try_from(coeffs: Vec<Complex64>) -> Result<Self> {
        Self::new(coeffs)
    }
}

impl From<PowerSeries> for Vec<Complex64> {
    fn from(s: PowerSeries) -> Self {
        s.coeffs
    }
}

impl PowerSeries {
    /// Builds a series from `c_0..=c_N`; the order is `coeffs.len() - 1`.
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(SeriesError::Empty);
        }
        if let Some(i) = coeffs.iter().position(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(SeriesError::NonFinite(i));
        }
        Ok(Self { coeffs })
    }

    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// Builds a series of the given order from a prefix, zero-filling the rest.
    pub fn from_prefix(prefix: &[Complex64], order: usize) -> Result<Self> {
        let mut coeffs = vec![ZERO; order + 1];
        for (slot, &c) in coeffs.iter_mut().zip(prefix) {
            *slot = c;
        }
        Self::new(coeffs)
    }

    pub fn zero(order: usize) -> Self {
        Self {
            coeffs: vec![ZERO; order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        Self::monomial(order, 0, ONE)
    }

    /// The identity map `z`.
    pub fn identity(order: usize) -> Self {
        Self::monomial(order, 1, ONE)
    }

    /// `c·z^k`, truncated to `order` (zero if `k > order`).
    pub fn monomial(order: usize, k: usize, c: Complex64) -> Self {
        let mut s = Self::zero(order);
        if k <= order {
            s.coeffs[k] = c;
        }
        s
    }

    /// The geometric series `Σ (x z)^k`, i.e. `1/(1 - x z)`.
    pub fn geometric(order: usize, x: Complex64) -> Self {
        let mut coeffs = Vec::with_capacity(order + 1);
        let mut p = ONE;
        for _ in 0..=order {
            coeffs.push(p);
            p *= x;
        }
        Self { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Coefficient `k`, or zero beyond the truncation degree.
    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or(ZERO)
    }

    /// Keeps coefficients up to `order`, zero-padding if the series is shorter.
    pub fn with_order(&self, order: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(order + 1, ZERO);
        Self { coeffs }
    }

    fn check_same_order(&self, other: &Self) -> Result<()> {
        if self.order() != other.order() {
            return Err(SeriesError::OrderMismatch {
                left: self.order(),
                right: other.order(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_order(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(Self { coeffs })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_order(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        Ok(Self { coeffs })
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Cauchy product truncated to the common order.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same_order(other)?;
        Ok(Self {
            coeffs: cauchy(&self.coeffs, &other.coeffs, self.order()),
        })
    }

    /// Multiplicative inverse; requires `c_0 ≠ 0`.
    pub fn reciprocal(&self) -> Result<Self> {
        let a0 = self.coeffs[0];
        if a0 == ZERO {
            return Err(SeriesError::Singular);
        }
        let inv0 = a0.inv();
        let n = self.order();
        let mut out = Vec::with_capacity(n + 1);
        out.push(inv0);
        for k in 1..=n {
            let s: Complex64 = (1..=k).map(|j| self.coeffs[j] * out[k - j]).sum();
            out.push(-s * inv0);
        }
        Ok(Self { coeffs: out })
    }

    /// `outer ∘ inner`, requiring `inner(0) = 0`.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        self.check_same_order(inner)?;
        if inner.coeffs[0] != ZERO {
            return Err(SeriesError::InnerNotAtOrigin(inner.coeffs[0]));
        }
        let n = self.order();
        let top = match self.coeffs.iter().rposition(|c| *c != ZERO) {
            Some(t) => t,
            None => return Ok(Self::zero(n)),
        };
        // Horner in the series ring.
        let mut acc = Self::monomial(n, 0, self.coeffs[top]);
        for k in (0..top).rev() {
            acc = acc.mul(inner)?;
            acc.coeffs[0] += self.coeffs[k];
        }
        Ok(acc)
    }

    /// Finds `w` with `w(0) = 0` and `self ∘ w = target`.
    ///
    /// Coefficients are matched degree by degree, so only powers of `w`
    /// (never powers of an inverse series) enter the recursion. When the
    /// answer is a bounded map this stays well conditioned even where the
    /// formal inverse of `self` has rapidly growing coefficients.
    pub fn solve_inner(&self, target: &Self) -> Result<Self> {
        self.check_same_order(target)?;
        let n = self.order();
        let f1 = self.coeffs.get(1).copied().unwrap_or(ZERO);
        if f1 == ZERO {
            return Err(SeriesError::DegenerateLinearTerm);
        }
        let (c_outer, c_target) = (self.coeffs[0], target.coeffs[0]);
        if (c_outer - c_target).norm() > COEFF_TOL * (1.0 + c_outer.norm()) {
            return Err(SeriesError::ConstantMismatch {
                outer: c_outer,
                target: c_target,
            });
        }
        let inv_f1 = f1.inv();
        // powers[k][m] = [z^m] w^k
        let mut powers = vec![vec![ZERO; n + 1]; n + 1];
        let mut w = vec![ZERO; n + 1];
        for m in 1..=n {
            let mut acc = ZERO;
            for k in 2..=m {
                let mut p = ZERO;
                for j in 1..=(m - k + 1) {
                    p += w[j] * powers[k - 1][m - j];
                }
                powers[k][m] = p;
                acc += self.coeffs[k] * p;
            }
            w[m] = (target.coeffs[m] - acc) * inv_f1;
            powers[1][m] = w[m];
        }
        Self::new(w)
    }

    /// Compositional inverse of a normalized series `z + c_2 z^2 + …`.
    pub fn functional_inverse(&self) -> Result<Self> {
        let (c0, c1) = (self.coeff(0), self.coeff(1));
        if self.order() < 1 || c0.norm() > COEFF_TOL || (c1 - ONE).norm() > COEFF_TOL {
            return Err(SeriesError::NotNormalized { c0, c1 });
        }
        self.solve_inner(&Self::identity(self.order()))
    }

    /// Term-wise derivative; the order drops by one.
    pub fn derivative(&self) -> Self {
        if self.order() == 0 {
            return Self::zero(0);
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * k as f64)
            .collect();
        Self { coeffs }
    }

    /// Antiderivative vanishing at 0; the order grows by one.
    pub fn antiderivative(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(ZERO);
        coeffs.extend(self.coeffs.iter().enumerate().map(|(k, c)| c / (k + 1) as f64));
        Self { coeffs }
    }

    /// `z ↦ a(−z)`.
    pub fn reflect(&self) -> Self {
        self.dilate(Complex64::new(-1.0, 0.0))
    }

    /// `z ↦ a(λ z)`.
    pub fn dilate(&self, lambda: Complex64) -> Self {
        let mut p = ONE;
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| {
                let out = c * p;
                p *= lambda;
                out
            })
            .collect();
        Self { coeffs }
    }

    /// Multiplies by `z^k`; the order grows by `k`.
    pub fn mul_z_pow(&self, k: usize) -> Self {
        let mut coeffs = vec![ZERO; k];
        coeffs.extend_from_slice(&self.coeffs);
        Self { coeffs }
    }

    /// Divides by `z^k` by index shift; the order drops by `k`. The first
    /// `k` coefficients must vanish to [`COEFF_TOL`].
    pub fn div_z_pow(&self, k: usize) -> Result<Self> {
        if k > self.order() {
            return Err(SeriesError::Empty);
        }
        if let Some((index, value)) = self.coeffs[..k]
            .iter()
            .enumerate()
            .find(|(_, c)| c.norm() > COEFF_TOL)
        {
            return Err(SeriesError::NotDivisible {
                power: k,
                index,
                value: *value,
            });
        }
        Ok(Self {
            coeffs: self.coeffs[k..].to_vec(),
        })
    }

    /// Partial sum at `z` plus a tail estimate, for `|z| ≤ 0.95`.
    pub fn evaluate(&self, z: Complex64) -> Result<Evaluation> {
        let r = z.norm();
        if r > MAX_EVAL_RADIUS + 1e-15 {
            return Err(SeriesError::OutsideRadius(r));
        }
        Ok(Evaluation {
            value: self.horner(z),
            tail: self.tail_bound(r),
        })
    }

    /// Partial sum without the radius check.
    pub(crate) fn horner(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(ZERO, |acc, c| acc * z + c)
    }

    /// Smallest `C` with `|c_k| ≤ C·k` over the upper half of the stored
    /// coefficients, which is what governs the discarded tail. Fitting the
    /// low coefficients too would make every polynomial look like it has a
    /// large tail.
    pub fn growth_constant(&self) -> f64 {
        let start = (self.order() / 2).max(1);
        self.coeffs
            .iter()
            .enumerate()
            .skip(start)
            .map(|(k, c)| c.norm() / k as f64)
            .fold(0.0, f64::max)
    }

    /// Bound on `Σ_{k>N} |c_k| r^k` under the linear-growth model.
    pub fn tail_bound(&self, r: f64) -> f64 {
        self.growth_constant() * linear_tail_sum(self.order(), r)
    }

    /// Largest coefficientwise distance; the orders must agree.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.check_same_order(other)?;
        Ok(self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }
}

/// `Σ_{k=n+1}^∞ k r^k`.
pub fn linear_tail_sum(n: usize, r: f64) -> f64 {
    if r <= 0.0 {
        return 0.0;
    }
    let n = n as f64;
    r.powf(n + 1.0) * ((n + 1.0) - n * r) / ((1.0 - r) * (1.0 - r))
}

/// Smallest order whose linear-growth tail at radius `r` is below `tol`.
pub fn required_order(r: f64, growth: f64, tol: f64) -> usize {
    (1..=100_000)
        .find(|&n| growth * linear_tail_sum(n, r) <= tol)
        .unwrap_or(100_000)
}

fn cauchy(a: &[Complex64], b: &[Complex64], n: usize) -> Vec<Complex64> {
    let mut out = vec![ZERO; n + 1];
    for (i, &ai) in a.iter().enumerate().take(n + 1) {
        if ai == ZERO {
            continue;
        }
        for (j, &bj) in b.iter().enumerate().take(n + 1 - i) {
            out[i + j] += ai * bj;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn real(xs: &[f64]) -> PowerSeries {
        PowerSeries::from_real(xs).unwrap()
    }

    fn assert_close(a: &PowerSeries, b: &PowerSeries, tol: f64) {
        let d = a.max_abs_diff(b).unwrap();
        assert!(d <= tol, "diff {d:e} > {tol:e}\n{a:?}\n{b:?}");
    }

    #[test]
    fn mul_examples() {
        let s = real(&[1.0, 1.0, 0.0]);
        assert_close(&s.mul(&s).unwrap(), &real(&[1.0, 2.0, 1.0]), 0.0);

        let g = real(&[0.0, 1.0, 1.0, 1.0, 0.0]);
        let gm = real(&[0.0, -1.0, 1.0, -1.0, 0.0]);
        assert_close(&g.mul(&gm).unwrap(), &real(&[0.0, 0.0, -1.0, 0.0, -1.0]), 0.0);

        let a = PowerSeries::new(vec![c(0.3, 1.0), c(-2.0, 0.5), c(0.0, 4.0)]).unwrap();
        assert_eq!(a.mul(&PowerSeries::one(2)).unwrap(), a);
    }

    #[test]
    fn mul_rejects_order_mismatch() {
        let err = PowerSeries::one(3).mul(&PowerSeries::one(4)).unwrap_err();
        assert_eq!(err, SeriesError::OrderMismatch { left: 3, right: 4 });
    }

    #[test]
    fn reciprocal_examples() {
        let r = real(&[1.0, -1.0, 0.0, 0.0, 0.0]).reciprocal().unwrap();
        assert_close(&r, &real(&[1.0; 5]), 0.0);
        let r = real(&[1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0]).reciprocal().unwrap();
        assert_close(&r, &real(&[1.0, 0.0, -1.0, 0.0, 1.0, 0.0, -1.0]), 0.0);
        assert_eq!(
            real(&[0.0, 1.0, 2.0]).reciprocal().unwrap_err(),
            SeriesError::Singular
        );
    }

    #[test]
    fn compose_examples() {
        let phi = real(&[1.0, 2.0, 2.0, 0.0]);
        let w = real(&[0.0, 0.5, 0.25, 0.0]);
        let out = phi.compose(&w).unwrap();
        assert!((out.coeff(1) - c(1.0, 0.0)).norm() < COEFF_TOL);
        assert!((out.coeff(2) - c(1.0, 0.0)).norm() < COEFF_TOL);

        let f = real(&[0.0, 1.0, 0.3, -0.7, 0.2]);
        assert_close(&f.compose(&PowerSeries::identity(4)).unwrap(), &f, 0.0);

        let geo = PowerSeries::geometric(8, c(1.0, 0.0));
        let z2 = PowerSeries::monomial(8, 2, c(1.0, 0.0));
        assert_close(
            &geo.compose(&z2).unwrap(),
            &real(&[1.0, 0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 0.0, 1.0]),
            0.0,
        );

        let err = f.compose(&real(&[1.0, 1.0, 0.0, 0.0, 0.0])).unwrap_err();
        assert!(matches!(err, SeriesError::InnerNotAtOrigin(_)));
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(real(&[0.0, 1.0, 1.0, 1.0]).derivative(), real(&[1.0, 2.0, 3.0]));
        assert_eq!(real(&[1.0, 0.0, 0.0]).derivative(), real(&[0.0, 0.0]));
        let d = real(&[0.0, 1.0, 0.3, 0.1]).derivative();
        assert_close(&d, &real(&[1.0, 0.6, 0.3]), 1e-15);
    }

    #[test]
    fn antiderivative_examples() {
        assert_eq!(real(&[1.0, 2.0, 3.0]).antiderivative(), real(&[0.0, 1.0, 1.0, 1.0]));
        assert_eq!(PowerSeries::zero(3).antiderivative(), PowerSeries::zero(4));
        // 1 + B1 z + (1 + B2) z^2 with B1 = B2 = 2
        assert_close(
            &real(&[1.0, 2.0, 3.0]).antiderivative(),
            &real(&[0.0, 1.0, 1.0, 1.0]),
            1e-15,
        );
    }

    #[test]
    fn functional_inverse_examples() {
        let id = PowerSeries::identity(6);
        assert_close(&id.functional_inverse().unwrap(), &id, 0.0);

        // z/(1-z) inverts to w/(1+w)
        let mut koebe_like = vec![c(0.0, 0.0)];
        koebe_like.extend(std::iter::repeat_n(c(1.0, 0.0), 10));
        let inv = PowerSeries::new(koebe_like).unwrap().functional_inverse().unwrap();
        let expected: Vec<f64> = (0..=10)
            .map(|k| if k == 0 { 0.0 } else if k % 2 == 1 { 1.0 } else { -1.0 })
            .collect();
        assert_close(&inv, &real(&expected), 1e-13);

        let (a2, a3) = (c(0.3, -0.2), c(0.1, 0.4));
        let f = PowerSeries::new(vec![c(0.0, 0.0), c(1.0, 0.0), a2, a3]).unwrap();
        let inv = f.functional_inverse().unwrap();
        assert!((inv.coeff(2) + a2).norm() < COEFF_TOL);
        assert!((inv.coeff(3) - (2.0 * a2 * a2 - a3)).norm() < COEFF_TOL);

        let err = real(&[0.0, 2.0, 1.0]).functional_inverse().unwrap_err();
        assert!(matches!(err, SeriesError::NotNormalized { .. }));
    }

    #[test]
    fn evaluate_examples() {
        let z = PowerSeries::identity(5);
        assert_eq!(z.evaluate(c(0.5, 0.0)).unwrap().value, c(0.5, 0.0));

        let geo = PowerSeries::geometric(40, c(1.0, 0.0));
        let e = geo.evaluate(c(0.5, 0.0)).unwrap();
        assert!((e.value - c(2.0, 0.0)).norm() < 1e-12);
        assert!(e.tail >= (e.value - c(2.0, 0.0)).norm());

        let a = real(&[0.7, -3.0, 2.0]);
        assert_eq!(a.evaluate(c(0.0, 0.0)).unwrap().value, c(0.7, 0.0));

        assert_eq!(
            z.evaluate(c(0.96, 0.0)).unwrap_err(),
            SeriesError::OutsideRadius(0.96)
        );
    }

    #[test]
    fn reflect_examples() {
        assert_eq!(real(&[0.0, 1.0, 1.0, 1.0]).reflect(), real(&[0.0, -1.0, 1.0, -1.0]));
        let even = real(&[1.0, 0.0, 2.0, 0.0, -3.0]);
        assert_eq!(even.reflect(), even);
        assert_eq!(real(&[0.0, 1.0, 0.0, -0.5]).reflect(), real(&[0.0, -1.0, 0.0, 0.5]));
    }

    #[test]
    fn z_power_shifts() {
        let s = real(&[0.0, 0.0, 1.0, 2.0]);
        assert_eq!(s.div_z_pow(2).unwrap(), real(&[1.0, 2.0]));
        assert_eq!(real(&[1.0, 2.0]).mul_z_pow(2), s);
        assert!(matches!(
            real(&[0.0, 1.0, 2.0]).div_z_pow(2),
            Err(SeriesError::NotDivisible { index: 1, .. })
        ));
    }

    #[test]
    fn constructor_rejects_non_finite() {
        assert_eq!(
            PowerSeries::new(vec![c(0.0, 0.0), c(f64::NAN, 0.0)]).unwrap_err(),
            SeriesError::NonFinite(1)
        );
        assert_eq!(PowerSeries::new(vec![]).unwrap_err(), SeriesError::Empty);
    }

    #[test]
    fn required_order_meets_tolerance() {
        let n = required_order(0.9, 2.0, 1e-12);
        assert!(2.0 * linear_tail_sum(n, 0.9) <= 1e-12);
        assert!(2.0 * linear_tail_sum(n - 1, 0.9) > 1e-12);
    }

    fn series_strategy(order: usize, bound: f64) -> impl Strategy<Value = PowerSeries> {
        prop::collection::vec((-bound..bound, -bound..bound), order + 1).prop_map(|v| {
            PowerSeries::new(v.into_iter().map(|(re, im)| c(re, im)).collect()).unwrap()
        })
    }

    fn unit_disk_coeffs(order: usize) -> impl Strategy<Value = Vec<Complex64>> {
        prop::collection::vec((0.0..1.0f64, 0.0..std::f64::consts::TAU), order + 1)
            .prop_map(|v| v.into_iter().map(|(r, t)| Complex64::from_polar(r, t)).collect())
    }

    proptest! {
        #[test]
        fn mul_commutes_and_associates(
            a in series_strategy(12, 1.0),
            b in series_strategy(12, 1.0),
            d in series_strategy(12, 1.0),
        ) {
            assert_close(&a.mul(&b).unwrap(), &b.mul(&a).unwrap(), 1e-13);
            let left = a.mul(&b).unwrap().mul(&d).unwrap();
            let right = a.mul(&b.mul(&d).unwrap()).unwrap();
            assert_close(&left, &right, 1e-12);
        }

        #[test]
        fn reciprocal_is_two_sided_inverse(mut coeffs in unit_disk_coeffs(16)) {
            // keep c0 away from zero
            coeffs[0] = Complex64::from_polar(1.0 + coeffs[0].norm(), coeffs[0].arg());
            let a = PowerSeries::new(coeffs).unwrap();
            let r = a.reciprocal().unwrap();
            let one = PowerSeries::one(16);
            // rounding scales with the size of the reciprocal's coefficients
            let scale = r.coeffs().iter().map(|c| c.norm()).fold(1.0, f64::max);
            assert_close(&a.mul(&r).unwrap(), &one, 1e-13 * scale);
            assert_close(&r.mul(&a).unwrap(), &one, 1e-13 * scale);
        }

        #[test]
        fn derivative_antiderivative_round_trip(a in series_strategy(10, 2.0)) {
            assert_close(&a.antiderivative().derivative(), &a, 1e-15);
            let back = a.derivative().antiderivative();
            let mut expected = a.clone();
            expected.coeffs[0] = ZERO;
            assert_close(&back, &expected, 1e-14);
        }

        #[test]
        fn inverse_composes_to_identity(mut coeffs in unit_disk_coeffs(8)) {
            coeffs[0] = ZERO;
            coeffs[1] = ONE;
            let a = PowerSeries::new(coeffs).unwrap();
            let inv = a.functional_inverse().unwrap();
            let id = PowerSeries::identity(8);
            assert_close(&a.compose(&inv).unwrap(), &id, 1e-12);
        }

        #[test]
        fn odd_part_of_product_matches_brute_force(mut coeffs in unit_disk_coeffs(6)) {
            coeffs[0] = ZERO;
            coeffs[1] = ONE;
            let g = PowerSeries::new(coeffs.clone()).unwrap();
            let minus_g_gm_over_z = g.mul(&g.reflect()).unwrap().div_z_pow(1).unwrap().scale(-ONE);
            // brute force: [z^4] g(z) g(-z)
            let mut brute = ZERO;
            for j in 0..=4 {
                let sign = if (4 - j) % 2 == 0 { 1.0 } else { -1.0 };
                brute += coeffs[j] * coeffs[4 - j] * sign;
            }
            let (g2, g3) = (coeffs[2], coeffs[3]);
            prop_assert!((minus_g_gm_over_z.coeff(3) + brute).norm() < 1e-13);
            prop_assert!((minus_g_gm_over_z.coeff(3) - (2.0 * g3 - g2 * g2)).norm() < 1e-13);
        }

        #[test]
        fn solve_inner_recovers_composition(
            mut fc in unit_disk_coeffs(14),
            wc in unit_disk_coeffs(14),
        ) {
            fc[0] = ZERO;
            fc[1] = ONE;
            let f = PowerSeries::new(fc).unwrap();
            // a bounded inner map: 0.5 z times a polynomial with unit-disk coefficients, scaled down
            let mut w = vec![ZERO; 15];
            for k in 1..=14 {
                w[k] = wc[k] * 0.5f64.powi(k as i32);
            }
            let w = PowerSeries::new(w).unwrap();
            let target = f.compose(&w).unwrap();
            let solved = f.solve_inner(&target).unwrap();
            assert_close(&solved, &w, 1e-12);
        }
    }
}
