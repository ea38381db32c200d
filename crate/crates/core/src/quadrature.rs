//! Adaptive composite Gauss–Legendre quadrature.
//!
//! Each panel is integrated with the 15-point rule on the whole panel and on
//! its two halves; the difference is the panel's error estimate and the
//! halves' sum is its value. The panel with the largest estimate is bisected
//! until the summed estimate drops below the tolerance or the panel cap is
//! reached.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::sync::OnceLock;

use thiserror::Error;

pub const DEFAULT_TOL: f64 = 1e-12;
pub const MAX_PANELS: usize = 10_000;
const POINTS: usize = 15;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadratureError {
    #[error("quadrature did not converge: value {value}, estimated error {error} after {panels} panels")]
    NonConvergence { value: f64, error: f64, panels: usize },
    #[error("invalid interval [{a}, {b}]")]
    BadInterval { a: f64, b: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub error: f64,
    pub panels: usize,
}

/// Nodes and weights of the 15-point rule on [-1, 1].
fn rule() -> &'static ([f64; POINTS], [f64; POINTS]) {
    static RULE: OnceLock<([f64; POINTS], [f64; POINTS])> = OnceLock::new();
    RULE.get_or_init(|| {
        let n = POINTS;
        let mut nodes = [0.0; POINTS];
        let mut weights = [0.0; POINTS];
        for i in 0..n {
            // Chebyshev-like initial guess, then Newton on P_n.
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            dp = if d != 0.0 { d } else { dp };
            nodes[i] = x;
            weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
        (nodes, weights)
    })
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

fn gauss<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
    let (nodes, weights) = rule();
    let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
    half * nodes
        .iter()
        .zip(weights)
        .map(|(x, w)| w * f(mid + half * x))
        .sum::<f64>()
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl Panel {
    fn new<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Self {
        let m = 0.5 * (a + b);
        let whole = gauss(f, a, b);
        let value = gauss(f, a, m) + gauss(f, m, b);
        Self {
            a,
            b,
            value,
            error: (whole - value).abs(),
        }
    }
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Integrates `f` over `[a, b]` to absolute tolerance `tol`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<Quadrature, QuadratureError> {
    if !(a.is_finite() && b.is_finite() && a <= b) {
        return Err(QuadratureError::BadInterval { a, b });
    }
    if a == b {
        return Ok(Quadrature {
            value: 0.0,
            error: 0.0,
            panels: 1,
        });
    }
    let mut heap = BinaryHeap::new();
    heap.push(Panel::new(&f, a, b));
    loop {
        let (value, error) = heap
            .iter()
            .fold((0.0, 0.0), |(v, e), p| (v + p.value, e + p.error));
        if !value.is_finite() {
            return Err(QuadratureError::NonConvergence {
                value,
                error,
                panels: heap.len(),
            });
        }
        if error <= tol {
            return Ok(Quadrature {
                value,
                error,
                panels: heap.len(),
            });
        }
        if heap.len() >= MAX_PANELS {
            return Err(QuadratureError::NonConvergence {
                value,
                error,
                panels: heap.len(),
            });
        }
        let worst = heap.pop().expect("heap is never empty");
        let m = 0.5 * (worst.a + worst.b);
        heap.push(Panel::new(&f, worst.a, m));
        heap.push(Panel::new(&f, m, worst.b));
    }
}
