//! Acceptance suite. Runs without the libtest harness so that every
//! criterion prints exactly one `[PASS]`/`[FAIL]` line; exits non-zero if
//! any criterion fails.

use std::f64::consts::{FRAC_PI_4, LN_2, TAU};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::Rng;

use ks_core::bounds;
use ks_core::harness::{self, trial_rng, CampaignConfig, CheckKind, Outcome};
use ks_core::series::{required_order, PowerSeries};
use ks_core::subord::{self, GridConfig, Verdict};
use ks_core::{ClassMember, ExtremalKind, MaMindaFunction, PhiKind, SchwarzMap, StarlikeAtomic};

const MEMBERS: usize = 1000;
const ORDER: usize = 24;
const SEED: u64 = 20_240_917;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn targets(order: usize) -> Vec<MaMindaFunction> {
    let mut v = vec![MaMindaFunction::halfplane(order)];
    for g in [0.25, 0.5, 0.75] {
        v.push(MaMindaFunction::order_gamma(g, order).unwrap());
    }
    v
}

fn random_member(seed: u64, i: usize, order: usize) -> ClassMember {
    let mut rng = trial_rng(seed, i);
    let phis = targets(order);
    let phi = phis[rng.random_range(0..phis.len())].clone();
    let g = StarlikeAtomic::random(&mut rng, order).unwrap();
    let w = SchwarzMap::random(&mut rng, order).unwrap();
    ClassMember::from_parts(g, w, phi).unwrap()
}

fn random_mu<R: Rng>(rng: &mut R) -> Complex64 {
    Complex64::from_polar(3.0 * rng.random_range(0.0..1.0f64).sqrt(), rng.random_range(0.0..TAU))
}

/// Outcome of one criterion: pass flag plus a one-line summary.
struct CriterionResult {
    pass: bool,
    summary: String,
}

fn verdict(pass: bool, summary: impl Into<String>) -> CriterionResult {
    CriterionResult {
        pass,
        summary: summary.into(),
    }
}

fn criterion_1(members: &[ClassMember], build_time: Duration) -> CriterionResult {
    let start = Instant::now();
    let worst = members
        .iter()
        .map(|m| {
            let (r2, r3) = m.identity_residuals();
            r2.max(r3)
        })
        .fold(0.0, f64::max);
    let elapsed = build_time + start.elapsed();
    verdict(
        worst <= 1e-12 && elapsed < Duration::from_secs(30),
        format!(
            "coefficient identities on {} members: max residual {worst:.2e} (tol 1e-12), {:.2}s (limit 30s)",
            members.len(),
            elapsed.as_secs_f64()
        ),
    )
}

fn criterion_2(members: &[ClassMember]) -> CriterionResult {
    let grid = bounds::mu_grid_disk();
    let mut violations = 0;
    let mut worst = f64::INFINITY;
    for m in members {
        for &mu in &grid {
            let slack = bounds::fs_bound(m.phi(), mu) - bounds::fs_value(m, mu);
            worst = worst.min(slack);
            if slack < -1e-8 {
                violations += 1;
            }
        }
    }
    let mut rng = trial_rng(SEED, 1_000_000);
    let mut witness_gap: f64 = 0.0;
    for phi in targets(ORDER) {
        for _ in 0..20 {
            let mu = random_mu(&mut rng);
            let w = bounds::fs_witness(&phi, mu).unwrap();
            witness_gap = witness_gap.max((bounds::fs_value(&w, mu) - bounds::fs_bound(&phi, mu)).abs());
        }
    }
    verdict(
        violations == 0 && witness_gap <= 1e-9,
        format!(
            "Fekete-Szego: {violations} violations over {}x{} (min slack {worst:.2e}); witness gap {witness_gap:.2e} over 80 mu (tol 1e-9)",
            members.len(),
            grid.len()
        ),
    )
}

fn criterion_3(members: &[ClassMember]) -> CriterionResult {
    let hp = MaMindaFunction::halfplane(ORDER);
    let at_zero = bounds::fs_bound(&hp, c(0.0, 0.0));
    let a2_bound_ok = members.iter().all(|m| m.a2().norm() <= m.phi().b1() / 2.0 + 1e-12);
    let mut extremal_gap: f64 = 0.0;
    for phi in targets(ORDER) {
        let m = ClassMember::extremal(ExtremalKind::FsMax, &phi).unwrap();
        extremal_gap = extremal_gap.max((m.a2() - c(phi.b1() / 2.0, 0.0)).norm());
    }
    verdict(
        (at_zero - 1.0).abs() <= 1e-15 && a2_bound_ok && extremal_gap <= 1e-12,
        format!(
            "special values: fs_bound(halfplane, 0) = {at_zero}; |a2| <= B1/2 on all members: {a2_bound_ok}; extremal a2 gap {extremal_gap:.2e}"
        ),
    )
}

fn criterion_4(members: &[ClassMember]) -> CriterionResult {
    let grid = bounds::mu_grid_disk();
    let two = c(2.0, 0.0);
    let mut worst: f64 = 0.0;
    for m in members {
        let inv = m.f().functional_inverse().unwrap();
        let (d2, d3) = (inv.coeff(2), inv.coeff(3));
        let (a2, a3) = (m.a2(), m.a3());
        for &mu in &grid {
            let lhs = (d3 - mu * d2 * d2).norm();
            let rhs = (a3 - (two - mu) * a2 * a2).norm();
            worst = worst.max((lhs - rhs).abs());
        }
    }
    verdict(
        worst <= 1e-12,
        format!(
            "inverse coefficients on {} members x {} mu: max gap {worst:.2e} (tol 1e-12)",
            members.len(),
            grid.len()
        ),
    )
}

fn criterion_5() -> CriterionResult {
    let hp = bounds::covering_radius(&MaMindaFunction::halfplane(ORDER)).unwrap();
    let mut worst = (hp - LN_2 / 2.0).abs();
    for g in [0.25, 0.5, 0.75] {
        let k = bounds::covering_radius(&MaMindaFunction::order_gamma(g, ORDER).unwrap()).unwrap();
        let exact = (1.0 - g) * LN_2 / 2.0 + g * FRAC_PI_4;
        worst = worst.max((k - exact).abs());
    }
    verdict(
        worst <= 1e-10,
        format!("covering radius: halfplane {hp:.12}, max gap vs closed form {worst:.2e} (tol 1e-10)"),
    )
}

fn criterion_6() -> CriterionResult {
    let (mut growth_gap, mut dist_gap): (f64, f64) = (0.0, 0.0);
    for g in [0.0, 0.3, 0.7] {
        let phi = MaMindaFunction::order_gamma(g, ORDER).unwrap();
        for r in [0.3, 0.6, 0.9] {
            let k = bounds::kowalczyk_forms(g, r).unwrap();
            let (lo, hi) = bounds::growth_bounds(&phi, r).unwrap();
            growth_gap = growth_gap.max((lo - k.f_lo).abs()).max((hi - k.f_hi).abs());
            let (dlo, dhi) = bounds::distortion_bounds(&phi, r).unwrap();
            dist_gap = dist_gap.max((dlo - k.fprime_lo).abs()).max((dhi - k.fprime_hi).abs());
        }
    }
    verdict(
        growth_gap <= 1e-8 && dist_gap <= 1e-12,
        format!("distortion/growth coherence: growth gap {growth_gap:.2e} (tol 1e-8), distortion gap {dist_gap:.2e} (tol 1e-12)"),
    )
}

/// A member rebuilt at an order whose evaluation tail at `r` is below `tol`.
fn sharp_member(kind: ExtremalKind, phi: &MaMindaFunction, r: f64, tol: f64) -> ClassMember {
    let probe = ClassMember::extremal(kind, &phi.with_order(48)).unwrap();
    let growth = probe.f().derivative().growth_constant().max(1.0);
    let order = required_order(r, growth, tol).max(48);
    ClassMember::extremal(kind, &phi.with_order(order)).unwrap()
}

fn criterion_7() -> CriterionResult {
    let mut worst: f64 = 0.0;
    let mut max_order = 0;
    for phi in targets(ORDER) {
        for r in [0.3, 0.6, 0.9] {
            let m = sharp_member(ExtremalKind::FsMax, &phi, r, 1e-11);
            max_order = max_order.max(m.order());
            let got = m.f().derivative().evaluate(c(r, 0.0)).unwrap().value.norm();
            let want = phi.eval_real(r).unwrap() / (1.0 - r * r);
            worst = worst.max((got - want).abs());

            let m = sharp_member(ExtremalKind::DistMin, &phi, r, 1e-11);
            let got = m.f().derivative().evaluate(c(-r, 0.0)).unwrap().value.norm();
            let want = phi.eval_real(-r).unwrap() / (1.0 + r * r);
            worst = worst.max((got - want).abs());
        }
    }
    verdict(
        worst <= 1e-9,
        format!("distortion sharpness at r in {{0.3,0.6,0.9}}: max gap {worst:.2e} (tol 1e-9), orders up to {max_order}"),
    )
}

fn criterion_8() -> CriterionResult {
    const ANGLES: usize = 720;
    let mut violations = 0;
    let mut worst = f64::INFINITY;
    for i in 0..100 {
        let mut rng = trial_rng(SEED ^ 0x8, i);
        let g = StarlikeAtomic::random(&mut rng, 200).unwrap();
        let big = g.odd_companion();
        for r in [0.3, 0.6, 0.9] {
            let (lo, hi) = (r / (1.0 + r * r), r / (1.0 - r * r));
            for j in 0..ANGLES {
                let e = big.evaluate(Complex64::from_polar(r, TAU * j as f64 / ANGLES as f64)).unwrap();
                let v = e.value.norm();
                let slack = (v - lo).min(hi - v);
                worst = worst.min(slack);
                if slack < -e.tail {
                    violations += 1;
                }
            }
        }
    }
    verdict(
        violations == 0,
        format!("odd-starlike envelope on 100 g x 3 radii x {ANGLES} angles: {violations} violations (min slack {worst:.2e})"),
    )
}

fn criterion_9() -> CriterionResult {
    let cfg = GridConfig::default();
    let mut dilation_ok = 0;
    let mut membership_ok = 0;
    for i in 0..100 {
        let mut rng = trial_rng(SEED ^ 0x9, i);
        let rho = rng.random_range(0.05..=0.9);
        let m = random_member(SEED ^ 0x9, i, 160);
        let f = m.f();
        if subord::is_subordinate(&f.dilate(c(rho, 0.0)), f, &cfg).unwrap().verdict == Verdict::Holds {
            dilation_ok += 1;
        }
        if subord::ks_membership(f, m.g(), m.phi(), &cfg).unwrap().verdict == Verdict::Holds {
            membership_ok += 1;
        }
    }
    let expansion = subord::is_subordinate(
        &PowerSeries::monomial(40, 1, c(1.5, 0.0)),
        &PowerSeries::identity(40),
        &cfg,
    )
    .unwrap()
    .verdict;

    let mut inconsistent = 0;
    let mut samples = 0;
    for seed in [1, 2, 3] {
        let campaign = CampaignConfig {
            seed,
            trials: 100,
            checks: vec![CheckKind::Stankiewicz],
            ..CampaignConfig::default()
        };
        let run = harness::run_campaign(&campaign).unwrap();
        for rec in &run.records {
            samples += 1;
            if rec.checks[0].outcome == Outcome::Fail {
                inconsistent += 1;
            }
        }
    }
    verdict(
        dilation_ok == 100 && membership_ok == 100 && expansion == Verdict::Fails && inconsistent == 0,
        format!(
            "subordination engine: dilations {dilation_ok}/100 hold, 1.5z < z verdict {expansion:?}, membership {membership_ok}/100 hold, Stankiewicz inconsistencies {inconsistent}/{samples}"
        ),
    )
}

fn criterion_10() -> CriterionResult {
    let start = Instant::now();
    let cfg = CampaignConfig::default();
    let a = harness::run_campaign(&cfg).unwrap().report;
    let b = harness::run_campaign(&cfg).unwrap().report;
    let elapsed = start.elapsed();
    let identical = a.without_wall_time().to_json() == b.without_wall_time().to_json();
    verdict(
        identical && a.exit_code() == 0 && b.exit_code() == 0 && elapsed < Duration::from_secs(300),
        format!(
            "default campaign (seed {}, {} trials, {} checks) twice: identical {identical}, exit codes {}/{}, {} findings, {:.1}s (limit 300s)",
            cfg.seed,
            cfg.trials,
            cfg.checks.len(),
            a.exit_code(),
            b.exit_code(),
            a.findings.len(),
            elapsed.as_secs_f64()
        ),
    )
}

fn main() -> ExitCode {
    let start = Instant::now();
    let members: Vec<ClassMember> = (0..MEMBERS).map(|i| random_member(SEED, i, ORDER)).collect();
    let build_time = start.elapsed();
    assert!(members.iter().all(|m| matches!(
        m.phi().kind(),
        PhiKind::Halfplane | PhiKind::OrderGamma { .. }
    )));

    let criteria: Vec<(usize, Box<dyn Fn() -> CriterionResult + '_>)> = vec![
        (1, Box::new(|| criterion_1(&members, build_time))),
        (2, Box::new(|| criterion_2(&members))),
        (3, Box::new(|| criterion_3(&members))),
        (4, Box::new(|| criterion_4(&members))),
        (5, Box::new(criterion_5)),
        (6, Box::new(criterion_6)),
        (7, Box::new(criterion_7)),
        (8, Box::new(criterion_8)),
        (9, Box::new(criterion_9)),
        (10, Box::new(criterion_10)),
    ];

    let mut failed = 0;
    for (n, run) in criteria {
        let v = run();
        let tag = if v.pass { "PASS" } else { "FAIL" };
        println!("[{tag}] criterion {n}: {}", v.summary);
        if !v.pass {
            failed += 1;
        }
    }
    println!("acceptance: {} of 10 criteria passed", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
