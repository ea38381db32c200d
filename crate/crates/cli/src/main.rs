use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_complex::Complex64;
use serde_json::json;

use ks_core::bounds::{self, BoundReport};
use ks_core::harness::{self, CampaignConfig, CampaignReport, Outcome, TrialRecord};
use ks_core::subord::{self, GridConfig, SubordinationVerdict, Verdict};
use ks_core::{ClassMember, ExtremalKind, MaMindaFunction, PhiKind, PowerSeries, StarlikeAtomic};

mod coeffs;

/// Bounds, extremal functions and numerical checks for the class K_s(φ).
///
/// Exit codes: 0 ok, 1 a check failed or a campaign produced findings,
/// 2 usage or input error.
#[derive(Parser)]
#[command(name = "ks", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a sharp bound and print it as JSON.
    Bound {
        #[command(subcommand)]
        which: BoundCmd,
    },
    /// Print the coefficients and provenance of an extremal member.
    Extremal {
        #[arg(long, value_parser = parse_extremal)]
        kind: ExtremalKind,
        #[arg(long, value_parser = parse_phi)]
        phi: PhiKind,
        #[arg(long, default_value_t = 24)]
        order: usize,
    },
    /// Run a subordination-based check on series read from files.
    Check {
        #[command(subcommand)]
        which: CheckCmd,
    },
    /// Run a randomized campaign from a JSON config.
    Campaign {
        #[arg(long)]
        config: PathBuf,
        /// Write the JSON report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write one CSV row per trial and check.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Re-run a single trial of a campaign.
    Replay {
        /// A campaign report; its embedded config is used.
        #[arg(long, conflicts_with = "config", required_unless_present = "config")]
        report: Option<PathBuf>,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        trial: usize,
    },
}

#[derive(Subcommand)]
enum BoundCmd {
    /// Sharp bound on |a₃ − μa₂²| with an attaining member.
    Fs {
        #[arg(long, value_parser = parse_phi)]
        phi: PhiKind,
        #[arg(long, value_parser = parse_mu, allow_hyphen_values = true)]
        mu: Complex64,
    },
    /// Sharp bound on |d₃ − μd₂²| for the inverse function.
    InverseFs {
        #[arg(long, value_parser = parse_phi)]
        phi: PhiKind,
        #[arg(long, value_parser = parse_mu, allow_hyphen_values = true)]
        mu: Complex64,
    },
    /// Bounds on |f′(z)| for |z| = r.
    Distortion {
        #[arg(long, value_parser = parse_phi)]
        phi: PhiKind,
        #[arg(long)]
        r: f64,
    },
    /// Bounds on |f(z)| for |z| = r.
    Growth {
        #[arg(long, value_parser = parse_phi)]
        phi: PhiKind,
        #[arg(long)]
        r: f64,
    },
    /// Radius of the disk contained in every f(D).
    Covering {
        #[arg(long, value_parser = parse_phi)]
        phi: PhiKind,
    },
    /// Closed-form distortion and growth bounds for the order-γ target.
    Kowalczyk {
        #[arg(long)]
        gamma: f64,
        #[arg(long)]
        r: f64,
    },
}

/// Coefficient files are taken as exact: series are zero-padded to at least
/// this order so that short (polynomial) inputs carry no truncation tail.
const WORK_ORDER: usize = 160;

#[derive(Subcommand)]
enum CheckCmd {
    /// Is −z²f′(z)/(g(z)g(−z)) subordinate to φ?
    Membership {
        #[arg(long)]
        f: PathBuf,
        #[arg(long)]
        g: String,
        #[arg(long, value_parser = parse_phi)]
        phi: PhiKind,
        #[arg(long, default_value_t = WORK_ORDER)]
        order: usize,
    },
    /// Is F subordinate to f?
    Subordination {
        #[arg(long = "big", short = 'F')]
        big: PathBuf,
        #[arg(long)]
        f: PathBuf,
        #[arg(long, default_value_t = WORK_ORDER)]
        order: usize,
    },
    /// Sample the criterion f + t·g(z)g(−z)/z ≺ f against membership.
    Stankiewicz {
        #[arg(long)]
        f: PathBuf,
        #[arg(long)]
        g: String,
        #[arg(long, default_value_t = 0.05)]
        delta: f64,
        #[arg(long, default_value_t = 5)]
        samples: usize,
        #[arg(long, default_value_t = WORK_ORDER)]
        order: usize,
    },
}

fn parse_phi(s: &str) -> Result<PhiKind, String> {
    s.parse().map_err(|e: ks_core::phi::PhiError| e.to_string())
}

fn parse_mu(s: &str) -> Result<Complex64, String> {
    s.trim()
        .parse::<Complex64>()
        .map_err(|_| format!("{s:?} is not a complex number (try 1+0.5i)"))
}

fn parse_extremal(s: &str) -> Result<ExtremalKind, String> {
    s.parse().map_err(|e: ks_core::generators::GeneratorError| e.to_string())
}

/// A failure that should end the process with the given exit code.
struct Failure {
    code: u8,
    message: String,
}

fn input<E: std::fmt::Display>(e: E) -> Failure {
    Failure {
        code: 2,
        message: e.to_string(),
    }
}

type Res = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("ks: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cmd: Command) -> Res {
    match cmd {
        Command::Bound { which } => bound(which),
        Command::Extremal { kind, phi, order } => extremal(kind, phi, order),
        Command::Check { which } => check(which),
        Command::Campaign { config, out, csv } => campaign(&config, out.as_deref(), csv.as_deref()),
        Command::Replay { report, config, trial } => replay(report.as_deref(), config.as_deref(), trial),
    }
}

/// Prints pretty JSON; a closed pipe (e.g. `| head`) is not an error.
fn print_json<T: serde::Serialize>(value: &T) {
    let text = serde_json::to_string_pretty(value).expect("serializable");
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn phi_at(kind: PhiKind, order: usize) -> Result<MaMindaFunction, Failure> {
    MaMindaFunction::new(kind, order).map_err(input)
}

fn bound(which: BoundCmd) -> Res {
    let report: BoundReport = match which {
        BoundCmd::Fs { phi, mu } => bounds::fs_report(&phi_at(phi, 24)?, mu),
        BoundCmd::InverseFs { phi, mu } => bounds::inverse_fs_report(&phi_at(phi, 24)?, mu),
        BoundCmd::Distortion { phi, r } => bounds::distortion_report(&phi_at(phi, 24)?, r),
        BoundCmd::Growth { phi, r } => bounds::growth_report(&phi_at(phi, 24)?, r),
        BoundCmd::Covering { phi } => bounds::covering_report(&phi_at(phi, 24)?),
        BoundCmd::Kowalczyk { gamma, r } => bounds::kowalczyk_report(gamma, r),
    }
    .map_err(input)?;
    print_json(&report);
    Ok(0)
}

fn extremal(kind: ExtremalKind, phi: PhiKind, order: usize) -> Res {
    let phi = phi_at(phi, order)?;
    let m = ClassMember::extremal(kind, &phi).map_err(input)?;
    print_json(&json!({
        "kind": kind.to_string(),
        "order": m.order(),
        "provenance": m.provenance(),
        "a2": m.a2(),
        "a3": m.a3(),
        "coefficients": m.f(),
    }));
    Ok(0)
}

fn verdict_code(v: Verdict) -> u8 {
    match v {
        Verdict::Fails => 1,
        Verdict::Holds | Verdict::Inconclusive => 0,
    }
}

fn read_padded(path: &Path, order: usize) -> Result<PowerSeries, Failure> {
    let s = coeffs::read(path).map_err(input)?;
    let n = s.order().max(order).max(3);
    Ok(s.with_order(n))
}

fn read_member(f: &Path, g: &str, order: usize) -> Result<(PowerSeries, StarlikeAtomic), Failure> {
    let f = read_padded(f, order)?;
    let order = f.order();
    let g = StarlikeAtomic::parse(g, order).map_err(input)?;
    Ok((f, g))
}

fn check(which: CheckCmd) -> Res {
    let cfg = GridConfig::default();
    match which {
        CheckCmd::Membership { f, g, phi, order } => {
            let (f, g) = read_member(&f, &g, order)?;
            let phi = phi_at(phi, f.order())?;
            let v = subord::ks_membership(&f, &g, &phi, &cfg).map_err(input)?;
            print_verdict("membership", &v);
            Ok(verdict_code(v.verdict))
        }
        CheckCmd::Subordination { big, f, order } => {
            let big = read_padded(&big, order)?;
            let f = read_padded(&f, order)?;
            let n = big.order().max(f.order());
            let v = subord::is_subordinate(&big.with_order(n), &f.with_order(n), &cfg).map_err(input)?;
            print_verdict("subordination", &v);
            Ok(verdict_code(v.verdict))
        }
        CheckCmd::Stankiewicz { f, g, delta, samples, order } => {
            let (f, g) = read_member(&f, &g, order)?;
            let out = subord::stankiewicz_check(&f, &g, delta, samples, &cfg).map_err(input)?;
            print_json(&json!({ "check": "stankiewicz", "delta": delta, "outcome": out }));
            Ok(if out.consistent { 0 } else { 1 })
        }
    }
}

fn print_verdict(check: &str, v: &SubordinationVerdict) {
    print_json(&json!({ "check": check, "result": v }));
}

fn read_config(path: &Path) -> Result<CampaignConfig, Failure> {
    let text = fs::read_to_string(path).map_err(|e| input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| input(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents).map_err(|e| input(format!("{}: {e}", path.display())))
}

fn campaign(config: &Path, out: Option<&Path>, csv_path: Option<&Path>) -> Res {
    let cfg = read_config(config)?;
    let run = harness::run_campaign(&cfg).map_err(input)?;
    let json = run.report.to_json();
    match out {
        Some(p) => write_file(p, &(json + "\n"))?,
        None => {
            let _ = writeln!(std::io::stdout().lock(), "{json}");
        }
    }
    if let Some(p) = csv_path {
        write_csv(p, &run.records).map_err(|e| input(format!("{}: {e}", p.display())))?;
    }
    for s in &run.report.checks {
        eprintln!(
            "{:<12} pass {:>5}  fail {:>5}  inconclusive {:>5}",
            s.check.name(),
            s.pass,
            s.fail,
            s.inconclusive
        );
    }
    Ok(run.report.exit_code() as u8)
}

fn opt<T: ToString>(x: Option<T>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

fn write_csv(path: &Path, records: &[TrialRecord]) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record([
        "trial", "check", "outcome", "margin", "mu_re", "mu_im", "r", "z_re", "z_im", "detail",
    ])?;
    for rec in records {
        for c in &rec.checks {
            let outcome = match c.outcome {
                Outcome::Pass => "pass",
                Outcome::Fail => "fail",
                Outcome::Inconclusive => "inconclusive",
            };
            w.write_record([
                rec.trial.to_string(),
                c.check.name().to_string(),
                outcome.to_string(),
                c.margin.to_string(),
                opt(c.at.mu.map(|m| m.re)),
                opt(c.at.mu.map(|m| m.im)),
                opt(c.at.r),
                opt(c.at.z.map(|z| z.re)),
                opt(c.at.z.map(|z| z.im)),
                c.detail.clone().unwrap_or_default(),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

fn replay(report: Option<&Path>, config: Option<&Path>, trial: usize) -> Res {
    let cfg = match (report, config) {
        (Some(p), _) => {
            let text = fs::read_to_string(p).map_err(|e| input(format!("{}: {e}", p.display())))?;
            let r: CampaignReport =
                serde_json::from_str(&text).map_err(|e| input(format!("{}: {e}", p.display())))?;
            r.config
        }
        (None, Some(p)) => read_config(p)?,
        (None, None) => return Err(input("either --report or --config is required")),
    };
    let rec = harness::replay_trial(&cfg, trial).map_err(input)?;
    print_json(&rec);
    let failed = rec.checks.iter().any(|c| c.outcome == Outcome::Fail);
    Ok(u8::from(failed))
}
