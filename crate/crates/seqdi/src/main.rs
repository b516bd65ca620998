//! seqdi: reports, sweeps, and verification suites over the sequential
//! protocol family, with deterministic CSV/JSON emission.

use std::f64::consts::{FRAC_PI_4, FRAC_PI_6, FRAC_PI_8};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use seqdi::bell::{
    boundary_residual, chsh_best_sign_value, coefficients, i_omega, saturation_residual,
    tsirelson_bound_omega,
};
use seqdi::checks::{verify_suite, verify_suite_grid, CheckResult, CheckStatus};
use seqdi::correlations::joint_povm;
use seqdi::entropy::{endpoint_annotation, entropies, EntropyReport};
use seqdi::error::{Error, Result};
use seqdi::protocol::{Preset, ProtocolParams};
use seqdi::security::uniqueness_check;

#[derive(Parser)]
#[command(name = "seqdi", version, about = "Sequential device-independent correlation toolkit")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Single-point report: angles, coefficients, residuals, entropies
    Report(ReportArgs),
    /// Entropy sweep over the strength theta
    Sweep(SweepArgs),
    /// Run the identity suite; exit 1 on any failing check
    Verify(VerifyArgs),
    /// List the built-in preset expansions
    Presets(PresetsArgs),
}

/// Protocol selection, shared by report/sweep/verify. Angles are radians.
#[derive(Args)]
struct ParamArgs {
    /// Preset family: chsh or wooltorton
    #[arg(long)]
    preset: Option<String>,
    /// Tilt omega in (0, pi/6]; required by the wooltorton preset
    #[arg(long)]
    omega: Option<f64>,
    /// Alice angle for x = 0 (explicit mode)
    #[arg(long)]
    alpha0: Option<f64>,
    /// Alice angle for x = 1 (explicit mode)
    #[arg(long)]
    alpha1: Option<f64>,
    /// Bob short-branch angle (explicit mode)
    #[arg(long)]
    beta1: Option<f64>,
    /// Measurement strength in [0, pi/4]; default pi/8
    #[arg(long)]
    theta: Option<f64>,
    /// Bob2 second-input angle (explicit mode)
    #[arg(long)]
    delta: Option<f64>,
}

impl ParamArgs {
    /// Expands a preset or assembles explicit angles. A preset fixes all
    /// four angles; mixing it with angle flags is rejected so that
    /// preset-specific checks stay meaningful.
    fn resolve(&self) -> Result<(ProtocolParams, Option<Preset>)> {
        let theta = self.theta.unwrap_or(FRAC_PI_8);
        match self.preset.as_deref() {
            Some(name) => {
                if self.alpha0.is_some()
                    || self.alpha1.is_some()
                    || self.beta1.is_some()
                    || self.delta.is_some()
                {
                    return Err(Error::InvalidInput(
                        "angle flags conflict with --preset; drop --preset for explicit angles"
                            .into(),
                    ));
                }
                let preset = match name {
                    "chsh" => {
                        if self.omega.is_some() {
                            return Err(Error::InvalidInput(
                                "the chsh preset takes no --omega".into(),
                            ));
                        }
                        Preset::Chsh
                    }
                    "wooltorton" => {
                        let omega = self.omega.ok_or_else(|| {
                            Error::InvalidInput("the wooltorton preset requires --omega".into())
                        })?;
                        Preset::wooltorton(omega)?
                    }
                    other => {
                        return Err(Error::InvalidInput(format!(
                            "unknown preset '{other}' (expected chsh or wooltorton)"
                        )))
                    }
                };
                Ok((preset.params(theta)?, Some(preset)))
            }
            None => {
                let need = |flag: &str, v: Option<f64>| {
                    v.ok_or_else(|| {
                        Error::InvalidInput(format!("--{flag} is required without --preset"))
                    })
                };
                let p = ProtocolParams::new(
                    need("alpha0", self.alpha0)?,
                    need("alpha1", self.alpha1)?,
                    need("beta1", self.beta1)?,
                    theta,
                    need("delta", self.delta)?,
                )?;
                Ok((p, None))
            }
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Args)]
struct ReportArgs {
    #[command(flatten)]
    params: ParamArgs,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Output path; stdout when absent
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    params: ParamArgs,
    /// Alice input whose outputs are certified
    #[arg(long, default_value_t = 0)]
    x_star: u8,
    #[arg(long, default_value_t = 0.0)]
    theta_min: f64,
    #[arg(long, default_value_t = FRAC_PI_4)]
    theta_max: f64,
    /// Number of grid points (at least 2)
    #[arg(long, default_value_t = 101)]
    steps: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Output path; stdout when absent
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    params: ParamArgs,
    /// Run the suite on a strength grid instead of a single theta
    #[arg(long)]
    theta_min: Option<f64>,
    #[arg(long)]
    theta_max: Option<f64>,
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Output path; stdout when absent
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PresetsArgs {
    /// Tilt used to expand the wooltorton preset; default pi/6
    #[arg(long)]
    omega: Option<f64>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Output path; stdout when absent
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.cmd {
        Cmd::Report(a) => cmd_report(a),
        Cmd::Sweep(a) => cmd_sweep(a),
        Cmd::Verify(a) => cmd_verify(a),
        Cmd::Presets(a) => cmd_presets(a),
    }
}

/// 12 significant digits, '.' decimal separator, locale-independent.
fn sig12(x: f64) -> String {
    format!("{x:.11e}")
}

fn write_out(out: Option<&PathBuf>, content: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, content)?,
        None => print!("{content}"),
    }
    Ok(())
}

fn emit_json(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("json serialization is total here");
    s.push('\n');
    s
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect()
}

fn check_theta_range(lo: f64, hi: f64, steps: usize) -> Result<()> {
    if steps < 2 {
        return Err(Error::InvalidInput(format!("--steps must be at least 2, got {steps}")));
    }
    if !(0.0..=FRAC_PI_4 + 1e-12).contains(&lo) || !(0.0..=FRAC_PI_4 + 1e-12).contains(&hi) {
        return Err(Error::InvalidInput(format!(
            "theta range [{lo}, {hi}] must lie within [0, pi/4]"
        )));
    }
    if lo >= hi {
        return Err(Error::InvalidInput(format!(
            "--theta-min {lo} must be below --theta-max {hi}"
        )));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// report
// ---------------------------------------------------------------------------

fn entropy_row(r: &EntropyReport, saturation: f64) -> Value {
    json!({
        "x_star": r.x_star,
        "theta": r.theta,
        "delta": r.delta,
        "h_min": r.h_min,
        "h_vn": r.h_vn,
        "security_valid": r.security_valid,
        "saturation_residual": saturation,
    })
}

fn cmd_report(a: ReportArgs) -> Result<ExitCode> {
    let (p, preset) = a.params.resolve()?;
    let sat = saturation_residual(&p)?;
    let boundary = boundary_residual(&p)?;
    let c = coefficients(p.theta, p.delta)?;
    let ledger = match uniqueness_check(&p) {
        Ok(u) => Some(u),
        Err(Error::LedgerDomain(_)) => None,
        Err(e) => return Err(e),
    };
    let reports = [entropies(&p, 0), entropies(&p, 1)];
    let annotation = preset
        .as_ref()
        .and_then(|pre| endpoint_annotation(pre, p.theta));

    let bell = match &preset {
        Some(Preset::Chsh) => {
            let v = chsh_best_sign_value(&joint_povm(&p)?);
            vec![("chsh_value", v)]
        }
        Some(Preset::Wooltorton { omega }) => {
            let t = joint_povm(&p)?;
            vec![
                ("i_omega", i_omega(&t, *omega)?),
                ("i_omega_bound", tsirelson_bound_omega(*omega)?),
            ]
        }
        None => vec![],
    };

    let content = match a.format {
        Format::Text => {
            let mut s = String::new();
            if let Some(pre) = &preset {
                s += &format!("preset: {}\n", pre.name());
                if let Preset::Wooltorton { omega } = pre {
                    s += &format!("omega: {}\n", sig12(*omega));
                }
            }
            s += &format!("alpha0: {}\n", sig12(p.alpha0));
            s += &format!("alpha1: {}\n", sig12(p.alpha1));
            s += &format!("beta1: {}\n", sig12(p.beta1));
            s += &format!("theta: {}\n", sig12(p.theta));
            s += &format!("delta: {}\n", sig12(p.delta));
            s += &format!("security_valid: {}\n", p.security_valid());
            s += &format!(
                "coefficients: c1={} c2={} c3={} c4={}\n",
                sig12(c.c1),
                sig12(c.c2),
                sig12(c.c3),
                sig12(c.c4)
            );
            s += &format!("saturation_residual: {}\n", sig12(sat));
            s += &format!("boundary_residual: {}\n", sig12(boundary));
            match &ledger {
                Some(u) => {
                    s += &format!(
                        "ledger: max_abs_gap={} pass={}\n",
                        sig12(u.max_abs_gap),
                        u.pass
                    )
                }
                None => s += "ledger: skipped (excluded domain)\n",
            }
            for r in &reports {
                s += &format!(
                    "x_star={}: h_min={} h_vn={}\n",
                    r.x_star,
                    sig12(r.h_min),
                    sig12(r.h_vn)
                );
            }
            for (name, v) in &bell {
                s += &format!("{name}: {}\n", sig12(*v));
            }
            if let Some(note) = annotation {
                s += &format!("annotation: {note}\n");
            }
            s
        }
        Format::Csv => {
            let mut s = String::from(
                "x_star,theta,delta,h_min,h_vn,security_valid,saturation_residual\n",
            );
            for r in &reports {
                s += &format!(
                    "{},{},{},{},{},{},{}\n",
                    r.x_star,
                    sig12(r.theta),
                    sig12(r.delta),
                    sig12(r.h_min),
                    sig12(r.h_vn),
                    r.security_valid,
                    sig12(sat)
                );
            }
            s
        }
        Format::Json => {
            let mut spec = json!({
                "alpha0": p.alpha0,
                "alpha1": p.alpha1,
                "beta1": p.beta1,
                "theta": p.theta,
                "delta": p.delta,
                "security_valid": p.security_valid(),
                "coefficients": {"c1": c.c1, "c2": c.c2, "c3": c.c3, "c4": c.c4},
            });
            if let Some(pre) = &preset {
                spec["preset"] = json!(pre.name());
                if let Preset::Wooltorton { omega } = pre {
                    spec["omega"] = json!(omega);
                }
            }
            if let Some(note) = annotation {
                spec["annotation"] = json!(note);
            }
            let mut checks = vec![
                json!({"name": "saturation", "status": "pass", "residual": sat}),
                json!({"name": "boundary", "status": "pass", "residual": boundary}),
                match &ledger {
                    Some(u) => json!({
                        "name": "ledger_uniqueness",
                        "status": if u.pass { "pass" } else { "fail" },
                        "residual": u.max_abs_gap,
                    }),
                    None => json!({
                        "name": "ledger_uniqueness",
                        "status": "skipped",
                        "note": "excluded domain",
                    }),
                },
            ];
            for (name, v) in &bell {
                checks.push(json!({"name": name, "value": v}));
            }
            let rows: Vec<Value> = reports.iter().map(|r| entropy_row(r, sat)).collect();
            emit_json(&json!({"spec": [spec], "rows": rows, "checks": checks}))
        }
    };
    write_out(a.out.as_ref(), &content)?;
    Ok(ExitCode::SUCCESS)
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

fn cmd_sweep(a: SweepArgs) -> Result<ExitCode> {
    if a.params.theta.is_some() {
        return Err(Error::InvalidInput(
            "--theta conflicts with sweep; use --theta-min/--theta-max".into(),
        ));
    }
    if a.x_star > 1 {
        return Err(Error::InvalidInput(format!(
            "--x-star must be 0 or 1, got {}",
            a.x_star
        )));
    }
    check_theta_range(a.theta_min, a.theta_max, a.steps)?;
    let (p, preset) = a.params.resolve()?;

    let mut rows = Vec::with_capacity(a.steps);
    for theta in linspace(a.theta_min, a.theta_max.min(FRAC_PI_4), a.steps) {
        let pt = p.with_theta(theta)?;
        let r = entropies(&pt, a.x_star);
        let sat = saturation_residual(&pt)?;
        rows.push((r, sat));
    }

    let content = match a.format {
        Format::Csv | Format::Text => {
            let mut s =
                String::from("theta,delta,h_min,h_vn,security_valid,saturation_residual\n");
            for (r, sat) in &rows {
                s += &format!(
                    "{},{},{},{},{},{}\n",
                    sig12(r.theta),
                    sig12(r.delta),
                    sig12(r.h_min),
                    sig12(r.h_vn),
                    r.security_valid,
                    sig12(*sat)
                );
            }
            s
        }
        Format::Json => {
            let mut spec = json!({
                "x_star": a.x_star,
                "theta_min": a.theta_min,
                "theta_max": a.theta_max,
                "steps": a.steps,
                "alpha0": p.alpha0,
                "alpha1": p.alpha1,
                "beta1": p.beta1,
                "delta": p.delta,
            });
            if let Some(pre) = &preset {
                spec["preset"] = json!(pre.name());
                if let Preset::Wooltorton { omega } = pre {
                    spec["omega"] = json!(omega);
                }
            }
            let rows: Vec<Value> = rows
                .iter()
                .map(|(r, sat)| {
                    json!({
                        "theta": r.theta,
                        "delta": r.delta,
                        "h_min": r.h_min,
                        "h_vn": r.h_vn,
                        "security_valid": r.security_valid,
                        "saturation_residual": sat,
                    })
                })
                .collect();
            emit_json(&json!({"spec": [spec], "rows": rows, "checks": []}))
        }
    };
    write_out(a.out.as_ref(), &content)?;
    Ok(ExitCode::SUCCESS)
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

fn render_checks_text(results: &[CheckResult]) -> String {
    let mut s = String::new();
    for c in results {
        let status = match c.status {
            CheckStatus::Pass => "PASS",
            CheckStatus::Fail => "FAIL",
            CheckStatus::Skipped => "SKIPPED",
        };
        s += &format!("{status:7} {}", c.name);
        if let (Some(r), Some(t)) = (c.residual, c.tolerance) {
            s += &format!("  residual={} tolerance={}", sig12(r), sig12(t));
        }
        if let Some(note) = &c.note {
            s += &format!("  ({note})");
        }
        s.push('\n');
    }
    s
}

fn cmd_verify(a: VerifyArgs) -> Result<ExitCode> {
    let (p, preset) = a.params.resolve()?;
    let results = if a.theta_min.is_some() || a.theta_max.is_some() || a.steps.is_some() {
        if a.params.theta.is_some() {
            return Err(Error::InvalidInput(
                "--theta conflicts with the grid options --theta-min/--theta-max/--steps".into(),
            ));
        }
        let lo = a.theta_min.unwrap_or(0.0);
        let hi = a.theta_max.unwrap_or(FRAC_PI_4);
        let steps = a.steps.unwrap_or(9);
        check_theta_range(lo, hi, steps)?;
        verify_suite_grid(&p, preset.as_ref(), &linspace(lo, hi.min(FRAC_PI_4), steps))?
    } else {
        verify_suite(&p, preset.as_ref())?
    };

    let failed = results.iter().any(|c| c.status == CheckStatus::Fail);
    let content = match a.format {
        Format::Text | Format::Csv => render_checks_text(&results),
        Format::Json => {
            let checks: Vec<Value> = results
                .iter()
                .map(|c| serde_json::to_value(c).expect("check serialization is total"))
                .collect();
            emit_json(&json!({"spec": [], "rows": [], "checks": checks}))
        }
    };
    write_out(a.out.as_ref(), &content)?;
    Ok(if failed {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    })
}

// ---------------------------------------------------------------------------
// presets
// ---------------------------------------------------------------------------

fn cmd_presets(a: PresetsArgs) -> Result<ExitCode> {
    let omega = a.omega.unwrap_or(FRAC_PI_6);
    let entries = [Preset::Chsh, Preset::wooltorton(omega)?];
    let expansions: Vec<(String, Option<f64>, ProtocolParams)> = entries
        .iter()
        .map(|pre| {
            let p = pre.params(FRAC_PI_8)?;
            let omega = match pre {
                Preset::Wooltorton { omega } => Some(*omega),
                Preset::Chsh => None,
            };
            Ok((pre.name().to_string(), omega, p))
        })
        .collect::<Result<_>>()?;

    let content = match a.format {
        Format::Text | Format::Csv => {
            let mut s = String::new();
            for (name, omega, p) in &expansions {
                s += name;
                if let Some(w) = omega {
                    s += &format!(" (omega={})", sig12(*w));
                }
                s += &format!(
                    ": alpha0={} alpha1={} beta1={} delta={}\n",
                    sig12(p.alpha0),
                    sig12(p.alpha1),
                    sig12(p.beta1),
                    sig12(p.delta)
                );
            }
            s
        }
        Format::Json => {
            let spec: Vec<Value> = expansions
                .iter()
                .map(|(name, omega, p)| {
                    let mut v = json!({
                        "preset": name,
                        "alpha0": p.alpha0,
                        "alpha1": p.alpha1,
                        "beta1": p.beta1,
                        "delta": p.delta,
                    });
                    if let Some(w) = omega {
                        v["omega"] = json!(w);
                    }
                    v
                })
                .collect();
            emit_json(&json!({"spec": spec, "rows": [], "checks": []}))
        }
    };
    write_out(a.out.as_ref(), &content)?;
    Ok(ExitCode::SUCCESS)
}
