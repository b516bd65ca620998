//! End-to-end tests of the seqdi binary: flag handling, exit codes,
//! output formats, and byte-level determinism.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_seqdi"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_str(&stdout(o)).expect("valid json")
}

// ---------------------------------------------------------------------------
// report
// ---------------------------------------------------------------------------

#[test]
fn report_chsh_at_pi_over_8_certifies_two_bits() {
    let out = run(&[
        "report",
        "--preset",
        "chsh",
        "--theta",
        "0.3926990817",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let v = json(&out);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 2);
    let x0 = &rows[0];
    assert_eq!(x0["x_star"], 0);
    assert!((x0["h_min"].as_f64().unwrap() - 2.0).abs() < 1e-9);
    assert_eq!(x0["security_valid"], true);
}

#[test]
fn report_wooltorton_includes_saturated_bell_value() {
    let out = run(&[
        "report",
        "--preset",
        "wooltorton",
        "--omega",
        "0.5235987756",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let v = json(&out);
    let checks = v["checks"].as_array().unwrap();
    let get = |name: &str| -> f64 {
        checks
            .iter()
            .find(|c| c["name"] == name)
            .unwrap_or_else(|| panic!("missing {name}"))["value"]
            .as_f64()
            .unwrap()
    };
    let target = 3.0 * 3.0f64.sqrt();
    assert!((get("i_omega") - target).abs() < 1e-6);
    assert!((get("i_omega_bound") - target).abs() < 1e-6);
}

#[test]
fn report_rejects_degenerate_alice_angles() {
    let out = run(&[
        "report", "--alpha0", "0", "--alpha1", "0", "--beta1", "1", "--delta", "1",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("degenerate Alice angles"));
}

#[test]
fn report_text_carries_endpoint_annotation() {
    let out = run(&["report", "--preset", "chsh", "--theta", "0"]);
    assert!(out.status.success());
    let s = stdout(&out);
    assert!(s.contains("security_valid: false"));
    assert!(s.contains("annotation: endpoint reference values"));
    assert!(s.contains("ledger: skipped (excluded domain)"));
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

#[test]
fn sweep_csv_contract() {
    let out = run(&["sweep", "--preset", "chsh"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(!text.contains('\r'), "LF endings only");
    let lines: Vec<&str> = text.trim_end().split('\n').collect();
    assert_eq!(lines.len(), 102, "header + 101 rows");
    assert_eq!(
        lines[0],
        "theta,delta,h_min,h_vn,security_valid,saturation_residual"
    );

    // Row 51 sits at theta = pi/8 on the default 101-point grid.
    let mid: Vec<&str> = lines[51].split(',').collect();
    let theta: f64 = mid[0].parse().unwrap();
    let h_min: f64 = mid[2].parse().unwrap();
    assert!((theta - std::f64::consts::FRAC_PI_8).abs() < 1e-12);
    assert!((h_min - 2.0).abs() < 1e-9);

    // Endpoint rows carry security_valid = false, interior rows true.
    assert_eq!(lines[1].split(',').nth(4), Some("false"));
    assert_eq!(lines[101].split(',').nth(4), Some("false"));
    assert_eq!(lines[51].split(',').nth(4), Some("true"));

    // Every float field spells 12 significant digits.
    for field in lines[1].split(',') {
        if field.contains('e') && field.parse::<f64>().is_ok() {
            let mantissa = field.split('e').next().unwrap();
            let digits = mantissa.chars().filter(|c| c.is_ascii_digit()).count();
            assert_eq!(digits, 12, "{field}");
        }
    }
}

#[test]
fn sweep_is_byte_identical_across_runs_and_sinks() {
    let a = run(&["sweep", "--preset", "wooltorton", "--omega", "0.5", "--steps", "11"]);
    let b = run(&["sweep", "--preset", "wooltorton", "--omega", "0.5", "--steps", "11"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);

    let path = std::env::temp_dir().join(format!("seqdi-sweep-{}.csv", std::process::id()));
    let c = run(&[
        "sweep",
        "--preset",
        "wooltorton",
        "--omega",
        "0.5",
        "--steps",
        "11",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(c.status.success());
    assert!(c.stdout.is_empty());
    let written = std::fs::read(&path).unwrap();
    std::fs::remove_file(&path).ok();
    assert_eq!(written, a.stdout);
}

#[test]
fn sweep_json_envelope_shape() {
    let out = run(&["sweep", "--preset", "chsh", "--steps", "3", "--format", "json"]);
    assert!(out.status.success());
    let v = json(&out);
    assert!(v.is_object());
    assert_eq!(v.as_object().unwrap().len(), 3);
    assert!(v["spec"].is_array());
    assert!(v["rows"].is_array());
    assert!(v["checks"].is_array());
    assert_eq!(v["rows"].as_array().unwrap().len(), 3);
    let row = &v["rows"][0];
    for key in [
        "theta",
        "delta",
        "h_min",
        "h_vn",
        "security_valid",
        "saturation_residual",
    ] {
        assert!(row.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["spec"][0]["preset"], "chsh");
}

#[test]
fn sweep_rejects_invalid_specs() {
    let bad_steps = run(&["sweep", "--preset", "chsh", "--steps", "1"]);
    assert_eq!(bad_steps.status.code(), Some(2));

    let bad_range = run(&["sweep", "--preset", "chsh", "--theta-max", "1.0"]);
    assert_eq!(bad_range.status.code(), Some(2));

    let bad_x = run(&["sweep", "--preset", "chsh", "--x-star", "2"]);
    assert_eq!(bad_x.status.code(), Some(2));

    let theta_conflict = run(&["sweep", "--preset", "chsh", "--theta", "0.3"]);
    assert_eq!(theta_conflict.status.code(), Some(2));
}

#[test]
fn sweep_rejects_unwritable_output_path() {
    let out = run(&[
        "sweep",
        "--preset",
        "chsh",
        "--steps",
        "3",
        "--out",
        "/nonexistent-dir/sweep.csv",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("error:"));
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

#[test]
fn verify_passes_on_both_presets() {
    let chsh = run(&["verify", "--preset", "chsh", "--theta", "0.3"]);
    assert_eq!(chsh.status.code(), Some(0));
    assert!(stdout(&chsh).contains("PASS"));
    assert!(!stdout(&chsh).contains("FAIL"));

    let woolt = run(&[
        "verify",
        "--preset",
        "wooltorton",
        "--omega",
        "0.5236",
        "--theta",
        "0.3",
    ]);
    assert_eq!(woolt.status.code(), Some(0));
    assert!(stdout(&woolt).contains("i_omega_saturation"));
    assert!(!stdout(&woolt).contains("FAIL"));
}

#[test]
fn verify_at_zero_strength_skips_the_ledger_and_exits_zero() {
    let out = run(&["verify", "--preset", "chsh", "--theta", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let s = stdout(&out);
    let ledger_line = s
        .lines()
        .find(|l| l.contains("ledger_uniqueness"))
        .unwrap();
    assert!(ledger_line.contains("SKIPPED"));
    assert!(ledger_line.contains("excluded domain"));
}

#[test]
fn verify_grid_and_json_output() {
    let out = run(&[
        "verify", "--preset", "chsh", "--steps", "5", "--format", "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let checks = v["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 16);
    for c in checks {
        assert_ne!(c["status"], "fail", "{c}");
    }
    let sat = checks.iter().find(|c| c["name"] == "saturation").unwrap();
    assert_eq!(sat["status"], "pass");
    assert!(sat["residual"].as_f64().unwrap() < 1e-10);
}

#[test]
fn verify_rejects_grid_theta_conflict() {
    let out = run(&[
        "verify", "--preset", "chsh", "--theta", "0.2", "--steps", "4",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

// ---------------------------------------------------------------------------
// presets and argument plumbing
// ---------------------------------------------------------------------------

#[test]
fn presets_lists_both_families() {
    let out = run(&["presets"]);
    assert!(out.status.success());
    let s = stdout(&out);
    assert!(s.contains("chsh:"));
    assert!(s.contains("wooltorton"));

    let j = run(&["presets", "--omega", "0.4", "--format", "json"]);
    let v = json(&j);
    assert_eq!(v["spec"].as_array().unwrap().len(), 2);
    assert_eq!(v["spec"][1]["omega"], 0.4);
}

#[test]
fn preset_flag_validation() {
    assert_eq!(run(&["report", "--preset", "nope"]).status.code(), Some(2));
    assert_eq!(
        run(&["report", "--preset", "wooltorton"]).status.code(),
        Some(2),
        "wooltorton requires --omega"
    );
    assert_eq!(
        run(&["report", "--preset", "chsh", "--omega", "0.4"]).status.code(),
        Some(2),
        "chsh takes no omega"
    );
    assert_eq!(
        run(&["report", "--preset", "chsh", "--delta", "1.0"]).status.code(),
        Some(2),
        "angle flags conflict with presets"
    );
    assert_eq!(
        run(&["report", "--alpha0", "0.1", "--alpha1", "1.2"]).status.code(),
        Some(2),
        "explicit mode requires all four angles"
    );
    assert_eq!(
        run(&["report", "--preset", "chsh", "--theta", "0.9"]).status.code(),
        Some(2),
        "theta beyond pi/4"
    );
}
