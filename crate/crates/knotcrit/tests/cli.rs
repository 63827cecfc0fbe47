//! Smoke tests of the installed binary: JSON shape, exit codes, CSV output.

use std::process::Command;

fn knotcrit(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_knotcrit"))
        .args(args)
        .output()
        .expect("binary runs")
}

#[test]
fn expect_emits_json_with_expected_value() {
    let out = knotcrit(&["expect", "--knot", "circle", "--family", "veronese:n=2,ell=3"]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let mu = doc["mu"].as_f64().unwrap();
    assert!((mu - 2.0 * 7f64.sqrt()).abs() < 1e-8);
    assert_eq!(doc["converged"], serde_json::Value::Bool(true));
    assert_eq!(doc["family"], "veronese:n=2,ell=3");
}

#[test]
fn degenerate_pair_exits_with_code_two() {
    let out = knotcrit(&[
        "expect",
        "--knot",
        "circle:center=1,0",
        "--family",
        "veronese:n=2,ell=2",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("degenerate"), "stderr: {stderr}");
}

#[test]
fn bad_spec_exits_with_code_one() {
    let out = knotcrit(&["expect", "--knot", "square", "--family", "trig:n=2"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn tau_matches_closed_form() {
    let out = knotcrit(&["tau", "--knot", "circle", "--veronese-ell", "2"]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((doc["tau_over_pi"].as_f64().unwrap() - 4.0).abs() < 1e-8);
}

#[test]
fn closed_form_command() {
    let out = knotcrit(&["closed-form", "--family", "trig:n=4"]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((doc["mu"].as_f64().unwrap() - 6.8702).abs() < 5e-4);
}

#[test]
fn mc_writes_csv_and_repeats_byte_identically() {
    let dir = tempfile::tempdir().unwrap();
    let csv_path = dir.path().join("samples.csv");
    let args = [
        "mc",
        "--knot",
        "circle",
        "--family",
        "trig:n=2",
        "--samples",
        "500",
        "--seed",
        "7",
        "--csv-out",
        csv_path.to_str().unwrap(),
    ];
    let first = knotcrit(&args);
    assert!(first.status.success());
    let first_csv = std::fs::read(&csv_path).unwrap();

    let second = knotcrit(&args);
    let second_csv = std::fs::read(&csv_path).unwrap();
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(first_csv, second_csv);

    let text = String::from_utf8(first_csv).unwrap();
    assert!(text.starts_with("index,seed,count,discarded_attempts\n"));
    assert_eq!(text.lines().count(), 501);
}

#[test]
fn compare_passes_on_unit_circle() {
    let out = knotcrit(&[
        "compare",
        "--knot",
        "circle",
        "--family",
        "veronese:n=2,ell=2",
        "--samples",
        "500",
    ]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["pass"], serde_json::Value::Bool(true));
    assert!((doc["formula"]["mu"].as_f64().unwrap() - 4.0).abs() < 1e-9);
}

#[test]
fn fourier_file_knot_via_cli() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("offset.json");
    std::fs::write(
        &path,
        r#"{"dim": 2, "coords": [[{"k":0,"a":3.0},{"k":1,"a":1.0}],[{"k":1,"b":1.0}]]}"#,
    )
    .unwrap();
    let knot_arg = format!("file:{}", path.display());
    let out = knotcrit(&["expect", "--knot", &knot_arg, "--family", "veronese:n=2,ell=2"]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((doc["mu"].as_f64().unwrap() - 2.065930048230).abs() < 1e-6);
}
