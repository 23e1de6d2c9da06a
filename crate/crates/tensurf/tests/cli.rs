//! End-to-end tests of the `tensurf` binary: subcommands, exit codes,
//! output formats, the config-file environment variable, and determinism.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_tensurf"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn temp_path(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("tensurf_cli_{}_{name}", std::process::id()))
}

#[test]
fn verify_sphere_all_emits_nine_reports() {
    let out = run(&["verify", "--surface", "sphere:r=1", "--identity", "all", "--res", "16",
        "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let reports = tensurf::report::parse_json(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert_eq!(reports.len(), 9);
    assert!(reports.iter().all(|r| r.pass));
}

#[test]
fn verify_single_identity_on_torus() {
    let out = run(&["verify", "--surface", "torus:R=2,r=0.5", "--identity", "IN=0", "--res",
        "64", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let reports = tensurf::report::parse_json(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert_eq!(reports.len(), 1);
    assert!(reports[0].residual < 1e-10, "residual {}", reports[0].residual);
}

#[test]
fn unknown_selectors_exit_2_and_list_options() {
    let out = run(&["verify", "--surface", "sphere:r=1", "--identity", "bogus"]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("IN=0"), "stderr lists valid identities: {stderr}");

    let out = run(&["verify", "--surface", "klein-bottle"]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("torus"), "stderr lists valid surfaces: {stderr}");

    let out = run(&["verify", "--res", "4"]);
    assert_eq!(out.status.code(), Some(2));

    let out = run(&["verify", "--format", "yaml"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn failing_tolerance_exits_1() {
    let out = run(&["verify", "--surface", "sphere:r=1", "--identity", "IR.N", "--res", "16",
        "--tol", "1e-30"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn csv_output_has_expected_header() {
    let out = run(&["verify", "--surface", "disk:r=1", "--identity", "all", "--res", "16",
        "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with(
        "identity_id,surface,resolution,lhs,rhs,residual,tolerance,pass,wall_time_ms,notes"
    ));
    assert_eq!(text.lines().count(), 4, "header plus three patch identities");
}

#[test]
fn machine_output_is_deterministic_and_timings_opt_in() {
    let out_a = temp_path("det_a.json");
    let out_b = temp_path("det_b.json");
    for out in [&out_a, &out_b] {
        let status = bin()
            .args(["verify", "--surface", "hemisphere:r=1", "--identity", "all", "--res", "24",
                "--seed", "5", "--format", "json", "--out"])
            .arg(out)
            .status()
            .unwrap();
        assert_eq!(status.code(), Some(0));
    }
    let bytes_a = std::fs::read(&out_a).unwrap();
    assert_eq!(bytes_a, std::fs::read(&out_b).unwrap());

    // Without --timings every wall_time_ms is zero; with it, some are not.
    let reports = tensurf::report::parse_json(std::str::from_utf8(&bytes_a).unwrap()).unwrap();
    assert!(reports.iter().all(|r| r.wall_time_ms == 0.0));

    let timed = bin()
        .args(["verify", "--surface", "hemisphere:r=1", "--identity", "all", "--res", "24",
            "--format", "json", "--timings"])
        .output()
        .unwrap();
    let reports =
        tensurf::report::parse_json(&String::from_utf8(timed.stdout).unwrap()).unwrap();
    assert!(reports.iter().any(|r| r.wall_time_ms > 0.0));

    for out in [&out_a, &out_b] {
        let _ = std::fs::remove_file(out);
    }
}

#[test]
fn config_file_env_var_sets_defaults_and_flags_override() {
    let config_path = temp_path("config.json");
    std::fs::write(
        &config_path,
        r#"{"surfaces": ["disk:r=1"], "identities": ["patch-N"], "resolutions": [16], "format": "json"}"#,
    )
    .unwrap();

    let out = bin()
        .arg("verify")
        .env("TENSURF_CONFIG", &config_path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let reports = tensurf::report::parse_json(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert_eq!(reports.len(), 1);
    assert_eq!(reports[0].identity_id, "patch-N");

    // A flag beats the file: the surface moves to the hemisphere.
    let out = bin()
        .args(["verify", "--surface", "hemisphere:r=1"])
        .env("TENSURF_CONFIG", &config_path)
        .output()
        .unwrap();
    let reports = tensurf::report::parse_json(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert_eq!(reports[0].surface, "hemisphere:r=1");

    // A malformed config file is a configuration error.
    std::fs::write(&config_path, "{not json").unwrap();
    let out = bin().arg("verify").env("TENSURF_CONFIG", &config_path).output().unwrap();
    assert_eq!(out.status.code(), Some(2));

    let _ = std::fs::remove_file(&config_path);
}

#[test]
fn converge_reports_orders_and_requires_two_resolutions() {
    let out = run(&["converge", "--surface", "ellipsoid:a=1,b=1.3,c=0.7", "--identity",
        "IR.NH", "--res", "16,32", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("identity_id,surface,resolution,residual,observed_order"));
    assert_eq!(text.lines().count(), 3);
    // The 32x32 row carries an observed order.
    let last = text.lines().next_back().unwrap();
    assert!(last.split(',').next_back().unwrap().parse::<f64>().is_ok(), "{last}");

    let out = run(&["converge", "--surface", "sphere:r=1", "--identity", "IR.N", "--res", "32"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn pointwise_covers_structural_checks() {
    let out = run(&["pointwise", "--surface", "sphere:r=1", "--grid", "10", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<serde_json::Value> = serde_json::from_str(&text).unwrap();
    let checks: Vec<&str> = rows.iter().map(|r| r["check"].as_str().unwrap()).collect();
    assert_eq!(checks, ["weingarten", "codazzi", "gauss"]);
    assert!(rows.iter().all(|r| r["pass"].as_bool().unwrap()));
}

#[test]
fn pointwise_default_surface_set_passes() {
    let out = run(&["pointwise", "--grid", "8"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn ambient_check_passes_for_builtin_charts() {
    let out = run(&["ambient-check", "--points", "25", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let rows: Vec<serde_json::Value> =
        serde_json::from_str(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert!(rows.iter().all(|r| r["pass"].as_bool().unwrap()));
    let subjects: std::collections::HashSet<&str> =
        rows.iter().map(|r| r["subject"].as_str().unwrap()).collect();
    assert_eq!(subjects.len(), 3);

    let out = run(&["ambient-check", "--chart", "klein"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn list_names_every_surface_and_identity() {
    let out = run(&["list"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    for needle in ["sphere", "torus", "hypersphere3", "catenoid", "IN=0", "patch-NK", "topo-K",
        "spherical"]
    {
        assert!(text.contains(needle), "list output missing {needle}");
    }
}

#[test]
fn topology_identity_runs_once_globally() {
    let out = run(&["verify", "--surface", "sphere:r=1", "--identity", "topo-K", "--res", "32",
        "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let reports = tensurf::report::parse_json(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert_eq!(reports.len(), 1);
    assert_eq!(reports[0].identity_id, "topo-K");
}
