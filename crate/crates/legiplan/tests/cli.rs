use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn scenario(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("scenarios").join(format!("{name}.json"))
}

fn legiplan(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_legiplan"))
        .args(args)
        .env("LEGIPLAN_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stderr_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stderr).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stderr)))
}

#[test]
fn invalid_scenario_exits_1_with_error_json() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(
        &bad,
        r#"{"version": 1, "robot": {"position": [0, 0]},
            "goals": [{"id": "a", "position": [3, 0], "is_target": true},
                      {"id": "b", "position": [3, 2], "is_target": true}]}"#,
    )
    .unwrap();
    let out = legiplan(&["plan", "--scenario", s(&bad), "--mode", "legible", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
    let err = stderr_json(&out);
    assert_eq!(err["error"], "validation");
    assert_eq!(err["path"], "goals");
    assert_eq!(err["rule"], "exactly one target");
}

#[test]
fn unknown_keys_and_missing_files_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let typo = dir.path().join("typo.json");
    std::fs::write(
        &typo,
        r#"{"version": 1, "robot": {"position": [0, 0], "radius_m": 0.3},
            "goals": [{"id": "a", "position": [3, 0], "is_target": true}]}"#,
    )
    .unwrap();
    let out = legiplan(&["plan", "--scenario", s(&typo)]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stderr_json(&out)["path"], "robot.radius_m");

    let out = legiplan(&["plan", "--scenario", s(&dir.path().join("absent.json"))]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stderr_json(&out)["error"], "io");
}

#[test]
fn usage_errors_exit_1_and_help_exits_0() {
    let out = legiplan(&["plan", "--scenario", "x.json", "--bogus"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Usage"));
    let out = legiplan(&["simulate", "--scenario", "x.json"]);
    assert_eq!(out.status.code(), Some(1));
    let out = legiplan(&["plan", "--scenario", "x.json", "--mode", "fast"]);
    assert_eq!(out.status.code(), Some(1));
    let out = legiplan(&[]);
    assert_eq!(out.status.code(), Some(1));
    let out = legiplan(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("compare"));
}

#[test]
fn unavoidable_collision_exits_2() {
    // moving fast down a dead-end corridor with weak brakes
    let dir = tempfile::tempdir().unwrap();
    let trap = dir.path().join("trap.json");
    std::fs::write(
        &trap,
        r#"{"version": 1,
            "robot": {"position": [0, 0], "speed": 1.0, "a_max": 0.25, "omega_max_deg": 10},
            "goals": [{"id": "g", "position": [-2, 0], "is_target": true}],
            "obstacles": [{"rect": {"min": [-5, 0.4], "max": [1.2, 0.6]}},
                          {"rect": {"min": [-5, -0.6], "max": [1.2, -0.4]}},
                          {"rect": {"min": [1.0, -0.6], "max": [1.2, 0.6]}}]}"#,
    )
    .unwrap();
    let csv = dir.path().join("trap.csv");
    let out = legiplan(&["simulate", "--scenario", s(&trap), "--mode", "baseline", "--seed", "1", "--out", s(&csv)]);
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stderr));
    let err = stderr_json(&out);
    assert_eq!(err["error"], "planner");
    assert_eq!(err["cycle"], 0);
    assert_eq!(err["breakdown"]["collided"], true);
    // the start row is still logged
    let log = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(log.lines().count(), 2);

    let out = legiplan(&["plan", "--scenario", s(&trap), "--seed", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn plan_prints_breakdown_and_writes_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let (csv, svg) = (dir.path().join("p.csv"), dir.path().join("p.svg"));
    let out = legiplan(&[
        "plan", "--scenario", s(&scenario("fig3_obstacle_detour")), "--mode", "legible", "--seed", "3", "--out", s(&csv), "--svg", s(&svg),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let b: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(b["collided"], false);
    assert!(b["sim_term"].as_f64().unwrap() != 0.0);
    let log = std::fs::read_to_string(&csv).unwrap();
    assert!(log.starts_with("t,x,y,heading,v,omega,clearance\n0.000000,"));
    assert_eq!(log.lines().count(), 14);
    assert!(std::fs::read_to_string(&svg).unwrap().starts_with("<svg"));
}

#[test]
fn simulate_then_evaluate() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("run.csv");
    let sc = scenario("restaurant_front");
    let out = legiplan(&["simulate", "--scenario", s(&sc), "--mode", "legible", "--seed", "7", "--out", s(&csv)]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let summary: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(summary["reached"], true);
    assert!(summary["min_clearance"].as_f64().unwrap() >= 0.0);

    let out = legiplan(&["evaluate", "--scenario", s(&sc), "--trajectory", s(&csv)]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(r["partial_fractions"], serde_json::json!([0.25, 0.5, 0.75]));
    let c: Vec<f64> = r["correctness"].as_array().unwrap().iter().map(|v| v.as_f64().unwrap()).collect();
    let l = r["score"].as_f64().unwrap();
    assert!((l - (c[0] + c[1] / 2.0 + c[2] / 3.0) / (11.0 / 6.0)).abs() < 1e-12);
    assert_eq!(r["posteriors"][0].as_object().unwrap().len(), 2);

    let out = legiplan(&[
        "evaluate", "--scenario", s(&sc), "--trajectory", s(&csv), "--beta", "0", "--fractions", "0.1,0.9", "--mask-fov",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(r["correctness"], serde_json::json!([0.5, 0.5]));

    let out = legiplan(&["evaluate", "--scenario", s(&sc), "--trajectory", s(&csv), "--fractions", "0.5,1.5"]);
    assert_eq!(out.status.code(), Some(1));

    let bad = dir.path().join("bad.csv");
    std::fs::write(&bad, "t,x,y\n0,0,0\n").unwrap();
    let out = legiplan(&["evaluate", "--scenario", s(&sc), "--trajectory", s(&bad)]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stderr_json(&out)["error"], "trajectory");
}

#[test]
fn mask_fov_needs_an_observer() {
    let dir = tempfile::tempdir().unwrap();
    let sc = dir.path().join("bare.json");
    std::fs::write(&sc, r#"{"version": 1, "robot": {"position": [0, 0]}, "goals": [{"id": "a", "position": [3, 0], "is_target": true}]}"#).unwrap();
    let csv = dir.path().join("t.csv");
    std::fs::write(&csv, "t,x,y,heading,v,omega,clearance\n0,0,0,0,0,0,1\n0.4,1,0,0,1,0,1\n").unwrap();
    let out = legiplan(&["evaluate", "--scenario", s(&sc), "--trajectory", s(&csv), "--mask-fov"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stderr_json(&out)["path"], "observers");
    let out = legiplan(&["evaluate", "--scenario", s(&sc), "--trajectory", s(&csv)]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn compare_reports_both_planners() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("cmp.svg");
    let out = legiplan(&["compare", "--scenario", s(&scenario("fig1_two_goals")), "--seed", "7", "--svg", s(&svg)]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r: Value = serde_json::from_slice(&out.stdout).unwrap();
    let (lb, ll) = (r["L_baseline"].as_f64().unwrap(), r["L_legible"].as_f64().unwrap());
    assert!(ll > lb);
    assert!((r["L_delta"].as_f64().unwrap() - (ll - lb)).abs() < 1e-15);
    assert_eq!(r["c_delta"].as_array().unwrap().len(), 3);
    let figure = std::fs::read_to_string(&svg).unwrap();
    assert!(figure.contains("#006400") && figure.contains("#90ee90"));
}

#[test]
fn bad_thread_count_is_rejected() {
    let out = Command::new(env!("CARGO_BIN_EXE_legiplan"))
        .args(["plan", "--scenario", scenario("fig1_two_goals").to_str().unwrap()])
        .env("LEGIPLAN_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stderr_json(&out)["error"], "environment");
}
