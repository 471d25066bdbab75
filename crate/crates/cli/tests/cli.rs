use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn eulerkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eulerkit")).args(args).output().expect("binary runs")
}

fn result(out: &Output) -> Value {
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    v["result"].clone()
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(format!("cli-{name}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn beta_of_halves_is_pi() {
    let r = result(&eulerkit(&["specfun", "beta", "0.5", "0.5"]));
    assert!((r["value"].as_f64().unwrap() - std::f64::consts::PI).abs() <= 1e-9);
}

#[test]
#[allow(clippy::approx_constant)]
fn beam_reports_b_and_residual() {
    let r = result(&eulerkit(&["ode", "beam", "--K", "1", "--l", "3.14159", "--A", "1"]));
    let u: f64 = 3.14159;
    let b = (u.sin() + u.sinh()) / (u.cos() + u.cosh());
    assert!((r["b"].as_f64().unwrap() - b).abs() < 1e-14);
    assert!(r["residual"]["max"].as_f64().unwrap() <= 1e-8);
    assert!(r["end_deflection"].as_f64().unwrap().abs() <= 1e-10);
}

#[test]
fn arclength_minimizer_is_straight() {
    let r = result(&eulerkit(&["var", "minimize", "--functional", "arclength", "--N", "50", "--a", "0", "--b", "2"]));
    assert!(r["summary"]["oracle_deviation"].as_f64().unwrap() <= 1e-6);
    assert_eq!(r["nodes"].as_array().unwrap().len(), 51);
}

#[test]
fn solve_then_eval_round_trip() {
    let dir = scratch("roundtrip");
    let out = eulerkit(&["ode", "solve", "--coeffs", "4,0,1", "--cond", "0:0:1", "--cond", "0:1:0.5", "--out", dir.to_str().unwrap()]);
    let solved = result(&out);
    // y = cos 2x + sin(2x)/4
    let file = dir.join("result.json");
    let r = result(&eulerkit(&["ode", "eval", "--solution", file.to_str().unwrap(), "--x", "0.3,-1.2", "--order", "1"]));
    for p in r["points"].as_array().unwrap() {
        let x = p["x"].as_f64().unwrap();
        let d = p["derivatives"].as_array().unwrap();
        assert!((d[0].as_f64().unwrap() - ((2.0 * x).cos() + (2.0 * x).sin() / 4.0)).abs() < 1e-13);
        assert!((d[1].as_f64().unwrap() - (-2.0 * (2.0 * x).sin() + (2.0 * x).cos() / 2.0)).abs() < 1e-13);
    }
    // the solution document survives a parse and re-emit unchanged
    let doc: eulerkit::linode::SolutionDoc = serde_json::from_value(solved["solution"].clone()).unwrap();
    assert_eq!(serde_json::to_value(&doc).unwrap(), solved["solution"]);
}

#[test]
fn out_directory_holds_manifest_with_timestamp() {
    let dir = scratch("manifest");
    let out = eulerkit(&["ode", "oscillator", "--M", "1", "--K", "4", "--F", "1", "--wa", "1.5", "--t", "3", "--grid-n", "7", "--out", dir.to_str().unwrap()]);
    let stdout: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(stdout["manifest"].get("timestamp").is_none());
    assert_eq!(stdout["manifest"]["tolerances"]["grid_n"], 7.0);
    let sidecar: Value = serde_json::from_str(&std::fs::read_to_string(dir.join("manifest.json")).unwrap()).unwrap();
    assert!(sidecar["timestamp"].as_u64().unwrap() > 0);
    assert_eq!(std::fs::read(dir.join("result.json")).unwrap(), out.stdout);
    let csv = std::fs::read_to_string(dir.join("oscillator.csv")).unwrap();
    assert_eq!(csv.lines().count(), 8);
    assert!(csv.starts_with("t,x\n"));
}

#[test]
fn exit_codes() {
    assert_eq!(eulerkit(&["ode", "beam", "--K", "1", "--l", "2", "--bogus"]).status.code(), Some(2));
    assert_eq!(eulerkit(&["ode", "frobnicate"]).status.code(), Some(2));
    let bad = eulerkit(&["ode", "beam", "--K", "-1", "--l", "2"]);
    assert_eq!(bad.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&bad.stderr).unwrap();
    assert_eq!(err["error"]["module"], "linode");
    // z' + z^2 = 0 from z(0) = -1 blows up at x = 1
    let pole = eulerkit(&["first", "riccati", "--a", "0", "--n", "0", "--v", "0", "--dv", "0", "--x0", "0", "--z0", "-1", "--x", "2"]);
    assert_eq!(pole.status.code(), Some(1));
    let err: Value = serde_json::from_slice(&pole.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "Pole");
    assert_eq!(eulerkit(&["first", "separable", "--f", "x +", "--g", "1", "--x0", "0", "--y0", "0", "--x-end", "1"]).status.code(), Some(2));
}

#[test]
fn suite_config_handling() {
    let dir = scratch("suite");
    let only = dir.join("specfun.json");
    std::fs::write(&only, r#"{"seed": 7, "groups": ["specfun"]}"#).unwrap();
    let r = result(&eulerkit(&["suite", "acceptance", "--config", only.to_str().unwrap()]));
    let ids: Vec<u64> = r["criteria"].as_array().unwrap().iter().map(|c| c["id"].as_u64().unwrap()).collect();
    assert_eq!(ids, vec![5, 6]);
    assert_eq!(r["passed"], true);

    let corrupt = dir.join("corrupt.json");
    std::fs::write(&corrupt, r#"{"seed": 7, "groups": ["#).unwrap();
    let out = eulerkit(&["suite", "acceptance", "--config", corrupt.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("corrupt.json"));
    let missing = dir.join("missing.json");
    assert_eq!(eulerkit(&["suite", "acceptance", "--config", missing.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn residual_of_written_path_matches_summary() {
    let dir = scratch("residual");
    let d = dir.to_str().unwrap();
    let m = result(&eulerkit(&["var", "minimize", "--functional", "dirichlet", "--param", "source=2", "--N", "40", "--a", "0", "--b", "1", "--out", d]));
    let path = dir.join("path.csv");
    let r = result(&eulerkit(&["var", "residual", "--functional", "dirichlet", "--param", "source=2", "--a", "0", "--b", "1", "--path", path.to_str().unwrap()]));
    assert_eq!(r["el_residual_middle"], m["summary"]["el_residual"]);
    assert!(r["grad_norm"].as_f64().unwrap() <= 1e-9);
}
