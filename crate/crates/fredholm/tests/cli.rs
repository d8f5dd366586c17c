use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fredholm")).args(args).output().unwrap()
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn index_of_a_quadratic() {
    let o = run(&["index", "--coeffs", r#"{"-2":[1,0],"-1":[0.5,0],"0":[0.06,0]}"#]);
    assert_eq!(o.status.code(), Some(0));
    let v = stdout_json(&o);
    assert_eq!(v["status"], "fredholm");
    assert_eq!(v["index"], 2);
    let w = stdout_json(&run(&["index", "--method", "winding", "--coeffs", r#"{"-2":[1,0],"-1":[0.5,0],"0":[0.06,0]}"#]));
    assert_eq!(w["index"], 2);
}

#[test]
fn not_fredholm_is_a_result() {
    let o = run(&["index", "--coeffs", r#"{"0":[-1,0],"1":[1,0]}"#]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout_json(&o)["status"], "not_fredholm");
}

#[test]
fn validation_errors_exit_two() {
    assert_eq!(run(&["index", "--coeffs", "{}"]).status.code(), Some(2));
    assert_eq!(run(&["index", "--coeffs", "not json"]).status.code(), Some(2));
    assert_eq!(run(&["index"]).status.code(), Some(2));
    assert_eq!(run(&["jumps", "--ensemble", "quaternion"]).status.code(), Some(2));
}

#[test]
fn computation_errors_exit_one_with_json() {
    let o = run(&["truncate", "--mode", "signature", "--coeffs", r#"{"-1":[1,0],"0":[-0.95,0]}"#, "--N", "64"]);
    assert_eq!(o.status.code(), Some(1));
    let err: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(err["error"], "inconclusive");
}

#[test]
fn config_file_and_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "# small run\nensemble = real\ndegree = 2\npaths = 20\nsteps = 50\nseed = 4\n").unwrap();
    let cfg = cfg.to_str().unwrap();
    let from_file = stdout_json(&run(&["--config", cfg, "jumps"]));
    assert_eq!(from_file["paths"], 20);
    assert_eq!(from_file["seed"], 4);
    let overridden = stdout_json(&run(&["--config", cfg, "jumps", "--seed", "9"]));
    assert_eq!(overridden["seed"], 9);
    assert_eq!(overridden["paths"], 20);
}

#[test]
fn unknown_config_key_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "ensemble = real\ncolour = blue\n").unwrap();
    let o = run(&["--config", cfg.to_str().unwrap(), "jumps"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn jumps_do_not_depend_on_threads() {
    let args = ["jumps", "--ensemble", "complex", "--degree", "3", "--paths", "40", "--steps", "60", "--seed", "5"];
    let one = run(&[&["--threads", "1"], &args[..]].concat());
    let two = run(&[&["--threads", "3"], &args[..]].concat());
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, two.stdout);
}

#[test]
fn portrait_writes_csv_and_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("q.csv");
    let o = run(&["portrait", "--family", "quadratic-real", "--res", "21", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("c1,c0,index"));
    assert_eq!(lines.count(), 21 * 21);
    let side: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("q.json")).unwrap()).unwrap();
    assert_eq!(side["family"], "quadratic-real");
    assert_eq!(side["cross_check"]["mismatches"], 0);
}

#[test]
fn landau_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("w.csv");
    let o = run(&["qhe", "landau", "--mmax", "100", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("m,w,asymptote,residual\n"));
    assert_eq!(text.lines().count(), 102);
}

#[test]
fn wrap_reports_slope() {
    let o = run(&["wrap", "--ell", "2", "--delta", "0.5", "--N", "50,100"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v = stdout_json(&o);
    assert!(v["slope"].as_f64().is_some(), "{v}");
}
