//! Black-box tests of the `maxmin` binary.

use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

const SCALAR: &str = "K = 1\nN = 1\np_max = 2.0\nA = [1.0]\nb = [1.0]\nC = [0.0]\nsigma = [1.0]\n";

fn maxmin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_maxmin")).args(args).output().unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn field(doc: &str, key: &str) -> f64 {
    let line = doc.lines().find(|l| l.starts_with(&format!("{key} = "))).unwrap();
    line.split('=').nth(1).unwrap().trim().parse().unwrap()
}

const SMALL_SCENARIO: &str = "[monte_carlo]\nn_samples = 64\nn_stat_samples = 64\n[run]\nn_setups = 3\n";

#[test]
fn solve_scalar_instance() {
    let dir = TempDir::new().unwrap();
    let path = write(&dir, "scalar.toml", SCALAR);
    let out = maxmin(&["solve", &path]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let doc = stdout(&out);
    assert_eq!(field(&doc, "t_star"), 2.0);
    assert!(doc.contains("active_n = 1"));
    assert!(doc.contains("certified = true"));
}

#[test]
fn solve_with_oracles_on_random_instance() {
    let dir = TempDir::new().unwrap();
    let inst = dir.path().join("rand.toml");
    let gen = maxmin(&["generate", "--users", "9", "--constraints", "4", "--seed", "3", "-o", inst.to_str().unwrap()]);
    assert_eq!(gen.status.code(), Some(0));
    let out = maxmin(&["solve", inst.to_str().unwrap(), "--oracle"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let d = field(&stdout(&out), "oracle_max_rel_discrepancy");
    assert!(d <= 1e-8, "discrepancy {d}");
}

#[test]
fn malformed_file_fails_without_output() {
    let dir = TempDir::new().unwrap();
    let path = write(&dir, "bad.toml", "K = 1\nN = [\n");
    let out = maxmin(&["solve", &path]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("line"));

    let target = dir.path().join("never.toml");
    let out = maxmin(&["solve", &path, "-o", target.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!target.exists());
}

#[test]
fn invalid_instance_reports_violation() {
    let dir = TempDir::new().unwrap();
    let path = write(&dir, "zero.toml", &SCALAR.replace("A = [1.0]", "A = [0.0]"));
    let out = maxmin(&["solve", &path]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("user 1 unconstrained"));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(maxmin(&["solve"]).status.code(), Some(1));
    assert_eq!(maxmin(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(maxmin(&["--help"]).status.code(), Some(0));
    let dir = TempDir::new().unwrap();
    let path = write(&dir, "s.toml", SCALAR);
    assert_eq!(maxmin(&["sweep", &path, "--pmax-dbm", "0:10"]).status.code(), Some(1));
    assert_eq!(maxmin(&["sweep", &path]).status.code(), Some(1));
    assert_eq!(maxmin(&["solve", &path, "--tol", "-1"]).status.code(), Some(1));
    assert_eq!(maxmin(&["simulate", "--regimes", "mesh"]).status.code(), Some(1));
}

#[test]
fn missing_file_is_a_validation_error() {
    assert_eq!(maxmin(&["solve", "/nonexistent/instance.toml"]).status.code(), Some(2));
}

#[test]
fn sweep_instance_csv() {
    let dir = TempDir::new().unwrap();
    let inst = dir.path().join("i.toml");
    maxmin(&["generate", "--users", "5", "--constraints", "2", "--seed", "8", "--irreducible", "-o", inst.to_str().unwrap()]);
    let out = maxmin(&["sweep", inst.to_str().unwrap(), "--pmax-dbm", "-40:40:5"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "p_max_dBm,t_star,bound,regime,min_rate_bps_hz");
    let rows: Vec<Vec<String>> = lines.map(|l| l.split(',').map(String::from).collect()).collect();
    assert_eq!(rows.len(), 17);
    assert_eq!(rows[0][0], "-40.0000");
    let t: Vec<f64> = rows.iter().map(|r| r[1].parse().unwrap()).collect();
    assert!(t.windows(2).all(|w| w[1] >= w[0]));
    for r in &rows {
        let (t, b): (f64, f64) = (r[1].parse().unwrap(), r[2].parse().unwrap());
        assert!(t <= b * (1.0 + 1e-9));
        assert!(["noise_limited", "transition", "interference_limited"].contains(&r[3].as_str()));
        assert!((r[4].parse::<f64>().unwrap() - (1.0 + t).log2()).abs() < 1e-9);
    }
}

#[test]
fn sweep_scenario_around_transition_point() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "scenario.toml", SMALL_SCENARIO);
    let out = maxmin(&["sweep", &cfg, "--decades", "3", "--points-per-decade", "2", "--regime", "distributed"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 1 + 13);
    assert!(text.lines().nth(1).unwrap().contains("noise_limited"));
    assert!(text.lines().last().unwrap().contains("interference_limited"));
    assert!(text.lines().nth(7).unwrap().contains("transition"));
}

#[test]
fn simulate_is_deterministic_across_thread_counts() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "scenario.toml", SMALL_SCENARIO);
    let a = maxmin(&["--threads", "1", "simulate", &cfg, "--seed", "5"]);
    let b = maxmin(&["--threads", "4", "simulate", &cfg, "--seed", "5"]);
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert_eq!(text.lines().count(), 1 + 3 * 3);
    let c = maxmin(&["simulate", &cfg, "--seed", "6"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn simulate_subset_of_regimes_and_setups() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "scenario.toml", SMALL_SCENARIO);
    let out = maxmin(&["simulate", &cfg, "--regimes", "centralized,cellular", "--setups", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let regimes: Vec<&str> = text.lines().skip(1).map(|l| l.split(',').nth(2).unwrap()).collect();
    assert_eq!(regimes, ["cellular", "centralized", "cellular", "centralized"]);
}

#[test]
fn channel_export_solves_standalone() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "scenario.toml", SMALL_SCENARIO);
    let doc = dir.path().join("eff.toml");
    let out = maxmin(&["channel", &cfg, "--regime", "centralized", "-o", doc.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&doc).unwrap();
    assert!(text.contains("regime = \"centralized\""));
    assert!(Path::new(&doc).exists());
    let solved = maxmin(&["solve", doc.to_str().unwrap()]);
    assert_eq!(solved.status.code(), Some(0));
}

#[test]
fn bad_scenario_is_rejected() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "scenario.toml", "[geometry]\naps = 3\n");
    let out = maxmin(&["simulate", &cfg]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
}
