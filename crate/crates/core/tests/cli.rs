//! The binary end to end: exit codes, output files and repeatability.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_uavrelay");

fn manifest() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn fixture(name: &str) -> String {
    manifest().join("fixtures").join(name).display().to_string()
}

fn urban() -> String {
    manifest().join("../../configs/urban.cfg").display().to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn read(p: impl AsRef<Path>) -> String {
    std::fs::read_to_string(p.as_ref()).unwrap_or_else(|e| panic!("{}: {e}", p.as_ref().display()))
}

/// Value printed after `label = ` on the line that starts with `label`.
fn radius(text: &str, label: &str) -> f64 {
    let line = text.lines().find(|l| l.starts_with(label)).unwrap();
    line.split('=').nth(1).unwrap().split_whitespace().next().unwrap().parse().unwrap()
}

#[test]
fn radii_for_urban_config() {
    let o = run(&["radii", "--config", &urban()]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    let (r1, r2) = (radius(&text, "R1"), radius(&text, "R2"));
    assert!((r1 - 2214.0).abs() / 2214.0 <= 0.02, "{text}");
    assert!((r2 - 3774.0).abs() / 3774.0 <= 0.005, "{text}");
}

#[test]
fn solve_dmlp_on_golden_writes_decision() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = run(&["solve", "--config", &fixture("golden.toml"), "--solver", "dmlp", "--out", out]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let record: serde_json::Value = serde_json::from_str(&read(dir.path().join("decision.json"))).unwrap();
    assert_eq!(record["solver"], "dmlp");
    assert!(record["supported_fraction"].as_f64().unwrap() <= 1.0);
}

#[test]
fn solve_reports_infeasible_and_node_limit() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    // three occupied sites that cannot move, but room for one UAV
    let o = run(&["solve", "--config", &fixture("golden.toml"), "--solver", "milp", "--prev", "0,1,2", "--nmax", "1", "--out", out]);
    assert_eq!(code(&o), 2);

    let cfg = dir.path().join("limit.toml");
    let text = format!(
        "scenario_file = {:?}\n[region]\ngrid_rows = 5\ngrid_cols = 5\n[solve]\nnode_limit = 1\n",
        fixture("golden_scenario.json")
    );
    std::fs::write(&cfg, text).unwrap();
    let o = run(&["solve", "--config", cfg.to_str().unwrap(), "--solver", "milp", "--out", out]);
    assert_eq!(code(&o), 3, "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn usage_errors_exit_one() {
    let o = run(&["simulate", "--no-such-flag"]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("--no-such-flag"));
    assert_eq!(code(&run(&["solve", "--grid", "3by3"])), 1);
    assert_eq!(code(&run(&["radii", "--config", "/nonexistent.toml"])), 1);
}

#[test]
fn generate_is_repeatable() {
    let dir = tempfile::tempdir().unwrap();
    let files: Vec<PathBuf> = ["a.json", "b.json"].iter().map(|n| dir.path().join(n)).collect();
    for f in &files {
        let o = run(&["generate", "--seed", "5", "--clusters", "6", "--snapshots", "3", "--out", f.to_str().unwrap()]);
        assert_eq!(code(&o), 0);
    }
    assert_eq!(read(&files[0]), read(&files[1]));
    let o = run(&["solve", "--scenario", files[0].to_str().unwrap(), "--grid", "3x3", "--snapshot", "2", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&o), 0);
}

#[test]
fn simulate_is_repeatable_and_reportable() {
    let dir = tempfile::tempdir().unwrap();
    let outs: Vec<PathBuf> = ["a", "b"].iter().map(|n| dir.path().join(n)).collect();
    for d in &outs {
        let args = ["simulate", "--solver", "both", "--snapshots", "5", "--seed", "7", "--clusters", "3", "--grid", "4x4"];
        let o = run(&[&args[..], &["--out", d.to_str().unwrap()]].concat());
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    }
    for f in ["results.csv", "summary.csv"] {
        assert_eq!(read(outs[0].join(f)), read(outs[1].join(f)), "{f}");
    }
    // the recorded configs differ only in the output directory
    let without_dir = |d: &Path| -> Vec<String> {
        read(d.join("config.toml")).lines().filter(|l| !l.starts_with("dir =")).map(String::from).collect()
    };
    assert_eq!(without_dir(&outs[0]), without_dir(&outs[1]));
    let results = read(outs[0].join("results.csv"));
    assert_eq!(results.lines().count(), 1 + 5 * 2);

    // the summary rebuilt from the results file matches the one written by simulate
    let agg = dir.path().join("agg");
    let o = run(&["report", outs[0].join("results.csv").to_str().unwrap(), "--out", agg.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert_eq!(read(agg.join("summary.csv")), read(outs[0].join("summary.csv")));

    // the saved config replays the same experiment
    let replay = dir.path().join("replay");
    let o = run(&["simulate", "--config", outs[0].join("config.toml").to_str().unwrap(), "--out", replay.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert_eq!(read(replay.join("results.csv")), results);
}
