use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ballschwarz"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

#[test]
fn config_errors_exit_two() {
    assert_eq!(code(&run(&["verify", "--suite", "bogus"])), 2);
    assert_eq!(code(&run(&["verify", "--suite", "sharp", "--format", "xml"])), 2);
    assert_eq!(code(&run(&["verify", "--suite", "sharp", "--n", "2"])), 2);
    assert_eq!(code(&run(&["verify", "--no-such-flag"])), 2);
    assert_eq!(code(&run(&["verify", "--fields", "rand:deg=x"])), 2);
}

#[test]
fn exhausted_budget_exits_three() {
    let o = run(&["verify", "--suite", "sharp", "--n", "3", "--budget", "1"]);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("budget"));
}

#[test]
fn clean_run_exits_zero_with_csv() {
    let o = run(&["verify", "--suite", "sharp", "--n", "3"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "suite,id,n,location,lhs,rhs,slack,budget,verdict,note"
    );
    assert!(lines.all(|l| !l.contains(",FAIL,")));
}

#[test]
fn json_output_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rows.json");
    let o = run(&[
        "verify", "--suite", "mobius", "--n", "3", "--format", "json", "--out", path.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 4);
    assert!(rows.iter().all(|r| r["verdict"] == "PASS"));
}

#[test]
fn same_seed_is_byte_identical_across_worker_counts() {
    let args = ["verify", "--suite", "thm1", "--n", "3,4", "--fields", "3", "--points", "4", "--seed", "7"];
    let a = bin().args(args).env("BALLSCHWARZ_WORKERS", "1").output().unwrap();
    let b = bin().args(args).env("BALLSCHWARZ_WORKERS", "4").output().unwrap();
    let c = bin().args(args).env("BALLSCHWARZ_WORKERS", "1").output().unwrap();
    assert_eq!(code(&a), 0);
    assert!(!a.stdout.is_empty());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
}

#[test]
fn different_seed_changes_points() {
    let base = ["verify", "--suite", "thm1", "--n", "3", "--fields", "2", "--points", "3", "--seed"];
    let a = bin().args(base).arg("7").output().unwrap();
    let b = bin().args(base).arg("8").output().unwrap();
    assert_ne!(a.stdout, b.stdout);
}

#[test]
fn plot_data_and_info() {
    let o = run(&["plot-data", "--n", "4"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.starts_with("curve,n,r,value,error"));
    for curve in ["U,", "phi,", "sup_C,", "closed_form_n4,", "A_n,"] {
        assert!(text.lines().any(|l| l.starts_with(curve)), "missing {curve}");
    }
    let o = run(&["info", "--n", "3,4"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.contains("0.41421356"));
}
