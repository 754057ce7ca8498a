//! End-to-end checks of the command-line surface: grid-file input,
//! key-value configuration, output files, and run determinism.

use std::path::Path;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_multirate"))
}

fn run(args: &[&str]) -> (String, String, bool) {
    let out = bin().args(args).output().expect("binary runs");
    (
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
        out.status.success(),
    )
}

#[test]
fn coeffs_from_a_grid_file_reproduces_the_2to1_rule() {
    let dir = std::env::temp_dir().join("multirate_cli_grid");
    std::fs::create_dir_all(&dir).unwrap();
    let grid = dir.join("pattern.grid");
    // 2:1 steady state in ticks of 2^-20
    let a: Vec<String> = (-4..=1).map(|i| (2 * i).to_string()).collect();
    let b: Vec<String> = (-8..=2).map(|i| i.to_string()).collect();
    std::fs::write(
        &grid,
        format!(
            "resolution_exponent -20\n{}\n{}\n",
            a.join(" "),
            b.join(" ")
        ),
    )
    .unwrap();
    let (stdout, stderr, ok) = run(&[
        "coeffs",
        "--order",
        "3",
        "--pattern",
        grid.to_str().unwrap(),
        "--set",
        "0",
        "--start",
        "0",
    ]);
    assert!(ok, "stderr: {stderr}");
    assert!(stdout.contains("115/64"), "missing entry in:\n{stdout}");
    assert!(stdout.contains("-115/96"));
    assert!(stdout.contains("11/192"));
}

#[test]
fn coeffs_rejects_bad_input() {
    let (_, _, ok) = run(&["coeffs", "--order", "9", "--pattern", "steady"]);
    assert!(!ok);
    let (_, _, ok) = run(&["coeffs", "--order", "3", "--pattern", "/nonexistent.grid"]);
    assert!(!ok);
}

#[test]
fn evolve_from_config_file_is_deterministic() {
    let dir = std::env::temp_dir().join("multirate_cli_evolve");
    std::fs::create_dir_all(&dir).unwrap();
    let config = dir.join("run.cfg");
    std::fs::write(
        &config,
        "problem wave\norder 3\nelements 8\nnodes 6\ncfl_threshold 2^-9\n\
         t_end 1/16\ninitial_step_exponent -18\n",
    )
    .unwrap();
    let run_once = |sub: &str| -> (String, String) {
        let out_dir = dir.join(sub);
        let (stdout, stderr, ok) = run(&[
            "evolve",
            "--config",
            config.to_str().unwrap(),
            "--out",
            out_dir.to_str().unwrap(),
        ]);
        assert!(ok, "stderr: {stderr}");
        assert!(stdout.contains("max_rel_drift"));
        let snapshot = std::fs::read_to_string(out_dir.join("snapshot.csv")).unwrap();
        let steps = std::fs::read_to_string(out_dir.join("steps.csv")).unwrap();
        assert!(Path::new(&out_dir.join("report.txt")).exists());
        (snapshot, steps)
    };
    let (snap1, steps1) = run_once("a");
    let (snap2, steps2) = run_once("b");
    assert_eq!(snap1, snap2, "snapshots must be bitwise identical");
    assert_eq!(steps1, steps2, "step logs must be bitwise identical");
    // the step log is the (set, start ticks, size ticks) record stream
    let mut lines = steps1.lines();
    assert_eq!(lines.next(), Some("set,start_ticks,size_ticks"));
    let first = lines.next().unwrap();
    let fields: Vec<&str> = first.split(',').collect();
    assert_eq!(fields.len(), 3);
    fields[1].parse::<i64>().unwrap();
    assert_eq!(fields[2].parse::<i64>().unwrap(), 1 << (40 - 18));
}

#[test]
fn selftest_fast_exits_zero() {
    let (stdout, _, ok) = run(&["selftest", "--fast"]);
    assert!(ok, "selftest failed:\n{stdout}");
    assert!(stdout.lines().filter(|l| l.starts_with("PASS")).count() >= 12);
    assert!(!stdout.contains("FAIL"));
}
