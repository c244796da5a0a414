use std::path::Path;
use std::process::{Command, Output};

use lmmaes_cli::read_stream;

fn lmmaes(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lmmaes"))
        .args(args)
        .current_dir(dir)
        .env_remove("LMMAES_OUTPUT_DIR")
        .output()
        .expect("binary runs")
}

#[test]
fn identical_configs_give_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    for (problem, extra) in [("9", ["--mu", "5"]), ("rosenbrock", ["--reps", "3"])] {
        let mut outputs = Vec::new();
        for name in ["a.csv", "b.csv"] {
            let mut args = vec!["run", "--problem", problem, "--dim", "8", "--budget", "3000", "--seed", "12", "--out", name];
            args.extend(extra);
            let out = lmmaes(dir.path(), &args);
            assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
            outputs.push(std::fs::read(dir.path().join(name)).unwrap());
        }
        assert_eq!(outputs[0], outputs[1]);
    }
}

#[test]
fn output_directory_follows_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_lmmaes"))
        .args(["run", "--problem", "cigar", "--dim", "6", "--budget", "200", "--reps", "1"])
        .current_dir(dir.path())
        .env("LMMAES_OUTPUT_DIR", "logs")
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(dir.path().join("logs/elitist-lmma_cigar_n6.csv").exists());
}

#[test]
fn usage_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        vec!["run", "--problem", "sphere", "--algo", "mo-fullrank", "--dim", "8"],
        vec!["run", "--problem", "2", "--algo", "lmma", "--dim", "8"],
        vec!["run", "--problem", "12", "--dim", "8"],
        vec!["run", "--problem", "sphere", "--dim", "8", "--reps", "0"],
        vec!["run", "--dim", "8"],
        vec!["frobnicate"],
    ] {
        let out = lmmaes(dir.path(), &args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn unreadable_input_is_an_io_failure() {
    let dir = tempfile::tempdir().unwrap();
    let out = lmmaes(dir.path(), &["summarize", "missing.csv"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn overflowing_run_is_reported_as_aborted() {
    let dir = tempfile::tempdir().unwrap();
    let out = lmmaes(dir.path(), &["run", "--problem", "sphere", "--dim", "4", "--sigma0", "1e300", "--reps", "1", "--out", "x.csv"]);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
    let (_, records) = read_stream(&dir.path().join("x.csv")).unwrap();
    assert!(!records.is_empty());
}

#[test]
fn config_file_runs_and_summarizes() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("exp.json"),
        r#"{"mode":"multi","algorithm":"mo-fullrank","problem":"4","dimensions":[6],"mu":4,
            "budget":{"per-mu-n":50},"target":1e-8,"repetitions":3,"seed":5}"#,
    )
    .unwrap();
    let out = lmmaes(dir.path(), &["run", "--config", "exp.json", "--format", "jsonl", "--out", "runs.jsonl"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let (header, records) = read_stream(&dir.path().join("runs.jsonl")).unwrap();
    assert_eq!(header.config.repetitions, 3);
    assert!(records.iter().all(|r| r.evaluations <= 50 * 4 * 6));
    let seeds: std::collections::BTreeSet<u64> = records.iter().map(|r| r.seed).collect();
    assert_eq!(seeds.into_iter().collect::<Vec<_>>(), vec![5, 6, 7]);

    let out = lmmaes(dir.path(), &["summarize", "runs.jsonl", "--out", "median.csv"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(dir.path().join("median.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("evaluations,median,runs"));
    let medians: Vec<f64> = lines.map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    assert!(medians.windows(2).all(|w| w[1] <= w[0]), "median gap must not rise");
}

#[test]
fn log_header_reconstructs_the_problem() {
    let dir = tempfile::tempdir().unwrap();
    let out = lmmaes(dir.path(), &["run", "--problem", "8", "--dim", "10", "--budget", "100", "--reps", "1", "--seed", "3", "--out", "h.csv"]);
    assert!(out.status.success());
    let (header, _) = read_stream(&dir.path().join("h.csv")).unwrap();
    let rebuilt = header.problem.rebuild_biobjective().unwrap().unwrap();
    let original = lmmaes::problems::make_biobjective(8, 10, 1e3, 3).unwrap();
    let x: Vec<f64> = (0..10).map(|i| (i as f64).cos()).collect();
    let (a, b) = (rebuilt.eval(&x).unwrap(), original.eval(&x).unwrap());
    assert_eq!((a[0].to_bits(), a[1].to_bits()), (b[0].to_bits(), b[1].to_bits()));
}

#[test]
fn list_problems_names_all_nine() {
    let dir = tempfile::tempdir().unwrap();
    let out = lmmaes(dir.path(), &["list-problems"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for id in 1..=9 {
        assert!(text.lines().any(|l| l.trim_start().starts_with(&format!("{id} "))));
    }
    assert!(text.contains("rosenbrock"));
}
