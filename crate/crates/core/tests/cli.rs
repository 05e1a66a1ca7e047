use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use glmboot::io::{self, AnalysisConfig, BootstrapReport, FitReport};
use glmboot::rng::stream;
use glmboot::simulation::ExperimentManifest;
use glmboot::{FamilySpec, LambdaPolicy};
use rand::Rng;

fn glmboot(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_glmboot")).args(args).output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

/// Logistic data in columns y, a, b, c with signal on a and b.
fn write_logistic_csv(dir: &Path, n: usize) -> PathBuf {
    let mut rng = stream(99);
    let mut text = String::from("y,a,b,c\n");
    for _ in 0..n {
        let x: [f64; 3] = [rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)];
        let eta = 1.2 * x[0] - 0.8 * x[1];
        let y = u8::from(rng.random::<f64>() < 1.0 / (1.0 + (-eta).exp()));
        writeln!(text, "{y},{},{},{}", x[0], x[1], x[2]).unwrap();
    }
    let path = dir.join("data.csv");
    std::fs::write(&path, text).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn fit_report_round_trips_and_matches_library() {
    let dir = tempfile::tempdir().unwrap();
    let data = write_logistic_csv(dir.path(), 120);
    let out = dir.path().join("fit.json");
    let run = glmboot(&[
        "fit",
        "--family",
        "logistic",
        "--input",
        s(&data),
        "--response",
        "y",
        "--seed",
        "4",
        "--output",
        s(&out),
    ]);
    assert_eq!(code(&run), 0, "{}", String::from_utf8_lossy(&run.stderr));
    let from_disk: FitReport = io::read_json(&out).unwrap();
    let mut config = AnalysisConfig::new(&data, FamilySpec::logistic(), "y");
    config.seed = Some(4);
    let in_memory = io::run_fit(&config).unwrap();
    assert_eq!(from_disk, in_memory);
    assert_eq!(std::fs::read_to_string(&out).unwrap(), io::to_json(&in_memory).unwrap());
    assert!(from_disk.kkt_residual <= 1e-6 * (1.0 + from_disk.lambda));
    assert!(from_disk.active_set.contains(&"a".to_string()));
}

#[test]
fn huge_lambda_empties_the_active_set() {
    let dir = tempfile::tempdir().unwrap();
    let data = write_logistic_csv(dir.path(), 60);
    let run =
        glmboot(&["fit", "--family", "logistic", "--input", s(&data), "--response", "y", "--lambda", "fixed:1e6"]);
    assert_eq!(code(&run), 0);
    let report: FitReport = serde_json::from_slice(&run.stdout).unwrap();
    assert!(report.active_set.is_empty());
    assert!(report.beta_hat.iter().all(|c| c.estimate == 0.0));
    assert_eq!(report.lambda_policy, LambdaPolicy::Fixed { value: 1e6 });
}

#[test]
fn bootstrap_reruns_are_byte_identical_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let data = write_logistic_csv(dir.path(), 100);
    let mut texts = Vec::new();
    for (k, threads) in ["1", "2"].iter().enumerate() {
        let out = dir.path().join(format!("boot{k}.json"));
        let csv = dir.path().join(format!("boot{k}.csv"));
        let run = glmboot(&[
            "--threads",
            threads,
            "bootstrap",
            "--family",
            "logistic",
            "--input",
            s(&data),
            "--response",
            "y",
            "--B",
            "200",
            "--seed",
            "17",
            "--method",
            "prb",
            "--output",
            s(&out),
            "--csv",
            s(&csv),
        ]);
        assert_eq!(code(&run), 0, "{}", String::from_utf8_lossy(&run.stderr));
        assert!(String::from_utf8_lossy(&run.stderr).contains("warning"));
        let report: BootstrapReport = io::read_json(&out).unwrap();
        assert_eq!(report.intervals.len(), 3);
        assert!(report.intervals.iter().all(|e| e.two_sided[0] <= e.two_sided[1]));
        assert_eq!(io::to_json(&report).unwrap(), std::fs::read_to_string(&out).unwrap());
        texts.push((std::fs::read(&out).unwrap(), std::fs::read(&csv).unwrap()));
    }
    assert_eq!(texts[0], texts[1]);
}

#[test]
fn input_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let data = write_logistic_csv(dir.path(), 40);
    let base = ["bootstrap", "--family", "logistic", "--input", s(&data), "--response", "y"];

    let few = glmboot(&[&base[..], &["--B", "2", "--seed", "1"]].concat());
    assert_eq!(code(&few), 2);
    assert!(String::from_utf8_lossy(&few.stderr).contains("need at least 20"));

    assert_eq!(code(&glmboot(&[&base[..], &["--B", "50", "--seed", "1"]].concat())), 2);
    assert_eq!(code(&glmboot(&[&base[..], &["--B", "100"]].concat())), 2);
    assert_eq!(code(&glmboot(&["fit", "--family", "logistic", "--input", "/no/such/file.csv", "--response", "y"])), 2);
    assert_eq!(code(&glmboot(&["fit", "--family", "logistic", "--input", s(&data), "--response", "z"])), 2);
    assert_eq!(code(&glmboot(&["fit", "--family", "poisson", "--input", s(&data), "--response", "a"])), 2);
    assert_eq!(code(&glmboot(&["fit", "--family", "weibull", "--input", s(&data), "--response", "y"])), 2);

    let bad = dir.path().join("bad.csv");
    std::fs::write(&bad, "y,a\n1,0.5\n0,NA\n").unwrap();
    let run = glmboot(&["fit", "--family", "logistic", "--input", s(&bad), "--response", "y"]);
    assert_eq!(code(&run), 2);
    let msg = String::from_utf8_lossy(&run.stderr);
    assert!(msg.contains("row 2") && msg.contains('a'), "{msg}");
}

#[test]
fn unbounded_fit_exits_with_three() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sep.csv");
    std::fs::write(&path, "y,x\n0,-2\n0,-1\n1,1\n1,2\n").unwrap();
    let run = glmboot(&["fit", "--family", "logistic", "--input", s(&path), "--response", "y", "--lambda", "fixed:0"]);
    assert_eq!(code(&run), 3, "{}", String::from_utf8_lossy(&run.stderr));
}

#[test]
fn simulate_smoke_run() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("sim.toml");
    std::fs::write(&config, "family = \"logistic\"\nn = 50\np = 5\np0 = 2\nmc_reps = 1\nB = 100\nseed = 3\n").unwrap();
    let out = dir.path().join("out");
    let run = glmboot(&["simulate", "--config", s(&config), "--output", s(&out)]);
    assert_eq!(code(&run), 0, "{}", String::from_utf8_lossy(&run.stderr));
    let mut reader = csv::Reader::from_path(out.join("coverage.csv")).unwrap();
    assert_eq!(
        reader.headers().unwrap().iter().collect::<Vec<_>>(),
        ["coefficient_index", "true_value", "method", "side", "coverage", "mean_width"]
    );
    let mut rows = 0;
    for rec in reader.records() {
        let cov: f64 = rec.unwrap()[4].parse().unwrap();
        assert!(cov == 0.0 || cov == 1.0);
        rows += 1;
    }
    assert_eq!(rows, 5 * 3 + 1);
    let manifest: ExperimentManifest = io::read_json(&out.join("manifest.json")).unwrap();
    assert_eq!(manifest.replication_seeds.len(), 1);
    assert_eq!(manifest.config.replicates, 100);

    std::fs::write(&config, "family = \"logistic\"\nn = 50\np = 5\np0 = 9\nmc_reps = 1\nB = 100\nseed = 3\n").unwrap();
    assert_eq!(code(&glmboot(&["simulate", "--config", s(&config), "--output", s(&out)])), 2);
    std::fs::write(&config, "family = \"logistic\"\nn = 50\nunknown = 1\n").unwrap();
    assert_eq!(code(&glmboot(&["simulate", "--config", s(&config), "--output", s(&out)])), 2);
}
