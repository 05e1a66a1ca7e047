use std::fmt::Write as _;

use glmboot::bootstrap::{Centering, Method};
use glmboot::io::{self, AnalysisConfig};
use glmboot::rng::{derive_seed, stream};
use glmboot::simulation::{
    design_covariance, design_hash, generate_design, generate_responses, representative_ks, run_experiment, Setting,
    SimConfig,
};
use glmboot::{FamilySpec, LambdaPolicy};
use nalgebra::{DMatrix, DVector};
use rand::Rng;

const COIMBRA_COLUMNS: [&str; 9] =
    ["Age", "BMI", "Glucose", "Insulin", "HOMA", "Leptin", "Adiponectin", "Resistin", "MCP.1"];

/// A file with the same layout as the Coimbra study data: nine clinical
/// covariates on their natural scales and a class label in {1, 2}.
fn coimbra_shaped(dir: &std::path::Path) -> std::path::PathBuf {
    let mut rng = stream(116);
    let mut text = format!("{},Classification\n", COIMBRA_COLUMNS.join(","));
    for _ in 0..116 {
        let age = rng.random_range(24.0..89.0f64).round();
        let bmi = rng.random_range(18.0..38.0f64);
        let glucose = rng.random_range(60.0..200.0f64).round();
        let insulin = rng.random_range(2.0..58.0f64);
        let homa = glucose * insulin / 405.0 * rng.random_range(0.9..1.1);
        let leptin = rng.random_range(4.0..90.0f64);
        let adiponectin = rng.random_range(1.6..38.0f64);
        let resistin = rng.random_range(3.0..82.0f64);
        let mcp = rng.random_range(45.0..1700.0f64);
        let eta = -0.15 * (bmi - 27.0) + 0.04 * (glucose - 97.0) + 0.03 * (resistin - 14.0);
        let class = if rng.random::<f64>() < 1.0 / (1.0 + (-eta).exp()) { 2 } else { 1 };
        writeln!(
            text,
            "{age},{bmi:.4},{glucose},{insulin:.3},{homa:.5},{leptin:.4},{adiponectin:.5},{resistin:.4},{mcp:.3},{class}"
        )
        .unwrap();
    }
    let path = dir.join("coimbra_shaped.csv");
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn clinical_workflow_end_to_end() {
    let dir = tempfile::tempdir().unwrap();
    let path = coimbra_shaped(dir.path());
    let covariates: Vec<String> = COIMBRA_COLUMNS.iter().map(|s| s.to_string()).collect();

    let loaded = io::load_csv(&path, "Classification", Some(&covariates)).unwrap();
    assert_eq!((loaded.dataset.n(), loaded.dataset.p()), (116, 9));
    assert_eq!(loaded.covariates, covariates);

    let mut config = AnalysisConfig::new(&path, FamilySpec::logistic(), "Classification");
    config.covariates = Some(covariates.clone());
    config.positive_class = Some("2".into());
    config.intercept = true;
    config.standardize = true;
    config.replicates = 300;
    config.seed = Some(8);
    let report = io::run_bootstrap_analysis(&config).unwrap();
    assert_eq!(report.fit.n, 116);
    assert_eq!(report.intervals.len(), 10);
    assert_eq!(report.intervals[0].name, "(intercept)");
    assert!(report.fit.lambda > 0.0);
    assert!(report.fit.kkt_residual <= 1e-6 * (1.0 + report.fit.lambda));
    for c in &report.fit.beta_hat {
        assert_eq!(report.fit.active_set.contains(&c.name), c.estimate != 0.0);
    }
    for e in &report.intervals {
        assert!(e.two_sided[0] <= e.two_sided[1]);
        assert!(e.two_sided[0] <= e.left_lower && e.right_upper <= e.two_sided[1]);
    }
    let again = io::run_bootstrap_analysis(&config).unwrap();
    assert_eq!(io::to_json(&report).unwrap(), io::to_json(&again).unwrap());

    config.centering = Centering::Naive;
    config.method = Method::Prb;
    let prb = io::run_bootstrap_analysis(&config).unwrap();
    assert_eq!(prb.fit, report.fit);

    let diag = io::run_diagnose(&config).unwrap();
    assert!(diag.diagnostics.replicate_covariance.is_some());
}

#[test]
fn fixed_scaled_and_sum_lambda_policies() {
    let dir = tempfile::tempdir().unwrap();
    let path = coimbra_shaped(dir.path());
    let mut config = AnalysisConfig::new(&path, FamilySpec::logistic(), "Classification");
    config.positive_class = Some("2".into());
    config.standardize = true;
    config.lambda = LambdaPolicy::Scaled { lambda0: 0.025 };
    let scaled = io::run_fit(&config).unwrap();
    assert!((scaled.lambda - 0.025 * 116f64.sqrt()).abs() < 1e-12);
    config.lambda = "cv:5".parse().unwrap();
    let mean = io::run_fit(&config).unwrap();
    config.lambda = "cv-sum:5".parse().unwrap();
    let sum = io::run_fit(&config).unwrap();
    assert!((sum.lambda / mean.lambda - 116.0).abs() < 1e-9);
}

#[test]
fn responses_follow_the_family_mean() {
    let n = 20_000;
    let x = DMatrix::from_fn(n, 1, |i, _| if i % 2 == 0 { 0.5 } else { -0.5 });
    let beta = DVector::from_element(1, 0.8);
    for family in [
        FamilySpec::linear(),
        FamilySpec::logistic(),
        FamilySpec::probit(),
        FamilySpec::poisson(),
        FamilySpec::gamma(2.0).unwrap(),
    ] {
        let y = generate_responses(&family, &x, &beta, &mut stream(derive_seed(5, family.id as u64))).unwrap();
        for parity in 0..2 {
            let u = if parity == 0 { 0.4 } else { -0.4 };
            let ys: Vec<f64> = y.iter().skip(parity).step_by(2).copied().collect();
            let m = ys.len() as f64;
            let mean = ys.iter().sum::<f64>() / m;
            let sd = family.var_fun(u).sqrt();
            assert!((mean - family.g_inv(u)).abs() <= 5.0 * sd / m.sqrt(), "{} at {u}: {mean}", family.id.as_str());
            assert!(ys.iter().all(|v| family.supports(*v)));
        }
    }
}

#[test]
fn design_has_the_ar_covariance() {
    let (n, p) = (20_000, 4);
    let x = generate_design(n, p, &mut stream(31)).unwrap();
    let cov = x.tr_mul(&x) / n as f64;
    let target = DMatrix::from_fn(p, p, |j, k| 0.3f64.powi((j as i32 - k as i32).abs()));
    assert!((design_covariance(p) - &target).amax() <= 1e-15);
    assert!((cov - &target).amax() <= 0.05);
}

fn small_config() -> SimConfig {
    let mut config = SimConfig::logistic(80, 4, 2, 6, 100, 12);
    config.methods = vec![Method::Pb, Method::Prb];
    config.lambda = LambdaPolicy::cv(5);
    config
}

#[test]
fn experiments_reproduce_on_a_frozen_design() {
    let config = small_config();
    let (table, manifest) = run_experiment(&config).unwrap();
    let (again, manifest_again) = run_experiment(&config).unwrap();
    assert_eq!(table.to_csv_string().unwrap(), again.to_csv_string().unwrap());
    assert_eq!(io::to_json(&manifest).unwrap(), io::to_json(&manifest_again).unwrap());

    let setting = Setting::new(&config).unwrap();
    assert_eq!(manifest.design_hash, design_hash(&setting.design));
    assert_eq!(table.design_hash, manifest.design_hash);
    assert_eq!(table.completed_reps + table.failed_reps, config.mc_reps);
    for seed in &manifest.replication_seeds {
        let (data, _) = setting.draw(&config, *seed).unwrap();
        assert_eq!(data.x(), &setting.design);
    }
    let other = run_experiment(&SimConfig { seed: 13, ..config }).unwrap().0;
    assert_ne!(table.to_csv_string().unwrap(), other.to_csv_string().unwrap());
}

#[test]
fn centerings_agree_when_every_coefficient_is_large() {
    // p = p0 = 2 with |β| ≥ 0.5, well above n^(-1/3) at n = 300
    let mut config = SimConfig::logistic(300, 2, 2, 1, 200, 21);
    config.lambda = LambdaPolicy::cv(5);
    let ks = representative_ks(&config).unwrap();
    assert!(ks.iter().all(|d| *d == 0.0), "{ks:?}");
}

#[test]
fn centerings_differ_on_null_coefficients() {
    let mut config = SimConfig::logistic(300, 5, 2, 1, 300, 21);
    config.lambda = LambdaPolicy::cv(5);
    let ks = representative_ks(&config).unwrap();
    assert_eq!(ks.len(), 5);
    assert!(ks[2..].iter().any(|d| *d > 0.0), "{ks:?}");
}
