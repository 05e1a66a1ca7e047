//! CSV ingestion, analysis drivers and JSON reports for the command line.
//!
//! Covariates are used exactly as read unless standardization is requested.
//! All randomness comes from the analysis seed: fold assignment draws from
//! the `CV_FOLDS` child stream and the bootstrap from the `BOOTSTRAP` child.

use std::fs::File;
use std::io::{BufReader, Read, Write};
use std::path::{Path, PathBuf};

use nalgebra::{DMatrix, DVector};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::bootstrap::{
    centering_for, run_bootstrap, variance_diagnostics, BootstrapConfig, Centering, Method, ThresholdRule,
    VarianceDiagnostics, WeightDistribution,
};
use crate::error::{Error, Result};
use crate::family::{validate_dataset, Dataset, FamilySpec};
use crate::inference::{min_replicates, percentile_intervals};
use crate::rng::{derive_tagged, domain, stream};
use crate::solver::{fit, LambdaPolicy, LassoFit, PenalizedProblem, SolverSettings};

pub const SCHEMA_VERSION: u32 = 1;

/// Smallest `B` accepted by the inference commands.
pub const MIN_INFERENCE_REPLICATES: usize = 100;

/// Name given to the constant column added by `intercept`.
pub const INTERCEPT_NAME: &str = "(intercept)";

/// Parsed columns of a CSV file.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadedData {
    pub dataset: Dataset,
    pub response: String,
    pub covariates: Vec<String>,
}

/// How the response column is read.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ResponseCoding {
    /// When set, `y = 1` for cells equal to this label and `0` otherwise.
    pub positive_class: Option<String>,
}

pub fn load_csv(path: &Path, response: &str, covariates: Option<&[String]>) -> Result<LoadedData> {
    load_csv_coded(path, response, covariates, &ResponseCoding::default())
}

pub fn load_csv_coded(
    path: &Path,
    response: &str,
    covariates: Option<&[String]>,
    coding: &ResponseCoding,
) -> Result<LoadedData> {
    let file = File::open(path).map_err(|e| Error::InvalidDataset(format!("cannot open `{}`: {e}", path.display())))?;
    load_csv_reader(BufReader::new(file), response, covariates, coding)
}

/// Parse comma-separated text with a header row. `covariates = None` takes
/// every column except the response, in file order. Data rows in errors are
/// numbered from 1.
pub fn load_csv_reader<R: Read>(
    reader: R,
    response: &str,
    covariates: Option<&[String]>,
    coding: &ResponseCoding,
) -> Result<LoadedData> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(reader);
    let headers: Vec<String> =
        rdr.headers().map_err(|e| Error::Csv(e.to_string()))?.iter().map(str::to_string).collect();
    let find = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::InvalidDataset(format!("column `{name}` not found")))
    };
    let y_col = find(response)?;
    let covariates: Vec<String> = match covariates {
        Some(c) => c.to_vec(),
        None => headers.iter().filter(|h| h.as_str() != response).cloned().collect(),
    };
    if covariates.is_empty() {
        return Err(Error::InvalidDataset("no covariate columns".into()));
    }
    let mut x_cols = Vec::with_capacity(covariates.len());
    for (k, name) in covariates.iter().enumerate() {
        if name == response {
            return Err(Error::InvalidDataset(format!("`{name}` is both response and covariate")));
        }
        if covariates[..k].contains(name) {
            return Err(Error::InvalidDataset(format!("covariate `{name}` listed twice")));
        }
        x_cols.push(find(name)?);
    }

    let parse = |cell: &str, row: usize, column: &str| -> Result<f64> {
        let v: f64 = cell.parse().map_err(|_| Error::CsvCell {
            row,
            column: column.to_string(),
            message: format!("cannot parse `{cell}` as a number"),
        })?;
        if !v.is_finite() {
            return Err(Error::CsvCell { row, column: column.to_string(), message: format!("`{cell}` is not finite") });
        }
        Ok(v)
    };

    let mut xs: Vec<f64> = Vec::new();
    let mut ys: Vec<f64> = Vec::new();
    for (k, rec) in rdr.records().enumerate() {
        let row = k + 1;
        let rec = rec.map_err(|e| Error::Csv(format!("row {row}: {e}")))?;
        let cell = |j: usize, name: &str| {
            rec.get(j).ok_or_else(|| Error::CsvCell { row, column: name.to_string(), message: "missing cell".into() })
        };
        let yc = cell(y_col, response)?;
        ys.push(match &coding.positive_class {
            Some(label) => f64::from(u8::from(yc == label)),
            None => parse(yc, row, response)?,
        });
        for (&j, name) in x_cols.iter().zip(&covariates) {
            xs.push(parse(cell(j, name)?, row, name)?);
        }
    }
    if ys.is_empty() {
        return Err(Error::InvalidDataset("file has no data rows".into()));
    }
    let n = ys.len();
    let x = DMatrix::from_row_slice(n, covariates.len(), &xs);
    Ok(LoadedData { dataset: Dataset::new(x, DVector::from_vec(ys))?, response: response.to_string(), covariates })
}

/// Column means and standard deviations used to standardize a design.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Standardization {
    pub means: Vec<f64>,
    pub scales: Vec<f64>,
}

/// Center each column and divide by its (population) standard deviation.
/// Constant columns are rejected.
pub fn standardize(data: &Dataset, names: &[String]) -> Result<(Dataset, Standardization)> {
    let n = data.n() as f64;
    let mut x = data.x().clone();
    let mut means = Vec::with_capacity(data.p());
    let mut scales = Vec::with_capacity(data.p());
    for (j, name) in names.iter().enumerate().take(data.p()) {
        let mut col = x.column_mut(j);
        let m = col.sum() / n;
        col.add_scalar_mut(-m);
        let s = (col.norm_squared() / n).sqrt();
        if !(s > 0.0) {
            return Err(Error::InvalidDataset(format!("covariate `{name}` is constant")));
        }
        col.scale_mut(1.0 / s);
        means.push(m);
        scales.push(s);
    }
    Ok((Dataset::new(x, data.y().clone())?, Standardization { means, scales }))
}

fn with_intercept(data: &Dataset) -> Result<Dataset> {
    let n = data.n();
    let x = data.x().clone().insert_column(0, 1.0);
    debug_assert_eq!(x.nrows(), n);
    Dataset::new(x, data.y().clone())
}

/// Everything a `fit`, `bootstrap` or `diagnose` run needs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisConfig {
    pub input: PathBuf,
    pub family: FamilySpec,
    pub response: String,
    /// `None` uses every other column.
    pub covariates: Option<Vec<String>>,
    pub positive_class: Option<String>,
    pub intercept: bool,
    pub standardize: bool,
    pub lambda: LambdaPolicy,
    pub method: Method,
    pub centering: Centering,
    pub replicates: usize,
    pub alpha: f64,
    pub threshold_c: ThresholdRule,
    pub weights: WeightDistribution,
    pub seed: Option<u64>,
}

impl AnalysisConfig {
    pub fn new(input: impl Into<PathBuf>, family: FamilySpec, response: impl Into<String>) -> Self {
        AnalysisConfig {
            input: input.into(),
            family,
            response: response.into(),
            covariates: None,
            positive_class: None,
            intercept: false,
            standardize: false,
            lambda: LambdaPolicy::default(),
            method: Method::Pb,
            centering: Centering::Modified,
            replicates: 1000,
            alpha: 0.1,
            threshold_c: ThresholdRule::default(),
            weights: WeightDistribution::exp_one(),
            seed: None,
        }
    }
}

/// Design and bookkeeping shared by all analysis commands.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub data: Dataset,
    pub names: Vec<String>,
    pub standardization: Option<Standardization>,
}

pub fn prepare(config: &AnalysisConfig) -> Result<Prepared> {
    let coding = ResponseCoding { positive_class: config.positive_class.clone() };
    let loaded = load_csv_coded(&config.input, &config.response, config.covariates.as_deref(), &coding)?;
    let mut names = loaded.covariates;
    let mut data = loaded.dataset;
    let mut standardization = None;
    if config.standardize {
        let (d, s) = standardize(&data, &names)?;
        data = d;
        standardization = Some(s);
    }
    if config.intercept {
        data = with_intercept(&data)?;
        names.insert(0, INTERCEPT_NAME.to_string());
    }
    let v = validate_dataset(&config.family, &data);
    if !v.valid {
        let rows: Vec<String> = v.violations.iter().take(5).map(|i| (i + 1).to_string()).collect();
        return Err(Error::InvalidDataset(format!(
            "responses outside the {} support at rows {}{}",
            config.family.id,
            rows.join(", "),
            if v.violations.len() > 5 { ", ..." } else { "" }
        )));
    }
    Ok(Prepared { data, names, standardization })
}

/// Seed for the fold assignment and the bootstrap; `fit` defaults to 0.
fn analysis_seed(config: &AnalysisConfig) -> u64 {
    config.seed.unwrap_or(0)
}

fn require_seed(config: &AnalysisConfig) -> Result<u64> {
    config.seed.ok_or_else(|| Error::InvalidParameter("a --seed is required for commands that resample".into()))
}

fn fit_prepared(config: &AnalysisConfig, prepared: &Prepared, seed: u64) -> Result<LassoFit> {
    let mut rng = stream(derive_tagged(seed, domain::CV_FOLDS, 0));
    let lambda = config.lambda.select(&config.family, &prepared.data, &mut rng)?;
    let problem = PenalizedProblem::new(config.family, &prepared.data, lambda)?;
    let f = fit(&problem, None, &SolverSettings::default())?;
    if !f.converged {
        return Err(Error::NotConverged { iterations: f.iterations, kkt_residual: f.kkt_residual });
    }
    Ok(f)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Coefficient {
    pub name: String,
    pub estimate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub schema_version: u32,
    pub package_version: String,
    pub input: String,
    pub family: FamilySpec,
    pub response: String,
    pub n: usize,
    pub lambda_policy: LambdaPolicy,
    pub seed: u64,
    pub standardization: Option<Standardization>,
    pub intercept: bool,
    pub lambda: f64,
    pub beta_hat: Vec<Coefficient>,
    pub active_set: Vec<String>,
    pub kkt_residual: f64,
    pub objective: f64,
    pub iterations: usize,
}

fn fit_report(config: &AnalysisConfig, prepared: &Prepared, f: &LassoFit, seed: u64) -> FitReport {
    FitReport {
        schema_version: SCHEMA_VERSION,
        package_version: env!("CARGO_PKG_VERSION").to_string(),
        input: config.input.display().to_string(),
        family: config.family,
        response: config.response.clone(),
        n: prepared.data.n(),
        lambda_policy: config.lambda,
        seed,
        standardization: prepared.standardization.clone(),
        intercept: config.intercept,
        lambda: f.lambda,
        beta_hat: prepared
            .names
            .iter()
            .zip(f.beta_hat.iter())
            .map(|(name, &estimate)| Coefficient { name: name.clone(), estimate })
            .collect(),
        active_set: f.active_set().into_iter().map(|j| prepared.names[j].clone()).collect(),
        kkt_residual: f.kkt_residual,
        objective: f.objective,
        iterations: f.iterations,
    }
}

pub fn run_fit(config: &AnalysisConfig) -> Result<FitReport> {
    let prepared = prepare(config)?;
    let seed = analysis_seed(config);
    let f = fit_prepared(config, &prepared, seed)?;
    Ok(fit_report(config, &prepared, &f, seed))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntervalEntry {
    pub name: String,
    pub estimate: f64,
    /// Centering `β̌ⱼ` of the replicates.
    pub centering: f64,
    pub two_sided: [f64; 2],
    /// Lower end of `[l, ∞)`.
    pub left_lower: f64,
    /// Upper end of `(−∞, u]`.
    pub right_upper: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BootstrapReport {
    pub schema_version: u32,
    pub fit: FitReport,
    pub method: Method,
    pub centering: Centering,
    pub threshold_c: f64,
    pub weights: WeightDistribution,
    pub lambda_star: f64,
    pub alpha: f64,
    pub replicates: usize,
    pub effective_replicates: usize,
    pub failed_replicates: usize,
    pub quality_warning: bool,
    pub bootstrap_seed: u64,
    pub intervals: Vec<IntervalEntry>,
    pub region_quantile: f64,
}

impl BootstrapReport {
    /// Coefficient table as CSV.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["name", "estimate", "lower", "upper", "left_lower", "right_upper"])
            .map_err(|e| Error::Csv(e.to_string()))?;
        for e in &self.intervals {
            w.write_record([
                e.name.clone(),
                e.estimate.to_string(),
                e.two_sided[0].to_string(),
                e.two_sided[1].to_string(),
                e.left_lower.to_string(),
                e.right_upper.to_string(),
            ])
            .map_err(|e| Error::Csv(e.to_string()))?;
        }
        w.flush()?;
        Ok(())
    }
}

fn check_replicate_count(config: &AnalysisConfig) -> Result<()> {
    let need = min_replicates(config.alpha);
    if config.replicates < need {
        return Err(Error::InsufficientReplicates { have: config.replicates, need });
    }
    if config.replicates < MIN_INFERENCE_REPLICATES {
        return Err(Error::InvalidParameter(format!(
            "B = {} is below the minimum of {MIN_INFERENCE_REPLICATES}",
            config.replicates
        )));
    }
    Ok(())
}

pub fn run_bootstrap_analysis(config: &AnalysisConfig) -> Result<BootstrapReport> {
    if !(config.alpha > 0.0 && config.alpha < 1.0) {
        return Err(Error::InvalidParameter(format!("alpha must lie in (0, 1), got {}", config.alpha)));
    }
    check_replicate_count(config)?;
    let seed = require_seed(config)?;
    let prepared = prepare(config)?;
    let f = fit_prepared(config, &prepared, seed)?;
    let bc = BootstrapConfig {
        method: config.method,
        centering: config.centering,
        rule: config.threshold_c,
        weights: config.weights,
        replicates: config.replicates,
        lambda_star: None,
    };
    let bootstrap_seed = derive_tagged(seed, domain::BOOTSTRAP, 0);
    let result = run_bootstrap(&config.family, &prepared.data, &f, &bc, bootstrap_seed)?;
    let inf = percentile_intervals(&result, &f.beta_hat, config.alpha)?;
    let intervals = inf
        .coefficients
        .iter()
        .map(|c| IntervalEntry {
            name: prepared.names[c.index].clone(),
            estimate: c.estimate,
            centering: result.centering[c.index],
            two_sided: [c.lower, c.upper],
            left_lower: c.left_lower,
            right_upper: c.right_upper,
        })
        .collect();
    Ok(BootstrapReport {
        schema_version: SCHEMA_VERSION,
        fit: fit_report(config, &prepared, &f, seed),
        method: config.method,
        centering: config.centering,
        threshold_c: config.threshold_c.exponent(),
        weights: config.weights,
        lambda_star: result.lambda_star,
        alpha: config.alpha,
        replicates: result.b(),
        effective_replicates: result.b_effective(),
        failed_replicates: result.failed(),
        quality_warning: result.quality_warning(),
        bootstrap_seed,
        intervals,
        region_quantile: inf.region_quantile,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagnoseReport {
    pub schema_version: u32,
    pub fit: FitReport,
    pub centering: Centering,
    pub beta_check: Vec<f64>,
    pub diagnostics: VarianceDiagnostics,
}

/// Variance diagnostics at the centering implied by `config.centering`.
/// Replicate moments are included when a seed is given.
pub fn run_diagnose(config: &AnalysisConfig) -> Result<DiagnoseReport> {
    let prepared = prepare(config)?;
    let seed = analysis_seed(config);
    let f = fit_prepared(config, &prepared, seed)?;
    let n = prepared.data.n();
    let beta_check = centering_for(&f.beta_hat, n, config.centering, &config.threshold_c);
    let result = match config.seed {
        Some(_) => {
            let bc = BootstrapConfig {
                method: config.method,
                centering: config.centering,
                rule: config.threshold_c,
                weights: config.weights,
                replicates: config.replicates,
                lambda_star: None,
            };
            Some(run_bootstrap(&config.family, &prepared.data, &f, &bc, derive_tagged(seed, domain::BOOTSTRAP, 0))?)
        }
        None => None,
    };
    let diagnostics = variance_diagnostics(result.as_ref(), &config.family, &prepared.data, &beta_check)?;
    Ok(DiagnoseReport {
        schema_version: SCHEMA_VERSION,
        fit: fit_report(config, &prepared, &f, seed),
        centering: config.centering,
        beta_check: beta_check.iter().copied().collect(),
        diagnostics,
    })
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    std::fs::write(path, to_json(value)?)?;
    Ok(())
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    parse_json(&std::fs::read_to_string(path)?)
}

pub fn parse_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    Ok(serde_json::from_str(text)?)
}
