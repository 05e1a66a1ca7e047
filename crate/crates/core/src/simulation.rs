//! Monte-Carlo coverage experiments on a frozen Gaussian design.
//!
//! One experiment draws the design once, then for every replication draws
//! fresh responses, picks λ, fits the lasso, bootstraps with each requested
//! method and records interval and region coverage of the true coefficients.

use std::fmt;
use std::io::Write;

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::{Bernoulli, Distribution, Gamma, Normal, Poisson, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::bootstrap::{
    run_bootstrap, BootstrapConfig, BootstrapResult, Centering, Method, ThresholdRule, WeightDistribution,
};
use crate::error::{Error, Result};
use crate::family::{make_family, Dataset, FamilyId, FamilySpec};
use crate::inference::{min_replicates, percentile_intervals};
use crate::rng::{derive_tagged, domain, stream, StreamRng};
use crate::solver::{fit, LambdaPolicy, PenalizedProblem, SolverSettings};

/// Replications allowed to fail (after one retry) before an experiment aborts.
pub const MAX_FAILED_FRACTION: f64 = 0.2;

/// Correlation decay of the design covariance `Σⱼₖ = ρ^{|j−k|}`.
pub const DESIGN_RHO: f64 = 0.3;

fn default_methods() -> Vec<Method> {
    vec![Method::Pb]
}

fn default_alpha() -> f64 {
    0.1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimConfig {
    pub family: FamilyId,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma_shape: Option<f64>,
    pub n: usize,
    pub p: usize,
    pub p0: usize,
    pub mc_reps: usize,
    #[serde(rename = "B", alias = "b")]
    pub replicates: usize,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    #[serde(default)]
    pub threshold_c: ThresholdRule,
    #[serde(default = "WeightDistribution::exp_one")]
    pub weights: WeightDistribution,
    #[serde(default)]
    pub lambda: LambdaPolicy,
    #[serde(default = "default_methods")]
    pub methods: Vec<Method>,
    #[serde(default = "default_centering")]
    pub centering: Centering,
    pub seed: u64,
}

fn default_centering() -> Centering {
    Centering::Modified
}

impl SimConfig {
    /// Logistic defaults with CV-chosen λ and PB only.
    pub fn logistic(n: usize, p: usize, p0: usize, mc_reps: usize, replicates: usize, seed: u64) -> Self {
        SimConfig {
            family: FamilyId::Logistic,
            gamma_shape: None,
            n,
            p,
            p0,
            mc_reps,
            replicates,
            alpha: default_alpha(),
            threshold_c: ThresholdRule::default(),
            weights: WeightDistribution::exp_one(),
            lambda: LambdaPolicy::default(),
            methods: default_methods(),
            centering: Centering::Modified,
            seed,
        }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: SimConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn family_spec(&self) -> Result<FamilySpec> {
        make_family(self.family, self.gamma_shape)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if self.n == 0 || self.p == 0 {
            return bad("n and p must be positive".into());
        }
        if self.p0 > self.p {
            return bad(format!("p0 = {} exceeds p = {}", self.p0, self.p));
        }
        if self.mc_reps == 0 {
            return bad("mc_reps must be at least 1".into());
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return bad(format!("alpha must lie in (0, 1), got {}", self.alpha));
        }
        let need = min_replicates(self.alpha);
        if self.replicates < need {
            return bad(format!(
                "B = {} is below the {need} replicates needed at alpha = {}",
                self.replicates, self.alpha
            ));
        }
        if self.methods.is_empty() {
            return bad("methods must not be empty".into());
        }
        if let LambdaPolicy::Cv { folds, .. } = self.lambda {
            if folds > self.n {
                return bad(format!("{folds} folds exceed n = {}", self.n));
            }
        }
        self.lambda.validate()?;
        self.family_spec()?;
        Ok(())
    }
}

/// Entries of the design covariance.
pub fn design_covariance(p: usize) -> DMatrix<f64> {
    DMatrix::from_fn(p, p, |j, k| if j == k { 1.0 } else { DESIGN_RHO.powi((j as i32 - k as i32).abs()) })
}

/// `n` i.i.d. rows from `N(0, Σ)`.
pub fn generate_design(n: usize, p: usize, rng: &mut StreamRng) -> Result<DMatrix<f64>> {
    if n == 0 || p == 0 {
        return Err(Error::InvalidParameter("design needs n, p >= 1".into()));
    }
    let chol = design_covariance(p)
        .cholesky()
        .ok_or_else(|| Error::Internal("design covariance is not positive definite".into()))?;
    let l = chol.l();
    let mut z = DMatrix::<f64>::zeros(n, p);
    for i in 0..n {
        for j in 0..p {
            z[(i, j)] = rng.sample(StandardNormal);
        }
    }
    Ok(z * l.transpose())
}

/// `βⱼ = 0.5 (−1)ʲ j` for `j ≤ p0` (1-based), zero after.
pub fn true_beta(p: usize, p0: usize) -> Result<DVector<f64>> {
    if p0 > p {
        return Err(Error::InvalidParameter(format!("p0 = {p0} exceeds p = {p}")));
    }
    Ok(DVector::from_fn(p, |j, _| {
        let k = j + 1;
        if k <= p0 {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            0.5 * sign * k as f64
        } else {
            0.0
        }
    }))
}

/// Responses with mean `g⁻¹(xᵢᵀβ)` drawn from the family's law.
pub fn generate_responses(
    family: &FamilySpec,
    x: &DMatrix<f64>,
    beta: &DVector<f64>,
    rng: &mut StreamRng,
) -> Result<DVector<f64>> {
    if x.ncols() != beta.len() {
        return Err(Error::DimensionMismatch(format!(
            "design has {} columns but beta has length {}",
            x.ncols(),
            beta.len()
        )));
    }
    let eta = x * beta;
    let mut y = DVector::zeros(x.nrows());
    for i in 0..x.nrows() {
        let mu = family.g_inv(eta[i]);
        let bad = || Error::NonFinite { index: i };
        if !mu.is_finite() || !family.in_exp_range(eta[i]) {
            return Err(bad());
        }
        y[i] = match family.id {
            FamilyId::Linear => Normal::new(mu, 1.0).map_err(|_| bad())?.sample(rng),
            FamilyId::Logistic | FamilyId::Probit => {
                if Bernoulli::new(mu).map_err(|_| bad())?.sample(rng) {
                    1.0
                } else {
                    0.0
                }
            }
            FamilyId::Poisson => Poisson::new(mu).map_err(|_| bad())?.sample(rng),
            FamilyId::Gamma => {
                let a = family.shape_alpha;
                Gamma::new(a, mu / a).map_err(|_| bad())?.sample(rng)
            }
        };
    }
    Ok(y)
}

/// SHA-256 of the little-endian column-major entries, hex encoded.
pub fn design_hash(x: &DMatrix<f64>) -> String {
    let mut h = Sha256::new();
    h.update((x.nrows() as u64).to_le_bytes());
    h.update((x.ncols() as u64).to_le_bytes());
    for v in x.iter() {
        h.update(v.to_le_bytes());
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    TwoSided,
    Left,
    Right,
    Region,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::TwoSided => "two_sided",
            Side::Left => "left",
            Side::Right => "right",
            Side::Region => "region",
        })
    }
}

/// One line of a coverage table. Coefficient indices are 1-based; the region
/// row has no index or true value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverageRow {
    pub coefficient_index: Option<usize>,
    pub true_value: Option<f64>,
    pub method: Method,
    pub side: Side,
    pub coverage: f64,
    /// Two-sided: mean interval length. Region: mean radius `q/√n`.
    pub mean_width: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverageTable {
    pub rows: Vec<CoverageRow>,
    pub centering: Centering,
    pub completed_reps: usize,
    pub failed_reps: usize,
    pub retried_reps: usize,
    pub design_hash: String,
    pub mean_lambda: f64,
}

impl CoverageTable {
    pub fn find(&self, method: Method, side: Side, coefficient_index: Option<usize>) -> Option<&CoverageRow> {
        self.rows.iter().find(|r| r.method == method && r.side == side && r.coefficient_index == coefficient_index)
    }

    pub fn region_coverage(&self, method: Method) -> Option<f64> {
        self.find(method, Side::Region, None).map(|r| r.coverage)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["coefficient_index", "true_value", "method", "side", "coverage", "mean_width"])
            .map_err(|e| Error::Csv(e.to_string()))?;
        for r in &self.rows {
            let idx = r.coefficient_index.map_or_else(|| "all".to_string(), |j| j.to_string());
            let tv = r.true_value.map_or_else(String::new, |v| v.to_string());
            let mw = r.mean_width.map_or_else(String::new, |v| v.to_string());
            w.write_record([idx, tv, r.method.to_string(), r.side.to_string(), r.coverage.to_string(), mw])
                .map_err(|e| Error::Csv(e.to_string()))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        String::from_utf8(buf).map_err(|e| Error::Internal(e.to_string()))
    }
}

/// Everything needed to rerun an experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentManifest {
    pub schema_version: u32,
    pub package_version: String,
    pub config: SimConfig,
    pub design_seed: u64,
    pub design_hash: String,
    /// Seed actually used by each replication (the retry seed when retried).
    pub replication_seeds: Vec<u64>,
    pub failed_replications: Vec<usize>,
    pub retried_replications: Vec<usize>,
}

pub const MANIFEST_SCHEMA_VERSION: u32 = 1;

/// Per-method outcome of one replication.
#[derive(Debug, Clone)]
struct MethodOutcome {
    two_sided: Vec<bool>,
    left: Vec<bool>,
    right: Vec<bool>,
    widths: Vec<f64>,
    region: bool,
    radius: f64,
}

#[derive(Debug, Clone)]
struct RepOutcome {
    lambda: f64,
    methods: Vec<MethodOutcome>,
}

/// One simulated data set with its fit and bootstraps.
#[derive(Debug, Clone)]
pub struct Replication {
    pub data: Dataset,
    pub lambda: f64,
    pub beta_hat: DVector<f64>,
    pub results: Vec<BootstrapResult>,
}

/// Design, truth and family of one experiment.
#[derive(Debug, Clone)]
pub struct Setting {
    pub family: FamilySpec,
    pub design: DMatrix<f64>,
    pub beta: DVector<f64>,
    pub design_seed: u64,
}

impl Setting {
    pub fn new(config: &SimConfig) -> Result<Self> {
        config.validate()?;
        let design_seed = derive_tagged(config.seed, domain::DESIGN, 0);
        let design = generate_design(config.n, config.p, &mut stream(design_seed))?;
        Ok(Setting { family: config.family_spec()?, design, beta: true_beta(config.p, config.p0)?, design_seed })
    }

    /// Fresh response draw and λ choice for one replication seed.
    pub fn draw(&self, config: &SimConfig, rep_seed: u64) -> Result<(Dataset, f64)> {
        let mut ry = stream(derive_tagged(rep_seed, domain::RESPONSES, 0));
        let y = generate_responses(&self.family, &self.design, &self.beta, &mut ry)?;
        let data = Dataset::new(self.design.clone(), y)?;
        let mut rf = stream(derive_tagged(rep_seed, domain::CV_FOLDS, 0));
        let lambda = config.lambda.select(&self.family, &data, &mut rf)?;
        Ok((data, lambda))
    }

    /// Replication data, lasso fit and one bootstrap per method.
    pub fn bootstrap_replication(
        &self,
        config: &SimConfig,
        rep_seed: u64,
        centering: Centering,
    ) -> Result<Replication> {
        let (data, lambda) = self.draw(config, rep_seed)?;
        let problem = PenalizedProblem::new(self.family, &data, lambda)?;
        let f = fit(&problem, None, &SolverSettings::default())?;
        if !f.converged {
            return Err(Error::NotConverged { iterations: f.iterations, kkt_residual: f.kkt_residual });
        }
        let mut results = Vec::with_capacity(config.methods.len());
        for &method in &config.methods {
            let bc = BootstrapConfig {
                method,
                centering,
                rule: config.threshold_c,
                weights: config.weights,
                replicates: config.replicates,
                lambda_star: None,
            };
            let seed = derive_tagged(rep_seed, domain::BOOTSTRAP, method_tag(method));
            results.push(run_bootstrap(&self.family, &data, &f, &bc, seed)?);
        }
        Ok(Replication { data, lambda, beta_hat: f.beta_hat, results })
    }

    fn replication(&self, config: &SimConfig, rep_seed: u64, centering: Centering) -> Result<RepOutcome> {
        let Replication { data, lambda, beta_hat, results } =
            self.bootstrap_replication(config, rep_seed, centering)?;
        let p = self.beta.len();
        let mut methods = Vec::with_capacity(results.len());
        for r in &results {
            let rep = percentile_intervals(r, &beta_hat, config.alpha)?;
            let mut out = MethodOutcome {
                two_sided: Vec::with_capacity(p),
                left: Vec::with_capacity(p),
                right: Vec::with_capacity(p),
                widths: Vec::with_capacity(p),
                region: rep.region_covers(&self.beta),
                radius: rep.region_quantile / (data.n() as f64).sqrt(),
            };
            for (c, &b0) in rep.coefficients.iter().zip(self.beta.iter()) {
                out.two_sided.push(c.contains(b0));
                out.left.push(c.left_lower <= b0);
                out.right.push(b0 <= c.right_upper);
                out.widths.push(c.width());
            }
            methods.push(out);
        }
        Ok(RepOutcome { lambda, methods })
    }
}

fn method_tag(m: Method) -> u64 {
    match m {
        Method::Pb => 0,
        Method::Prb => 1,
    }
}

/// Seed of replication `r`.
pub fn replication_seed(master: u64, r: usize) -> u64 {
    derive_tagged(master, domain::REPLICATION, r as u64)
}

/// Seed used when replication `r` is retried.
pub fn retry_seed(master: u64, r: usize) -> u64 {
    derive_tagged(master, domain::RETRY, r as u64)
}

/// Run the experiment and also return its manifest.
pub fn run_experiment(config: &SimConfig) -> Result<(CoverageTable, ExperimentManifest)> {
    run_with_centering(config, config.centering)
}

pub fn run_coverage_experiment(config: &SimConfig) -> Result<CoverageTable> {
    Ok(run_experiment(config)?.0)
}

fn run_with_centering(config: &SimConfig, centering: Centering) -> Result<(CoverageTable, ExperimentManifest)> {
    let setting = Setting::new(config)?;
    let hash = design_hash(&setting.design);

    let outcomes: Vec<(u64, bool, Option<RepOutcome>)> = (0..config.mc_reps)
        .into_par_iter()
        .map(|r| {
            let first = replication_seed(config.seed, r);
            match setting.replication(config, first, centering) {
                Ok(o) => (first, false, Some(o)),
                Err(_) => {
                    let second = retry_seed(config.seed, r);
                    (second, true, setting.replication(config, second, centering).ok())
                }
            }
        })
        .collect();

    let failed: Vec<usize> = outcomes.iter().enumerate().filter(|(_, o)| o.2.is_none()).map(|(r, _)| r).collect();
    let retried: Vec<usize> = outcomes.iter().enumerate().filter(|(_, o)| o.1).map(|(r, _)| r).collect();
    if failed.len() as f64 > MAX_FAILED_FRACTION * config.mc_reps as f64 || failed.len() == config.mc_reps {
        return Err(Error::ExperimentAborted { failed: failed.len(), total: config.mc_reps });
    }
    let done: Vec<&RepOutcome> = outcomes.iter().filter_map(|o| o.2.as_ref()).collect();
    let table = aggregate(config, &setting.beta, &done, centering, failed.len(), retried.len(), hash.clone());
    let manifest = ExperimentManifest {
        schema_version: MANIFEST_SCHEMA_VERSION,
        package_version: env!("CARGO_PKG_VERSION").to_string(),
        config: SimConfig { centering, ..config.clone() },
        design_seed: setting.design_seed,
        design_hash: hash,
        replication_seeds: outcomes.iter().map(|o| o.0).collect(),
        failed_replications: failed,
        retried_replications: retried,
    };
    Ok((table, manifest))
}

fn aggregate(
    config: &SimConfig,
    beta: &DVector<f64>,
    done: &[&RepOutcome],
    centering: Centering,
    failed: usize,
    retried: usize,
    design_hash: String,
) -> CoverageTable {
    let m = done.len() as f64;
    let frac = |it: &mut dyn Iterator<Item = bool>| it.filter(|b| *b).count() as f64 / m;
    let mut rows = Vec::new();
    for (k, &method) in config.methods.iter().enumerate() {
        for j in 0..beta.len() {
            let idx = Some(j + 1);
            let tv = Some(beta[j]);
            let width = done.iter().map(|o| o.methods[k].widths[j]).sum::<f64>() / m;
            rows.push(CoverageRow {
                coefficient_index: idx,
                true_value: tv,
                method,
                side: Side::TwoSided,
                coverage: frac(&mut done.iter().map(|o| o.methods[k].two_sided[j])),
                mean_width: Some(width),
            });
            rows.push(CoverageRow {
                coefficient_index: idx,
                true_value: tv,
                method,
                side: Side::Left,
                coverage: frac(&mut done.iter().map(|o| o.methods[k].left[j])),
                mean_width: None,
            });
            rows.push(CoverageRow {
                coefficient_index: idx,
                true_value: tv,
                method,
                side: Side::Right,
                coverage: frac(&mut done.iter().map(|o| o.methods[k].right[j])),
                mean_width: None,
            });
        }
        rows.push(CoverageRow {
            coefficient_index: None,
            true_value: None,
            method,
            side: Side::Region,
            coverage: frac(&mut done.iter().map(|o| o.methods[k].region)),
            mean_width: Some(done.iter().map(|o| o.methods[k].radius).sum::<f64>() / m),
        });
    }
    CoverageTable {
        rows,
        centering,
        completed_reps: done.len(),
        failed_reps: failed,
        retried_reps: retried,
        design_hash,
        mean_lambda: done.iter().map(|o| o.lambda).sum::<f64>() / m,
    }
}

/// Two-sample Kolmogorov–Smirnov statistic `sup_t |F_a(t) − F_b(t)|`.
pub fn ks_distance(a: &[f64], b: &[f64]) -> f64 {
    if a.is_empty() || b.is_empty() {
        return f64::NAN;
    }
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < a.len() && j < b.len() {
        let t = if a[i] <= b[j] { a[i] } else { b[j] };
        while i < a.len() && a[i] <= t {
            i += 1;
        }
        while j < b.len() && b[j] <= t {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CenteringContrast {
    pub modified: CoverageTable,
    pub naive: CoverageTable,
    /// Method whose replicates were compared.
    pub method: Method,
    /// Per-coordinate KS distance between modified and naive replicates on
    /// the first replication's data.
    pub ks_distance: Vec<f64>,
}

/// Run the modified and naive centerings with identical seeds.
pub fn contrast_centerings(config: &SimConfig) -> Result<CenteringContrast> {
    let (modified, _) = run_with_centering(config, Centering::Modified)?;
    let (naive, _) = run_with_centering(config, Centering::Naive)?;
    let ks_distance = representative_ks(config)?;
    Ok(CenteringContrast { modified, naive, method: config.methods[0], ks_distance })
}

/// KS distances of the two centerings on the first replication's data.
pub fn representative_ks(config: &SimConfig) -> Result<Vec<f64>> {
    let setting = Setting::new(config)?;
    let cfg = SimConfig { methods: vec![config.methods[0]], ..config.clone() };
    let seed = replication_seed(config.seed, 0);
    let m = setting.bootstrap_replication(&cfg, seed, Centering::Modified)?;
    let nv = setting.bootstrap_replication(&cfg, seed, Centering::Naive)?;
    Ok((0..config.p).map(|j| ks_distance(&m.results[0].column(j), &nv.results[0].column(j))).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn true_beta_examples() {
        assert_eq!(true_beta(5, 2).unwrap().as_slice(), &[-0.5, 1.0, 0.0, 0.0, 0.0]);
        assert_eq!(true_beta(7, 4).unwrap().as_slice(), &[-0.5, 1.0, -1.5, 2.0, 0.0, 0.0, 0.0]);
        assert_eq!(true_beta(3, 0).unwrap(), DVector::zeros(3));
        assert!(true_beta(2, 3).is_err());
    }

    #[test]
    fn covariance_entries() {
        let s = design_covariance(4);
        assert_eq!(s[(0, 0)], 1.0);
        assert!((s[(0, 2)] - 0.09).abs() < 1e-15);
        assert!((s[(3, 2)] - 0.3).abs() < 1e-15);
    }

    #[test]
    fn single_column_design_is_standard_normal() {
        let x = generate_design(20_000, 1, &mut stream(3)).unwrap();
        let mean = x.mean();
        let var = x.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / 20_000.0;
        assert!(mean.abs() < 0.03 && (var - 1.0).abs() < 0.05);
    }

    #[test]
    fn ks_examples() {
        assert_eq!(ks_distance(&[1.0, 2.0, 3.0], &[3.0, 2.0, 1.0]), 0.0);
        assert_eq!(ks_distance(&[0.0, 0.0], &[1.0, 1.0]), 1.0);
        assert!((ks_distance(&[1.0, 2.0, 3.0, 4.0], &[3.0, 4.0, 5.0, 6.0]) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn config_validation() {
        let mut c = SimConfig::logistic(50, 5, 2, 1, 100, 1);
        assert!(c.validate().is_ok());
        c.p0 = 6;
        assert!(c.validate().is_err());
        let mut c = SimConfig::logistic(50, 5, 2, 1, 10, 1);
        assert!(c.validate().is_err());
        c.replicates = 20;
        c.mc_reps = 0;
        assert!(c.validate().is_err());
    }

    #[test]
    fn config_parses_from_toml() {
        let text = r#"
            family = "gamma"
            gamma_shape = 2.0
            n = 80
            p = 4
            p0 = 2
            mc_reps = 3
            B = 100
            alpha = 0.05
            threshold_c = 0.25
            weights = "pois1"
            methods = ["pb", "prb"]
            centering = "naive"
            seed = 17

            [lambda]
            policy = "scaled"
            lambda0 = 0.025
        "#;
        let c = SimConfig::from_toml(text).unwrap();
        assert_eq!(c.family, FamilyId::Gamma);
        assert_eq!(c.replicates, 100);
        assert_eq!(c.lambda, LambdaPolicy::Scaled { lambda0: 0.025 });
        assert_eq!(c.weights, WeightDistribution::PoissonOne);
        let back = SimConfig::from_toml(&toml::to_string(&c).unwrap()).unwrap();
        assert_eq!(back, c);
        assert!(SimConfig::from_toml("family = \"logistic\"\nn = 5\nbogus = 1").is_err());
    }
}
