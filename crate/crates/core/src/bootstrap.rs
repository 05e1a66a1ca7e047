//! Perturbation (PB) and Pearson residual (PRB) bootstrap replicates of the
//! lasso pivot `√n (β̂* − β̌)`.
//!
//! PB reweights every likelihood term by `G*ᵢ / μ_G*` and adds the linear
//! tilt `cᵀβ` with `c = Σᵢ (yᵢ − μ̌ᵢ) h'(η̌ᵢ) xᵢ`, which makes `β̌` the exact
//! minimizer when all weights are one and the penalty is zero. PRB resamples
//! centered Pearson residuals and refits a linear lasso on the working design
//! `Ǧ = V̌^{1/2} Δ̌ X`. The centering `β̌` is the thresholded lasso in the
//! modified mode and the raw lasso in the naive mode.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::{Beta, Distribution, Exp, Poisson};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::family::{diagnostics_matrices, nll_gradient, Dataset, FamilySpec};
use crate::rng::{derive_tagged, domain, stream, StreamRng};
use crate::solver::{fit, LassoFit, PenalizedProblem, SolverSettings};

/// Fraction of failed replicates above which a result carries a warning.
pub const FAILURE_WARNING_FRACTION: f64 = 0.05;

/// Thresholding level `a_n = n^{-c}` with `0 < c < 1/2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct ThresholdRule {
    exponent: f64,
}

impl ThresholdRule {
    pub fn new(exponent: f64) -> Result<Self> {
        if !(exponent > 0.0 && exponent < 0.5) {
            return Err(Error::InvalidParameter(format!("threshold exponent must lie in (0, 1/2), got {exponent}")));
        }
        Ok(ThresholdRule { exponent })
    }

    pub fn exponent(&self) -> f64 {
        self.exponent
    }

    pub fn level(&self, n: usize) -> f64 {
        (n as f64).powf(-self.exponent)
    }
}

impl TryFrom<f64> for ThresholdRule {
    type Error = Error;

    fn try_from(c: f64) -> Result<Self> {
        ThresholdRule::new(c)
    }
}

impl From<ThresholdRule> for f64 {
    fn from(r: ThresholdRule) -> f64 {
        r.exponent
    }
}

impl Default for ThresholdRule {
    fn default() -> Self {
        ThresholdRule { exponent: 1.0 / 3.0 }
    }
}

/// `β̃ⱼ = β̂ⱼ 1(|β̂ⱼ| > a_n)`.
pub fn threshold_estimator(beta_hat: &DVector<f64>, n: usize, rule: &ThresholdRule) -> DVector<f64> {
    let a_n = rule.level(n.max(1));
    beta_hat.map(|b| if b.abs() > a_n { b } else { 0.0 })
}

/// Law of the perturbation multipliers `G*`; each choice has variance `μ²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum WeightDistribution {
    Exponential { rate: f64 },
    PoissonOne,
    Beta { a: f64, b: f64 },
}

impl WeightDistribution {
    pub fn exp_one() -> Self {
        WeightDistribution::Exponential { rate: 1.0 }
    }

    pub fn exponential(rate: f64) -> Result<Self> {
        if !(rate > 0.0 && rate.is_finite()) {
            return Err(Error::InvalidParameter(format!("exponential rate must be positive, got {rate}")));
        }
        Ok(WeightDistribution::Exponential { rate })
    }

    /// Beta(a, b); only accepted when `a = (b − a)/(b + a)`, which makes the
    /// variance equal the squared mean.
    pub fn beta(a: f64, b: f64) -> Result<Self> {
        if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) {
            return Err(Error::InvalidParameter("beta parameters must be positive".into()));
        }
        let target = (b - a) / (b + a);
        if (a - target).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "beta weights need a = (b - a)/(b + a); for b = {b} that is a = {}",
                Self::beta_shape_for(b)
            )));
        }
        Ok(WeightDistribution::Beta { a, b })
    }

    /// The `a` solving `a = (b − a)/(b + a)`, i.e. `a² + (b + 1) a − b = 0`.
    pub fn beta_shape_for(b: f64) -> f64 {
        let s = b + 1.0;
        // stable root of the quadratic
        2.0 * b / (s + (s * s + 4.0 * b).sqrt())
    }

    pub fn beta_for(b: f64) -> Result<Self> {
        if !(b > 0.0 && b.is_finite()) {
            return Err(Error::InvalidParameter("beta parameter b must be positive".into()));
        }
        Ok(WeightDistribution::Beta { a: Self::beta_shape_for(b), b })
    }

    pub fn mean(&self) -> f64 {
        match *self {
            WeightDistribution::Exponential { rate } => 1.0 / rate,
            WeightDistribution::PoissonOne => 1.0,
            WeightDistribution::Beta { a, b } => a / (a + b),
        }
    }

    pub fn variance(&self) -> f64 {
        match *self {
            WeightDistribution::Exponential { rate } => 1.0 / (rate * rate),
            WeightDistribution::PoissonOne => 1.0,
            WeightDistribution::Beta { a, b } => a * b / ((a + b).powi(2) * (a + b + 1.0)),
        }
    }

    fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        // parameters are validated on construction
        match *self {
            WeightDistribution::Exponential { rate } => Exp::new(rate).expect("valid rate").sample(rng),
            WeightDistribution::PoissonOne => Poisson::new(1.0).expect("valid mean").sample(rng),
            WeightDistribution::Beta { a, b } => Beta::new(a, b).expect("valid shapes").sample(rng),
        }
    }

    /// `n` draws of `G*ᵢ / μ_G*`.
    pub fn draw_normalized<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> DVector<f64> {
        let mu = self.mean();
        DVector::from_iterator(n, (0..n).map(|_| self.draw(rng) / mu))
    }
}

impl fmt::Display for WeightDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            WeightDistribution::Exponential { rate: 1.0 } => f.write_str("exp1"),
            WeightDistribution::Exponential { rate } => write!(f, "exp:{rate}"),
            WeightDistribution::PoissonOne => f.write_str("pois1"),
            WeightDistribution::Beta { a, b } => write!(f, "beta:{a},{b}"),
        }
    }
}

impl TryFrom<String> for WeightDistribution {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<WeightDistribution> for String {
    fn from(w: WeightDistribution) -> String {
        w.to_string()
    }
}

impl FromStr for WeightDistribution {
    type Err = Error;

    /// `exp1`, `exp:<rate>`, `pois1` or `beta:<a>,<b>`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InvalidParameter(format!("unrecognized weight distribution `{s}`"));
        match s {
            "exp1" => return Ok(Self::exp_one()),
            "pois1" => return Ok(WeightDistribution::PoissonOne),
            _ => {}
        }
        if let Some(rest) = s.strip_prefix("exp:") {
            let rate: f64 = rest.trim().parse().map_err(|_| bad())?;
            return Self::exponential(rate);
        }
        if let Some(rest) = s.strip_prefix("beta:") {
            let (a, b) = rest.split_once(',').ok_or_else(bad)?;
            let a: f64 = a.trim().parse().map_err(|_| bad())?;
            let b: f64 = b.trim().parse().map_err(|_| bad())?;
            return Self::beta(a, b);
        }
        Err(bad())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Pb,
    Prb,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Pb => "pb",
            Method::Prb => "prb",
        })
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "pb" => Ok(Method::Pb),
            "prb" => Ok(Method::Prb),
            other => Err(Error::InvalidParameter(format!("unknown bootstrap method `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Centering {
    Modified,
    Naive,
}

impl fmt::Display for Centering {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Centering::Modified => "modified",
            Centering::Naive => "naive",
        })
    }
}

impl FromStr for Centering {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "modified" => Ok(Centering::Modified),
            "naive" => Ok(Centering::Naive),
            other => Err(Error::InvalidParameter(format!("unknown centering mode `{other}`"))),
        }
    }
}

/// PB re-centering tilt `c = Σᵢ (yᵢ − g⁻¹(xᵢᵀβ̌)) h'(xᵢᵀβ̌) xᵢ`, the negative
/// unweighted likelihood gradient at `β̌`.
pub fn pb_linear_tilt(family: &FamilySpec, data: &Dataset, beta_check: &DVector<f64>) -> Result<DVector<f64>> {
    Ok(-nll_gradient(family, data, beta_check, None)?)
}

fn replicate_settings() -> SolverSettings {
    SolverSettings::default()
}

/// One PB replicate with given normalized weights. Returns the pivot and the fit.
pub fn pb_replicate_with_weights(
    family: &FamilySpec,
    data: &Dataset,
    beta_check: &DVector<f64>,
    tilt: &DVector<f64>,
    lambda_star: f64,
    weights: DVector<f64>,
) -> Result<(DVector<f64>, LassoFit)> {
    let problem = PenalizedProblem::new(*family, data, lambda_star)?.with_weights(weights)?.with_tilt(tilt.clone())?;
    let f = fit(&problem, Some(beta_check), &replicate_settings())?;
    let pivot = (&f.beta_hat - beta_check) * (data.n() as f64).sqrt();
    Ok((pivot, f))
}

/// One PB replicate: draws `G*`, solves the weighted tilted lasso at `λ*`,
/// returns `√n (β̂* − β̌)`.
pub fn pb_replicate(
    family: &FamilySpec,
    data: &Dataset,
    beta_check: &DVector<f64>,
    lambda_star: f64,
    weight_dist: &WeightDistribution,
    rng: &mut StreamRng,
) -> Result<DVector<f64>> {
    let tilt = pb_linear_tilt(family, data, beta_check)?;
    let w = weight_dist.draw_normalized(data.n(), rng);
    let (pivot, f) = pb_replicate_with_weights(family, data, beta_check, &tilt, lambda_star, w)?;
    if !f.converged {
        return Err(Error::NotConverged { iterations: f.iterations, kkt_residual: f.kkt_residual });
    }
    Ok(pivot)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PearsonResiduals {
    /// `e†ᵢ = (yᵢ − μ̌ᵢ) / √b''(h(η̌ᵢ))`
    pub raw: DVector<f64>,
    /// `e† − mean(e†)`
    pub centered: DVector<f64>,
}

pub fn pearson_residuals(family: &FamilySpec, data: &Dataset, beta_check: &DVector<f64>) -> Result<PearsonResiduals> {
    if beta_check.len() != data.p() {
        return Err(Error::DimensionMismatch(format!(
            "beta has length {} but design has {} columns",
            beta_check.len(),
            data.p()
        )));
    }
    let eta = data.x() * beta_check;
    let mut raw = DVector::zeros(data.n());
    for i in 0..data.n() {
        if !family.in_exp_range(eta[i]) {
            return Err(Error::NonFinite { index: i });
        }
        let v = family.var_fun(eta[i]);
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::NonPositiveVariance { index: i });
        }
        raw[i] = (data.y()[i] - family.g_inv(eta[i])) / v.sqrt();
    }
    let mean = raw.mean();
    let centered = raw.map(|e| e - mean);
    Ok(PearsonResiduals { raw, centered })
}

/// Fixed ingredients of the PRB working linear model at `β̌`.
#[derive(Debug, Clone, PartialEq)]
pub struct PrbContext {
    /// `Ǧ = V̌^{1/2} Δ̌ X`
    pub working_design: DMatrix<f64>,
    /// `Ǧ β̌`
    pub working_fit: DVector<f64>,
    pub residuals: PearsonResiduals,
    pub beta_check: DVector<f64>,
}

impl PrbContext {
    pub fn new(family: &FamilySpec, data: &Dataset, beta_check: &DVector<f64>) -> Result<Self> {
        let residuals = pearson_residuals(family, data, beta_check)?;
        let eta = data.x() * beta_check;
        let mut g = data.x().clone();
        for i in 0..data.n() {
            let s = family.var_fun(eta[i]).sqrt() * family.h_d1(eta[i]);
            if !s.is_finite() {
                return Err(Error::NonFinite { index: i });
            }
            if s != 1.0 {
                g.row_mut(i).scale_mut(s);
            }
        }
        let working_fit = &g * beta_check;
        Ok(PrbContext { working_design: g, working_fit, residuals, beta_check: beta_check.clone() })
    }

    /// Linear-family data set `(Ǧ, Ǧβ̌ + e*)`.
    pub fn synthetic_dataset(&self, e_star: &DVector<f64>) -> Result<Dataset> {
        Dataset::new(self.working_design.clone(), &self.working_fit + e_star)
    }

    /// Resample `n` centered residuals with replacement.
    pub fn resample<R: Rng + ?Sized>(&self, rng: &mut R) -> DVector<f64> {
        let c = &self.residuals.centered;
        let n = c.len();
        DVector::from_iterator(n, (0..n).map(|_| c[rng.random_range(0..n)]))
    }

    /// Solve the PRB lasso for a given residual draw and return the pivot and fit.
    pub fn replicate_with(&self, e_star: &DVector<f64>, lambda_star: f64) -> Result<(DVector<f64>, LassoFit)> {
        let synth = self.synthetic_dataset(e_star)?;
        let problem = PenalizedProblem::new(FamilySpec::linear(), &synth, lambda_star)?;
        let f = fit(&problem, Some(&self.beta_check), &replicate_settings())?;
        let pivot = (&f.beta_hat - &self.beta_check) * (synth.n() as f64).sqrt();
        Ok((pivot, f))
    }
}

/// One PRB replicate `√n (β̂* − β̌)`.
pub fn prb_replicate(
    family: &FamilySpec,
    data: &Dataset,
    beta_check: &DVector<f64>,
    lambda_star: f64,
    rng: &mut StreamRng,
) -> Result<DVector<f64>> {
    let ctx = PrbContext::new(family, data, beta_check)?;
    let e = ctx.resample(rng);
    let (pivot, f) = ctx.replicate_with(&e, lambda_star)?;
    if !f.converged {
        return Err(Error::NotConverged { iterations: f.iterations, kkt_residual: f.kkt_residual });
    }
    Ok(pivot)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BootstrapConfig {
    pub method: Method,
    pub centering: Centering,
    pub rule: ThresholdRule,
    pub weights: WeightDistribution,
    pub replicates: usize,
    /// Penalty for the replicate fits; `None` reuses the data's λ.
    pub lambda_star: Option<f64>,
}

impl Default for BootstrapConfig {
    fn default() -> Self {
        BootstrapConfig {
            method: Method::Pb,
            centering: Centering::Modified,
            rule: ThresholdRule::default(),
            weights: WeightDistribution::exp_one(),
            replicates: 1000,
            lambda_star: None,
        }
    }
}

/// `B` pivotal replicates with their metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct BootstrapResult {
    /// `B × p`; rows of failed replicates are NaN.
    pub replicates: DMatrix<f64>,
    pub converged: Vec<bool>,
    pub centering: DVector<f64>,
    pub method: Method,
    pub centering_mode: Centering,
    pub lambda_star: f64,
    pub seed: u64,
    pub n: usize,
}

impl BootstrapResult {
    pub fn b(&self) -> usize {
        self.converged.len()
    }

    pub fn p(&self) -> usize {
        self.replicates.ncols()
    }

    pub fn failed(&self) -> usize {
        self.converged.iter().filter(|c| !**c).count()
    }

    pub fn b_effective(&self) -> usize {
        self.b() - self.failed()
    }

    pub fn quality_warning(&self) -> bool {
        self.failed() as f64 > FAILURE_WARNING_FRACTION * self.b() as f64
    }

    /// Replicate matrix restricted to converged rows.
    pub fn effective(&self) -> DMatrix<f64> {
        let rows: Vec<usize> = (0..self.b()).filter(|&k| self.converged[k]).collect();
        self.replicates.select_rows(&rows)
    }

    /// Converged values of coordinate `j`.
    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.b()).filter(|&k| self.converged[k]).map(|k| self.replicates[(k, j)]).collect()
    }

    /// Euclidean norms of the converged rows.
    pub fn row_norms(&self) -> Vec<f64> {
        (0..self.b()).filter(|&k| self.converged[k]).map(|k| self.replicates.row(k).norm()).collect()
    }
}

/// The centering `β̌` implied by a mode.
pub fn centering_for(beta_hat: &DVector<f64>, n: usize, mode: Centering, rule: &ThresholdRule) -> DVector<f64> {
    match mode {
        Centering::Modified => threshold_estimator(beta_hat, n, rule),
        Centering::Naive => beta_hat.clone(),
    }
}

/// Run `B` replicates. Replicate `k` draws from its own stream derived from
/// `(seed, k)`, so the output does not depend on scheduling.
pub fn run_bootstrap(
    family: &FamilySpec,
    data: &Dataset,
    fit_at_lambda: &LassoFit,
    config: &BootstrapConfig,
    seed: u64,
) -> Result<BootstrapResult> {
    if config.replicates == 0 {
        return Err(Error::InvalidParameter("need at least one bootstrap replicate".into()));
    }
    let n = data.n();
    let p = data.p();
    let beta_check = centering_for(&fit_at_lambda.beta_hat, n, config.centering, &config.rule);
    let lambda_star = config.lambda_star.unwrap_or(fit_at_lambda.lambda);
    if !(lambda_star >= 0.0 && lambda_star.is_finite()) {
        return Err(Error::InvalidParameter(format!("lambda* must be non-negative, got {lambda_star}")));
    }

    enum Ctx {
        Pb(DVector<f64>),
        Prb(PrbContext),
    }
    let ctx = match config.method {
        Method::Pb => Ctx::Pb(pb_linear_tilt(family, data, &beta_check)?),
        Method::Prb => Ctx::Prb(PrbContext::new(family, data, &beta_check)?),
    };

    let rows: Vec<Option<DVector<f64>>> = (0..config.replicates)
        .into_par_iter()
        .map(|k| {
            let mut rng = stream(derive_tagged(seed, domain::REPLICATE, k as u64));
            let out = match &ctx {
                Ctx::Pb(tilt) => {
                    let w = config.weights.draw_normalized(n, &mut rng);
                    pb_replicate_with_weights(family, data, &beta_check, tilt, lambda_star, w)
                }
                Ctx::Prb(prb) => {
                    let e = prb.resample(&mut rng);
                    prb.replicate_with(&e, lambda_star)
                }
            };
            match out {
                Ok((pivot, f)) if f.converged && pivot.iter().all(|v| v.is_finite()) => Some(pivot),
                _ => None,
            }
        })
        .collect();

    let mut replicates = DMatrix::from_element(config.replicates, p, f64::NAN);
    let mut converged = vec![false; config.replicates];
    for (k, row) in rows.into_iter().enumerate() {
        if let Some(v) = row {
            replicates.row_mut(k).copy_from(&v.transpose());
            converged[k] = true;
        }
    }
    if !converged.iter().any(|c| *c) {
        return Err(Error::AllReplicatesFailed);
    }
    Ok(BootstrapResult {
        replicates,
        converged,
        centering: beta_check,
        method: config.method,
        centering_mode: config.centering,
        lambda_star,
        seed,
        n,
    })
}

/// Finite-sample checks of the variance-consistency statements.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VarianceDiagnostics {
    /// `‖S̃_n − L̂_n‖_F` at `β̌`.
    pub s_minus_l_frobenius: f64,
    pub l_frobenius: f64,
    /// `‖S̃_n − L̂_n‖_F / ‖L̂_n‖_F`
    pub relative_discrepancy: Option<f64>,
    /// `n⁻¹ Σ (e†ᵢ − ē†)²`
    pub mean_centered_sq_pearson: f64,
    pub replicate_mean: Option<Vec<f64>>,
    /// Row-major `p × p` covariance of the converged replicates.
    pub replicate_covariance: Option<Vec<Vec<f64>>>,
    pub degenerate_sample: bool,
}

pub fn variance_diagnostics(
    result: Option<&BootstrapResult>,
    family: &FamilySpec,
    data: &Dataset,
    beta_check: &DVector<f64>,
) -> Result<VarianceDiagnostics> {
    let m = diagnostics_matrices(family, data, beta_check)?;
    let diff = (&m.s_n_hat - &m.l_n).norm();
    let l_norm = m.l_n.norm();
    let pearson = pearson_residuals(family, data, beta_check)?;
    let mcsp = pearson.centered.norm_squared() / data.n() as f64;

    let (mean, cov) = match result {
        Some(r) if r.b_effective() >= 2 => {
            let e = r.effective();
            let b = e.nrows() as f64;
            let mean = e.row_mean();
            let centered = DMatrix::from_fn(e.nrows(), e.ncols(), |i, j| e[(i, j)] - mean[j]);
            let cov = centered.tr_mul(&centered) / (b - 1.0);
            let cov_rows = (0..cov.nrows()).map(|i| cov.row(i).iter().copied().collect()).collect();
            (Some(mean.iter().copied().collect()), Some(cov_rows))
        }
        _ => (None, None),
    };
    Ok(VarianceDiagnostics {
        s_minus_l_frobenius: diff,
        l_frobenius: l_norm,
        relative_discrepancy: (l_norm > 0.0).then(|| diff / l_norm),
        mean_centered_sq_pearson: mcsp,
        replicate_mean: mean,
        replicate_covariance: cov,
        degenerate_sample: data.n() < 2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn threshold_examples() {
        let rule = ThresholdRule::default();
        let b = DVector::from_vec(vec![0.9, -0.2, 0.0]);
        assert_eq!(threshold_estimator(&b, 1000, &rule), b);
        let b = DVector::from_vec(vec![0.05, -0.2]);
        assert_eq!(threshold_estimator(&b, 27, &rule), DVector::zeros(2));
        // strict inequality at the level itself
        let a_n = rule.level(8);
        let b = DVector::from_vec(vec![a_n, -a_n, 1.0]);
        assert_eq!(threshold_estimator(&b, 8, &rule), DVector::from_vec(vec![0.0, 0.0, 1.0]));
        assert!(ThresholdRule::new(0.5).is_err());
        assert!(ThresholdRule::new(0.0).is_err());
    }

    #[test]
    fn weight_distributions_have_variance_mean_squared() {
        for d in [
            WeightDistribution::exp_one(),
            WeightDistribution::exponential(3.0).unwrap(),
            WeightDistribution::PoissonOne,
            WeightDistribution::beta_for(2.0).unwrap(),
            WeightDistribution::beta_for(0.3).unwrap(),
        ] {
            assert!((d.variance() - d.mean().powi(2)).abs() < 1e-12, "{d}");
        }
        let a = WeightDistribution::beta_shape_for(3.0);
        assert!(WeightDistribution::beta(a, 3.0).is_ok());
        assert!(WeightDistribution::beta(0.5, 3.0).is_err());
    }

    #[test]
    fn weight_parsing() {
        assert_eq!("exp1".parse::<WeightDistribution>().unwrap(), WeightDistribution::exp_one());
        assert_eq!("pois1".parse::<WeightDistribution>().unwrap(), WeightDistribution::PoissonOne);
        assert!("beta:0.5,3".parse::<WeightDistribution>().is_err());
        assert!("gauss".parse::<WeightDistribution>().is_err());
        let d = WeightDistribution::beta_for(3.0).unwrap();
        assert_eq!(d.to_string().parse::<WeightDistribution>().unwrap(), d);
        assert_eq!("exp:2.5".parse::<WeightDistribution>().unwrap().mean(), 0.4);
    }

    #[test]
    fn tilt_examples() {
        let gamma = FamilySpec::gamma(1.0).unwrap();
        let d = Dataset::new(DMatrix::from_element(1, 1, 1.0), DVector::from_element(1, 2.0)).unwrap();
        let c = pb_linear_tilt(&gamma, &d, &DVector::zeros(1)).unwrap();
        assert!((c[0] - 1.0).abs() < 1e-15);

        let x = DMatrix::from_row_slice(3, 2, &[1.0, 0.5, -0.3, 2.0, 0.7, -1.1]);
        let y = DVector::from_vec(vec![0.4, -1.0, 2.2]);
        let d = Dataset::new(x.clone(), y.clone()).unwrap();
        let b = DVector::from_vec(vec![0.2, 0.1]);
        let c = pb_linear_tilt(&FamilySpec::linear(), &d, &b).unwrap();
        assert!((c - x.transpose() * (y - &x * &b)).amax() < 1e-14);
    }

    #[test]
    fn pearson_examples() {
        let one = Dataset::new(DMatrix::from_element(1, 1, 1.0), DVector::from_element(1, 1.0)).unwrap();
        let r = pearson_residuals(&FamilySpec::logistic(), &one, &DVector::zeros(1)).unwrap();
        assert!((r.raw[0] - 1.0).abs() < 1e-15);
        assert_eq!(r.centered[0], 0.0);

        let x = DMatrix::from_row_slice(3, 1, &[1.0, 2.0, -1.0]);
        let y = DVector::from_vec(vec![0.5, 3.0, -2.0]);
        let d = Dataset::new(x, y).unwrap();
        let r = pearson_residuals(&FamilySpec::linear(), &d, &DVector::from_element(1, 1.0)).unwrap();
        assert_eq!(r.raw, DVector::from_vec(vec![-0.5, 1.0, -1.0]));

        let pois = FamilySpec::poisson();
        let b = DVector::from_element(1, 0.3);
        let y_fit = d.x() * &b;
        let d = d.with_response(y_fit.map(|e| pois.g_inv(e))).unwrap();
        assert!(pearson_residuals(&pois, &d, &b).unwrap().raw.amax() < 1e-15);
    }

    #[test]
    fn pearson_reports_zero_variance() {
        // probit variance underflows far in the tail
        let d =
            Dataset::new(DMatrix::from_column_slice(2, 1, &[1.0, 50.0]), DVector::from_vec(vec![1.0, 1.0])).unwrap();
        match pearson_residuals(&FamilySpec::probit(), &d, &DVector::from_element(1, 1.0)) {
            Err(Error::NonPositiveVariance { index }) => assert_eq!(index, 1),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn diagnostics_flag_single_observation() {
        let one = Dataset::new(DMatrix::from_element(1, 1, 1.0), DVector::from_element(1, 0.3)).unwrap();
        let v = variance_diagnostics(None, &FamilySpec::linear(), &one, &DVector::zeros(1)).unwrap();
        assert!(v.degenerate_sample);
        assert_eq!(v.mean_centered_sq_pearson, 0.0);
    }
}
