//! Percentile intervals and the norm confidence region from bootstrap pivots.
//!
//! Intervals use the pivotal orientation: with `q(γ)` the empirical
//! γ-quantile of `√n (β̂* − β̌)`, the two-sided interval is
//! `[β̂ − q(1 − α/2)/√n, β̂ − q(α/2)/√n]`. Quantiles are type-1 order
//! statistics, `x_(⌈γ m⌉)` with the index clamped to `[1, m]`.

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::bootstrap::BootstrapResult;
use crate::error::{Error, Result};

/// Type-1 empirical quantile.
pub fn empirical_quantile(values: &[f64], gamma: f64) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::InsufficientReplicates { have: 0, need: 1 });
    }
    if !(0.0..=1.0).contains(&gamma) {
        return Err(Error::InvalidParameter(format!("quantile level must lie in [0, 1], got {gamma}")));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    Ok(sorted[order_index(sorted.len(), gamma)])
}

fn order_index(m: usize, gamma: f64) -> usize {
    let k = (gamma * m as f64).ceil() as usize;
    k.clamp(1, m) - 1
}

/// Smallest replicate count for which the α/2 and 1 − α/2 tail quantiles
/// are distinct order statistics.
pub fn min_replicates(alpha: f64) -> usize {
    let tail = (alpha / 2.0).min(1.0 - alpha / 2.0);
    ((1.0 / tail - 1e-9).ceil() as usize).max(2)
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidParameter(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    Ok(())
}

fn check_replicates(result: &BootstrapResult, alpha: f64) -> Result<()> {
    let need = min_replicates(alpha);
    let have = result.b_effective();
    if have < need {
        return Err(Error::InsufficientReplicates { have, need });
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientInterval {
    pub index: usize,
    pub estimate: f64,
    pub lower: f64,
    pub upper: f64,
    /// Lower end of the left-sided interval `[l, ∞)`.
    pub left_lower: f64,
    /// Upper end of the right-sided interval `(−∞, u]`.
    pub right_upper: f64,
}

impl CoefficientInterval {
    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn contains(&self, value: f64) -> bool {
        self.lower <= value && value <= self.upper
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InferenceReport {
    pub alpha: f64,
    pub n: usize,
    pub b_effective: usize,
    pub coefficients: Vec<CoefficientInterval>,
    /// Empirical (1 − α)-quantile of the replicate norms.
    pub region_quantile: f64,
}

impl InferenceReport {
    /// Whether `β₀` lies in `{β : ‖√n (β̂ − β)‖ ≤ q}`.
    pub fn region_covers(&self, beta0: &DVector<f64>) -> bool {
        region_statistic(self.n, &self.estimates(), beta0) <= self.region_quantile
    }

    pub fn estimates(&self) -> DVector<f64> {
        DVector::from_iterator(self.coefficients.len(), self.coefficients.iter().map(|c| c.estimate))
    }
}

fn region_statistic(n: usize, beta_hat: &DVector<f64>, beta0: &DVector<f64>) -> f64 {
    (beta_hat - beta0).norm() * (n as f64).sqrt()
}

pub fn percentile_intervals(result: &BootstrapResult, beta_hat: &DVector<f64>, alpha: f64) -> Result<InferenceReport> {
    check_alpha(alpha)?;
    check_replicates(result, alpha)?;
    if beta_hat.len() != result.p() {
        return Err(Error::DimensionMismatch(format!(
            "estimate has length {} but replicates have {} columns",
            beta_hat.len(),
            result.p()
        )));
    }
    let root_n = (result.n as f64).sqrt();
    let mut coefficients = Vec::with_capacity(result.p());
    for j in 0..result.p() {
        let mut col = result.column(j);
        col.sort_by(f64::total_cmp);
        let q = |g: f64| col[order_index(col.len(), g)];
        let b = beta_hat[j];
        coefficients.push(CoefficientInterval {
            index: j,
            estimate: b,
            lower: b - q(1.0 - alpha / 2.0) / root_n,
            upper: b - q(alpha / 2.0) / root_n,
            left_lower: b - q(1.0 - alpha) / root_n,
            right_upper: b - q(alpha) / root_n,
        });
    }
    let region_quantile = empirical_quantile(&result.row_norms(), 1.0 - alpha)?;
    Ok(InferenceReport { alpha, n: result.n, b_effective: result.b_effective(), coefficients, region_quantile })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegionDecision {
    pub quantile: f64,
    /// `‖√n (β̂ − β₀)‖`
    pub statistic: f64,
    pub covered: bool,
}

pub fn norm_region(
    result: &BootstrapResult,
    beta_hat: &DVector<f64>,
    alpha: f64,
    beta_hypothesis: &DVector<f64>,
) -> Result<RegionDecision> {
    check_alpha(alpha)?;
    if result.b_effective() < 2 {
        return Err(Error::InsufficientReplicates { have: result.b_effective(), need: 2 });
    }
    if beta_hat.len() != beta_hypothesis.len() || beta_hat.len() != result.p() {
        return Err(Error::DimensionMismatch("estimate, hypothesis and replicates disagree in length".into()));
    }
    let quantile = empirical_quantile(&result.row_norms(), 1.0 - alpha)?;
    let statistic = region_statistic(result.n, beta_hat, beta_hypothesis);
    Ok(RegionDecision { quantile, statistic, covered: statistic <= quantile })
}
