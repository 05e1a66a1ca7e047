//! GLM sub-models and the likelihood kernels built on them.
//!
//! Every family is written in canonical-parameter form: with `θ = h(η)` and
//! `η = xᵀβ`, observation `i` contributes `y h(η) − h₁(η)` to the
//! log-likelihood, where `h₁ = b ∘ h`. The mean is `μ = g⁻¹(η)` and the
//! variance function is `b''(h(η))`.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::probit::normal_parts;

/// Exponent magnitude beyond which a family reports a non-finite intermediate.
pub const EXP_LIMIT: f64 = 700.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyId {
    Linear,
    Logistic,
    Probit,
    Poisson,
    Gamma,
}

impl FamilyId {
    pub const ALL: [FamilyId; 5] =
        [FamilyId::Linear, FamilyId::Logistic, FamilyId::Probit, FamilyId::Poisson, FamilyId::Gamma];

    pub fn as_str(self) -> &'static str {
        match self {
            FamilyId::Linear => "linear",
            FamilyId::Logistic => "logistic",
            FamilyId::Probit => "probit",
            FamilyId::Poisson => "poisson",
            FamilyId::Gamma => "gamma",
        }
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FamilyId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "linear" | "gaussian" => Ok(FamilyId::Linear),
            "logistic" | "binomial" => Ok(FamilyId::Logistic),
            "probit" => Ok(FamilyId::Probit),
            "poisson" => Ok(FamilyId::Poisson),
            "gamma" => Ok(FamilyId::Gamma),
            other => Err(Error::UnknownFamily(other.to_string())),
        }
    }
}

/// A GLM sub-model together with its link machinery.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FamilySpec {
    pub id: FamilyId,
    /// Gamma shape parameter; always 1 for the other families.
    pub shape_alpha: f64,
}

/// Per-observation pieces of the weighted objective at one linear predictor.
#[derive(Debug, Clone, Copy)]
pub(crate) struct ObsTerms {
    /// `−y h(η) + h₁(η)`
    pub loss: f64,
    /// `d loss / dη = −(y − μ) h'(η)`
    pub score: f64,
    /// `d² loss / dη² = (g⁻¹)'(η) h'(η) − (y − μ) h''(η)`
    pub curvature: f64,
}

/// Build a family. `shape_alpha` is only consulted for gamma.
pub fn make_family(id: FamilyId, shape_alpha: Option<f64>) -> Result<FamilySpec> {
    let shape_alpha = match id {
        FamilyId::Gamma => {
            let a = shape_alpha.unwrap_or(1.0);
            if !(a > 0.0 && a.is_finite()) {
                return Err(Error::InvalidParameter(format!("gamma shape must be positive and finite, got {a}")));
            }
            a
        }
        _ => 1.0,
    };
    Ok(FamilySpec { id, shape_alpha })
}

fn sigmoid(u: f64) -> f64 {
    if u >= 0.0 {
        1.0 / (1.0 + (-u).exp())
    } else {
        let e = u.exp();
        e / (1.0 + e)
    }
}

fn softplus(u: f64) -> f64 {
    u.max(0.0) + (-u.abs()).exp().ln_1p()
}

fn exp_c(u: f64) -> f64 {
    u.clamp(-EXP_LIMIT, EXP_LIMIT).exp()
}

impl FamilySpec {
    pub fn linear() -> Self {
        FamilySpec { id: FamilyId::Linear, shape_alpha: 1.0 }
    }

    pub fn logistic() -> Self {
        FamilySpec { id: FamilyId::Logistic, shape_alpha: 1.0 }
    }

    pub fn probit() -> Self {
        FamilySpec { id: FamilyId::Probit, shape_alpha: 1.0 }
    }

    pub fn poisson() -> Self {
        FamilySpec { id: FamilyId::Poisson, shape_alpha: 1.0 }
    }

    pub fn gamma(shape_alpha: f64) -> Result<Self> {
        make_family(FamilyId::Gamma, Some(shape_alpha))
    }

    /// Whether the exponentials needed at `u` stay within `±EXP_LIMIT`.
    pub fn in_exp_range(&self, u: f64) -> bool {
        match self.id {
            FamilyId::Poisson => u <= EXP_LIMIT,
            FamilyId::Gamma => u >= -EXP_LIMIT,
            _ => u.is_finite(),
        }
    }

    pub fn h(&self, u: f64) -> f64 {
        match self.id {
            FamilyId::Linear | FamilyId::Logistic | FamilyId::Poisson => u,
            FamilyId::Probit => {
                let n = normal_parts(u);
                n.log_cdf - n.log_sf
            }
            FamilyId::Gamma => -self.shape_alpha * exp_c(-u),
        }
    }

    pub fn h_d1(&self, u: f64) -> f64 {
        match self.id {
            FamilyId::Linear | FamilyId::Logistic | FamilyId::Poisson => 1.0,
            FamilyId::Probit => {
                let n = normal_parts(u);
                n.r + n.rbar
            }
            FamilyId::Gamma => self.shape_alpha * exp_c(-u),
        }
    }

    pub fn h_d2(&self, u: f64) -> f64 {
        match self.id {
            FamilyId::Linear | FamilyId::Logistic | FamilyId::Poisson => 0.0,
            FamilyId::Probit => {
                let n = normal_parts(u);
                -n.r * (u + n.r) + n.rbar * (n.rbar - u)
            }
            FamilyId::Gamma => -self.shape_alpha * exp_c(-u),
        }
    }

    pub fn h_d3(&self, u: f64) -> f64 {
        match self.id {
            FamilyId::Linear | FamilyId::Logistic | FamilyId::Poisson => 0.0,
            FamilyId::Probit => {
                let n = normal_parts(u);
                let (r, rb) = (n.r, n.rbar);
                (r * (u + r) * u - r) + 2.0 * r * r * (u + r) + 2.0 * rb * rb * (rb - u) - (rb * (rb - u) * u + rb)
            }
            FamilyId::Gamma => self.shape_alpha * exp_c(-u),
        }
    }

    /// `h₁(u) = b(h(u))`.
    pub fn h1(&self, u: f64) -> f64 {
        match self.id {
            FamilyId::Linear => 0.5 * u * u,
            FamilyId::Logistic => softplus(u),
            FamilyId::Probit => -normal_parts(u).log_sf,
            FamilyId::Poisson => exp_c(u),
            FamilyId::Gamma => self.shape_alpha * u,
        }
    }

    pub fn h1_d1(&self, u: f64) -> f64 {
        match self.id {
            FamilyId::Linear => u,
            FamilyId::Logistic => sigmoid(u),
            FamilyId::Probit => normal_parts(u).rbar,
            FamilyId::Poisson => exp_c(u),
            FamilyId::Gamma => self.shape_alpha,
        }
    }

    pub fn h1_d2(&self, u: f64) -> f64 {
        match self.id {
            FamilyId::Linear => 1.0,
            FamilyId::Logistic => {
                let s = sigmoid(u);
                s * (1.0 - s)
            }
            FamilyId::Probit => {
                let rb = normal_parts(u).rbar;
                rb * (rb - u)
            }
            FamilyId::Poisson => exp_c(u),
            FamilyId::Gamma => 0.0,
        }
    }

    pub fn h1_d3(&self, u: f64) -> f64 {
        match self.id {
            FamilyId::Linear | FamilyId::Gamma => 0.0,
            FamilyId::Logistic => {
                let s = sigmoid(u);
                s * (1.0 - s) * (1.0 - 2.0 * s)
            }
            FamilyId::Probit => {
                let rb = normal_parts(u).rbar;
                let d = rb - u;
                rb * d * d + rb * (rb * d - 1.0)
            }
            FamilyId::Poisson => exp_c(u),
        }
    }

    /// Inverse link: the mean at linear predictor `u`.
    pub fn g_inv(&self, u: f64) -> f64 {
        match self.id {
            FamilyId::Linear => u,
            FamilyId::Logistic => sigmoid(u),
            FamilyId::Probit => normal_parts(u).cdf,
            FamilyId::Poisson | FamilyId::Gamma => exp_c(u),
        }
    }

    pub fn g_inv_d1(&self, u: f64) -> f64 {
        match self.id {
            FamilyId::Linear => 1.0,
            FamilyId::Logistic => {
                let s = sigmoid(u);
                s * (1.0 - s)
            }
            FamilyId::Probit => normal_parts(u).pdf,
            FamilyId::Poisson | FamilyId::Gamma => exp_c(u),
        }
    }

    /// Variance function `b''(h(u))`.
    pub fn var_fun(&self, u: f64) -> f64 {
        match self.id {
            FamilyId::Linear => 1.0,
            FamilyId::Logistic => {
                let s = sigmoid(u);
                s * (1.0 - s)
            }
            FamilyId::Probit => {
                let n = normal_parts(u);
                n.cdf * n.sf
            }
            FamilyId::Poisson => exp_c(u),
            FamilyId::Gamma => exp_c(2.0 * u) / self.shape_alpha,
        }
    }

    /// Whether `y` lies in the response support of this family.
    pub fn supports(&self, y: f64) -> bool {
        if !y.is_finite() {
            return false;
        }
        match self.id {
            FamilyId::Linear => true,
            FamilyId::Logistic | FamilyId::Probit => y == 0.0 || y == 1.0,
            FamilyId::Poisson => y >= 0.0,
            FamilyId::Gamma => y > 0.0,
        }
    }

    /// `lim_{t→∞} loss(η + t s) / t` for one observation, `+∞` when the loss
    /// grows faster than linearly in the direction of `s`.
    pub(crate) fn recession_slope(&self, y: f64, s: f64) -> f64 {
        if s == 0.0 {
            return 0.0;
        }
        match self.id {
            FamilyId::Linear => f64::INFINITY,
            FamilyId::Logistic => {
                if s > 0.0 {
                    (1.0 - y) * s
                } else {
                    -y * s
                }
            }
            FamilyId::Probit => {
                if (s > 0.0 && y == 1.0) || (s < 0.0 && y == 0.0) {
                    0.0
                } else {
                    f64::INFINITY
                }
            }
            FamilyId::Poisson => {
                if s > 0.0 {
                    f64::INFINITY
                } else {
                    -y * s
                }
            }
            FamilyId::Gamma => {
                if s > 0.0 || y == 0.0 {
                    self.shape_alpha * s
                } else {
                    f64::INFINITY
                }
            }
        }
    }

    /// Loss, score and curvature for one observation; `index` is only used
    /// to label overflow errors.
    pub(crate) fn obs_terms(&self, eta: f64, y: f64, index: usize) -> Result<ObsTerms> {
        if !eta.is_finite() || !self.in_exp_range(eta) {
            return Err(Error::NonFinite { index });
        }
        let t = match self.id {
            FamilyId::Linear => {
                let r = y - eta;
                ObsTerms { loss: -y * eta + 0.5 * eta * eta, score: -r, curvature: 1.0 }
            }
            FamilyId::Logistic => {
                let mu = sigmoid(eta);
                ObsTerms { loss: -y * eta + softplus(eta), score: -(y - mu), curvature: mu * (1.0 - mu) }
            }
            FamilyId::Poisson => {
                let mu = eta.exp();
                ObsTerms { loss: -y * eta + mu, score: -(y - mu), curvature: mu }
            }
            FamilyId::Gamma => {
                let a = self.shape_alpha;
                let e = (-eta).exp();
                ObsTerms { loss: a * y * e + a * eta, score: -(y * e - 1.0) * a, curvature: a * y * e }
            }
            FamilyId::Probit => {
                let n = normal_parts(eta);
                // the canonical form −y h + h₁ rearranged per Bernoulli outcome
                // so neither tail cancels catastrophically
                let loss = -y * n.log_cdf - (1.0 - y) * n.log_sf;
                let score = (1.0 - y) * n.rbar - y * n.r;
                let curvature = y * n.r * (eta + n.r) + (1.0 - y) * n.rbar * (n.rbar - eta);
                ObsTerms { loss, score, curvature }
            }
        };
        if !(t.loss.is_finite() && t.score.is_finite() && t.curvature.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(t)
    }
}

/// Fixed design matrix and response vector.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    x: DMatrix<f64>,
    y: DVector<f64>,
}

impl Dataset {
    pub fn new(x: DMatrix<f64>, y: DVector<f64>) -> Result<Self> {
        if x.nrows() == 0 || x.ncols() == 0 {
            return Err(Error::InvalidDataset(format!(
                "design must have n >= 1 and p >= 1, got {}x{}",
                x.nrows(),
                x.ncols()
            )));
        }
        if x.nrows() != y.len() {
            return Err(Error::DimensionMismatch(format!(
                "design has {} rows but response has {} entries",
                x.nrows(),
                y.len()
            )));
        }
        if let Some(k) = x.iter().position(|v| !v.is_finite()) {
            let (i, j) = (k % x.nrows(), k / x.nrows());
            return Err(Error::InvalidDataset(format!("non-finite design entry at ({i}, {j})")));
        }
        if let Some(i) = y.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidDataset(format!("non-finite response at {i}")));
        }
        Ok(Dataset { x, y })
    }

    pub fn x(&self) -> &DMatrix<f64> {
        &self.x
    }

    pub fn y(&self) -> &DVector<f64> {
        &self.y
    }

    pub fn n(&self) -> usize {
        self.x.nrows()
    }

    pub fn p(&self) -> usize {
        self.x.ncols()
    }

    /// Same design, new response.
    pub fn with_response(&self, y: DVector<f64>) -> Result<Self> {
        Dataset::new(self.x.clone(), y)
    }

    /// Rows selected by `rows`, in that order.
    pub fn subset(&self, rows: &[usize]) -> Result<Self> {
        let x = self.x.select_rows(rows);
        let y = DVector::from_iterator(rows.len(), rows.iter().map(|&i| self.y[i]));
        Dataset::new(x, y)
    }
}

/// Result of checking responses against a family's support.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Validity {
    pub valid: bool,
    pub violations: Vec<usize>,
}

pub fn validate_dataset(family: &FamilySpec, data: &Dataset) -> Validity {
    let violations: Vec<usize> =
        data.y.iter().enumerate().filter(|(_, &y)| !family.supports(y)).map(|(i, _)| i).collect();
    Validity { valid: violations.is_empty(), violations }
}

pub(crate) fn check_dims(data: &Dataset, beta: &DVector<f64>, weights: Option<&DVector<f64>>) -> Result<()> {
    if beta.len() != data.p() {
        return Err(Error::DimensionMismatch(format!(
            "beta has length {} but design has {} columns",
            beta.len(),
            data.p()
        )));
    }
    if let Some(w) = weights {
        if w.len() != data.n() {
            return Err(Error::DimensionMismatch(format!(
                "weights have length {} but there are {} observations",
                w.len(),
                data.n()
            )));
        }
        if let Some(i) = w.iter().position(|v| !(*v >= 0.0) || !v.is_finite()) {
            return Err(Error::InvalidParameter(format!("weight {i} is negative or non-finite")));
        }
    }
    Ok(())
}

#[inline]
fn weight_at(weights: Option<&DVector<f64>>, i: usize) -> f64 {
    weights.map_or(1.0, |w| w[i])
}

/// `Σᵢ wᵢ [−yᵢ h(xᵢᵀβ) + h₁(xᵢᵀβ)]`. `None` weights mean all ones.
pub fn neg_log_likelihood(
    family: &FamilySpec,
    data: &Dataset,
    beta: &DVector<f64>,
    weights: Option<&DVector<f64>>,
) -> Result<f64> {
    check_dims(data, beta, weights)?;
    let eta = &data.x * beta;
    let mut total = 0.0;
    for i in 0..data.n() {
        let w = weight_at(weights, i);
        if w == 0.0 {
            continue;
        }
        total += w * family.obs_terms(eta[i], data.y[i], i)?.loss;
    }
    Ok(total)
}

/// Gradient of [`neg_log_likelihood`]: `−Σᵢ wᵢ (yᵢ − μᵢ) h'(ηᵢ) xᵢ`.
pub fn nll_gradient(
    family: &FamilySpec,
    data: &Dataset,
    beta: &DVector<f64>,
    weights: Option<&DVector<f64>>,
) -> Result<DVector<f64>> {
    check_dims(data, beta, weights)?;
    let eta = &data.x * beta;
    let mut scores = DVector::zeros(data.n());
    for i in 0..data.n() {
        let w = weight_at(weights, i);
        if w == 0.0 {
            continue;
        }
        scores[i] = w * family.obs_terms(eta[i], data.y[i], i)?.score;
    }
    Ok(data.x.tr_mul(&scores))
}

/// `L_n` and the plug-in `Š_n` at a given coefficient vector.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagnosticMatrices {
    pub l_n: DMatrix<f64>,
    pub s_n_hat: DMatrix<f64>,
}

pub fn diagnostics_matrices(family: &FamilySpec, data: &Dataset, beta: &DVector<f64>) -> Result<DiagnosticMatrices> {
    check_dims(data, beta, None)?;
    let n = data.n();
    let eta = &data.x * beta;
    let mut l_w = DVector::zeros(n);
    let mut s_w = DVector::zeros(n);
    for i in 0..n {
        let t = family.obs_terms(eta[i], data.y[i], i)?;
        l_w[i] = t.curvature;
        // score² = h'(η)² (y − μ)²
        s_w[i] = t.score * t.score;
    }
    Ok(DiagnosticMatrices {
        l_n: weighted_gram(&data.x, &l_w) / n as f64,
        s_n_hat: weighted_gram(&data.x, &s_w) / n as f64,
    })
}

/// Model-based `S_n = n⁻¹ Σᵢ h'(ηᵢ)² b''(h(ηᵢ)) xᵢxᵢᵀ`, the variance of the
/// normalized score when the model holds at `beta`.
pub fn expected_score_covariance(family: &FamilySpec, data: &Dataset, beta: &DVector<f64>) -> Result<DMatrix<f64>> {
    check_dims(data, beta, None)?;
    let eta = &data.x * beta;
    let mut w = DVector::zeros(data.n());
    for (i, &e) in eta.iter().enumerate() {
        if !family.in_exp_range(e) {
            return Err(Error::NonFinite { index: i });
        }
        w[i] = family.h_d1(e).powi(2) * family.var_fun(e);
    }
    Ok(weighted_gram(&data.x, &w) / data.n() as f64)
}

/// `Σᵢ wᵢ xᵢ xᵢᵀ`, exactly symmetric.
pub(crate) fn weighted_gram(x: &DMatrix<f64>, w: &DVector<f64>) -> DMatrix<f64> {
    let p = x.ncols();
    let mut g = DMatrix::zeros(p, p);
    for j in 0..p {
        let cj = x.column(j);
        for k in 0..=j {
            let ck = x.column(k);
            let mut s = 0.0;
            for i in 0..x.nrows() {
                s += w[i] * cj[i] * ck[i];
            }
            g[(j, k)] = s;
            g[(k, j)] = s;
        }
    }
    g
}
