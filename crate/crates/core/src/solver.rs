//! Proximal Newton solver for the weighted, linearly tilted, ℓ1-penalized
//! negative log-likelihood
//!
//! ```text
//! F(β) = Σᵢ wᵢ [−yᵢ h(xᵢᵀβ) + h₁(xᵢᵀβ)] + cᵀβ + λ Σⱼ |βⱼ|
//! ```
//!
//! Each outer step builds the local quadratic of the smooth part, solves
//! the penalized quadratic by cyclic coordinate descent with
//! soft-thresholding and then backtracks on the true objective.

use nalgebra::{DMatrix, DVector};
use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::family::{check_dims, neg_log_likelihood, nll_gradient, Dataset, FamilySpec};
use crate::rng::StreamRng;

const CURVATURE_FLOOR: f64 = 1e-10;
const ARMIJO_SHRINK: f64 = 0.5;
const ARMIJO_SUFFICIENT: f64 = 1e-4;
const MAX_BACKTRACKS: usize = 60;
const DIVERGENCE_BOUND: f64 = 1e12;

/// `sgn(z) max(|z| − γ, 0)`
#[inline]
pub fn soft_threshold(z: f64, gamma: f64) -> f64 {
    if z > gamma {
        z - gamma
    } else if z < -gamma {
        z + gamma
    } else {
        0.0
    }
}

/// One penalized likelihood problem. The dataset is borrowed so bootstrap
/// replicates can share it.
#[derive(Debug, Clone)]
pub struct PenalizedProblem<'a> {
    pub family: FamilySpec,
    pub data: &'a Dataset,
    pub lambda: f64,
    pub weights: Option<DVector<f64>>,
    pub tilt: Option<DVector<f64>>,
}

impl<'a> PenalizedProblem<'a> {
    pub fn new(family: FamilySpec, data: &'a Dataset, lambda: f64) -> Result<Self> {
        if !(lambda >= 0.0 && lambda.is_finite()) {
            return Err(Error::InvalidParameter(format!("lambda must be finite and non-negative, got {lambda}")));
        }
        Ok(PenalizedProblem { family, data, lambda, weights: None, tilt: None })
    }

    pub fn with_weights(mut self, weights: DVector<f64>) -> Result<Self> {
        check_dims(self.data, &DVector::zeros(self.data.p()), Some(&weights))?;
        self.weights = Some(weights);
        Ok(self)
    }

    pub fn with_tilt(mut self, tilt: DVector<f64>) -> Result<Self> {
        if tilt.len() != self.data.p() {
            return Err(Error::DimensionMismatch(format!(
                "tilt has length {} but design has {} columns",
                tilt.len(),
                self.data.p()
            )));
        }
        if tilt.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("tilt must be finite".into()));
        }
        self.tilt = Some(tilt);
        Ok(self)
    }

    /// Smooth part plus penalty at `beta`.
    pub fn objective(&self, beta: &DVector<f64>) -> Result<f64> {
        let nll = neg_log_likelihood(&self.family, self.data, beta, self.weights.as_ref())?;
        let tilt = self.tilt.as_ref().map_or(0.0, |c| c.dot(beta));
        Ok(nll + tilt + self.lambda * beta.lp_norm(1))
    }

    /// Gradient of the smooth part (weighted likelihood plus tilt).
    pub fn smooth_gradient(&self, beta: &DVector<f64>) -> Result<DVector<f64>> {
        let mut g = nll_gradient(&self.family, self.data, beta, self.weights.as_ref())?;
        if let Some(c) = &self.tilt {
            g += c;
        }
        Ok(g)
    }

    /// Smallest penalty for which zero satisfies the optimality conditions.
    pub fn lambda_max(&self) -> Result<f64> {
        Ok(self.smooth_gradient(&DVector::zeros(self.data.p()))?.amax())
    }

    fn default_kkt_tol(&self) -> f64 {
        1e-6 * (1.0 + self.lambda)
    }

    /// Whether the objective provably decreases without bound along `d`.
    ///
    /// For convex `F`, `F(β + t d) ≤ F(β) + t F∞(d)` where `F∞` is the
    /// recession function, so `F∞(d) < 0` certifies that no minimizer exists.
    fn unbounded_along(&self, d: &DVector<f64>) -> bool {
        self.recession(d).is_some_and(|(rec, scale)| rec < -1e-8 * scale)
    }

    /// Whether the objective never increases along `d`: a minimizer, if any,
    /// is not reached by moving further that way.
    fn recedes_along(&self, d: &DVector<f64>) -> bool {
        d.amax() > 0.0 && self.recession(d).is_some_and(|(rec, scale)| rec <= 1e-8 * scale)
    }

    /// Slope of the objective at infinity along `d` and a magnitude for it;
    /// `None` when the slope is infinite.
    fn recession(&self, d: &DVector<f64>) -> Option<(f64, f64)> {
        let s = self.data.x() * d;
        let mut rec = self.lambda * d.lp_norm(1);
        let mut scale = rec;
        for i in 0..s.len() {
            let w = self.weights.as_ref().map_or(1.0, |w| w[i]);
            if w == 0.0 {
                continue;
            }
            let r = self.family.recession_slope(self.data.y()[i], s[i]);
            if r == f64::INFINITY {
                return None;
            }
            rec += w * r;
            scale += w * r.abs() + w * s[i].abs();
        }
        if let Some(c) = &self.tilt {
            rec += c.dot(d);
            scale += c.abs().dot(&d.abs());
        }
        Some((rec, scale))
    }

    /// Gradient and curvature surrogate of the smooth part at `beta`.
    fn local_model(&self, beta: &DVector<f64>) -> Result<(DVector<f64>, DMatrix<f64>)> {
        let data = self.data;
        let (n, p) = (data.n(), data.p());
        let eta = data.x() * beta;
        let mut score = DVector::zeros(n);
        let mut curv = DVector::zeros(n);
        for i in 0..n {
            let w = self.weights.as_ref().map_or(1.0, |w| w[i]);
            if w == 0.0 {
                continue;
            }
            let t = self.family.obs_terms(eta[i], data.y()[i], i)?;
            score[i] = w * t.score;
            curv[i] = w * t.curvature.max(CURVATURE_FLOOR);
        }
        let mut g = data.x().tr_mul(&score);
        if let Some(c) = &self.tilt {
            g += c;
        }
        let h = crate::family::weighted_gram(data.x(), &curv);
        debug_assert_eq!(h.nrows(), p);
        Ok((g, h))
    }
}

/// Subgradient violation of the optimality system given the smooth gradient.
fn kkt_from_gradient(g: &DVector<f64>, beta: &DVector<f64>, lambda: f64) -> f64 {
    g.iter()
        .zip(beta.iter())
        .map(|(&gj, &bj)| if bj != 0.0 { (gj + lambda * bj.signum()).abs() } else { (gj.abs() - lambda).max(0.0) })
        .fold(0.0, f64::max)
}

/// Maximum violation of the subgradient optimality conditions at `beta`.
pub fn kkt_residual(problem: &PenalizedProblem<'_>, beta: &DVector<f64>) -> Result<f64> {
    let g = problem.smooth_gradient(beta)?;
    Ok(kkt_from_gradient(&g, beta, problem.lambda))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverSettings {
    /// Tolerance on the largest coefficient change between outer steps.
    pub tol: f64,
    pub max_iter: usize,
    /// Optimality tolerance; `None` means `1e-6 (1 + λ)`.
    pub kkt_tol: Option<f64>,
    pub max_inner_sweeps: usize,
}

impl Default for SolverSettings {
    fn default() -> Self {
        SolverSettings { tol: 1e-8, max_iter: 200, kkt_tol: None, max_inner_sweeps: 20_000 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LassoFit {
    pub beta_hat: DVector<f64>,
    pub lambda: f64,
    pub objective: f64,
    pub kkt_residual: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Objective after each accepted outer step, starting at the initial point.
    pub objective_trace: Vec<f64>,
}

impl LassoFit {
    pub fn active_set(&self) -> Vec<usize> {
        self.beta_hat.iter().enumerate().filter(|(_, b)| **b != 0.0).map(|(j, _)| j).collect()
    }
}

/// Cyclic coordinate descent on
/// `gᵀ(z − β) + ½ (z − β)ᵀ H (z − β) + λ‖z‖₁`, started at `z = β`.
fn solve_quadratic(
    g: &DVector<f64>,
    h: &DMatrix<f64>,
    beta: &DVector<f64>,
    lambda: f64,
    max_sweeps: usize,
) -> Result<DVector<f64>> {
    let p = beta.len();
    let mut z = beta.clone();
    // r = H (z − β)
    let mut r = DVector::<f64>::zeros(p);
    for _ in 0..max_sweeps {
        let mut max_delta: f64 = 0.0;
        let mut scale: f64 = 0.0;
        for j in 0..p {
            let a = h[(j, j)];
            let grad_j = g[j] + r[j];
            let new = if a > 0.0 {
                soft_threshold(a * z[j] - grad_j, lambda) / a
            } else if grad_j.abs() <= lambda {
                0.0
            } else {
                return Err(Error::Divergence);
            };
            let delta = new - z[j];
            if delta != 0.0 {
                for k in 0..p {
                    r[k] += delta * h[(k, j)];
                }
                z[j] = new;
                max_delta = max_delta.max(delta.abs());
            }
            scale = scale.max(z[j].abs());
        }
        if max_delta <= 1e-15 * (1.0 + scale) {
            break;
        }
    }
    Ok(z)
}

/// Minimize the penalized objective, starting from `init` (zero if `None`).
///
/// Non-convergence is reported through `converged = false`; hard failures
/// (divergence to −∞, an infimum attained only at infinity, overflow at the
/// starting point) are errors.
pub fn fit(problem: &PenalizedProblem<'_>, init: Option<&DVector<f64>>, settings: &SolverSettings) -> Result<LassoFit> {
    let p = problem.data.p();
    let lambda = problem.lambda;
    let kkt_tol = settings.kkt_tol.unwrap_or_else(|| problem.default_kkt_tol());
    let mut beta = match init {
        Some(b) => {
            if b.len() != p {
                return Err(Error::DimensionMismatch(format!(
                    "initial beta has length {} but design has {p} columns",
                    b.len()
                )));
            }
            b.clone()
        }
        None => DVector::zeros(p),
    };
    let mut f = problem.objective(&beta)?;
    let mut trace = vec![f];
    let mut last_change = 0.0;
    let mut iterations = 0;
    let mut kkt;
    let mut capped = false;

    loop {
        let (g, h) = problem.local_model(&beta)?;
        kkt = kkt_from_gradient(&g, &beta, lambda);
        if kkt <= kkt_tol && last_change <= settings.tol {
            break;
        }
        if iterations >= settings.max_iter {
            capped = true;
            break;
        }
        iterations += 1;

        let z = solve_quadratic(&g, &h, &beta, lambda, settings.max_inner_sweeps)?;
        let d = &z - &beta;
        if d.amax() == 0.0 {
            break;
        }
        let predicted = g.dot(&d) + lambda * (z.lp_norm(1) - beta.lp_norm(1));
        let resolution = 1e-10 * (1.0 + f.abs());

        let mut t = 1.0;
        let mut accepted = None;
        for _ in 0..MAX_BACKTRACKS {
            let cand = if t == 1.0 { z.clone() } else { &beta + &d * t };
            if cand.amax() > DIVERGENCE_BOUND {
                return Err(Error::Divergence);
            }
            if let Ok(fc) = problem.objective(&cand) {
                if fc.is_finite() {
                    if fc < -1e300 {
                        return Err(Error::Divergence);
                    }
                    let armijo = fc <= f + ARMIJO_SUFFICIENT * t * predicted;
                    // below double resolution the objective cannot rank the
                    // step; accept a full step that does not increase it
                    let flat = t == 1.0 && predicted.abs() <= resolution && fc <= f + 1e-12 * (1.0 + f.abs());
                    if armijo || flat {
                        accepted = Some((cand, fc));
                        break;
                    }
                }
            }
            t *= ARMIJO_SHRINK;
        }
        let Some((cand, fc)) = accepted else {
            break;
        };
        let step = &cand - &beta;
        last_change = step.amax();
        if problem.unbounded_along(&step) || problem.unbounded_along(&cand) {
            return Err(Error::Divergence);
        }
        beta = cand;
        f = fc;
        trace.push(f);
    }

    // still moving at the cap, outward along a direction of non-increase:
    // the infimum is approached at infinity (e.g. separated classes, λ = 0)
    if capped && problem.recedes_along(&beta) {
        return Err(Error::Divergence);
    }
    Ok(LassoFit {
        beta_hat: beta,
        lambda,
        objective: f,
        kkt_residual: kkt,
        iterations,
        converged: kkt <= kkt_tol && !capped,
        objective_trace: trace,
    })
}

/// Exhaustive grid minimizer of the objective, for `p <= 3`.
///
/// Evaluates the axis-aligned grid `{k·step : |k·step| <= radius}^p`, then
/// three times re-grids `[best − 2h, best + 2h]^p` with spacing `h/10`,
/// starting from `h = step`.
pub fn brute_force_lasso(problem: &PenalizedProblem<'_>, grid_radius: f64, grid_step: f64) -> Result<DVector<f64>> {
    let p = problem.data.p();
    if p > 3 {
        return Err(Error::InvalidParameter(format!("brute force supports p <= 3, got {p}")));
    }
    if !(grid_radius > 0.0 && grid_step > 0.0) {
        return Err(Error::InvalidParameter("grid radius and step must be positive".into()));
    }
    let half = (grid_radius / grid_step).floor() as i64;
    let coarse: Vec<f64> = (-half..=half).map(|k| k as f64 * grid_step).collect();
    let mut best = grid_argmin(problem, &vec![coarse; p])?;
    let mut h = grid_step;
    for _ in 0..3 {
        let fine = h / 10.0;
        let axes: Vec<Vec<f64>> = (0..p).map(|j| (-20..=20).map(|k| best[j] + k as f64 * fine).collect()).collect();
        best = grid_argmin(problem, &axes)?;
        h = fine;
    }
    Ok(best)
}

fn grid_argmin(problem: &PenalizedProblem<'_>, axes: &[Vec<f64>]) -> Result<DVector<f64>> {
    let p = axes.len();
    let data = problem.data;
    let n = data.n();
    let x = data.x();
    let y = data.y();
    let mut idx = vec![0usize; p];
    let mut point = DVector::zeros(p);
    let mut best = DVector::zeros(p);
    let mut best_val = f64::INFINITY;
    'outer: loop {
        for j in 0..p {
            point[j] = axes[j][idx[j]];
        }
        let mut val = problem.lambda * point.lp_norm(1);
        if let Some(c) = &problem.tilt {
            val += c.dot(&point);
        }
        let mut ok = true;
        for i in 0..n {
            let w = problem.weights.as_ref().map_or(1.0, |w| w[i]);
            if w == 0.0 {
                continue;
            }
            let mut eta = 0.0;
            for j in 0..p {
                eta += x[(i, j)] * point[j];
            }
            match problem.family.obs_terms(eta, y[i], i) {
                Ok(t) => val += w * t.loss,
                Err(_) => {
                    ok = false;
                    break;
                }
            }
        }
        if ok && val < best_val {
            best_val = val;
            best.copy_from(&point);
        }
        // odometer increment
        for j in 0..p {
            idx[j] += 1;
            if idx[j] < axes[j].len() {
                continue 'outer;
            }
            idx[j] = 0;
        }
        break;
    }
    if !best_val.is_finite() {
        return Err(Error::NonFinite { index: 0 });
    }
    Ok(best)
}

/// Log-spaced descending grid from `lambda_max` down to `min_ratio · lambda_max`.
pub fn default_lambda_grid(lambda_max: f64, points: usize, min_ratio: f64) -> Vec<f64> {
    if points <= 1 {
        return vec![lambda_max];
    }
    let (hi, lo) = (lambda_max.ln(), (lambda_max * min_ratio).ln());
    (0..points).map(|k| (hi + (lo - hi) * k as f64 / (points - 1) as f64).exp()).collect()
}

/// Outcome of K-fold cross-validation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CvResult {
    pub lambda: f64,
    /// Distinct grid values that survived, in descending order.
    pub lambdas: Vec<f64>,
    /// Mean held-out negative log-likelihood per observation, aligned with `lambdas`.
    pub scores: Vec<f64>,
}

/// Seeded random partition of `0..n` into `k` near-equal blocks.
pub fn make_folds(n: usize, k: usize, rng: &mut StreamRng) -> Vec<Vec<usize>> {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut folds = vec![Vec::new(); k];
    for (pos, &i) in perm.iter().enumerate() {
        folds[pos * k / n].push(i);
    }
    for f in &mut folds {
        f.sort_unstable();
    }
    folds
}

/// K-fold cross-validated choice of λ by held-out negative log-likelihood.
///
/// Training fits use `λ · n_train / n` so the penalty carries the same
/// per-observation weight as on the full data. A λ at which any fold fails
/// is dropped. Ties go to the larger λ.
pub fn cv_select_lambda(
    family: &FamilySpec,
    data: &Dataset,
    k: usize,
    lambda_grid: &[f64],
    rng: &mut StreamRng,
) -> Result<CvResult> {
    let n = data.n();
    if k < 2 {
        return Err(Error::InvalidParameter(format!("need at least 2 folds, got {k}")));
    }
    if n < k {
        return Err(Error::InvalidParameter(format!("{n} observations cannot fill {k} folds")));
    }
    if lambda_grid.is_empty() {
        return Err(Error::InvalidParameter("lambda grid is empty".into()));
    }
    if lambda_grid.iter().any(|l| !(*l > 0.0 && l.is_finite())) {
        return Err(Error::InvalidParameter("lambda grid must be strictly positive".into()));
    }
    if lambda_grid.windows(2).any(|w| w[1] > w[0]) {
        return Err(Error::InvalidParameter("lambda grid must be sorted descending".into()));
    }
    let mut grid: Vec<f64> = lambda_grid.to_vec();
    grid.dedup();

    let folds = make_folds(n, k, rng);
    let mut totals = vec![0.0; grid.len()];
    let mut alive = vec![true; grid.len()];
    let settings = SolverSettings::default();

    for held in &folds {
        let mut in_test = vec![false; n];
        for &i in held {
            in_test[i] = true;
        }
        let train_rows: Vec<usize> = (0..n).filter(|&i| !in_test[i]).collect();
        let train = data.subset(&train_rows)?;
        let test = data.subset(held)?;
        let scale = train_rows.len() as f64 / n as f64;
        let mut warm: Option<DVector<f64>> = None;
        for (g, &lambda) in grid.iter().enumerate() {
            if !alive[g] {
                continue;
            }
            let problem = PenalizedProblem::new(*family, &train, lambda * scale)?;
            let outcome = fit(&problem, warm.as_ref(), &settings).ok().filter(|f| f.converged).and_then(|f| {
                let s = neg_log_likelihood(family, &test, &f.beta_hat, None).ok()?;
                s.is_finite().then_some((f, s))
            });
            match outcome {
                Some((f, s)) => {
                    totals[g] += s;
                    warm = Some(f.beta_hat);
                }
                None => alive[g] = false,
            }
        }
    }

    let mut lambdas = Vec::new();
    let mut scores = Vec::new();
    for g in 0..grid.len() {
        if alive[g] {
            lambdas.push(grid[g]);
            scores.push(totals[g] / n as f64);
        }
    }
    if lambdas.is_empty() {
        return Err(Error::EmptyLambdaGrid);
    }
    let mut best = 0;
    for g in 1..lambdas.len() {
        if scores[g] < scores[best] {
            best = g;
        }
    }
    Ok(CvResult { lambda: lambdas[best], lambdas, scores })
}

/// How the working penalty λ is chosen for a data set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "policy", rename_all = "snake_case", deny_unknown_fields)]
pub enum LambdaPolicy {
    /// K-fold CV over a log grid from `min_ratio · λ_max` to `λ_max`.
    Cv {
        #[serde(default = "default_folds")]
        folds: usize,
        #[serde(default = "default_grid_points")]
        grid_points: usize,
        #[serde(default = "default_min_ratio")]
        min_ratio: f64,
        #[serde(default)]
        scale: CvScale,
    },
    /// λ used as given.
    Fixed { value: f64 },
    /// `λ_n = √n · λ₀`.
    Scaled { lambda0: f64 },
}

/// How a cross-validated penalty is carried over to the summed objective.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CvScale {
    /// The optimal penalty of the mean-loss objective `n⁻¹ NLL + λ‖β‖₁`,
    /// used as is in the summed objective (the glmnet convention).
    #[default]
    Mean,
    /// The optimal penalty of the summed objective itself.
    Sum,
}

fn default_folds() -> usize {
    10
}

fn default_grid_points() -> usize {
    50
}

fn default_min_ratio() -> f64 {
    1e-3
}

impl Default for LambdaPolicy {
    fn default() -> Self {
        LambdaPolicy::cv(default_folds())
    }
}

impl LambdaPolicy {
    pub fn cv(folds: usize) -> Self {
        Self::cv_scaled(folds, CvScale::default())
    }

    pub fn cv_scaled(folds: usize, scale: CvScale) -> Self {
        LambdaPolicy::Cv { folds, grid_points: default_grid_points(), min_ratio: default_min_ratio(), scale }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            LambdaPolicy::Cv { folds, grid_points, min_ratio, .. } => {
                if folds < 2 {
                    return Err(Error::InvalidParameter(format!("need at least 2 folds, got {folds}")));
                }
                if grid_points == 0 {
                    return Err(Error::EmptyLambdaGrid);
                }
                if !(min_ratio > 0.0 && min_ratio <= 1.0) {
                    return Err(Error::InvalidParameter(format!("grid ratio must lie in (0, 1], got {min_ratio}")));
                }
            }
            LambdaPolicy::Fixed { value } => {
                if !(value >= 0.0 && value.is_finite()) {
                    return Err(Error::InvalidParameter(format!("lambda must be non-negative, got {value}")));
                }
            }
            LambdaPolicy::Scaled { lambda0 } => {
                if !(lambda0 >= 0.0 && lambda0.is_finite()) {
                    return Err(Error::InvalidParameter(format!("lambda0 must be non-negative, got {lambda0}")));
                }
            }
        }
        Ok(())
    }

    /// Resolve λ on `data`; `rng` drives the fold assignment under CV.
    pub fn select(&self, family: &FamilySpec, data: &Dataset, rng: &mut StreamRng) -> Result<f64> {
        self.validate()?;
        match *self {
            LambdaPolicy::Cv { folds, grid_points, min_ratio, scale } => {
                let lmax = PenalizedProblem::new(*family, data, 0.0)?.lambda_max()?;
                if !(lmax > 0.0) {
                    // β = 0 is optimal for every λ > 0
                    return Ok(0.0);
                }
                let grid = default_lambda_grid(lmax, grid_points, min_ratio);
                let best = cv_select_lambda(family, data, folds, &grid, rng)?.lambda;
                Ok(match scale {
                    CvScale::Mean => best / data.n() as f64,
                    CvScale::Sum => best,
                })
            }
            LambdaPolicy::Fixed { value } => Ok(value),
            LambdaPolicy::Scaled { lambda0 } => Ok((data.n() as f64).sqrt() * lambda0),
        }
    }
}

impl std::fmt::Display for LambdaPolicy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match *self {
            LambdaPolicy::Cv { folds, scale: CvScale::Mean, .. } => write!(f, "cv:{folds}"),
            LambdaPolicy::Cv { folds, scale: CvScale::Sum, .. } => write!(f, "cv-sum:{folds}"),
            LambdaPolicy::Fixed { value } => write!(f, "fixed:{value}"),
            LambdaPolicy::Scaled { lambda0 } => write!(f, "scaled:{lambda0}"),
        }
    }
}

impl std::str::FromStr for LambdaPolicy {
    type Err = Error;

    /// `cv:<K>`, `cv-sum:<K>`, `fixed:<λ>` or `scaled:<λ₀>`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter(format!("unrecognized lambda policy `{s}`"));
        let (kind, arg) = s.trim().split_once(':').ok_or_else(bad)?;
        let policy = match kind {
            "cv" => LambdaPolicy::cv(arg.trim().parse().map_err(|_| bad())?),
            "cv-sum" => LambdaPolicy::cv_scaled(arg.trim().parse().map_err(|_| bad())?, CvScale::Sum),
            "fixed" => LambdaPolicy::Fixed { value: arg.trim().parse().map_err(|_| bad())? },
            "scaled" => LambdaPolicy::Scaled { lambda0: arg.trim().parse().map_err(|_| bad())? },
            _ => return Err(bad()),
        };
        policy.validate()?;
        Ok(policy)
    }
}
