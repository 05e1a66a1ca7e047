//! Lasso estimation for generalized linear models with bootstrap inference.
//!
//! The crate fits ℓ1-penalized GLMs (linear, logistic, probit, Poisson,
//! gamma) by proximal Newton and approximates the sampling distribution of
//! the estimator with two resampling schemes: the perturbation bootstrap,
//! which reweights the likelihood with random multipliers and a linear
//! re-centering tilt, and the Pearson residual bootstrap, which resamples
//! standardized residuals into a working linear lasso. Both are centered at
//! a thresholded lasso estimate by default.

pub mod bootstrap;
pub mod error;
pub mod family;
pub mod inference;
pub mod io;
mod probit;
pub mod rng;
pub mod simulation;
pub mod solver;

pub use error::{Error, Result};
pub use family::{make_family, Dataset, FamilyId, FamilySpec};
pub use solver::{fit, CvScale, LambdaPolicy, LassoFit, PenalizedProblem, SolverSettings};
