//! Tail-stable standard normal quantities used by the probit family.
//!
//! Inside `|u| <= 8` everything is computed from `erfc`, which keeps full
//! relative precision for both tails. Beyond that the smaller tail mass is
//! obtained from the Mills ratio `R(x) = (1 - Φ(x)) / φ(x)`, evaluated by its
//! continued fraction, so logs and hazard ratios stay finite long after
//! `φ` itself underflows.

use statrs::function::erf::erfc;

const SWITCH: f64 = 8.0;
const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;
const CF_TERMS: usize = 80;

/// Normal quantities at a point `u`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct NormalParts {
    /// φ(u)
    pub pdf: f64,
    /// Φ(u)
    pub cdf: f64,
    /// 1 − Φ(u)
    pub sf: f64,
    pub log_cdf: f64,
    pub log_sf: f64,
    /// φ(u)/Φ(u)
    pub r: f64,
    /// φ(u)/(1 − Φ(u))
    pub rbar: f64,
}

/// Mills ratio for `x > 0`, by backward evaluation of Laplace's continued
/// fraction `1/(x + 1/(x + 2/(x + 3/(x + ...))))`.
fn mills_ratio(x: f64) -> f64 {
    let mut t = x;
    for k in (1..=CF_TERMS).rev() {
        t = x + k as f64 / t;
    }
    1.0 / t
}

pub(crate) fn normal_parts(u: f64) -> NormalParts {
    let log_pdf = -0.5 * u * u - LN_SQRT_2PI;
    let pdf = log_pdf.exp();
    if u.abs() <= SWITCH {
        let cdf = 0.5 * erfc(-u / std::f64::consts::SQRT_2);
        let sf = 0.5 * erfc(u / std::f64::consts::SQRT_2);
        NormalParts { pdf, cdf, sf, log_cdf: cdf.ln(), log_sf: sf.ln(), r: pdf / cdf, rbar: pdf / sf }
    } else if u > 0.0 {
        let mills = mills_ratio(u);
        let sf = pdf * mills;
        let cdf = 1.0 - sf;
        NormalParts {
            pdf,
            cdf,
            sf,
            log_cdf: (-sf).ln_1p(),
            log_sf: log_pdf + mills.ln(),
            r: pdf / cdf,
            rbar: 1.0 / mills,
        }
    } else {
        let mills = mills_ratio(-u);
        let cdf = pdf * mills;
        let sf = 1.0 - cdf;
        NormalParts {
            pdf,
            cdf,
            sf,
            log_cdf: log_pdf + mills.ln(),
            log_sf: (-cdf).ln_1p(),
            r: 1.0 / mills,
            rbar: pdf / sf,
        }
    }
}
