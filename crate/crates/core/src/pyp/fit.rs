use serde::{Deserialize, Serialize};

use super::optim::{nelder_mead, NelderMeadConfig};
use super::{eppf_loglik, PdParams};
use crate::error::{Error, Result};
use crate::sample::SampleSummary;

/// Search settings for [`fit_empirical_bayes`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitConfig {
    pub sigma_min: f64,
    pub sigma_max: f64,
    pub sigma_step: f64,
    pub theta_min: f64,
    pub theta_max: f64,
    pub theta_points: usize,
    /// Keeps `θ + σ` strictly positive in the unconstrained coordinates.
    pub epsilon: f64,
    pub tolerance: f64,
    /// Fits with `σ̂` this close to 0 or 1 are flagged, as are fits with
    /// `θ̂` beyond `theta_max`.
    pub boundary_tol: f64,
}

impl Default for FitConfig {
    fn default() -> Self {
        Self {
            sigma_min: 0.01,
            sigma_max: 0.99,
            sigma_step: 0.02,
            theta_min: 1e-2,
            theta_max: 1e4,
            theta_points: 61,
            epsilon: 1e-6,
            tolerance: 1e-8,
            boundary_tol: 1e-3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub params: PdParams,
    pub loglik: f64,
    /// Set when the optimum sits against `σ → 0`, `σ → 1` or `θ → ∞`.
    pub boundary: bool,
    pub evaluations: usize,
}

// Logit of σ beyond which the search stops pushing towards the boundary.
const LOGIT_CAP: f64 = 30.0;

/// Maximize the partition likelihood over `(σ, θ)`: a coarse grid scan
/// followed by Nelder–Mead in `(logit σ, ln(θ + σ - ε))`.
pub fn fit_empirical_bayes(s: &SampleSummary, cfg: &FitConfig) -> Result<FitResult> {
    s.require_freqs()?;
    if s.n() < 2 {
        return Err(Error::InsufficientSample(format!("n={} (need at least 2 observations)", s.n())));
    }
    if !(cfg.sigma_min > 0.0 && cfg.sigma_max < 1.0 && cfg.sigma_min <= cfg.sigma_max && cfg.sigma_step > 0.0)
        || !(cfg.theta_min > 0.0 && cfg.theta_max >= cfg.theta_min && cfg.theta_points >= 1)
    {
        return Err(Error::InvalidGrid(format!("{cfg:?}")));
    }
    let mut evaluations = 0usize;
    let mut loglik = |sigma: f64, theta: f64| -> f64 {
        evaluations += 1;
        PdParams::new(sigma, theta)
            .and_then(|p| eppf_loglik(&p, s))
            .unwrap_or(f64::NEG_INFINITY)
    };

    let sigmas = sigma_grid(cfg);
    let thetas = log_grid(cfg.theta_min, cfg.theta_max, cfg.theta_points);
    let mut start = (sigmas[0], thetas[0], f64::NEG_INFINITY);
    for &sg in &sigmas {
        for &th in &thetas {
            let v = loglik(sg, th);
            if v > start.2 {
                start = (sg, th, v);
            }
        }
    }

    let eps = cfg.epsilon;
    let decode = |x: &[f64]| {
        let sigma = 1.0 / (1.0 + (-x[0]).exp());
        (sigma, x[1].exp() - sigma + eps)
    };
    let encode = |sigma: f64, theta: f64| [(sigma / (1.0 - sigma)).ln(), (theta + sigma - eps).ln()];
    let nm = NelderMeadConfig { f_tol: cfg.tolerance, x_tol: 1e-7, max_iter: 5000, step: 0.2 };
    let mut objective = |x: &[f64]| {
        if x[0].abs() > LOGIT_CAP {
            return f64::INFINITY;
        }
        let (sg, th) = decode(x);
        -loglik(sg, th)
    };
    let mut best = nelder_mead(&mut objective, &encode(start.0, start.1), &nm);
    // A restart from the optimum guards against a collapsed simplex.
    let again = nelder_mead(&mut objective, &best.x, &NelderMeadConfig { step: 0.05, ..nm });
    if again.f <= best.f {
        best = again;
    }
    let (sigma, theta) = decode(&best.x);
    let params = PdParams::new(sigma, theta)?;
    let boundary = sigma < cfg.boundary_tol || sigma > 1.0 - cfg.boundary_tol || theta > cfg.theta_max;
    Ok(FitResult { params, loglik: -best.f, boundary, evaluations })
}

fn sigma_grid(cfg: &FitConfig) -> Vec<f64> {
    let steps = ((cfg.sigma_max - cfg.sigma_min) / cfg.sigma_step + 1e-9).floor() as usize;
    (0..=steps).map(|i| cfg.sigma_min + i as f64 * cfg.sigma_step).collect()
}

pub(crate) fn log_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    if points == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..points).map(|i| (a + (b - a) * i as f64 / (points - 1) as f64).exp()).collect()
}
