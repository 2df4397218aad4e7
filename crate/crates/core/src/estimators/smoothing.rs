//! Smoothed frequency counts and the Good–Turing estimators built on them.

use serde::{Deserialize, Serialize};

use super::{DiscoveryEstimate, Estimator, Target};
use crate::error::{Error, Result};
use crate::numeric::ln_factorial;
use crate::sample::SampleSummary;

/// How the raw counts `m_l` are replaced by smooth `m'_l`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum SmoothingRule {
    /// `m'_l = σ(1-σ)_{l-1}/l! · k`.
    Pd { sigma: f64 },
    /// `m'_l = k e^{-λ} λ^{τ+l-1}/(τ+l-1)!`; `λ = None` means `n/k`.
    Poisson { tau: u32, lambda: Option<f64> },
    /// Log-linear fit to the averaged counts (simple Good–Turing).
    Sgt,
}

impl SmoothingRule {
    pub fn poisson_default() -> Self {
        SmoothingRule::Poisson { tau: 1, lambda: None }
    }

    fn estimator(&self) -> Estimator {
        match self {
            SmoothingRule::Pd { .. } => Estimator::PdSmooth,
            SmoothingRule::Poisson { .. } => Estimator::PoissonSmooth,
            SmoothingRule::Sgt => Estimator::Sgt,
        }
    }
}

/// Real-valued smoothed counts `m'_l`, defined for every `l >= 1`.
#[derive(Debug, Clone, PartialEq)]
pub enum SmoothedSpectrum {
    Pd { sigma: f64, k: f64 },
    Poisson { tau: u32, lambda: f64, k: f64 },
    /// `m'_l = exp(intercept + slope · ln l)`.
    Sgt { intercept: f64, slope: f64 },
}

impl SmoothedSpectrum {
    pub fn get(&self, l: u64) -> f64 {
        if l == 0 {
            return 0.0;
        }
        match *self {
            SmoothedSpectrum::Pd { sigma, k } => pd_coefficients(sigma, l)[l as usize - 1] * k,
            SmoothedSpectrum::Poisson { tau, lambda, k } => {
                let j = u64::from(tau) + l - 1;
                (k.ln() - lambda + j as f64 * lambda.ln() - ln_factorial(j)).exp()
            }
            SmoothedSpectrum::Sgt { intercept, slope } => (intercept + slope * (l as f64).ln()).exp(),
        }
    }
}

/// `c_{σ,l} = σ(1-σ)_{l-1}/l!` for `l = 1..=lmax`, by the recursion
/// `c_{σ,l+1} = c_{σ,l} (l-σ)/(l+1)`.
pub fn pd_coefficients(sigma: f64, lmax: u64) -> Vec<f64> {
    let mut out = Vec::with_capacity(lmax as usize);
    let mut c = sigma;
    for l in 1..=lmax {
        out.push(c);
        c *= (l as f64 - sigma) / (l + 1) as f64;
    }
    out
}

pub fn smooth_spectrum(rule: &SmoothingRule, s: &SampleSummary) -> Result<SmoothedSpectrum> {
    let k = s.k() as f64;
    match *rule {
        SmoothingRule::Pd { sigma } => {
            if !(sigma > 0.0 && sigma < 1.0) {
                return Err(Error::InvalidParams(format!("sigma={sigma} must lie in (0,1)")));
            }
            Ok(SmoothedSpectrum::Pd { sigma, k })
        }
        SmoothingRule::Poisson { tau, lambda } => {
            let lambda = lambda.unwrap_or(s.n() as f64 / k);
            if !(lambda > 0.0 && lambda.is_finite()) {
                return Err(Error::InvalidParams(format!("lambda={lambda} must be positive")));
            }
            Ok(SmoothedSpectrum::Poisson { tau, lambda, k })
        }
        SmoothingRule::Sgt => {
            let (intercept, slope) = sgt_line(s)?;
            Ok(SmoothedSpectrum::Sgt { intercept, slope })
        }
    }
}

// Least-squares line through (ln r, ln Z_r), where Z_r averages m_r over
// the gap to the neighbouring populated frequencies.
fn sgt_line(s: &SampleSummary) -> Result<(f64, f64)> {
    let rs: Vec<(u64, u64)> = s.spectrum().iter().collect();
    if rs.len() < 2 {
        return Err(Error::InsufficientSpectrum(format!("{} populated frequencies, need 2", rs.len())));
    }
    let pts: Vec<(f64, f64)> = rs
        .iter()
        .enumerate()
        .map(|(j, &(r, nr))| {
            let q = if j == 0 { 0.0 } else { rs[j - 1].0 as f64 };
            let t = if j + 1 < rs.len() { rs[j + 1].0 as f64 } else { 2.0 * r as f64 - q };
            ((r as f64).ln(), (nr as f64 / (0.5 * (t - q))).ln())
        })
        .collect();
    let len = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / len;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / len;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let slope = sxy / sxx;
    Ok((my - slope * mx, slope))
}

/// Simple Good–Turing adjusted counts `r*` for every populated `r`, and
/// the renormalizing total `Σ m_r r*_r`.
fn sgt_adjusted(s: &SampleSummary, line: &SmoothedSpectrum) -> (Vec<(u64, f64)>, f64) {
    let mut use_line = false;
    let mut out = Vec::new();
    for (r, nr) in s.spectrum().iter() {
        let rf = r as f64;
        let y = (rf + 1.0) * line.get(r + 1) / line.get(r);
        let next = s.m(r + 1) as f64;
        if !use_line {
            if next == 0.0 {
                use_line = true;
            } else {
                let nr = nr as f64;
                let x = (rf + 1.0) * next / nr;
                let sd = ((rf + 1.0).powi(2) * next / (nr * nr) * (1.0 + next / nr)).sqrt();
                if (x - y).abs() <= 1.96 * sd {
                    use_line = true;
                } else {
                    out.push((r, x));
                    continue;
                }
            }
        }
        out.push((r, y));
    }
    let total = out.iter().map(|&(r, rs)| s.m(r) as f64 * rs).sum();
    (out, total)
}

/// `(l+1) m'_{l+1} / n` for the PD and Poisson rules; for the simple
/// Good–Turing rule the unseen mass is `m_1/n` and the seen classes share
/// the rest in proportion to `m_l r*_l`.
pub fn smoothed_good_turing(rule: &SmoothingRule, s: &SampleSummary, l: u64) -> Result<DiscoveryEstimate> {
    if l > s.n() {
        return Err(Error::OutOfRange(format!("l={l} exceeds n={}", s.n())));
    }
    let smooth = smooth_spectrum(rule, s)?;
    let n = s.n() as f64;
    let v = match rule {
        SmoothingRule::Sgt => {
            let p0 = s.m(1) as f64 / n;
            if l == 0 {
                p0
            } else if s.m(l) == 0 {
                0.0
            } else {
                let (adj, total) = sgt_adjusted(s, &smooth);
                let rstar = adj.iter().find(|&&(r, _)| r == l).map(|&(_, v)| v).unwrap_or(0.0);
                (1.0 - p0) * s.m(l) as f64 * rstar / total
            }
        }
        _ => (l + 1) as f64 * smooth.get(l + 1) / n,
    };
    Ok(DiscoveryEstimate::new(rule.estimator(), s.n(), 0, Target::Single(l), v))
}
