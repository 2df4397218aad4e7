//! Asymptotic estimators built from the limit variable.
//!
//! As `m → ∞`, `D_{n,m}(l) / m^{σ-1}` converges to `c'_l Z^{(n)}` with
//! `c'_l = σ(1-σ)_l / l!`. Replacing `m^{σ-1}` by the factor `r*(m, l)`
//! that makes the mean match the exact estimator gives a finite-`m`
//! correction with the same limit.

use super::zpost::mean_z;
use crate::error::{Error, Result};
use crate::estimators::{
    bnp_discovery_value, CredibleInterval, DiscoveryEstimate, Estimator, IntervalMethod, Target,
};
use crate::numeric::{ln_factorial, ln_gamma, ln_gamma_ratio as r, log_binomial, log_sum_exp};
use crate::pyp::PdParams;
use crate::sample::SampleSummary;

/// `c'_l = σ(1-σ)_l / l!`, the weight of frequency class `l` in the limit.
///
/// This is `c_{σ,l+1}·(l+1)`: the frequency-count coefficient shifted by
/// one, because discovering a class of size `l` picks up a factor `(l-σ)`.
pub fn discovery_coefficient(sigma: f64, l: u64) -> f64 {
    (sigma.ln() + r(l as f64 + 1.0 - sigma, 1.0 - sigma) - ln_factorial(l)).exp()
}

/// `Σ_{l ∈ target} c'_l`.
pub fn target_coefficient(sigma: f64, target: &Target) -> f64 {
    target.ls().iter().map(|&l| discovery_coefficient(sigma, l)).sum()
}

/// Scaling factor `r*(m, l)` such that `r*(m,l) c'_l E[Z^{(n)}]` equals the
/// exact `(m; l)`-discovery estimate.
///
/// Evaluated from the closed form
/// `r* = Γ(x+σ)Γ(x+m+σ-l)Γ(1-σ) l! / ((θ+σk) Γ(x+m+1))
///       · Σ_{i=0}^{l} C(m, l-i) m_i / (Γ(i-σ) Γ(x-i+σ))`
/// with `x = θ + n`, where the `i = 0` term stands for the unseen species:
/// it is `C(m, l)(θ+σk) / (Γ(1-σ) Γ(x+σ))`.
pub fn r_star(p: &PdParams, s: &SampleSummary, m: u64, l: u64) -> Result<f64> {
    if l > s.n() + m {
        return Err(Error::OutOfRange(format!("l={l} exceeds n+m={}", s.n() + m)));
    }
    let (sigma, x) = (p.sigma(), p.theta() + s.n() as f64);
    let (mf, lf) = (m as f64, l as f64);
    let log_new = (p.theta() + sigma * s.k() as f64).ln();
    let mut terms = Vec::new();
    if l <= m {
        terms.push(log_binomial(m, l) + log_new - ln_gamma(1.0 - sigma));
    }
    for (i, mi) in s.spectrum().iter().take_while(|&(i, _)| i <= l) {
        if l - i > m {
            continue;
        }
        let fi = i as f64;
        // 1/Γ(x-i+σ) relative to 1/Γ(x+σ)
        terms.push(log_binomial(m, l - i) + (mi as f64).ln() - ln_gamma(fi - sigma) - r(x - fi + sigma, x + sigma));
    }
    let log = r(x + mf + sigma - lf, x + mf + 1.0) + ln_gamma(1.0 - sigma) + ln_factorial(l) - log_new
        + log_sum_exp(&terms);
    Ok(log.exp())
}

/// Scaling factor for a set of frequencies: the `c'`-weighted average of
/// the single-frequency factors, so that
/// `r*(m, ls) Σ c'_{l_i} E[Z] = Σ D̂(m, l_i)`.
pub fn r_star_cum(p: &PdParams, s: &SampleSummary, m: u64, ls: &[u64]) -> Result<f64> {
    crate::estimators::check_distinct(ls)?;
    let mut num = 0.0;
    let mut den = 0.0;
    for &l in ls {
        let c = discovery_coefficient(p.sigma(), l);
        num += r_star(p, s, m, l)? * c;
        den += c;
    }
    Ok(num / den)
}

fn scaling_factor(p: &PdParams, s: &SampleSummary, m: u64, target: &Target, rstar: bool) -> Result<f64> {
    if rstar {
        match target {
            Target::Single(l) => r_star(p, s, m, *l),
            Target::Set(ls) => r_star_cum(p, s, m, ls),
        }
    } else {
        if m == 0 {
            return Err(Error::OutOfRange("the m^(σ-1) rate needs m > 0".into()));
        }
        for &l in &target.ls() {
            if l > s.n() + m {
                return Err(Error::OutOfRange(format!("l={l} exceeds n+m={}", s.n() + m)));
            }
        }
        Ok((m as f64).powf(p.sigma() - 1.0))
    }
}

pub(crate) fn scale_for(p: &PdParams, s: &SampleSummary, m: u64, target: &Target, method: IntervalMethod) -> Result<f64> {
    let rstar = match method {
        IntervalMethod::AsymptoticNaive => false,
        IntervalMethod::AsymptoticRstar => true,
        IntervalMethod::ExactPmf => return Err(Error::Unsupported("exact intervals are not scaled".into())),
    };
    Ok(scaling_factor(p, s, m, target, rstar)? * target_coefficient(p.sigma(), target))
}

/// `factor · Σ c'_l · E[Z^{(n)}]` with `factor = m^{σ-1}` (naive) or
/// `r*` (which reproduces the exact estimate).
pub fn asymptotic_estimate(
    p: &PdParams,
    s: &SampleSummary,
    m: u64,
    target: &Target,
    method: IntervalMethod,
) -> Result<DiscoveryEstimate> {
    let value = scale_for(p, s, m, target, method)? * mean_z(p, s.n(), s.k());
    let est = if method == IntervalMethod::AsymptoticNaive {
        Estimator::BnpAsymptoticNaive
    } else {
        Estimator::BnpAsymptoticRstar
    };
    Ok(DiscoveryEstimate::new(est, s.n(), m, target.clone(), value))
}

/// Zero-width interval at the exact estimate (used when `m = 0`).
pub(crate) fn degenerate(p: &PdParams, s: &SampleSummary, target: &Target, level: f64, method: IntervalMethod) -> Result<CredibleInterval> {
    let v: f64 = target.ls().iter().map(|&l| bnp_discovery_value(p, s, 0, l)).sum::<Result<f64>>()?;
    Ok(CredibleInterval { lo: v, hi: v, level, method, draws: 0 })
}
