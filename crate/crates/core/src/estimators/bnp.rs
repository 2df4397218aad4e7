//! Posterior-mean estimators under the PD(σ, θ) prior.
//!
//! All Pochhammer ratios are written as differences of [`ln_gamma_ratio`]
//! calls whose two arguments are close, so extrapolation sizes of order
//! `1e5` and beyond cost nothing and keep full relative precision.

use super::{DiscoveryEstimate, Estimator, Target};
use crate::error::{Error, Result};
use crate::numeric::{ln_gamma_ratio as r, log_binomial, log_sum_exp};
use crate::pyp::PdParams;
use crate::sample::SampleSummary;

fn check_l(s: &SampleSummary, m: u64, l: u64) -> Result<()> {
    if l > s.n() + m {
        return Err(Error::OutOfRange(format!("l={l} exceeds n+m={}", s.n() + m)));
    }
    Ok(())
}

fn log_new_weight(p: &PdParams, s: &SampleSummary) -> f64 {
    (p.theta() + p.sigma() * s.k() as f64).ln()
}

/// Log-domain terms of the `(m; l)`-discovery for `l >= 1`.
///
/// With `x = θ + n`, the species already seen `i` times contribute
/// `C(m, l-i) m_i (i-σ)_{l+1-i} (x-i+σ)_{m-l+i} / (x)_{m+1}` and species
/// not yet seen contribute
/// `(1-σ)_l C(m, l) (θ+σk) (x+σ)_{m-l} / (x)_{m+1}`.
fn discovery_terms(p: &PdParams, s: &SampleSummary, m: u64, l: u64) -> Vec<f64> {
    let (sigma, x) = (p.sigma(), p.theta() + s.n() as f64);
    let (mf, lf) = (m as f64, l as f64);
    let mut terms = Vec::new();
    for (i, mi) in s.spectrum().iter().take_while(|&(i, _)| i <= l) {
        if l - i > m {
            continue;
        }
        let fi = i as f64;
        terms.push(
            log_binomial(m, l - i)
                + (mi as f64).ln()
                + r(lf + 1.0 - sigma, fi - sigma)
                + r(x + sigma + mf - lf, x + mf + 1.0)
                - r(x - fi + sigma, x),
        );
    }
    if l <= m {
        terms.push(
            r(lf + 1.0 - sigma, 1.0 - sigma)
                + log_binomial(m, l)
                + log_new_weight(p, s)
                + r(x + sigma + mf - lf, x + mf + 1.0)
                - r(x + sigma, x),
        );
    }
    terms
}

/// Value of the `(m; l)`-discovery estimator.
pub fn bnp_discovery_value(p: &PdParams, s: &SampleSummary, m: u64, l: u64) -> Result<f64> {
    check_l(s, m, l)?;
    let (sigma, x, mf) = (p.sigma(), p.theta() + s.n() as f64, m as f64);
    if m == 0 {
        // One-step predictive, kept in closed form so the masses add to one.
        let w = if l == 0 { p.theta() + sigma * s.k() as f64 } else { (l as f64 - sigma) * s.m(l) as f64 };
        return Ok(w / x);
    }
    if l == 0 {
        // (θ+σk)/(θ+n) · (θ+n+σ)_m / (θ+n+1)_m
        let log = log_new_weight(p, s) - x.ln() + r(x + sigma + mf, x + mf + 1.0) - r(x + sigma, x + 1.0);
        return Ok(log.exp());
    }
    Ok(log_sum_exp(&discovery_terms(p, s, m, l)).exp())
}

/// Posterior mean of the probability that draw `n+m+1` hits a species
/// seen exactly `l` times among the first `n+m` (`l = 0`: a new species).
pub fn bnp_discovery(p: &PdParams, s: &SampleSummary, m: u64, l: u64) -> Result<DiscoveryEstimate> {
    let v = bnp_discovery_value(p, s, m, l)?;
    Ok(DiscoveryEstimate::new(Estimator::Bnp, s.n(), m, Target::Single(l), v))
}

/// Expected number of new species in `m` further draws:
/// `(θ/σ + k) [(θ+n+σ)_m / (θ+n)_m - 1]`.
pub fn expected_new_species(p: &PdParams, s: &SampleSummary, m: u64) -> f64 {
    let (sigma, x, mf) = (p.sigma(), p.theta() + s.n() as f64, m as f64);
    let log_ratio = r(x + sigma + mf, x + mf) - r(x + sigma, x);
    (p.theta() / sigma + s.k() as f64) * log_ratio.exp_m1()
}

/// Expected number of species with frequency `l` in the enlarged sample
/// of size `n + m`.
pub fn expected_freq_count(p: &PdParams, s: &SampleSummary, m: u64, l: u64) -> Result<f64> {
    if l == 0 {
        return Err(Error::OutOfRange("frequency counts start at l=1".into()));
    }
    check_l(s, m, l)?;
    let (sigma, x) = (p.sigma(), p.theta() + s.n() as f64);
    let (mf, lf) = (m as f64, l as f64);
    let mut terms = Vec::new();
    for (i, mi) in s.spectrum().iter().take_while(|&(i, _)| i <= l) {
        if l - i > m {
            continue;
        }
        let fi = i as f64;
        terms.push(
            log_binomial(m, l - i) + (mi as f64).ln() + r(lf - sigma, fi - sigma) + r(x + sigma + mf - lf, x + mf)
                - r(x - fi + sigma, x),
        );
    }
    if l <= m {
        terms.push(
            r(lf - sigma, 1.0 - sigma) + log_binomial(m, l) + log_new_weight(p, s) + r(x + sigma + mf - lf, x + mf)
                - r(x + sigma, x),
        );
    }
    Ok(log_sum_exp(&terms).exp())
}

/// The same estimator through the expected counts:
/// `(θ + σk + σK̂)/(θ+n+m)` for `l = 0`, `(l-σ) M̂(l)/(θ+n+m)` otherwise.
pub fn bnp_discovery_via_identity(p: &PdParams, s: &SampleSummary, m: u64, l: u64) -> Result<DiscoveryEstimate> {
    check_l(s, m, l)?;
    let sigma = p.sigma();
    let denom = p.theta() + (s.n() + m) as f64;
    let v = if l == 0 {
        (p.theta() + sigma * s.k() as f64 + sigma * expected_new_species(p, s, m)) / denom
    } else {
        (l as f64 - sigma) * expected_freq_count(p, s, m, l)? / denom
    };
    Ok(DiscoveryEstimate::new(Estimator::BnpIdentity, s.n(), m, Target::Single(l), v))
}

/// Reject repeated frequencies in a target set.
pub(crate) fn check_distinct(ls: &[u64]) -> Result<()> {
    let mut sorted = ls.to_vec();
    sorted.sort_unstable();
    if ls.is_empty() {
        return Err(Error::InvalidTarget("empty frequency set".into()));
    }
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidTarget(format!("repeated frequency in {ls:?}")));
    }
    Ok(())
}

/// Probability that draw `n+m+1` hits a species whose frequency is in `ls`.
pub fn bnp_cumulative(p: &PdParams, s: &SampleSummary, m: u64, ls: &[u64]) -> Result<DiscoveryEstimate> {
    check_distinct(ls)?;
    let mut v = 0.0;
    for &l in ls {
        v += bnp_discovery_value(p, s, m, l)?;
    }
    Ok(DiscoveryEstimate::new(Estimator::Bnp, s.n(), m, Target::Set(ls.to_vec()), v))
}
