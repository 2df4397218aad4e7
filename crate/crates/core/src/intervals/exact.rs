//! Exact posterior law of the number of new species.

use super::scaling::degenerate;
use crate::error::{Error, Result};
use crate::estimators::{CredibleInterval, IntervalMethod, Target};
use crate::numeric::{gen_factorial_row, gen_factorial_row_exact, log_pochhammer, LogNumber, RATIONAL_MAX_M};
use crate::pyp::PdParams;
use crate::sample::SampleSummary;

fn coefficient_row(m: u64, sigma: f64, gamma: f64) -> Result<Vec<LogNumber>> {
    let fast: Result<Vec<LogNumber>> = gen_factorial_row(m, sigma, gamma)?.into_iter().collect();
    match fast {
        Err(Error::PrecisionLoss { .. }) if m <= RATIONAL_MAX_M => gen_factorial_row_exact(m, sigma, gamma),
        Err(Error::PrecisionLoss { digits, .. }) => Err(Error::Infeasible(format!(
            "new-species pmf at m={m} lost {digits:.1} digits; the exact route stops at m={RATIONAL_MAX_M}"
        ))),
        other => other,
    }
}

/// `P[K_m = x | X_n]` for `x = 0..=m`:
/// `(θ/σ+k)_x C(m, x; σ, -n+σk) / (θ+n)_m`.
pub fn exact_pmf_new_species(p: &PdParams, s: &SampleSummary, m: u64) -> Result<Vec<f64>> {
    let (sigma, theta) = (p.sigma(), p.theta());
    let (n, k) = (s.n() as f64, s.k() as f64);
    let row = coefficient_row(m, sigma, -n + sigma * k)?;
    let log_den = log_pochhammer(theta + n, m as f64)?;
    let a = theta / sigma + k;
    row.iter()
        .enumerate()
        .map(|(x, c)| {
            if c.is_zero() {
                return Ok(0.0);
            }
            if c.sign() < 0 {
                return Err(Error::InvalidState(format!("negative mass at x={x}")));
            }
            Ok((log_pochhammer(a, x as f64)? + c.log_abs() - log_den).exp())
        })
        .collect()
}

/// Equal-tailed interval for the `(m; 0)`-discovery from the exact law of
/// `(θ + σk + σK_m)/(θ + n + m)`.
pub fn exact_interval_new_species_based(
    p: &PdParams,
    s: &SampleSummary,
    m: u64,
    l: u64,
    level: f64,
) -> Result<CredibleInterval> {
    if l != 0 {
        return Err(Error::Unsupported(format!("exact intervals exist only for l=0, got l={l}")));
    }
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::InvalidParams(format!("level={level} must lie in (0,1)")));
    }
    if m == 0 {
        return degenerate(p, s, &Target::Single(0), level, IntervalMethod::ExactPmf);
    }
    let pmf = exact_pmf_new_species(p, s, m)?;
    let a = 0.5 * (1.0 - level);
    let (lo, hi) = (discrete_quantile(&pmf, a), discrete_quantile(&pmf, 1.0 - a));
    let value = |x: usize| {
        (p.theta() + p.sigma() * (s.k() + x as u64) as f64) / (p.theta() + (s.n() + m) as f64)
    };
    Ok(CredibleInterval { lo: value(lo), hi: value(hi), level, method: IntervalMethod::ExactPmf, draws: 0 })
}

/// Smallest `x` with `P[K ≤ x] ≥ q`.
fn discrete_quantile(pmf: &[f64], q: f64) -> usize {
    let mut cdf = 0.0;
    for (x, &w) in pmf.iter().enumerate() {
        cdf += w;
        if cdf >= q {
            return x;
        }
    }
    pmf.len() - 1
}
