use serde::{Deserialize, Serialize};

use super::scaling::{degenerate, scale_for};
use super::zpost::ZPosteriorSampler;
use crate::error::{Error, Result};
use crate::estimators::{CredibleInterval, IntervalMethod, Target};
use crate::pyp::PdParams;
use crate::rng::StreamPlan;
use crate::sample::SampleSummary;

/// Rate used to turn limit-variable quantiles into probabilities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scaling {
    /// `m^{σ-1}`.
    Naive,
    /// `r*(m, l)`.
    Rstar,
}

impl Scaling {
    pub fn method(&self) -> IntervalMethod {
        match self {
            Scaling::Naive => IntervalMethod::AsymptoticNaive,
            Scaling::Rstar => IntervalMethod::AsymptoticRstar,
        }
    }
}

/// Linear-interpolation quantile of sorted data (R's type 7).
pub fn quantile(sorted: &[f64], p: f64) -> f64 {
    assert!(!sorted.is_empty(), "quantile of empty data");
    let h = (sorted.len() - 1) as f64 * p.clamp(0.0, 1.0);
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Sorted draws of the posterior limit variable; one batch serves every
/// target and extrapolation size of a sample.
#[derive(Debug, Clone, PartialEq)]
pub struct ZDraws {
    sorted: Vec<f64>,
}

impl ZDraws {
    pub fn new(sampler: &ZPosteriorSampler, draws: usize, plan: &StreamPlan) -> Result<Self> {
        let mut sorted = sampler.sample_streams(draws, plan)?;
        sorted.sort_by(f64::total_cmp);
        Ok(Self { sorted })
    }

    pub fn from_draws(mut draws: Vec<f64>) -> Self {
        draws.sort_by(f64::total_cmp);
        Self { sorted: draws }
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    pub fn sorted(&self) -> &[f64] {
        &self.sorted
    }

    pub fn mean(&self) -> f64 {
        self.sorted.iter().sum::<f64>() / self.sorted.len() as f64
    }

    /// Equal-tailed `(α/2, 1-α/2)` quantiles.
    pub fn equal_tailed(&self, level: f64) -> (f64, f64) {
        let a = 0.5 * (1.0 - level);
        (quantile(&self.sorted, a), quantile(&self.sorted, 1.0 - a))
    }

    /// Interval for `target` after `m` further draws.
    pub fn interval(
        &self,
        p: &PdParams,
        s: &SampleSummary,
        m: u64,
        target: &Target,
        level: f64,
        scaling: Scaling,
    ) -> Result<CredibleInterval> {
        check_level(level)?;
        if m == 0 {
            return degenerate(p, s, target, level, scaling.method());
        }
        let scale = scale_for(p, s, m, target, scaling.method())?;
        let (q1, q2) = self.equal_tailed(level);
        Ok(CredibleInterval {
            lo: scale * q1,
            hi: scale * q2,
            level,
            method: scaling.method(),
            draws: self.sorted.len() as u64,
        })
    }
}

fn check_level(level: f64) -> Result<()> {
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::InvalidParams(format!("level={level} must lie in (0,1)")));
    }
    Ok(())
}

/// Smallest Monte Carlo size accepted for an interval.
pub const MIN_DRAWS: usize = 1000;

/// Equal-tailed asymptotic credible interval for the `(m; target)`
/// discovery. With `m = 0` the interval collapses onto the exact estimate.
#[allow(clippy::too_many_arguments)]
pub fn credible_interval(
    p: &PdParams,
    s: &SampleSummary,
    m: u64,
    target: &Target,
    level: f64,
    draws: usize,
    scaling: Scaling,
    plan: &StreamPlan,
) -> Result<CredibleInterval> {
    check_level(level)?;
    if m == 0 {
        return degenerate(p, s, target, level, scaling.method());
    }
    if draws < MIN_DRAWS {
        return Err(Error::InvalidParams(format!("draws={draws}; at least {MIN_DRAWS} are needed")));
    }
    let sampler = ZPosteriorSampler::new(*p, s.n(), s.k())?;
    ZDraws::new(&sampler, draws, plan)?.interval(p, s, m, target, level, scaling)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn type7_quantiles() {
        let x = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(quantile(&x, 0.0), 1.0);
        assert_eq!(quantile(&x, 1.0), 4.0);
        assert!((quantile(&x, 0.5) - 2.5).abs() < 1e-15);
        assert!((quantile(&x, 0.25) - 1.75).abs() < 1e-15);
        assert_eq!(quantile(&[7.0], 0.3), 7.0);
    }

    #[test]
    fn zero_extrapolation_is_degenerate() {
        let p = PdParams::new(0.5, 2.0).unwrap();
        let s = SampleSummary::from_spectrum([(1, 3), (2, 1)], false).unwrap();
        let ci = credible_interval(&p, &s, 0, &Target::Single(0), 0.95, 10, Scaling::Rstar, &StreamPlan::new(1)).unwrap();
        let want = (2.0 + 0.5 * 4.0) / (2.0 + 5.0);
        assert_eq!((ci.lo, ci.hi, ci.draws), (want, want, 0));
    }
}
