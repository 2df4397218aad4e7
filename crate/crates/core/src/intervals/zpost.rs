//! The limit variable `Z^{(n)}_{σ,θ,k} = B · Z_{σ,(θ+n)/σ}`.

use rand::Rng;
use rand_distr::{Distribution, Gamma};

use super::stable::{TiltedStable, TiltedStats};
use crate::error::{Error, Result};
use crate::numeric::ln_gamma_ratio;
use crate::pyp::PdParams;
use crate::rng::StreamPlan;

fn gamma(shape: f64) -> Result<Gamma<f64>> {
    Gamma::new(shape, 1.0).map_err(|e| Error::InvalidState(format!("gamma shape {shape}: {e}")))
}

/// Polynomially tilted stable `Z_{σ,q}`: draw `G ~ Gamma(q, 1)`, take the
/// tilted stable `L` with tilt `G^{1/σ}`, return `L^{-σ}`.
pub fn sample_z<R: Rng + ?Sized>(sigma: f64, q: f64, rng: &mut R) -> Result<f64> {
    if !(q > 0.0) {
        return Err(Error::InvalidParams(format!("q={q} must be positive")));
    }
    let ts = TiltedStable::new(sigma)?;
    let g = gamma(q)?.sample(rng);
    draw_z(&ts, g, rng, &mut TiltedStats::default())
}

// With t = G = u^σ the tilted sampler returns W = u·L, so
// Z = L^{-σ} = t · W^{-σ}.
fn draw_z<R: Rng + ?Sized>(ts: &TiltedStable, t: f64, rng: &mut R, stats: &mut TiltedStats) -> Result<f64> {
    let w = ts.sample_scaled(t, rng, stats)?;
    Ok(t * (-ts.sigma() * w.ln()).exp())
}

/// `E[Z^{(n)}] = (k + θ/σ) Γ(θ+n) / Γ(θ+n+σ)`.
pub fn mean_z(params: &PdParams, n: u64, k: u64) -> f64 {
    let (sigma, theta) = (params.sigma(), params.theta());
    let x = theta + n as f64;
    (k as f64 + theta / sigma) * ln_gamma_ratio(x, x + sigma).exp()
}

/// Sampler for the posterior limit variable given `n` observations with
/// `k` distinct species.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZPosteriorSampler {
    params: PdParams,
    n: u64,
    k: u64,
}

impl ZPosteriorSampler {
    pub fn new(params: PdParams, n: u64, k: u64) -> Result<Self> {
        let s = Self { params, n, k };
        if k == 0 || k > n {
            return Err(Error::InvalidState(format!("need 1 <= k <= n, got n={n}, k={k}")));
        }
        let (a, b) = s.beta_params();
        if !(a > 0.0 && b > 0.0) {
            return Err(Error::InvalidState(format!("beta parameters ({a}, {b}) must be positive")));
        }
        Ok(s)
    }

    /// `(k + θ/σ, n/σ - k)`.
    pub fn beta_params(&self) -> (f64, f64) {
        let sigma = self.params.sigma();
        (self.k as f64 + self.params.theta() / sigma, self.n as f64 / sigma - self.k as f64)
    }

    /// Shape of the tilted factor, `(θ + n)/σ`.
    pub fn q(&self) -> f64 {
        (self.params.theta() + self.n as f64) / self.params.sigma()
    }

    pub fn mean(&self) -> f64 {
        mean_z(&self.params, self.n, self.k)
    }

    /// Draw `count` values on one stream. The Beta factor is built from two
    /// Gamma draws, which stays accurate for large unbalanced parameters.
    pub fn sample_with_stats<R: Rng + ?Sized>(
        &self,
        count: usize,
        rng: &mut R,
        stats: &mut TiltedStats,
    ) -> Result<Vec<f64>> {
        let ts = TiltedStable::new(self.params.sigma())?;
        let (a, b) = self.beta_params();
        let (ga, gb, gq) = (gamma(a)?, gamma(b)?, gamma(self.q())?);
        (0..count)
            .map(|_| {
                let x = ga.sample(rng);
                let y = gb.sample(rng);
                let beta = x / (x + y);
                let t = gq.sample(rng);
                Ok(beta * draw_z(&ts, t, rng, stats)?)
            })
            .collect()
    }

    pub fn sample<R: Rng + ?Sized>(&self, count: usize, rng: &mut R) -> Result<Vec<f64>> {
        self.sample_with_stats(count, rng, &mut TiltedStats::default())
    }

    /// Draw `count` values split across the streams of `plan`.
    pub fn sample_streams(&self, count: usize, plan: &StreamPlan) -> Result<Vec<f64>> {
        plan.collect(count, |rng, c| self.sample(c, rng))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mean_near_sigma_one() {
        // As σ → 1 the Gamma ratio tends to 1/(θ+n).
        let p = PdParams::new(1.0 - 1e-9, 2.0).unwrap();
        let m = mean_z(&p, 10, 4);
        assert!((m - (4.0 + 2.0) / 12.0).abs() < 1e-6);
    }

    #[test]
    fn all_distinct_is_valid() {
        let p = PdParams::new(0.7, 1.0).unwrap();
        assert!(ZPosteriorSampler::new(p, 50, 50).is_ok());
        assert!(ZPosteriorSampler::new(p, 50, 51).is_err());
    }
}
