//! Positive stable and exponentially tilted stable variates.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::{Distribution, Exp1, Open01};

use crate::error::{Error, Result};

/// Proposals allowed for a single tilted-stable draw before giving up.
pub const PROPOSAL_CAP: u64 = 1_000_000_000;

const BATCH: usize = 16;

/// Positive σ-stable law with Laplace transform `exp(-t^σ)`, sampled with
/// Kanter's representation
/// `X = sin(σπU) sin((1-σ)πU)^{(1-σ)/σ} / (sin(πU)^{1/σ} E^{(1-σ)/σ})`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PositiveStable {
    sigma: f64,
    ratio: f64,
    inv_sigma: f64,
}

impl PositiveStable {
    pub fn new(sigma: f64) -> Result<Self> {
        if !(sigma > 0.0 && sigma < 1.0) {
            return Err(Error::InvalidParams(format!("stable index {sigma} must lie in (0,1)")));
        }
        Ok(Self { sigma, ratio: (1.0 - sigma) / sigma, inv_sigma: 1.0 / sigma })
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    // sin(u) is rebuilt from the other two angles: two sin_cos calls are
    // cheaper than three sin calls, and near u = π the cancellation is no
    // worse than the rounding already present in u.
    #[inline]
    fn kanter(&self, c: f64, u: f64, e: f64) -> f64 {
        let (sa, ca) = (self.sigma * u).sin_cos();
        let (sb, cb) = ((1.0 - self.sigma) * u).sin_cos();
        let su = sa * cb + ca * sb;
        c * sa * (self.ratio * (sb / e).ln() - self.inv_sigma * su.ln()).exp()
    }

    #[inline]
    fn inputs<R: Rng + ?Sized>(rng: &mut R) -> (f64, f64) {
        let o: f64 = Open01.sample(rng);
        (PI * o, Exp1.sample(rng))
    }

    /// `c · X` for a batch of draws. The random inputs are drawn first so
    /// that the transcendental evaluations run as one independent stream.
    fn fill_scaled<R: Rng + ?Sized>(&self, c: f64, rng: &mut R, out: &mut [f64; BATCH]) {
        let mut e = [0.0f64; BATCH];
        for (u, e) in out.iter_mut().zip(e.iter_mut()) {
            (*u, *e) = Self::inputs(rng);
        }
        for (u, e) in out.iter_mut().zip(e.iter()) {
            *u = self.kanter(c, *u, *e);
        }
    }
}

impl Distribution<f64> for PositiveStable {
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let (u, e) = Self::inputs(rng);
        self.kanter(1.0, u, e)
    }
}

/// One positive stable draw.
pub fn sample_positive_stable<R: Rng + ?Sized>(sigma: f64, rng: &mut R) -> Result<f64> {
    Ok(PositiveStable::new(sigma)?.sample(rng))
}

/// Proposal and acceptance counts of the blockwise rejection sampler.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct TiltedStats {
    pub blocks: u64,
    pub proposals: u64,
}

impl TiltedStats {
    /// Fraction of proposals accepted.
    pub fn acceptance(&self) -> f64 {
        self.blocks as f64 / self.proposals as f64
    }
}

/// Exponentially tilted stable law, density `∝ e^{-ux} f_σ(x)`.
///
/// The variate is the sum of `r = max(1, round(u^σ))` independent blocks,
/// each with density `∝ e^{-ux} f_σ(x r^{1/σ})`. A block proposes a stable
/// draw scaled by `r^{-1/σ}` and accepts it with probability `e^{-ux}`;
/// the acceptance rate is `exp(-u^σ/r)`, roughly `e^{-1}` whatever `u`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TiltedStable {
    stable: PositiveStable,
}

impl TiltedStable {
    pub fn new(sigma: f64) -> Result<Self> {
        Ok(Self { stable: PositiveStable::new(sigma)? })
    }

    pub fn sigma(&self) -> f64 {
        self.stable.sigma
    }

    /// Draw `u·L` where `L` has tilt `u = t^{1/σ}`.
    ///
    /// Parameterizing by `t = u^σ` keeps everything finite when `u` itself
    /// would overflow (small σ, large `t`).
    pub fn sample_scaled<R: Rng + ?Sized>(&self, t: f64, rng: &mut R, stats: &mut TiltedStats) -> Result<f64> {
        let r = t.round().max(1.0);
        // Block proposals in the scaled variable: (t/r)^{1/σ} · S.
        let scale = (t / r).powf(self.stable.inv_sigma);
        let blocks = r as u64;
        let mut sum = 0.0;
        let mut proposals = 0u64;
        let mut accepted = 0u64;
        // Proposals are i.i.d. and each block takes the first accepted one,
        // so they can be generated in branch-free batches and consumed in
        // order; whatever is left of the last batch is simply dropped.
        let mut batch = [0.0f64; BATCH];
        while accepted < blocks {
            if proposals >= PROPOSAL_CAP {
                stats.proposals += proposals;
                return Err(Error::SamplerStall(proposals));
            }
            self.stable.fill_scaled(scale, rng, &mut batch);
            for slot in batch.iter_mut() {
                let y = *slot;
                let e: f64 = Exp1.sample(rng);
                *slot = if e >= y { y } else { -1.0 };
            }
            for &y in &batch {
                proposals += 1;
                if y >= 0.0 {
                    sum += y;
                    accepted += 1;
                    if accepted == blocks {
                        break;
                    }
                }
            }
        }
        stats.blocks += blocks;
        stats.proposals += proposals;
        Ok(sum)
    }

    /// Draw `L` with tilt `u >= 0`.
    pub fn sample_tilted<R: Rng + ?Sized>(&self, u: f64, rng: &mut R, stats: &mut TiltedStats) -> Result<f64> {
        if !(u >= 0.0) || !u.is_finite() {
            return Err(Error::InvalidParams(format!("tilt u={u} must be finite and non-negative")));
        }
        if u == 0.0 {
            stats.blocks += 1;
            stats.proposals += 1;
            return Ok(self.stable.sample(rng));
        }
        let t = u.powf(self.stable.sigma);
        Ok(self.sample_scaled(t, rng, stats)? / u)
    }
}

/// One exponentially tilted stable draw.
pub fn sample_tilted_stable<R: Rng + ?Sized>(sigma: f64, u: f64, rng: &mut R) -> Result<f64> {
    TiltedStable::new(sigma)?.sample_tilted(u, rng, &mut TiltedStats::default())
}
