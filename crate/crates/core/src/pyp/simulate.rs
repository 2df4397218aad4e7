use rand::Rng;

use super::PdParams;
use crate::error::Result;
use crate::sample::{FrequencySpectrum, SampleSummary};

/// State of the sequential predictive scheme: one species index per
/// observation plus the species counts.
///
/// Keeping the observation list makes choosing an existing species with
/// probability `∝ n_i - σ` cheap: pick a past observation uniformly (which
/// selects species `i` with probability `∝ n_i`) and keep it with
/// probability `(n_i - σ)/n_i`.
#[derive(Debug, Clone)]
pub struct CrpState {
    params: PdParams,
    obs: Vec<u32>,
    counts: Vec<u64>,
}

impl CrpState {
    pub fn empty(params: PdParams) -> Self {
        Self { params, obs: Vec::new(), counts: Vec::new() }
    }

    /// Start from the per-species counts of an observed sample.
    pub fn from_freqs(params: PdParams, freqs: &[u64]) -> Self {
        let mut obs = Vec::with_capacity(freqs.iter().sum::<u64>() as usize);
        for (i, &f) in freqs.iter().enumerate() {
            obs.extend(std::iter::repeat_n(i as u32, f as usize));
        }
        Self { params, obs, counts: freqs.to_vec() }
    }

    pub fn n(&self) -> u64 {
        self.obs.len() as u64
    }

    pub fn k(&self) -> u64 {
        self.counts.len() as u64
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Draw one observation; returns `true` if it was a new species.
    pub fn step<R: Rng + ?Sized>(&mut self, rng: &mut R) -> bool {
        let p_new = self.params.new_species_prob(self.n(), self.k());
        if rng.random::<f64>() < p_new {
            self.obs.push(self.counts.len() as u32);
            self.counts.push(1);
            return true;
        }
        let sigma = self.params.sigma();
        loop {
            let i = self.obs[rng.random_range(0..self.obs.len())] as usize;
            let c = self.counts[i] as f64;
            if rng.random::<f64>() * c < c - sigma {
                self.obs.push(i as u32);
                self.counts[i] += 1;
                return false;
            }
        }
    }

    pub fn spectrum(&self) -> FrequencySpectrum {
        FrequencySpectrum::from_freqs(&self.counts)
    }

    pub fn summary(&self) -> Result<SampleSummary> {
        SampleSummary::from_species_freqs(self.counts.clone())
    }
}

/// Draw a sample of size `n` from the process.
pub fn simulate_sample<R: Rng + ?Sized>(params: &PdParams, n: u64, rng: &mut R) -> Result<SampleSummary> {
    let mut st = CrpState::empty(*params);
    for _ in 0..n {
        st.step(rng);
    }
    st.summary()
}

/// Outcome of extending an observed sample by `m` further draws.
#[derive(Debug, Clone, PartialEq)]
pub struct Continuation {
    pub k_new: u64,
    pub spectrum_after: FrequencySpectrum,
}

/// Continue the predictive chain `m` steps from the observed sample.
pub fn simulate_continuation<R: Rng + ?Sized>(
    params: &PdParams,
    s: &SampleSummary,
    m: u64,
    rng: &mut R,
) -> Result<Continuation> {
    let freqs = s.require_freqs()?;
    let mut st = CrpState::from_freqs(*params, freqs);
    let mut k_new = 0;
    for _ in 0..m {
        k_new += u64::from(st.step(rng));
    }
    Ok(Continuation { k_new, spectrum_after: st.spectrum() })
}
