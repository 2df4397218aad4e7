use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Discount `σ ∈ (0,1)` and concentration `θ > -σ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PdParams {
    sigma: f64,
    theta: f64,
}

impl PdParams {
    pub fn new(sigma: f64, theta: f64) -> Result<Self> {
        if !(sigma > 0.0 && sigma < 1.0) {
            return Err(Error::InvalidParams(format!("sigma={sigma} must lie in (0,1)")));
        }
        if !(theta > -sigma) || !theta.is_finite() {
            return Err(Error::InvalidParams(format!("theta={theta} must exceed -sigma={}", -sigma)));
        }
        Ok(Self { sigma, theta })
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Probability that the next draw is a new species given `n`
    /// observations and `k` distinct species.
    pub fn new_species_prob(&self, n: u64, k: u64) -> f64 {
        if n == 0 {
            return 1.0;
        }
        (self.theta + self.sigma * k as f64) / (self.theta + n as f64)
    }
}
