use serde::{Deserialize, Serialize};

use super::{eppf_loglik, PdParams};
use crate::error::{Error, Result};
use crate::numeric::{ln_gamma, log_sum_exp};
use crate::sample::SampleSummary;

/// Gamma prior on `θ` in the shape/scale parameterization (mean
/// `shape·scale`). The default is shape 1, scale 100. Some texts call the
/// second Gamma parameter a rate; pass `scale = 1/rate` in that case.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GammaPrior {
    pub shape: f64,
    pub scale: f64,
}

impl Default for GammaPrior {
    fn default() -> Self {
        Self { shape: 1.0, scale: 100.0 }
    }
}

impl GammaPrior {
    pub fn log_density(&self, theta: f64) -> f64 {
        (self.shape - 1.0) * theta.ln() - theta / self.scale - self.shape * self.scale.ln() - ln_gamma(self.shape)
    }
}

/// Posterior of `(σ, θ)` evaluated on a rectangular grid; `σ` has a
/// uniform prior on `(0,1)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridPosterior {
    pub sigma_grid: Vec<f64>,
    pub theta_grid: Vec<f64>,
    /// `log_density[i][j]` at `(sigma_grid[i], theta_grid[j])`.
    pub log_density: Vec<Vec<f64>>,
    pub normalized: bool,
}

fn check_axis(name: &str, xs: &[f64], lo: f64, hi: f64) -> Result<()> {
    if xs.is_empty() {
        return Err(Error::InvalidGrid(format!("{name} grid is empty")));
    }
    if xs.iter().any(|&x| !(x > lo && x < hi)) {
        return Err(Error::InvalidGrid(format!("{name} grid leaves ({lo}, {hi})")));
    }
    if xs.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidGrid(format!("{name} grid is not strictly ascending")));
    }
    Ok(())
}

// Trapezoid weights; a single node gets weight 1.
fn trapezoid_weights(xs: &[f64]) -> Vec<f64> {
    let n = xs.len();
    if n == 1 {
        return vec![1.0];
    }
    (0..n)
        .map(|i| {
            let left = if i > 0 { xs[i] - xs[i - 1] } else { 0.0 };
            let right = if i + 1 < n { xs[i + 1] - xs[i] } else { 0.0 };
            0.5 * (left + right)
        })
        .collect()
}

/// Unnormalized log posterior on the grid, then normalized by trapezoidal
/// quadrature.
pub fn posterior_grid(
    s: &SampleSummary,
    prior: &GammaPrior,
    sigma_grid: &[f64],
    theta_grid: &[f64],
) -> Result<GridPosterior> {
    s.require_freqs()?;
    check_axis("sigma", sigma_grid, 0.0, 1.0)?;
    check_axis("theta", theta_grid, 0.0, f64::INFINITY)?;
    if !(prior.shape > 0.0 && prior.scale > 0.0) {
        return Err(Error::InvalidParams(format!("gamma prior {prior:?}")));
    }
    let log_density = sigma_grid
        .iter()
        .map(|&sg| {
            theta_grid
                .iter()
                .map(|&th| Ok(eppf_loglik(&PdParams::new(sg, th)?, s)? + prior.log_density(th)))
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let mut post = GridPosterior {
        sigma_grid: sigma_grid.to_vec(),
        theta_grid: theta_grid.to_vec(),
        log_density,
        normalized: false,
    };
    post.normalize();
    Ok(post)
}

impl GridPosterior {
    fn log_weights(&self) -> Vec<Vec<f64>> {
        let ws = trapezoid_weights(&self.sigma_grid);
        let wt = trapezoid_weights(&self.theta_grid);
        ws.iter().map(|a| wt.iter().map(|b| (a * b).ln()).collect()).collect()
    }

    /// Shift the log density so the quadrature masses sum to one.
    pub fn normalize(&mut self) {
        let lw = self.log_weights();
        let terms: Vec<f64> = self
            .log_density
            .iter()
            .zip(&lw)
            .flat_map(|(row, wrow)| row.iter().zip(wrow).map(|(d, w)| d + w))
            .collect();
        let log_z = log_sum_exp(&terms);
        for row in &mut self.log_density {
            for d in row.iter_mut() {
                *d -= log_z;
            }
        }
        self.normalized = true;
    }

    /// Quadrature mass of each cell.
    pub fn masses(&self) -> Vec<Vec<f64>> {
        let lw = self.log_weights();
        self.log_density
            .iter()
            .zip(&lw)
            .map(|(row, wrow)| row.iter().zip(wrow).map(|(d, w)| (d + w).exp()).collect())
            .collect()
    }

    /// Grid point with the largest density.
    pub fn mode(&self) -> (f64, f64) {
        let mut best = (0, 0, f64::NEG_INFINITY);
        for (i, row) in self.log_density.iter().enumerate() {
            for (j, &d) in row.iter().enumerate() {
                if d > best.2 {
                    best = (i, j, d);
                }
            }
        }
        (self.sigma_grid[best.0], self.theta_grid[best.1])
    }

    /// Mass on cells whose `σ` lies in `[lo, hi]`.
    pub fn sigma_mass(&self, lo: f64, hi: f64) -> f64 {
        self.masses()
            .iter()
            .zip(&self.sigma_grid)
            .filter(|(_, &s)| s >= lo && s <= hi)
            .map(|(row, _)| row.iter().sum::<f64>())
            .sum()
    }

    /// CSV with header `sigma,theta,log_density`.
    pub fn write_csv<W: std::io::Write>(&self, w: W) -> Result<()> {
        let mut wtr = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(w);
        wtr.write_record(["sigma", "theta", "log_density"])?;
        for (i, row) in self.log_density.iter().enumerate() {
            for (j, d) in row.iter().enumerate() {
                wtr.write_record([
                    self.sigma_grid[i].to_string(),
                    self.theta_grid[j].to_string(),
                    d.to_string(),
                ])?;
            }
        }
        wtr.flush()?;
        Ok(())
    }
}
