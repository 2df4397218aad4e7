use super::PdParams;
use crate::error::Result;
use crate::numeric::log_pochhammer;
use crate::sample::SampleSummary;

/// Log of the exchangeable partition probability of the observed species
/// counts:
/// `Π_{i=1}^{k-1}(θ+iσ) / (θ+1)_{n-1} · Π_j (1-σ)_{n_j-1}`.
///
/// The leading `θ` of `Π_{i=0}^{k-1}(θ+iσ)` cancels against `(θ)_n`, which
/// keeps the expression finite on all of `θ > -σ`.
pub fn eppf_loglik(params: &PdParams, s: &SampleSummary) -> Result<f64> {
    s.require_freqs()?;
    let (sigma, theta) = (params.sigma(), params.theta());
    let (n, k) = (s.n() as f64, s.k() as f64);
    let mut ll = (k - 1.0) * sigma.ln() + log_pochhammer(theta / sigma + 1.0, k - 1.0)?;
    ll -= log_pochhammer(theta + 1.0, n - 1.0)?;
    for (l, m) in s.spectrum().iter() {
        ll += m as f64 * log_pochhammer(1.0 - sigma, (l - 1) as f64)?;
    }
    Ok(ll)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: f64, t: f64) -> PdParams {
        PdParams::new(s, t).unwrap()
    }

    #[test]
    fn closed_forms() {
        let one = SampleSummary::from_spectrum([(1, 1)], true).unwrap();
        assert!(eppf_loglik(&p(0.3, 2.0), &one).unwrap().abs() < 1e-15);
        let twice = SampleSummary::from_spectrum([(2, 1)], true).unwrap();
        let (s, t) = (0.3f64, 2.0f64);
        let want = ((1.0 - s) / (t + 1.0)).ln();
        assert!((eppf_loglik(&p(s, t), &twice).unwrap() - want).abs() < 1e-14);
        let pair = SampleSummary::from_spectrum([(1, 2)], true).unwrap();
        let want = ((t + s) / (t + 1.0)).ln();
        assert!((eppf_loglik(&p(s, t), &pair).unwrap() - want).abs() < 1e-14);
    }

    #[test]
    fn needs_freqs() {
        let s = SampleSummary::from_spectrum([(1, 2)], false).unwrap();
        assert!(eppf_loglik(&p(0.5, 1.0), &s).is_err());
    }

    #[test]
    fn negative_theta_is_finite() {
        let s = SampleSummary::from_spectrum([(1, 3), (4, 2)], true).unwrap();
        assert!(eppf_loglik(&p(0.5, -0.4999), &s).unwrap().is_finite());
    }
}
