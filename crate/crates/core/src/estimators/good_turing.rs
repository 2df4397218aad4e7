use super::{DiscoveryEstimate, Estimator, Target};
use crate::error::{Error, Result};
use crate::sample::SampleSummary;

/// `(l+1) m_{l+1} / n`.
pub fn good_turing(s: &SampleSummary, l: u64) -> Result<DiscoveryEstimate> {
    if l > s.n() {
        return Err(Error::OutOfRange(format!("l={l} exceeds n={}", s.n())));
    }
    let v = (l + 1) as f64 * s.m(l + 1) as f64 / s.n() as f64;
    Ok(DiscoveryEstimate::new(Estimator::GoodTuring, s.n(), 0, Target::Single(l), v))
}

/// Good–Toulmin extrapolation of the new-species probability to `m`
/// further draws: `n^{-1} Σ_i (-m/n)^{i-1} i m_i`, with `0^0 = 1`.
///
/// The series is flagged `unstable` when `m > n` or the value leaves
/// `[0, 1]`. With `clamp` the value is forced into `[0, 1]`; the flag is
/// kept either way.
pub fn good_toulmin(s: &SampleSummary, m: u64, clamp: bool) -> DiscoveryEstimate {
    let n = s.n() as f64;
    let gamma = m as f64 / n;
    let v: f64 = s
        .spectrum()
        .iter()
        .map(|(i, mi)| (-gamma).powi((i - 1) as i32) * (i * mi) as f64)
        .sum::<f64>()
        / n;
    let unstable = gamma > 1.0 || !(0.0..=1.0).contains(&v);
    let mut e = DiscoveryEstimate::new(Estimator::GoodToulmin, s.n(), m, Target::Single(0), v);
    e.unstable = unstable;
    if clamp {
        e.value = v.clamp(0.0, 1.0);
    }
    e
}
