//! Noncentral generalized factorial coefficients
//!
//! `C(m, x; σ, γ) = (x!)^{-1} Σ_{i=0}^{x} (-1)^i binom(x, i) (-iσ - γ)_m`
//!
//! Two evaluation routes: a signed log-sum-exp over the alternating sum
//! (fast, loses digits as `x` grows) and an exact evaluation in big integer
//! arithmetic. Every finite `f64` is a dyadic rational `M·2^E`, so after
//! rescaling `σ`, `γ` and `1` to a common power of two each rising factorial
//! is an integer times `2^{m·E}` and the whole sum is exact.

use num_bigint::{BigInt, Sign};
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{ln_factorial, log_binomial, signed_log_pochhammer, signed_log_sum_exp, LogNumber};
use crate::error::{Error, Result};

/// Largest number of cancelled decimal digits the fast route tolerates.
pub const PRECISION_BUDGET_DIGITS: f64 = 3.0;

/// Largest `m` for which the automatic fallback runs the exact route.
pub const RATIONAL_MAX_M: u64 = 120;

fn check_args(x: u64, m: u64, sigma: f64, gamma: f64) -> Result<()> {
    if x > m {
        return Err(Error::OutOfRange(format!("x={x} exceeds m={m}")));
    }
    if !(sigma > 0.0 && sigma < 1.0) || !gamma.is_finite() {
        return Err(Error::InvalidParams(format!("sigma={sigma}, gamma={gamma}")));
    }
    Ok(())
}

fn combine(terms: &[LogNumber], x: u64) -> Result<LogNumber> {
    let (sum, max) = signed_log_sum_exp(terms);
    if max == f64::NEG_INFINITY {
        return Ok(LogNumber::ZERO);
    }
    let lost = if sum.is_zero() {
        f64::INFINITY
    } else {
        (max - sum.log_abs()) / std::f64::consts::LN_10
    };
    if lost > PRECISION_BUDGET_DIGITS {
        return Err(Error::PrecisionLoss { digits: lost, budget: PRECISION_BUDGET_DIGITS });
    }
    Ok(sum.scale(-ln_factorial(x)))
}

fn alternating_terms(x: u64, rising: &[LogNumber]) -> Vec<LogNumber> {
    (0..=x)
        .map(|i| {
            let sign = if i % 2 == 0 { 1 } else { -1 };
            rising[i as usize] * LogNumber::new(log_binomial(x, i), sign)
        })
        .collect()
}

fn rising_row(m: u64, upto: u64, sigma: f64, gamma: f64) -> Vec<LogNumber> {
    (0..=upto)
        .map(|i| signed_log_pochhammer(-(i as f64) * sigma - gamma, m))
        .collect()
}

/// Fast route for a single coefficient; fails with
/// [`Error::PrecisionLoss`] when the alternating sum cancels more than
/// [`PRECISION_BUDGET_DIGITS`] digits.
pub fn gen_factorial_coeff(m: u64, x: u64, sigma: f64, gamma: f64) -> Result<LogNumber> {
    check_args(x, m, sigma, gamma)?;
    let rising = rising_row(m, x, sigma, gamma);
    combine(&alternating_terms(x, &rising), x)
}

/// Fast route for the whole row `x = 0..=m`; each entry carries its own
/// precision verdict.
pub fn gen_factorial_row(m: u64, sigma: f64, gamma: f64) -> Result<Vec<Result<LogNumber>>> {
    check_args(0, m, sigma, gamma)?;
    let rising = rising_row(m, m, sigma, gamma);
    Ok((0..=m).map(|x| combine(&alternating_terms(x, &rising), x)).collect())
}

/// Fast route with automatic exact fallback.
pub fn gen_factorial_coeff_auto(m: u64, x: u64, sigma: f64, gamma: f64) -> Result<LogNumber> {
    match gen_factorial_coeff(m, x, sigma, gamma) {
        Err(Error::PrecisionLoss { .. }) if m <= RATIONAL_MAX_M => {
            gen_factorial_coeff_exact(m, x, sigma, gamma)
        }
        Err(Error::PrecisionLoss { digits, .. }) => Err(Error::Infeasible(format!(
            "C({m},{x}) lost {digits:.1} digits and m exceeds the exact-route limit {RATIONAL_MAX_M}"
        ))),
        other => other,
    }
}

/// Exact route for a single coefficient.
pub fn gen_factorial_coeff_exact(m: u64, x: u64, sigma: f64, gamma: f64) -> Result<LogNumber> {
    check_args(x, m, sigma, gamma)?;
    let exact = ExactRising::new(m, x, sigma, gamma);
    Ok(exact.coefficient(x))
}

/// Exact route for the whole row `x = 0..=m`.
pub fn gen_factorial_row_exact(m: u64, sigma: f64, gamma: f64) -> Result<Vec<LogNumber>> {
    check_args(0, m, sigma, gamma)?;
    let exact = ExactRising::new(m, m, sigma, gamma);
    Ok((0..=m).map(|x| exact.coefficient(x)).collect())
}

/// Integer numerators of `(-iσ - γ)_m` for `i = 0..=upto`, all sharing the
/// denominator `2^{-m·exp}`.
struct ExactRising {
    m: u64,
    numerators: Vec<BigInt>,
    exp: i64,
}

impl ExactRising {
    fn new(m: u64, upto: u64, sigma: f64, gamma: f64) -> Self {
        let (s_mant, s_exp) = dyadic(sigma);
        let (g_mant, g_exp) = dyadic(gamma);
        let exp = s_exp.min(g_exp).min(0);
        let s = s_mant << (s_exp - exp) as usize;
        let g = g_mant << (g_exp - exp) as usize;
        let one = BigInt::one() << (-exp) as usize;
        let numerators = (0..=upto)
            .map(|i| {
                let base = -(&s * BigInt::from(i)) - &g;
                let mut prod = BigInt::one();
                let mut term = base;
                for _ in 0..m {
                    prod *= &term;
                    term += &one;
                }
                prod
            })
            .collect();
        Self { m, numerators, exp }
    }

    fn coefficient(&self, x: u64) -> LogNumber {
        let mut sum = BigInt::zero();
        let mut binom = BigInt::one();
        for i in 0..=x {
            let term = &binom * &self.numerators[i as usize];
            if i % 2 == 0 {
                sum += term;
            } else {
                sum -= term;
            }
            binom = binom * BigInt::from(x - i) / BigInt::from(i + 1);
        }
        if sum.is_zero() {
            return LogNumber::ZERO;
        }
        let sign = if sum.sign() == Sign::Minus { -1 } else { 1 };
        let log_abs = bigint_ln(&sum.abs(), self.m as i64 * self.exp) - ln_factorial(x);
        LogNumber::new(log_abs, sign)
    }
}

/// Split a finite `f64` into `mantissa * 2^exp` exactly.
fn dyadic(v: f64) -> (BigInt, i64) {
    if v == 0.0 {
        return (BigInt::zero(), 0);
    }
    let bits = v.to_bits();
    let sign = if bits >> 63 == 0 { 1i64 } else { -1 };
    let raw_exp = ((bits >> 52) & 0x7ff) as i64;
    let frac = bits & 0x000f_ffff_ffff_ffff;
    let (mant, exp) = if raw_exp == 0 {
        (frac, -1074)
    } else {
        (frac | (1u64 << 52), raw_exp - 1075)
    };
    let tz = mant.trailing_zeros() as i64;
    (BigInt::from(sign) * BigInt::from(mant >> tz), exp + tz)
}

/// `ln(v · 2^exp)` for a positive big integer `v`.
fn bigint_ln(v: &BigInt, exp: i64) -> f64 {
    let shift = v.bits().saturating_sub(64);
    let top = (v >> shift as usize).to_f64().expect("top bits fit in f64");
    let (frac, e) = libm::frexp(top);
    frac.ln() + (shift as i64 + exp + e as i64) as f64 * std::f64::consts::LN_2
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn x_zero_is_plain_rising_factorial() {
        for &(m, sigma, gamma) in &[(5u64, 0.3, -4.2), (12, 0.5, -20.0), (7, 0.75, 1.5)] {
            let got = gen_factorial_coeff(m, 0, sigma, gamma).unwrap();
            let want = signed_log_pochhammer(-gamma, m);
            assert_eq!(got.sign(), want.sign());
            assert!((got.log_abs() - want.log_abs()).abs() < 1e-13);
        }
    }

    #[test]
    fn m1_x1_is_sigma() {
        for &sigma in &[0.1, 0.5, 0.9] {
            let got = gen_factorial_coeff(1, 1, sigma, 0.0).unwrap().to_f64();
            assert!((got - sigma).abs() < 1e-15);
            let exact = gen_factorial_coeff_exact(1, 1, sigma, 0.0).unwrap().to_f64();
            assert!((exact - sigma).abs() < 1e-15, "{exact}");
        }
    }

    #[test]
    fn dyadic_is_exact() {
        for &v in &[0.5, 0.656, -155.408, 3.0, 1e-300, 7.0e15] {
            let (m, e) = dyadic(v);
            let back = libm::ldexp(m.to_f64().unwrap(), e as i32);
            assert_eq!(back, v);
        }
    }

    #[test]
    fn fast_matches_exact_when_within_budget() {
        let mut checked = 0;
        for &sigma in &[0.25, 0.5, 0.75] {
            for m in 1..=25u64 {
                for shift in [-30i64, -11, -3, 0, 4] {
                    let gamma = shift as f64 + 0.5 * sigma;
                    let exact = gen_factorial_row_exact(m, sigma, gamma).unwrap();
                    let fast = gen_factorial_row(m, sigma, gamma).unwrap();
                    for (x, (f, e)) in fast.iter().zip(&exact).enumerate() {
                        if let Ok(f) = f {
                            checked += 1;
                            if e.is_zero() {
                                continue;
                            }
                            assert_eq!(f.sign(), e.sign(), "m={m} x={x} sigma={sigma} gamma={gamma}");
                            assert!(
                                (f.log_abs() - e.log_abs()).abs() < 5e-11,
                                "m={m} x={x} sigma={sigma} gamma={gamma}: {} vs {}",
                                f.log_abs(),
                                e.log_abs()
                            );
                        }
                    }
                }
            }
        }
        assert!(checked > 500);
    }

    #[test]
    fn auto_falls_back_on_cancellation() {
        // Large x with small m cancels heavily in the alternating sum.
        let m = 40;
        let sigma = 0.5;
        let gamma = -20.0 + sigma * 10.0;
        let fast = gen_factorial_coeff(m, 30, sigma, gamma);
        assert!(matches!(fast, Err(Error::PrecisionLoss { .. })));
        let auto = gen_factorial_coeff_auto(m, 30, sigma, gamma).unwrap();
        let exact = gen_factorial_coeff_exact(m, 30, sigma, gamma).unwrap();
        assert_eq!(auto, exact);
        let too_big = gen_factorial_coeff_auto(RATIONAL_MAX_M + 10, RATIONAL_MAX_M, sigma, gamma);
        assert!(matches!(too_big, Err(Error::Infeasible(_))));
    }
}
