//! Log-domain special functions shared by every estimator.
//!
//! Pochhammer symbols and binomials that show up in the discovery formulas
//! routinely involve arguments around `1e5`, where `ln Γ` itself is of order
//! `1e6`. Differences of two such values lose most of their digits, so the
//! primitive here is [`ln_gamma_ratio`], which evaluates `ln Γ(x) - ln Γ(y)`
//! directly from the Stirling series without forming either term.

mod genfact;
mod lognum;

pub use genfact::{
    gen_factorial_coeff, gen_factorial_coeff_auto, gen_factorial_coeff_exact,
    gen_factorial_row, gen_factorial_row_exact, PRECISION_BUDGET_DIGITS, RATIONAL_MAX_M,
};
pub use lognum::{signed_log_sum_exp, LogNumber};

use crate::error::{Error, Result};

const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;
const STIRLING_MIN: f64 = 20.0;

/// `ln Γ(x)` for `x > 0`.
pub fn ln_gamma(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    if x >= STIRLING_MIN {
        (x - 0.5) * x.ln() - x + HALF_LN_2PI + stirling_tail(x)
    } else {
        libm::lgamma(x)
    }
}

/// `ln |Γ(x)|` and the sign of `Γ(x)` for any non-pole real `x`.
pub fn ln_gamma_signed(x: f64) -> (f64, i8) {
    if x > 0.0 {
        return (ln_gamma(x), 1);
    }
    let (v, s) = libm::lgamma_r(x);
    (v, if s < 0 { -1 } else { 1 })
}

// Remainder of the Stirling series, accurate to ~1e-19 for x >= 20.
fn stirling_tail(x: f64) -> f64 {
    let r = 1.0 / x;
    let r2 = r * r;
    r * (1.0 / 12.0
        - r2 * (1.0 / 360.0
            - r2 * (1.0 / 1260.0
                - r2 * (1.0 / 1680.0
                    - r2 * (1.0 / 1188.0 - r2 * (691.0 / 360_360.0 - r2 / 156.0))))))
}

/// `ln Γ(x) - ln Γ(y)` for `x, y > 0`, without cancellation between the two
/// log-gamma values.
pub fn ln_gamma_ratio(x: f64, y: f64) -> f64 {
    debug_assert!(x > 0.0 && y > 0.0, "ln_gamma_ratio({x}, {y})");
    if x == y {
        return 0.0;
    }
    ln_gamma_shift(y, x - y)
}

/// `ln Γ(y + d) - ln Γ(y)` with the shift `d` passed separately, so that a
/// small `d` survives even when `y + d` rounds to `y`.
pub fn ln_gamma_shift(y: f64, d: f64) -> f64 {
    debug_assert!(y > 0.0 && y + d > 0.0, "ln_gamma_shift({y}, {d})");
    if d == 0.0 {
        return 0.0;
    }
    let lo = y.min(y + d);
    if lo < STIRLING_MIN {
        // Shift both arguments past the Stirling threshold:
        // ln Γ(x) = ln Γ(x + s) - Σ_{j<s} ln(x + j).
        let shift = (STIRLING_MIN - lo).ceil();
        let mut corr = 0.0;
        let mut j = 0.0;
        while j < shift {
            corr += (d / (y + j)).ln_1p();
            j += 1.0;
        }
        return stirling_shift(y + shift, d) - corr;
    }
    stirling_shift(y, d)
}

fn stirling_shift(y: f64, d: f64) -> f64 {
    let x = y + d;
    let lr = (d / y).ln_1p();
    // (x - 1/2) ln x - x - (y - 1/2) ln y + y, regrouped around ln(x/y)
    (y - 0.5) * lr + d * (y.ln() + lr) - d + stirling_tail(x) - stirling_tail(y)
}

/// `ln (a)_n` where `(a)_n = a (a+1) ... (a+n-1)` is the rising factorial.
///
/// `n` may be real when `a > 0`. For `a <= 0` only integer `n` is accepted,
/// and the product must be strictly positive.
pub fn log_pochhammer(a: f64, n: f64) -> Result<f64> {
    if n == 0.0 {
        return Ok(0.0);
    }
    if n < 0.0 || !n.is_finite() || !a.is_finite() {
        return Err(Error::Domain(format!("log_pochhammer({a}, {n})")));
    }
    if a > 0.0 {
        return Ok(ln_gamma_shift(a, n));
    }
    if n.fract() != 0.0 {
        return Err(Error::Domain(format!(
            "rising factorial ({a})_{n} crosses a pole with non-integer length"
        )));
    }
    let v = signed_log_pochhammer(a, n as u64);
    if v.sign() > 0 {
        Ok(v.log_abs())
    } else {
        Err(Error::Domain(format!("({a})_{n} is not positive")))
    }
}

/// Signed `(a)_m` for any real `a` and integer `m`.
pub fn signed_log_pochhammer(a: f64, m: u64) -> LogNumber {
    if m == 0 {
        return LogNumber::ONE;
    }
    if a > 0.0 {
        return LogNumber::positive(ln_gamma_shift(a, m as f64));
    }
    if a.fract() == 0.0 && -a < m as f64 {
        return LogNumber::ZERO;
    }
    // Factors a, a+1, ..., a+neg-1 are negative.
    let neg = ((-a).floor() as u64 + 1).min(m);
    let mut log_abs = ln_gamma_ratio(-a + 1.0, -a - neg as f64 + 1.0);
    if m > neg {
        let start = a + neg as f64;
        log_abs += ln_gamma_shift(start, (m - neg) as f64);
    }
    let sign = if neg.is_multiple_of(2) { 1 } else { -1 };
    LogNumber::new(log_abs, sign)
}

/// `ln C(n, k)`; `-inf` when `k > n`.
pub fn log_binomial(n: u64, k: u64) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    let k = k.min(n - k);
    if k == 0 {
        return 0.0;
    }
    if k <= 32 {
        let base = (n - k) as f64;
        (1..=k).map(|t| (base / t as f64).ln_1p()).sum()
    } else {
        ln_gamma_ratio(n as f64 + 1.0, (n - k) as f64 + 1.0) - ln_factorial(k)
    }
}

/// `ln n!`.
pub fn ln_factorial(n: u64) -> f64 {
    if n < 2 {
        0.0
    } else {
        ln_gamma(n as f64 + 1.0)
    }
}

/// `ln Σ exp(x_i)`, `-inf` for an empty slice.
pub fn log_sum_exp(xs: &[f64]) -> f64 {
    let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    if max == f64::INFINITY {
        return max;
    }
    max + xs.iter().map(|x| (x - max).exp()).sum::<f64>().ln()
}
