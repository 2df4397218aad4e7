use std::ops::{Mul, Neg};

/// A real number stored as `sign * exp(log_abs)`.
///
/// `sign == 0` marks an exact zero; `log_abs` is then meaningless.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogNumber {
    log_abs: f64,
    sign: i8,
}

impl LogNumber {
    pub const ZERO: LogNumber = LogNumber { log_abs: f64::NEG_INFINITY, sign: 0 };
    pub const ONE: LogNumber = LogNumber { log_abs: 0.0, sign: 1 };

    pub fn new(log_abs: f64, sign: i8) -> Self {
        if sign == 0 || log_abs == f64::NEG_INFINITY {
            Self::ZERO
        } else {
            Self { log_abs, sign: sign.signum() }
        }
    }

    pub fn positive(log_abs: f64) -> Self {
        Self::new(log_abs, 1)
    }

    pub fn from_f64(v: f64) -> Self {
        if v == 0.0 {
            Self::ZERO
        } else {
            Self::new(v.abs().ln(), if v > 0.0 { 1 } else { -1 })
        }
    }

    pub fn log_abs(&self) -> f64 {
        self.log_abs
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    pub fn to_f64(&self) -> f64 {
        match self.sign {
            0 => 0.0,
            s => f64::from(s) * self.log_abs.exp(),
        }
    }

    /// Multiply by `exp(log_factor)`.
    pub fn scale(self, log_factor: f64) -> Self {
        if self.is_zero() {
            self
        } else {
            Self::new(self.log_abs + log_factor, self.sign)
        }
    }
}

impl Mul for LogNumber {
    type Output = LogNumber;
    fn mul(self, rhs: LogNumber) -> LogNumber {
        if self.is_zero() || rhs.is_zero() {
            LogNumber::ZERO
        } else {
            LogNumber::new(self.log_abs + rhs.log_abs, self.sign * rhs.sign)
        }
    }
}

impl Neg for LogNumber {
    type Output = LogNumber;
    fn neg(self) -> LogNumber {
        LogNumber { log_abs: self.log_abs, sign: -self.sign }
    }
}

/// Signed sum of log-domain terms.
///
/// Positive and negative parts are accumulated separately with log-sum-exp
/// and combined once, so the only cancellation is the final subtraction.
/// Returns the sum together with the log of the largest term magnitude,
/// which callers use to measure how many digits the subtraction cost.
pub fn signed_log_sum_exp(terms: &[LogNumber]) -> (LogNumber, f64) {
    let max = terms
        .iter()
        .filter(|t| !t.is_zero())
        .map(|t| t.log_abs)
        .fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return (LogNumber::ZERO, max);
    }
    let (mut pos, mut neg) = (0.0f64, 0.0f64);
    for t in terms {
        match t.sign {
            1 => pos += (t.log_abs - max).exp(),
            -1 => neg += (t.log_abs - max).exp(),
            _ => {}
        }
    }
    let sum = if pos == neg {
        LogNumber::ZERO
    } else if pos > neg {
        LogNumber::new(max + pos.ln() + (-neg / pos).ln_1p(), 1)
    } else {
        LogNumber::new(max + neg.ln() + (-pos / neg).ln_1p(), -1)
    };
    (sum, max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sums_with_mixed_signs() {
        let terms: Vec<_> = [3.0, -1.5, 0.25, -0.75].iter().map(|&v| LogNumber::from_f64(v)).collect();
        let (s, max) = signed_log_sum_exp(&terms);
        assert!((s.to_f64() - 1.0).abs() < 1e-15);
        assert!((max - 3f64.ln()).abs() < 1e-15);
        let (z, _) = signed_log_sum_exp(&[LogNumber::from_f64(2.0), LogNumber::from_f64(-2.0)]);
        assert!(z.is_zero());
        let (n, _) = signed_log_sum_exp(&[LogNumber::from_f64(1.0), LogNumber::from_f64(-4.0)]);
        assert!((n.to_f64() + 3.0).abs() < 1e-15);
    }

    #[test]
    fn zero_is_absorbing() {
        let z = LogNumber::ZERO * LogNumber::from_f64(5.0);
        assert!(z.is_zero());
        assert_eq!(LogNumber::new(f64::NEG_INFINITY, 1), LogNumber::ZERO);
        assert_eq!((-LogNumber::from_f64(2.0)).to_f64(), -2.0);
    }
}
