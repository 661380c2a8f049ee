//! Log-space arithmetic for quantities that overflow any fixed-width float
//! (asymptotic totals grow like `e^{2√n}` and faster).

use num_bigint::BigUint;
use num_traits::{Signed, ToPrimitive, Zero};

/// A nonnegative real stored as a sign tag plus the natural log of its
/// magnitude. `Zero` carries no magnitude; `ln` of a zero value is ignored.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LogReal {
    Zero,
    Positive { ln: f64 },
}

// named `mul`/`add` rather than operator impls: the call sites should say
// out loud that arithmetic happens on logarithms
#[allow(clippy::should_implement_trait)]
impl LogReal {
    pub fn zero() -> Self {
        LogReal::Zero
    }

    /// Value `e^{ln}`.
    pub fn from_ln(ln: f64) -> Self {
        LogReal::Positive { ln }
    }

    /// Exact conversion from a plain nonnegative float.
    pub fn from_value(v: f64) -> Self {
        if v == 0.0 {
            LogReal::Zero
        } else {
            assert!(v > 0.0, "LogReal represents nonnegative values only");
            LogReal::Positive { ln: v.ln() }
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, LogReal::Zero)
    }

    /// Natural log of the magnitude; `None` for zero.
    pub fn ln(&self) -> Option<f64> {
        match self {
            LogReal::Zero => None,
            LogReal::Positive { ln } => Some(*ln),
        }
    }

    /// Plain float value; underflows/overflows to 0/∞ as `exp` does.
    pub fn value(&self) -> f64 {
        match self {
            LogReal::Zero => 0.0,
            LogReal::Positive { ln } => ln.exp(),
        }
    }

    /// Multiplication adds log magnitudes.
    pub fn mul(self, other: LogReal) -> LogReal {
        match (self, other) {
            (LogReal::Zero, _) | (_, LogReal::Zero) => LogReal::Zero,
            (LogReal::Positive { ln: a }, LogReal::Positive { ln: b }) => {
                LogReal::Positive { ln: a + b }
            }
        }
    }

    /// Addition via max-anchored log-sum-exp.
    pub fn add(self, other: LogReal) -> LogReal {
        match (self, other) {
            (LogReal::Zero, x) | (x, LogReal::Zero) => x,
            (LogReal::Positive { ln: a }, LogReal::Positive { ln: b }) => {
                let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
                LogReal::Positive {
                    ln: hi + (lo - hi).exp().ln_1p(),
                }
            }
        }
    }

    /// Ratio of two positive log-space values as a plain float.
    pub fn ratio_to(&self, other: &LogReal) -> Option<f64> {
        Some((self.ln()? - other.ln()?).exp())
    }
}

/// `ln Γ(x)` for `x > 0` (musl-derived implementation, ~2 ulp).
pub fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

/// `ln C(n, x)` for real `0 ≤ x ≤ n` via the log-gamma continuous extension.
pub fn ln_binomial_real(n: f64, x: f64) -> f64 {
    ln_gamma(n + 1.0) - ln_gamma(x + 1.0) - ln_gamma(n - x + 1.0)
}

/// Max-anchored log-sum-exp: `ln Σ e^{v}` over the given log terms.
/// Empty input is log of an empty sum, i.e. `LogReal::Zero`.
pub fn log_sum_exp(terms: &[f64]) -> LogReal {
    let Some(&max) = terms
        .iter()
        .max_by(|a, b| a.partial_cmp(b).expect("log terms must not be NaN"))
    else {
        return LogReal::Zero;
    };
    let sum: f64 = terms.iter().map(|&t| (t - max).exp()).sum();
    LogReal::Positive {
        ln: max + sum.ln(),
    }
}

/// Natural log of a positive rational, exact-magnitude arithmetic on both
/// parts. `None` for zero; panics on negatives (log-space values are
/// nonnegative by construction here).
pub fn ln_rational(r: &crate::ExactRational) -> Option<f64> {
    assert!(
        !r.numer().is_negative(),
        "ln_rational expects a nonnegative rational"
    );
    let num = ln_biguint(r.numer().magnitude())?;
    let den = ln_biguint(r.denom().magnitude()).expect("denominator is positive");
    Some(num - den)
}

/// Natural log of a positive big integer, accurate to a few ulp even when the
/// value far exceeds `f64` range (mantissa bits plus an exact power of two).
pub fn ln_biguint(v: &BigUint) -> Option<f64> {
    if v.is_zero() {
        return None;
    }
    let bits = v.bits();
    if bits <= 64 {
        return Some((v.to_u64().unwrap() as f64).ln());
    }
    // keep the top 64 bits, remember the shift
    let shift = bits - 64;
    let top = (v >> shift).to_u64().unwrap();
    Some((top as f64).ln() + (shift as f64) * std::f64::consts::LN_2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn add_and_mul_round_trip() {
        let a = LogReal::from_value(3.5);
        let b = LogReal::from_value(0.25);
        assert!((a.add(b).value() - 3.75).abs() < 1e-12);
        assert!((a.mul(b).value() - 0.875).abs() < 1e-12);
        assert_eq!(a.add(LogReal::zero()), a);
        assert!(a.mul(LogReal::zero()).is_zero());
    }

    #[test]
    fn log_sum_exp_handles_wide_ranges() {
        // 1e300 + 1 in log space: the small term must not be lost to overflow
        let r = log_sum_exp(&[300.0 * std::f64::consts::LN_10, 0.0]);
        assert!((r.ln().unwrap() - 300.0 * std::f64::consts::LN_10).abs() < 1e-12);
        assert!(log_sum_exp(&[]).is_zero());
    }

    #[test]
    fn ln_gamma_matches_factorials() {
        let mut f = 1.0f64;
        for n in 1..=20 {
            f *= n as f64;
            assert!((ln_gamma(n as f64 + 1.0) - f.ln()).abs() < 1e-10);
        }
    }

    #[test]
    fn ln_binomial_real_at_integers() {
        // C(10, 5) = 252
        assert!((ln_binomial_real(10.0, 5.0) - 252f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn ln_biguint_handles_huge_values() {
        let v = BigUint::one() << 10_000u32; // 2^10000
        let expect = 10_000.0 * std::f64::consts::LN_2;
        assert!((ln_biguint(&v).unwrap() - expect).abs() < 1e-9);
        assert!((ln_biguint(&BigUint::from(1000u32)).unwrap() - 1000f64.ln()).abs() < 1e-12);
        assert!(ln_biguint(&BigUint::zero()).is_none());
        // 54..=64-bit values take the direct path, anything wider the shifted one
        for bits in [54u32, 63, 64, 65] {
            let v = BigUint::one() << bits;
            let expect = bits as f64 * std::f64::consts::LN_2;
            assert!((ln_biguint(&v).unwrap() - expect).abs() < 1e-9, "bits={bits}");
        }
    }
}
