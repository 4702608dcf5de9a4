//! Log-space scalar helpers.

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

pub const LN_2: f64 = core::f64::consts::LN_2;

/// `ln cosh x`, accurate for large `|x|`.
pub fn ln_cosh(x: f64) -> f64 {
    let a = libm::fabs(x);
    a + libm::log1p(libm::exp(-2.0 * a)) - LN_2
}

/// `ln |sinh x|`; `-inf` at zero.
pub fn ln_sinh_abs(x: f64) -> f64 {
    let a = libm::fabs(x);
    if a == 0.0 {
        return f64::NEG_INFINITY;
    }
    a + libm::log1p(-libm::exp(-2.0 * a)) - LN_2
}

/// `ln(e^a + e^b)`.
pub fn ln_add_exp(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if hi == f64::NEG_INFINITY {
        return hi;
    }
    hi + libm::log1p(libm::exp(lo - hi))
}

/// `ln Σ e^{x_i}`; `-inf` for an empty input.
pub fn ln_sum_exp<I>(terms: I) -> f64
where
    I: IntoIterator<Item = f64> + Clone,
{
    let max = terms.clone().into_iter().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    let sum: f64 = terms.into_iter().map(|t| libm::exp(t - max)).sum();
    max + libm::log(sum)
}

/// Natural log of an arbitrary-precision integer; `-inf` for zero.
pub fn ln_biguint(n: &BigUint) -> f64 {
    if n.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = n.bits();
    if bits <= 1000 {
        return libm::log(n.to_f64().expect("finite below 2^1000"));
    }
    let shift = bits - 64;
    let top = (n >> shift).to_f64().expect("64-bit prefix");
    libm::log(top) + shift as f64 * LN_2
}
