//! Exact rationals over arbitrary-precision integers.
//!
//! `num-rational` already keeps `Ratio<BigInt>` reduced with a positive
//! denominator after every operation; this module adds the conversions the
//! series code needs.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub use num_rational::BigRational;

pub fn int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

pub fn frac(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// `base^exp` as an exact big integer.
pub fn pow_int(base: u32, exp: u32) -> BigInt {
    num_traits::pow(BigInt::from(base), exp as usize)
}

/// `n!` as an exact big integer.
pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// Binomial coefficient `C(n, k)`.
pub fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Nearest-ish `f64` of an exact rational, accurate to a few ulps even when
/// numerator and denominator individually overflow `f64`.
pub fn to_f64(q: &BigRational) -> f64 {
    if q.is_zero() {
        return 0.0;
    }
    let num = q.numer().abs();
    let den = q.denom().clone();
    // scale so that the integer quotient carries 64+ significant bits
    let shift = num.bits() as i64 - den.bits() as i64 - 64;
    let quotient = if shift >= 0 { &num / (&den << shift as usize) } else { (&num << (-shift) as usize) / &den };
    let mantissa = quotient.to_f64().unwrap_or(f64::INFINITY);
    let value = mantissa * 2f64.powi(shift.clamp(i32::MIN as i64, i32::MAX as i64) as i32);
    if q.is_negative() {
        -value
    } else {
        value
    }
}
