//! Exact Bernoulli numbers and the Laurent series of the product-manifold
//! Laplacian excess
//!
//! ```text
//! g(r) = 2·snlog(3/2, r) + 1/r − 2·snlog(1/2, r) − snlog(2, r)
//!      = Σ_{k≥1} c_k r^{2k−1},   c_k = (−1)^k 2^{2k} B_{2k} T_k / (2k)!,
//!   T_k = (3^k − 1)/2^{k−1} − 2^k.
//! ```
//!
//! `T_1 = T_2 = 0` and `T_k < 0` for `k ≥ 3`; since `(−1)^k B_{2k} < 0`, every
//! nonzero `c_k` is positive.

use std::f64::consts::{PI, SQRT_2};

use num_traits::{Signed, Zero};

use crate::comparison::snlog_minus_inv;
use crate::error::{domain, invalid, Result};
use crate::numkit::rational::{self, binomial, factorial, int, pow_int, BigRational};

/// Largest Bernoulli index accepted by [`bernoulli`].
pub const MAX_INDEX: usize = 400;

/// Convergence radius `π/√2` of the series for `g`.
pub const RADIUS: f64 = PI / SQRT_2;

/// `B_0, B_1, …, B_upto` with `B_1 = −1/2`.
#[derive(Debug, Clone, PartialEq)]
pub struct BernoulliTable {
    pub values: Vec<BigRational>,
}

impl BernoulliTable {
    pub fn get(&self, m: usize) -> &BigRational {
        &self.values[m]
    }

    pub fn upto(&self) -> usize {
        self.values.len() - 1
    }
}

/// Bernoulli numbers from `Σ_{j=0}^{m} C(m+1, j) B_j = 0`.
pub fn bernoulli(upto: usize) -> Result<BernoulliTable> {
    if upto > MAX_INDEX {
        return Err(invalid(format!("Bernoulli index {upto} exceeds {MAX_INDEX}")));
    }
    let mut values = Vec::with_capacity(upto + 1);
    values.push(int(1));
    for m in 1..=upto {
        if m > 1 && m % 2 == 1 {
            values.push(BigRational::zero());
            continue;
        }
        let mut acc = BigRational::zero();
        for (j, b) in values.iter().enumerate() {
            if !b.is_zero() {
                acc += BigRational::from_integer(binomial(m as u32 + 1, j as u32)) * b;
            }
        }
        values.push(-acc / int(m as i64 + 1));
    }
    Ok(BernoulliTable { values })
}

/// `T_k = (3^k − 1)/2^{k−1} − 2^k`.
pub fn bracket(k: usize) -> Result<BigRational> {
    if k == 0 {
        return Err(invalid("k must be ≥ 1"));
    }
    let k = k as u32;
    let first = BigRational::new(pow_int(3, k) - 1, pow_int(2, k - 1));
    Ok(first - BigRational::from_integer(pow_int(2, k)))
}

/// Coefficients `c_1, …, c_K` of `g(r) = Σ c_k r^{2k−1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct GSeries {
    pub order: usize,
    /// `coeffs[k−1] = c_k`.
    pub coeffs: Vec<BigRational>,
    pub brackets: Vec<BigRational>,
    pub radius: f64,
}

impl GSeries {
    pub fn coeff(&self, k: usize) -> &BigRational {
        &self.coeffs[k - 1]
    }

    /// Every nonzero coefficient is positive.
    pub fn all_nonzero_positive(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero() || c.is_positive())
    }

    /// Indices `k` with `c_k = 0`.
    pub fn zero_indices(&self) -> Vec<usize> {
        self.coeffs.iter().enumerate().filter(|(_, c)| c.is_zero()).map(|(i, _)| i + 1).collect()
    }
}

/// `c_k = (−1)^k 2^{2k} B_{2k} T_k/(2k)!` for `k = 1..=order`.
pub fn g_coefficients(order: usize) -> Result<GSeries> {
    if order == 0 || 2 * order > MAX_INDEX {
        return Err(invalid(format!("series order must be in 1..={}", MAX_INDEX / 2)));
    }
    let table = bernoulli(2 * order)?;
    let mut coeffs = Vec::with_capacity(order);
    let mut brackets = Vec::with_capacity(order);
    for k in 1..=order {
        let t = bracket(k)?;
        let sign = if k % 2 == 0 { int(1) } else { int(-1) };
        let scale = BigRational::new(pow_int(4, k as u32), factorial(2 * k as u32));
        coeffs.push(sign * scale * table.get(2 * k) * &t);
        brackets.push(t);
    }
    Ok(GSeries { order, coeffs, brackets, radius: RADIUS })
}

/// A truncated series value with a bound on everything it leaves out.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesValue {
    pub value: f64,
    /// Analytic bound on `|Σ_{k>K} c_k r^{2k−1}|`.
    pub tail: f64,
    /// Floating-point error allowance for the partial sum.
    pub rounding: f64,
}

impl SeriesValue {
    /// `tail + rounding`.
    pub fn remainder(&self) -> f64 {
        self.tail + self.rounding
    }
}

/// Tail bound for `k > order` at radius `r`.
///
/// Uses `|B_{2k}|/(2k)! ≤ 4/(2π)^{2k}·(1 − 2^{1−2k})^{−1}` and
/// `|T_k| ≤ 2^k + 2·(3/2)^k`, which gives
/// `|c_k r^{2k−1}| ≤ 4/(r(1 − 2^{1−2k}))·(q₂^k + 2q₁^k)` with
/// `q₂ = 2r²/π²`, `q₁ = 3r²/(2π²)`, summed geometrically.
pub fn tail_bound(r: f64, order: usize) -> Result<f64> {
    check_radius(r)?;
    let q2 = 2.0 * r * r / (PI * PI);
    let q1 = 1.5 * r * r / (PI * PI);
    let k = order as i32 + 1;
    let lead = 4.0 / (r * (1.0 - 2f64.powi(1 - 2 * k)));
    Ok(lead * (q2.powi(k) / (1.0 - q2) + 2.0 * q1.powi(k) / (1.0 - q1)))
}

/// Per-term bound used by [`tail_bound`]; exposed so it can be compared with
/// computed terms.
pub fn term_bound(r: f64, k: usize) -> f64 {
    let q2 = 2.0 * r * r / (PI * PI);
    let q1 = 1.5 * r * r / (PI * PI);
    let k = k as i32;
    4.0 / (r * (1.0 - 2f64.powi(1 - 2 * k))) * (q2.powi(k) + 2.0 * q1.powi(k))
}

fn check_radius(r: f64) -> Result<()> {
    if !(r > 0.0 && r < RADIUS) {
        return Err(domain(format!("series needs 0 < r < π/√2, got {r}")));
    }
    Ok(())
}

/// Partial sum of `g` through `k = order`, with its remainder bound.
pub fn g_eval_series(r: f64, order: usize) -> Result<SeriesValue> {
    g_eval_with(&g_coefficients(order)?, r)
}

/// As [`g_eval_series`] with precomputed coefficients.
pub fn g_eval_with(series: &GSeries, r: f64) -> Result<SeriesValue> {
    check_radius(r)?;
    if series.order < 3 {
        return Err(invalid("series order must be ≥ 3"));
    }
    let mut value = 0.0;
    let mut abs_sum = 0.0;
    for (i, c) in series.coeffs.iter().enumerate().rev() {
        let term = rational::to_f64(c) * r.powi(2 * i as i32 + 1);
        value += term;
        abs_sum += term.abs();
    }
    let rounding = 4.0 * f64::EPSILON * series.order as f64 * abs_sum;
    Ok(SeriesValue { value, tail: tail_bound(r, series.order)?, rounding })
}

/// `g(r)` from the closed form, with the `1/r` parts cancelled analytically.
pub fn g_eval_closed(r: f64) -> Result<f64> {
    check_radius(r)?;
    Ok(2.0 * snlog_minus_inv(1.5, r)? - 2.0 * snlog_minus_inv(0.5, r)? - snlog_minus_inv(2.0, r)?)
}

/// Floating-point error allowance for [`g_eval_closed`]: a few ulps of each
/// cancelled term.
pub fn closed_rounding(r: f64) -> Result<f64> {
    check_radius(r)?;
    let scale = 2.0 * snlog_minus_inv(1.5, r)?.abs() + 2.0 * snlog_minus_inv(0.5, r)?.abs() + snlog_minus_inv(2.0, r)?.abs();
    Ok(8.0 * f64::EPSILON * scale)
}

/// Series value, closed form and whether they agree within the tail bound
/// plus both rounding allowances.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Agreement {
    pub r: f64,
    pub series: SeriesValue,
    pub closed: f64,
    pub closed_rounding: f64,
}

impl Agreement {
    pub fn gap(&self) -> f64 {
        (self.series.value - self.closed).abs()
    }

    pub fn allowance(&self) -> f64 {
        self.series.remainder() + self.closed_rounding
    }

    pub fn holds(&self) -> bool {
        self.gap() <= self.allowance()
    }
}

pub fn compare_evaluators(series: &GSeries, r: f64) -> Result<Agreement> {
    Ok(Agreement { r, series: g_eval_with(series, r)?, closed: g_eval_closed(r)?, closed_rounding: closed_rounding(r)? })
}

/// Decimal rendering of an exact rational with `digits` significant digits.
pub fn to_decimal(q: &BigRational, digits: usize) -> String {
    let v = rational::to_f64(q);
    if v == 0.0 {
        "0".into()
    } else {
        format!("{:.*e}", digits.saturating_sub(1), v)
    }
}

/// `T_k` sign summary: indices with `T_k = 0`, and whether `T_k < 0` for all
/// other `k ≤ order`.
pub fn bracket_signs(order: usize) -> Result<(Vec<usize>, bool)> {
    let mut zeros = Vec::new();
    let mut rest_negative = true;
    for k in 1..=order {
        let t = bracket(k)?;
        if t.is_zero() {
            zeros.push(k);
        } else if !t.is_negative() {
            rest_negative = false;
        }
    }
    Ok((zeros, rest_negative))
}
