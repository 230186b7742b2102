//! Adaptive Simpson quadrature and composite Simpson on sampled data.

use crate::error::{domain, Error, Result};

const MAX_DEPTH: u32 = 48;

/// Integrates `f` over `[a, b]` to absolute accuracy `tol` with adaptive
/// Simpson bisection and Richardson correction.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<f64> {
    if !(a <= b) {
        return Err(Error::InvalidArgument(format!("integration interval [{a}, {b}] is reversed")));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    if a == b {
        return Ok(0.0);
    }
    let eval = |x: f64| -> Result<f64> {
        let y = f(x);
        if y.is_finite() {
            Ok(y)
        } else {
            Err(domain(format!("integrand is not finite at x = {x}")))
        }
    };
    let fa = eval(a)?;
    let fb = eval(b)?;
    let m = 0.5 * (a + b);
    let fm = eval(m)?;
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    recurse(&eval, a, b, fa, fm, fb, whole, tol, MAX_DEPTH)
}

#[allow(clippy::too_many_arguments)]
fn recurse(
    f: &impl Fn(f64) -> Result<f64>,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> Result<f64> {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm)?;
    let frm = f(rm)?;
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return Ok(left + right + delta / 15.0);
    }
    Ok(recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)? + recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)?)
}

/// Composite Simpson on equally spaced samples (odd count ≥ 3) together with a
/// Richardson error estimate from the half-resolution rule.
///
/// Returns `(integral, error_estimate)`.
pub fn simpson_samples(values: &[f64], h: f64) -> Result<(f64, f64)> {
    let n = values.len();
    if n < 3 || n.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!("composite Simpson needs an odd number (≥ 3) of samples, got {n}")));
    }
    if let Some(i) = values.iter().position(|v| !v.is_finite()) {
        return Err(domain(format!("sample {i} is not finite")));
    }
    let fine = simpson(values, h);
    // the coarse rule needs (n − 1)/2 even intervals; otherwise fall back to trapezoid
    let coarse_vals: Vec<f64> = values.iter().step_by(2).copied().collect();
    let estimate = if coarse_vals.len() >= 3 && coarse_vals.len() % 2 == 1 {
        (fine - simpson(&coarse_vals, 2.0 * h)).abs() / 15.0
    } else {
        let trap: f64 = h * (values.iter().sum::<f64>() - 0.5 * (values[0] + values[n - 1]));
        (fine - trap).abs()
    };
    Ok((fine, estimate))
}

fn simpson(values: &[f64], h: f64) -> f64 {
    let n = values.len();
    let mut acc = values[0] + values[n - 1];
    for (i, v) in values.iter().enumerate().take(n - 1).skip(1) {
        acc += if i % 2 == 1 { 4.0 * v } else { 2.0 * v };
    }
    acc * h / 3.0
}
