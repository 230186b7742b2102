//! Comparison functions: `sn_κ`, model Laplacians, the α weight, radius and
//! diameter constants, area elements, ball volumes and Bishop–Gromov ratios.

use std::f64::consts::{PI, SQRT_2};

use crate::curvature::SpaceFormFactor;
use crate::error::{domain, invalid, Result};
use crate::numkit::{quad, rational};

/// Below this value of `√|κ|·r` the logarithmic derivative uses its series.
const SERIES_SWITCH: f64 = 1e-4;

/// First zero of `sn_κ`: `π/√κ` for `κ > 0`, infinite otherwise.
pub fn domain_end(kappa: f64) -> f64 {
    if kappa > 0.0 {
        PI / kappa.sqrt()
    } else {
        f64::INFINITY
    }
}

fn check_closed(kappa: f64, r: f64) -> Result<()> {
    if !(r >= 0.0) || !r.is_finite() || r > domain_end(kappa) {
        return Err(domain(format!("r = {r} outside [0, {}] for κ = {kappa}", domain_end(kappa))));
    }
    Ok(())
}

fn check_open(kappa: f64, r: f64) -> Result<()> {
    if !(r > 0.0) || !r.is_finite() || r >= domain_end(kappa) {
        return Err(domain(format!("r = {r} outside (0, {}) for κ = {kappa}", domain_end(kappa))));
    }
    Ok(())
}

/// `sn_κ(r)`: solution of `y″ + κy = 0`, `y(0) = 0`, `y′(0) = 1`, on
/// `[0, π/√κ]`.
pub fn sn(kappa: f64, r: f64) -> Result<f64> {
    check_closed(kappa, r)?;
    Ok(sn_unchecked(kappa, r))
}

pub(crate) fn sn_unchecked(kappa: f64, r: f64) -> f64 {
    if kappa > 0.0 {
        let a = kappa.sqrt();
        (a * r).sin() / a
    } else if kappa < 0.0 {
        let a = (-kappa).sqrt();
        (a * r).sinh() / a
    } else {
        r
    }
}

/// `sn′_κ(r)`.
pub fn sn_prime(kappa: f64, r: f64) -> Result<f64> {
    check_closed(kappa, r)?;
    Ok(if kappa > 0.0 {
        (kappa.sqrt() * r).cos()
    } else if kappa < 0.0 {
        ((-kappa).sqrt() * r).cosh()
    } else {
        1.0
    })
}

/// `sn′_κ(r)/sn_κ(r)` on `(0, π/√κ)`.
pub fn snlog(kappa: f64, r: f64) -> Result<f64> {
    check_open(kappa, r)?;
    Ok(1.0 / r + snlog_minus_inv_unchecked(kappa, r))
}

/// `sn′_κ(r)/sn_κ(r) − 1/r`, evaluated without cancellation for small `r`.
pub fn snlog_minus_inv(kappa: f64, r: f64) -> Result<f64> {
    check_open(kappa, r)?;
    Ok(snlog_minus_inv_unchecked(kappa, r))
}

fn snlog_minus_inv_unchecked(kappa: f64, r: f64) -> f64 {
    if kappa == 0.0 {
        return 0.0;
    }
    let x = kappa.abs().sqrt() * r;
    if x < SERIES_SWITCH {
        return -kappa * r / 3.0 - kappa * kappa * r.powi(3) / 45.0;
    }
    if x < 1.0 {
        // x·cot x − 1 = (x cos x − sin x)/sin x, numerator Σ (∓1)^m 2m x^{2m+1}/(2m+1)!
        let sign = if kappa > 0.0 { -1.0 } else { 1.0 };
        let x2 = x * x;
        let mut term = x; // x^{2m+1}/(2m+1)! at m = 0
        let mut num = 0.0;
        for m in 1..40 {
            let mf = m as f64;
            term *= sign * x2 / ((2.0 * mf) * (2.0 * mf + 1.0));
            let t = 2.0 * mf * term;
            num += t;
            if t.abs() < 1e-18 * num.abs() {
                break;
            }
        }
        let den = if kappa > 0.0 { x.sin() } else { x.sinh() };
        return num / den / r;
    }
    let a = kappa.abs().sqrt();
    if kappa > 0.0 {
        a / (a * r).tan() - 1.0 / r
    } else {
        a / (a * r).tanh() - 1.0 / r
    }
}

/// Laplacian of the distance in the constant-HBSC model:
/// `2(n−1)·snlog(c/2, r) + snlog(2c, r)`.
pub fn kahler_model_laplacian(n: usize, c: f64, r: f64) -> Result<f64> {
    if n == 0 {
        return Err(invalid("n must be ≥ 1"));
    }
    let tangential = if n > 1 { 2.0 * (n as f64 - 1.0) * snlog(c / 2.0, r)? } else { 0.0 };
    Ok(tangential + snlog(2.0 * c, r)?)
}

/// Riemannian model Laplacian `(m−1)·snlog(K, r)` in real dimension `m`.
pub fn riemannian_model_laplacian(m: usize, k: f64, r: f64) -> Result<f64> {
    if m == 0 {
        return Err(invalid("dimension must be ≥ 1"));
    }
    Ok((m as f64 - 1.0) * snlog(k, r)?)
}

/// `α(t) = (sn_{c/2}(t)/sn_{c/2}(ℓ))² · (sn_{2c}(t)/sn_{2c}(ℓ))^{−2}`, for
/// `0 < t ≤ ℓ < π/√(2c)`.
pub fn alpha_weight(t: f64, ell: f64, c: f64) -> Result<f64> {
    check_open(2.0 * c, ell)?;
    if !(t > 0.0) || t > ell {
        return Err(domain(format!("need 0 < t ≤ ℓ, got t = {t}, ℓ = {ell}")));
    }
    // sn_{2c} = sn_{c/2}·sn′_{c/2}, so the ratio reduces to (sn′_{c/2}(ℓ)/sn′_{c/2}(t))²
    let a = (c.abs() / 2.0).sqrt();
    let ratio = if c > 0.0 {
        (a * ell).cos() / (a * t).cos()
    } else if c < 0.0 {
        (a * ell).cosh() / (a * t).cosh()
    } else {
        1.0
    };
    Ok(ratio * ratio)
}

/// `C(k, n) = √2·arccos(√(2(k−1)/(n−1)))`: balls of radius `C/√c` keep
/// `α ≥ 2(k−1)/(n−1)`. Requires `1 ≤ k < (n+1)/2`.
pub fn radius_c(k: usize, n: usize) -> Result<f64> {
    if k == 0 || 2 * k > n {
        return Err(invalid(format!("need 1 ≤ k < (n+1)/2, got k = {k}, n = {n}")));
    }
    let arg = (2.0 * (k as f64 - 1.0) / (n as f64 - 1.0)).sqrt();
    Ok(SQRT_2 * arg.acos())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiamConstants {
    pub nu: f64,
    pub bound: f64,
}

/// `ν = 2kc/(4k−3)` and the diameter bound `π/√ν`.
pub fn diam_constants(k: usize, c: f64) -> Result<DiamConstants> {
    if !(c > 0.0) {
        return Err(invalid(format!("diameter bound needs c > 0, got {c}")));
    }
    if k == 0 {
        return Err(invalid("k must be ≥ 1"));
    }
    let kf = k as f64;
    let nu = 2.0 * kf * c / (4.0 * kf - 3.0);
    Ok(DiamConstants { nu, bound: PI / nu.sqrt() })
}

/// `(4k−3)/4 · snlog(ν, ℓ)`.
pub fn weighted_hessian_bound(k: usize, c: f64, ell: f64) -> Result<f64> {
    let d = diam_constants(k, c)?;
    Ok((4.0 * k as f64 - 3.0) / 4.0 * snlog(d.nu, ell)?)
}

/// Myers bound for a Riemannian manifold with `Ric ≥ (n+1)/(2n−1)·g` in real
/// dimension `2n`: `π/√2 · √((4n−2)/(n+1))`.
pub fn myers_bound_riemannian(n: usize) -> f64 {
    let nf = n as f64;
    PI / SQRT_2 * ((4.0 * nf - 2.0) / (nf + 1.0)).sqrt()
}

/// `Vol(S^{2n−1}) = 2πⁿ/(n−1)!`.
pub fn sphere_volume(n: usize) -> Result<f64> {
    if n == 0 {
        return Err(invalid("n must be ≥ 1"));
    }
    let fact = rational::to_f64(&rational::factorial(n as u32 - 1).into());
    Ok(2.0 * PI.powi(n as i32) / fact)
}

/// Area element `Vol(S^{2n−1})·sn_{c/2}(r)^{2n−2}·sn_{2c}(r)` of the model;
/// its logarithmic derivative is [`kahler_model_laplacian`].
pub fn area_element(n: usize, c: f64, r: f64) -> Result<f64> {
    check_closed(2.0 * c, r)?;
    Ok(sphere_volume(n)? * sn_unchecked(c / 2.0, r).powi(2 * n as i32 - 2) * sn_unchecked(2.0 * c, r))
}

/// Volume of the radius-`δ` ball in the constant-HBSC model, `δ ≤ π/√(2c)`.
pub fn ball_volume(n: usize, c: f64, delta: f64) -> Result<f64> {
    check_closed(2.0 * c, delta)?;
    let svol = sphere_volume(n)?;
    if delta == 0.0 {
        return Ok(0.0);
    }
    // relative accuracy: scale the tolerance by the Euclidean volume
    let tol = 1e-13 * svol * delta.powi(2 * n as i32) / (2 * n) as f64;
    quad::integrate(|r| svol * sn_unchecked(c / 2.0, r).powi(2 * n as i32 - 2) * sn_unchecked(2.0 * c, r), 0.0, delta, tol)
}

/// Ball volume in a product of constant-HBSC factors: the ball of radius `δ`
/// is `{Σ d_i² ≤ δ²}`, integrated factor by factor.
pub fn product_ball_volume(factors: &[SpaceFormFactor], delta: f64) -> Result<f64> {
    if factors.is_empty() {
        return Err(invalid("product needs at least one factor"));
    }
    if !(delta >= 0.0) {
        return Err(domain(format!("radius must be ≥ 0, got {delta}")));
    }
    product_ball_rec(factors, delta)
}

fn factor_diameter(f: &SpaceFormFactor) -> f64 {
    domain_end(2.0 * f.c)
}

/// Ball volume in one factor, saturating at the total volume.
fn factor_ball_volume(f: &SpaceFormFactor, rho: f64) -> Result<f64> {
    let rho = rho.min(factor_diameter(f));
    if f.n == 1 {
        // 2π ∫ sn_{2c} = 2π(1 − sn′_{2c}(ρ))/(2c)
        if f.c == 0.0 {
            return Ok(PI * rho * rho);
        }
        let a = (2.0 * f.c).abs().sqrt();
        let one_minus = if f.c > 0.0 { 2.0 * (a * rho / 2.0).sin().powi(2) } else { -2.0 * (a * rho / 2.0).sinh().powi(2) };
        return Ok(2.0 * PI * one_minus / (2.0 * f.c));
    }
    ball_volume(f.n, f.c, rho)
}

fn product_ball_rec(factors: &[SpaceFormFactor], delta: f64) -> Result<f64> {
    let (last, rest) = factors.split_last().expect("non-empty");
    if rest.is_empty() {
        return factor_ball_volume(last, delta);
    }
    let upper = delta.min(factor_diameter(last));
    if upper == 0.0 {
        return Ok(0.0);
    }
    let tol = 1e-13 * (1.0 + delta.powi(2 * factors.iter().map(|f| f.n).sum::<usize>() as i32));
    let svol = sphere_volume(last.n)?;
    let area = |d: f64| svol * sn_unchecked(last.c / 2.0, d).powi(2 * last.n as i32 - 2) * sn_unchecked(2.0 * last.c, d);
    let failure = std::cell::RefCell::new(None);
    let v = quad::integrate(
        |d| {
            let rho = (delta * delta - d * d).max(0.0).sqrt();
            match product_ball_rec(rest, rho) {
                Ok(v) => area(d) * v,
                Err(e) => {
                    failure.borrow_mut().get_or_insert(e);
                    f64::NAN
                }
            }
        },
        0.0,
        upper,
        tol,
    );
    match (failure.into_inner(), v) {
        (Some(e), _) => Err(e),
        (None, v) => v,
    }
}

/// A radial curve against a named comparison bound.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonCurve {
    pub model: String,
    pub bound: String,
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
}

impl ComparisonCurve {
    /// Discrete monotonicity with slack `tol` per step.
    pub fn is_non_increasing(&self, tol: f64) -> bool {
        self.values.windows(2).all(|w| w[1] <= w[0] + tol)
    }
}

/// Bishop–Gromov ratio `Vol(B(p,δ)) / Vol(B_model(δ))` against the
/// constant-HBSC model `(n, c)`. `samples` holds `(δ, volume)` pairs with
/// strictly ascending `δ > 0`.
pub fn bg_ratio(samples: &[(f64, f64)], n: usize, c: f64, model: &str) -> Result<ComparisonCurve> {
    if samples.windows(2).any(|w| w[1].0 <= w[0].0) || samples.first().is_some_and(|s| s.0 <= 0.0) {
        return Err(invalid("radii must be positive and strictly ascending"));
    }
    let mut grid = Vec::with_capacity(samples.len());
    let mut values = Vec::with_capacity(samples.len());
    for &(delta, vol) in samples {
        grid.push(delta);
        values.push(vol / ball_volume(n, c, delta)?);
    }
    Ok(ComparisonCurve { model: model.to_string(), bound: format!("hbsc(n={n},c={c})"), grid, values })
}
