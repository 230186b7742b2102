//! Distance Laplacian on products of complex curves.

use std::f64::consts::FRAC_PI_2;

use super::require_unit_mix;
use crate::comparison::snlog;
use crate::error::{invalid, Result};

/// `Δr = Σ f_r(h_i λ_i²) + (n−1) f_r(0)` with `f_r(x) = snlog(x, r)`, for
/// `n` complex curves of holomorphic sectional curvature `h_i` and a geodesic
/// whose component in factor `i` has speed `λ_i`.
///
/// Terms are summed in sorted order, so the value is exactly invariant under
/// permutations of the `(h_i, λ_i)` pairs.
pub fn product_laplacian(hsc: &[f64], r: f64, mix: &[f64]) -> Result<f64> {
    if hsc.is_empty() || hsc.len() != mix.len() {
        return Err(invalid(format!("need one mix entry per factor, got {} and {}", hsc.len(), mix.len())));
    }
    require_unit_mix(mix)?;
    let mut terms = Vec::with_capacity(hsc.len());
    for (&h, &l) in hsc.iter().zip(mix) {
        terms.push(snlog(h * l * l, r)?);
    }
    terms.sort_by(f64::total_cmp);
    let flat = (hsc.len() - 1) as f64 * snlog(0.0, r)?;
    Ok(terms.iter().sum::<f64>() + flat)
}

/// `n f_r((n+1)/n) + (n−1) f_r(0)`: the maximum over mixes on
/// `(ℂP¹, 2/(n+1)·ω_FS)ⁿ`, attained at `λ_i² = 1/n`.
pub fn product_laplacian_max(n: usize, r: f64) -> Result<f64> {
    if n == 0 {
        return Err(invalid("n must be ≥ 1"));
    }
    let nf = n as f64;
    Ok(nf * snlog((nf + 1.0) / nf, r)? + (nf - 1.0) * snlog(0.0, r)?)
}

/// `φ(θ) = 2θ² − θ tan θ − sin² θ`.
pub fn phi(theta: f64) -> f64 {
    2.0 * theta * theta - theta * theta.tan() - theta.sin().powi(2)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConcavityReport {
    pub r: f64,
    /// Largest second difference of `f_r` on the grid of `(0, π²/r²)`.
    pub max_second_difference: f64,
    /// Largest second difference restricted to `√x·r ∈ [π/2, π)`.
    pub max_second_difference_upper: f64,
    /// Largest `φ(θ) + θ⁶/36` on the θ grid; non-positive when the auxiliary
    /// inequality holds.
    pub phi_excess: f64,
    pub concave: bool,
}

/// Checks that `x ↦ f_r(x)` is concave on `(0, π²/r²)` by second differences
/// on `grid` interior points, and that `φ(θ) ≤ −θ⁶/36` on `grid` points of
/// `(0, π/2 − 0.01)`.
pub fn fr_concavity_check(r: f64, grid: usize) -> Result<ConcavityReport> {
    if !(r > 0.0) || grid < 3 {
        return Err(invalid("need r > 0 and at least 3 grid points"));
    }
    let top = (std::f64::consts::PI / r).powi(2);
    let d = top / (grid + 1) as f64;
    let mut max_sd = f64::NEG_INFINITY;
    let mut max_upper = f64::NEG_INFINITY;
    let mut concave = true;
    for j in 2..grid {
        let x = d * j as f64;
        let f0 = snlog(x - d, r)?;
        let f1 = snlog(x, r)?;
        let f2 = snlog(x + d, r)?;
        let sd = f0 - 2.0 * f1 + f2;
        // rounding noise of the three evaluations
        let slack = 1e-12 * (f0.abs() + 2.0 * f1.abs() + f2.abs());
        if sd > slack {
            concave = false;
        }
        max_sd = max_sd.max(sd);
        if x.sqrt() * r >= FRAC_PI_2 {
            max_upper = max_upper.max(sd);
        }
    }
    let mut phi_excess = f64::NEG_INFINITY;
    let end = FRAC_PI_2 - 0.01;
    for j in 1..=grid {
        let theta = end * j as f64 / grid as f64;
        phi_excess = phi_excess.max(phi(theta) + theta.powi(6) / 36.0);
    }
    Ok(ConcavityReport {
        r,
        max_second_difference: max_sd,
        max_second_difference_upper: max_upper,
        phi_excess,
        concave: concave && phi_excess <= 0.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvature::ModelSpace;
    use crate::geodesic::riccati_delta_r;
    use crate::numkit::rng_from_seed;
    use rand::Rng;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn f(x: f64, r: f64) -> f64 {
        snlog(x, r).unwrap()
    }

    #[test]
    fn lemma_examples() {
        let r = 0.8;
        let axis = product_laplacian(&[3.0, 3.0], r, &[1.0, 0.0]).unwrap();
        assert!((axis - (f(3.0, r) + 2.0 * f(0.0, r))).abs() < 1e-14);
        let diag = product_laplacian(&[3.0, 3.0], r, &[FRAC_1_SQRT_2, FRAC_1_SQRT_2]).unwrap();
        assert!((diag - (2.0 * f(1.5, r) + f(0.0, r))).abs() < 1e-14);
        assert!((diag - product_laplacian_max(2, r).unwrap()).abs() < 1e-14);
        assert!((product_laplacian(&[2.0], r, &[1.0]).unwrap() - f(2.0, r)).abs() < 1e-15);
    }

    #[test]
    fn permutation_invariance_is_exact() {
        let mut rng = rng_from_seed(9);
        for _ in 0..200 {
            let h: Vec<f64> = (0..4).map(|_| rng.gen_range(0.5..4.0)).collect();
            let mut l: Vec<f64> = (0..4).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let s = l.iter().map(|x| x * x).sum::<f64>().sqrt();
            l.iter_mut().for_each(|x| *x /= s);
            let r = rng.gen_range(0.05..1.0);
            let a = product_laplacian(&h, r, &l).unwrap();
            let b = product_laplacian(&[h[2], h[0], h[3], h[1]], r, &[l[2], l[0], l[3], l[1]]).unwrap();
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }

    #[test]
    fn agrees_with_riccati_on_assembled_profiles() {
        let mut rng = rng_from_seed(42);
        for n in 2..=3 {
            let model = ModelSpace::cp1_product(n).unwrap();
            let h = vec![(n + 1) as f64; n];
            for _ in 0..30 {
                let mut l: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
                let s = l.iter().map(|x| x * x).sum::<f64>().sqrt();
                l.iter_mut().for_each(|x| *x /= s);
                let profile = model.radial_profile(&l).unwrap();
                let r = rng.gen_range(0.05..0.95) * profile.conjugate_radius().min(3.0);
                let ric = riccati_delta_r(&profile, r, r / 1000.0).unwrap().delta_r;
                let closed = product_laplacian(&h, r, &l).unwrap();
                assert!((ric - closed).abs() < 1e-6, "n={n} r={r} λ={l:?}");
            }
        }
    }

    #[test]
    fn maximizer_is_uniform_mix() {
        let mut rng = rng_from_seed(1);
        let r = 0.5;
        let max = product_laplacian_max(2, r).unwrap();
        let mut best = (f64::NEG_INFINITY, 0.0);
        for _ in 0..1000 {
            let th: f64 = rng.gen_range(0.0..FRAC_PI_2);
            let v = product_laplacian(&[3.0, 3.0], r, &[th.cos(), th.sin()]).unwrap();
            assert!(v <= max + 1e-9);
            if v > best.0 {
                best = (v, th);
            }
        }
        let at_uniform = product_laplacian(&[3.0, 3.0], r, &[FRAC_1_SQRT_2, FRAC_1_SQRT_2]).unwrap();
        assert!((at_uniform - max).abs() < 1e-6);
        assert!((best.1.cos().powi(2) - 0.5).abs() < 1e-2);
    }

    #[test]
    fn concavity() {
        for r in [0.3, 1.0, 2.0] {
            let rep = fr_concavity_check(r, 2000).unwrap();
            assert!(rep.concave, "{rep:?}");
            assert!(rep.max_second_difference_upper <= 0.0);
        }
        let rep = fr_concavity_check(1.0, 10_000).unwrap();
        assert!(rep.phi_excess <= 0.0);
    }

    #[test]
    fn phi_series() {
        // φ(θ) = −8θ⁶/45 + O(θ⁸)
        let t: f64 = 0.05;
        assert!((phi(t) / t.powi(6) + 8.0 / 45.0).abs() < 1e-2);
    }

    #[test]
    fn domain_and_validation() {
        assert!(product_laplacian(&[3.0, 3.0], 2.0, &[1.0, 0.0]).is_err());
        assert!(product_laplacian(&[3.0, 3.0], 0.5, &[1.0, 1.0]).is_err());
        assert!(product_laplacian(&[3.0], 0.5, &[1.0, 0.0]).is_err());
    }
}
