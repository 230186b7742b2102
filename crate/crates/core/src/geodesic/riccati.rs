//! Radial Riccati integration `S′ + S² + K = 0` for the Hessian of the
//! distance function.
//!
//! The `1/t` singularity at the base point is split off: with `S = I/t + U`
//! the equation becomes `U′ = −2U/t − U² − K`, started at `t₀ = 10h` from the
//! two-term expansion `U(t₀) = −K t₀/3`.

use crate::comparison::domain_end;
use crate::curvature::RadialProfile;
use crate::error::{invalid, Error, Result};
use crate::numkit::{hermitian_eigen, ode, CMatrix};

/// Divergence threshold for `U`; reaching it means a focal point.
const BLOW_UP: f64 = 1e12;

fn check_step(r: f64, h: f64) -> Result<usize> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(invalid(format!("radius must be positive, got {r}")));
    }
    if !(h > 0.0) || h > r / 100.0 {
        return Err(invalid(format!("step must satisfy 0 < h ≤ r/100, got h = {h}, r = {r}")));
    }
    Ok(((r - 10.0 * h) / h).ceil() as usize)
}

/// Integrates the scalar equation `s′ = −s² − κ` to radius `r` with step `h`.
pub fn riccati_scalar(kappa: f64, r: f64, h: f64) -> Result<f64> {
    let steps = check_step(r, h)?;
    let conj = domain_end(kappa);
    if r >= conj {
        return Err(Error::ConjugatePoint { t: conj });
    }
    let t0 = 10.0 * h;
    let mut u = [-kappa * t0 / 3.0];
    let reached = ode::rk4(
        |t, y, dy| dy[0] = -2.0 * y[0] / t - y[0] * y[0] - kappa,
        t0,
        r,
        steps,
        &mut u,
        |_, y| !y[0].is_finite() || y[0].abs() > BLOW_UP,
    );
    if reached < r {
        return Err(Error::ConjugatePoint { t: reached });
    }
    Ok(1.0 / r + u[0])
}

/// Result of integrating a block-diagonal radial profile.
#[derive(Debug, Clone, PartialEq)]
pub struct RiccatiOutcome {
    pub r: f64,
    /// `s(r)` for each block of the profile, in order.
    pub block_values: Vec<f64>,
    /// Principal curvatures of the distance sphere, ascending.
    pub eigenvalues: Vec<f64>,
    /// `Δr = Σ multiplicity · s`.
    pub delta_r: f64,
}

/// Integrates each block of `profile` independently and assembles `Δr`.
pub fn riccati_delta_r(profile: &RadialProfile, r: f64, h: f64) -> Result<RiccatiOutcome> {
    check_step(r, h)?;
    let mut block_values = Vec::with_capacity(profile.blocks.len());
    let mut eigenvalues = Vec::with_capacity(profile.dim());
    let mut delta_r = 0.0;
    for b in &profile.blocks {
        let s = riccati_scalar(b.curvature, r, h)?;
        block_values.push(s);
        eigenvalues.extend(std::iter::repeat_n(s, b.multiplicity));
        delta_r += b.multiplicity as f64 * s;
    }
    eigenvalues.sort_by(f64::total_cmp);
    Ok(RiccatiOutcome { r, block_values, eigenvalues, delta_r })
}

/// Symmetric `S(t)` on the orthogonal complement of `γ′`, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct RiccatiState {
    pub t: f64,
    pub dim: usize,
    pub s: Vec<f64>,
}

impl RiccatiState {
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.s[i * self.dim + j]
    }

    /// `Δr`: the radial direction contributes nothing.
    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn symmetry_deviation(&self) -> f64 {
        let mut dev: f64 = 0.0;
        for i in 0..self.dim {
            for j in 0..i {
                dev = dev.max((self.get(i, j) - self.get(j, i)).abs());
            }
        }
        dev
    }

    /// Ascending eigenvalues.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        let m = CMatrix::from_fn(self.dim, self.dim, |i, j| {
            num_complex::Complex64::new(0.5 * (self.get(i, j) + self.get(j, i)), 0.0)
        });
        Ok(hermitian_eigen(&m)?.values)
    }
}

/// Matrix Riccati equation for a constant symmetric Jacobi operator `k`
/// (`dim × dim`, row-major) along a unit geodesic.
pub fn riccati_matrix(k: &[f64], dim: usize, r: f64, h: f64) -> Result<RiccatiState> {
    if k.len() != dim * dim {
        return Err(invalid(format!("Jacobi operator must have {} entries", dim * dim)));
    }
    let steps = check_step(r, h)?;
    let t0 = 10.0 * h;
    let mut u: Vec<f64> = k.iter().map(|v| -v * t0 / 3.0).collect();
    let reached = ode::rk4(
        |t, y, dy| {
            for i in 0..dim {
                for j in 0..dim {
                    let mut sq = 0.0;
                    for l in 0..dim {
                        sq += y[i * dim + l] * y[l * dim + j];
                    }
                    dy[i * dim + j] = -2.0 * y[i * dim + j] / t - sq - k[i * dim + j];
                }
            }
        },
        t0,
        r,
        steps,
        &mut u,
        |_, y| y.iter().any(|v| !v.is_finite() || v.abs() > BLOW_UP),
    );
    if reached < r {
        return Err(Error::ConjugatePoint { t: reached });
    }
    for i in 0..dim {
        u[i * dim + i] += 1.0 / r;
    }
    Ok(RiccatiState { t: r, dim, s: u })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::comparison::{kahler_model_laplacian, snlog};
    use crate::curvature::RadialBlock;

    #[test]
    fn scalar_matches_closed_form() {
        for kappa in [-2.0, -0.5, 0.0, 0.5, 2.0] {
            let end = domain_end(kappa).min(4.0);
            for frac in [0.02, 0.3, 0.9] {
                let r = end * frac;
                let s = riccati_scalar(kappa, r, r / 1000.0).unwrap();
                assert!((s - snlog(kappa, r).unwrap()).abs() < 1e-8, "κ={kappa} r={r}");
            }
        }
    }

    #[test]
    fn halving_step_reduces_error_by_15() {
        for kappa in [-1.0, 1.0, 2.0] {
            let r = 1.5;
            let exact = snlog(kappa, r).unwrap();
            let e1 = (riccati_scalar(kappa, r, r / 100.0).unwrap() - exact).abs();
            let e2 = (riccati_scalar(kappa, r, r / 200.0).unwrap() - exact).abs();
            assert!(e1 / e2 >= 15.0, "κ={kappa}: {e1:e} → {e2:e}");
        }
    }

    #[test]
    fn conjugate_point_is_an_error() {
        assert!(matches!(riccati_scalar(1.0, 3.2, 0.01), Err(Error::ConjugatePoint { .. })));
        assert!(riccati_scalar(1.0, 1.0, 0.5).is_err());
        assert!(riccati_scalar(1.0, -1.0, 0.001).is_err());
    }

    #[test]
    fn zero_profile_is_euclidean() {
        let p = RadialProfile::space_form(3, 0.0);
        let out = riccati_delta_r(&p, 0.8, 0.001).unwrap();
        assert!((out.delta_r - 5.0 / 0.8).abs() < 1e-12);
    }

    #[test]
    fn space_form_profile_gives_model_laplacian() {
        for n in 1..=3 {
            for c in [-1.0, 0.5, 1.0] {
                let p = RadialProfile::space_form(n, c);
                let r = 0.7;
                let out = riccati_delta_r(&p, r, r / 1000.0).unwrap();
                assert!((out.delta_r - kahler_model_laplacian(n, c, r).unwrap()).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn matrix_form_matches_scalar_blocks() {
        // rotate a diagonal Jacobi operator and compare eigenvalues
        let kappas = [2.0, 0.5, 0.0];
        let (c, s) = (0.6f64, 0.8f64);
        let q = [[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]];
        let mut k = vec![0.0; 9];
        for i in 0..3 {
            for j in 0..3 {
                k[i * 3 + j] = (0..3).map(|l| q[i][l] * kappas[l] * q[j][l]).sum();
            }
        }
        let r = 1.2;
        let st = riccati_matrix(&k, 3, r, r / 500.0).unwrap();
        assert!(st.symmetry_deviation() < 1e-12);
        let mut want: Vec<f64> = kappas.iter().map(|&kk| snlog(kk, r).unwrap()).collect();
        want.sort_by(f64::total_cmp);
        for (g, w) in st.eigenvalues().unwrap().iter().zip(&want) {
            assert!((g - w).abs() < 1e-8);
        }
        let blocks = RadialProfile::new(kappas.iter().map(|&k| RadialBlock { multiplicity: 1, curvature: k }).collect());
        assert!((st.trace() - riccati_delta_r(&blocks, r, r / 500.0).unwrap().delta_r).abs() < 1e-9);
    }
}
