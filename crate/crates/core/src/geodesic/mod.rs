//! Distance-function Hessians along radial geodesics of catalog models.
//!
//! Real tangent vectors use coordinates `(x_0, y_0, x_1, y_1, …)` with
//! `J∂x_a = ∂y_a`; a (1,0)-vector with components `a_j = p_j + i q_j`
//! corresponds to the real vector `Σ p_j ∂x_j + q_j ∂y_j`. A geodesic with
//! mix `λ` runs along `γ′ = Σ λ_i ∂x_{o_i}`, `o_i` the first coordinate of
//! factor `i`.

mod index_form;
mod product;
mod riccati;
mod sweep;

pub use index_form::{
    canonical_field, hessian_upper_bound, index_form, perturbed_field, thm21_suite, unit_vector, FieldSample, Thm21Report,
    EQUALITY_DIST, EQUALITY_GAP,
};
pub use product::{fr_concavity_check, phi, product_laplacian, product_laplacian_max, ConcavityReport};
pub use riccati::{riccati_delta_r, riccati_matrix, riccati_scalar, RiccatiOutcome, RiccatiState};
pub use sweep::{comparison_sweep, k_hessian_check, sample_mixes, BoundKind, KHessianReport, KHessianRow, SweepReport, SweepRow};

use num_complex::Complex64;

use crate::comparison::snlog;
use crate::curvature::{check_mix, KahlerCurvature, ModelSpace, RadialProfile, SpaceFormFactor};
use crate::error::{invalid, Result};
use crate::numkit::{inner, norm, CMatrix, C0};

/// Default Riccati step as a fraction of the radius.
pub const DEFAULT_STEPS_PER_RADIUS: f64 = 1000.0;

/// A unit-speed radial geodesic in a catalog model together with the data
/// needed to integrate its Jacobi equation.
#[derive(Debug, Clone)]
pub struct GeodesicFrame {
    n: usize,
    mix: Vec<f64>,
    factors: Vec<SpaceFormFactor>,
    curvature: KahlerCurvature,
    profile: RadialProfile,
    /// Radial sectional curvature per real coordinate direction.
    kappa: Vec<f64>,
    gamma: Vec<f64>,
    e_gamma: Vec<Complex64>,
    /// Columns: orthonormal basis of `γ′^⊥` (row-major, `2n × (2n−1)`).
    normal: Vec<f64>,
}

impl GeodesicFrame {
    pub fn new(model: &ModelSpace, mix: &[f64]) -> Result<Self> {
        let factors = model.space_form_factors()?;
        check_mix(mix, factors.len())?;
        let n = model.dim();
        let mut kappa = vec![0.0; 2 * n];
        let mut gamma = vec![0.0; 2 * n];
        let mut e_gamma = vec![C0; n];
        for (f, &l) in factors.iter().zip(mix) {
            let l2 = l * l;
            for a in f.offset..f.offset + f.n {
                if a == f.offset {
                    kappa[2 * a] = 0.0;
                    kappa[2 * a + 1] = 2.0 * f.c * l2;
                } else {
                    kappa[2 * a] = f.c * l2 / 2.0;
                    kappa[2 * a + 1] = f.c * l2 / 2.0;
                }
            }
            gamma[2 * f.offset] = l;
            e_gamma[f.offset] = Complex64::new(l, 0.0);
        }
        let normal = orthonormal_complement(&gamma);
        Ok(Self {
            n,
            mix: mix.to_vec(),
            factors,
            curvature: model.curvature()?,
            profile: model.radial_profile(mix)?,
            kappa,
            gamma,
            e_gamma,
            normal,
        })
    }

    /// Complex dimension.
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn mix(&self) -> &[f64] {
        &self.mix
    }

    pub fn factors(&self) -> &[SpaceFormFactor] {
        &self.factors
    }

    pub fn curvature(&self) -> &KahlerCurvature {
        &self.curvature
    }

    pub fn profile(&self) -> &RadialProfile {
        &self.profile
    }

    /// `E_γ = (γ′ − iJγ′)/√2` as a unit (1,0)-vector.
    pub fn e_gamma(&self) -> &[Complex64] {
        &self.e_gamma
    }

    pub fn gamma(&self) -> &[f64] {
        &self.gamma
    }

    /// First conjugate radius along this geodesic.
    pub fn conjugate_radius(&self) -> f64 {
        self.profile.conjugate_radius()
    }

    fn normal_col(&self, j: usize) -> impl Iterator<Item = f64> + '_ {
        let m = 2 * self.n - 1;
        (0..2 * self.n).map(move |i| self.normal[i * m + j])
    }

    /// Jacobi operator `K = R(·, γ′)γ′` in the orthonormal basis of `γ′^⊥`.
    pub fn jacobi_normal(&self) -> Vec<f64> {
        let m = 2 * self.n - 1;
        let mut k = vec![0.0; m * m];
        for a in 0..m {
            for b in 0..m {
                k[a * m + b] = self.normal_col(a).zip(self.normal_col(b)).zip(&self.kappa).map(|((x, y), kk)| x * kk * y).sum();
            }
        }
        k
    }

    /// Riccati state at radius `ell` with step `ell / DEFAULT_STEPS_PER_RADIUS`.
    pub fn riccati(&self, ell: f64) -> Result<RiccatiState> {
        self.riccati_with_step(ell, ell / DEFAULT_STEPS_PER_RADIUS)
    }

    pub fn riccati_with_step(&self, ell: f64, h: f64) -> Result<RiccatiState> {
        riccati_matrix(&self.jacobi_normal(), 2 * self.n - 1, ell, h)
    }

    /// Full real Hessian `2n × 2n` (row-major) from a Riccati state.
    pub fn real_hessian(&self, state: &RiccatiState) -> Vec<f64> {
        let big = 2 * self.n;
        let m = big - 1;
        let mut out = vec![0.0; big * big];
        for i in 0..big {
            for j in 0..big {
                let mut acc = 0.0;
                for a in 0..m {
                    for b in 0..m {
                        acc += self.normal[i * m + a] * state.get(a, b) * self.normal[j * m + b];
                    }
                }
                out[i * big + j] = acc;
            }
        }
        out
    }

    /// Closed-form real Hessian: `snlog(κ_d, ℓ)` per coordinate direction,
    /// `1/ℓ` on the flat span of the factor velocities, `0` along `γ′`.
    pub fn closed_form_hessian(&self, ell: f64) -> Result<Vec<f64>> {
        let big = 2 * self.n;
        let mut out = vec![0.0; big * big];
        for d in 0..big {
            out[d * big + d] = snlog(self.kappa[d], ell)?;
        }
        for i in 0..big {
            for j in 0..big {
                out[i * big + j] -= self.gamma[i] * self.gamma[j] / ell;
            }
        }
        Ok(out)
    }

    /// `(∂∂̄r)(X, X̄) = ½(Hess r(v, v) + Hess r(Jv, Jv))` for `X = (v − iJv)/√2`.
    pub fn levi_form(&self, hess: &[f64], x: &[Complex64]) -> f64 {
        let v = to_real(x);
        let jv = apply_j(&v);
        0.5 * (real_quadratic(hess, &v) + real_quadratic(hess, &jv))
    }

    /// Hermitian matrix `H` with `X†HX = (∂∂̄r)(X, X̄)`, by polarization.
    pub fn levi_matrix(&self, hess: &[f64]) -> CMatrix {
        let n = self.n;
        let unit = |a: usize, z: Complex64| {
            let mut e = vec![C0; n];
            e[a] = z;
            e
        };
        let q = |x: Vec<Complex64>| self.levi_form(hess, &x);
        CMatrix::from_fn(n, n, |a, b| {
            if a == b {
                return Complex64::new(q(unit(a, Complex64::new(1.0, 0.0))), 0.0);
            }
            let sum = |s: Complex64| {
                let mut e = unit(a, Complex64::new(1.0, 0.0));
                e[b] = s;
                q(e)
            };
            let one = Complex64::new(1.0, 0.0);
            let i = Complex64::new(0.0, 1.0);
            let re = (sum(one) - sum(-one)) / 4.0;
            let im = -(sum(i) - sum(-i)) / 4.0;
            Complex64::new(re, im)
        })
    }

    /// Orthonormal basis of `E_γ^⊥ ⊂ T¹⁰` as the columns of an `n × (n−1)` matrix.
    pub fn complex_normal_basis(&self) -> CMatrix {
        let n = self.n;
        let mut basis: Vec<Vec<Complex64>> = vec![self.e_gamma.clone()];
        for a in 0..n {
            let mut v = vec![C0; n];
            v[a] = Complex64::new(1.0, 0.0);
            for b in &basis {
                let p = inner(&v, b);
                v.iter_mut().zip(b).for_each(|(x, y)| *x -= p * y);
            }
            let len = norm(&v);
            if len > 1e-6 && basis.len() < n {
                v.iter_mut().for_each(|x| *x /= len);
                basis.push(v);
            }
        }
        let mut m = CMatrix::zeros(n, n - 1);
        for (j, col) in basis[1..].iter().enumerate() {
            m.set_column(j, col);
        }
        m
    }
}

fn orthonormal_complement(gamma: &[f64]) -> Vec<f64> {
    let big = gamma.len();
    let mut basis: Vec<Vec<f64>> = vec![gamma.to_vec()];
    // coordinate vectors ordered by how little they overlap with γ′
    let mut order: Vec<usize> = (0..big).collect();
    order.sort_by(|&a, &b| gamma[a].abs().total_cmp(&gamma[b].abs()));
    for d in order {
        let mut v = vec![0.0; big];
        v[d] = 1.0;
        for _ in 0..2 {
            for b in &basis {
                let p: f64 = v.iter().zip(b).map(|(x, y)| x * y).sum();
                v.iter_mut().zip(b).for_each(|(x, y)| *x -= p * y);
            }
        }
        let len = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if len > 1e-6 && basis.len() < big {
            v.iter_mut().for_each(|x| *x /= len);
            basis.push(v);
        }
    }
    let m = big - 1;
    let mut out = vec![0.0; big * m];
    for (j, col) in basis[1..].iter().enumerate() {
        for i in 0..big {
            out[i * m + j] = col[i];
        }
    }
    out
}

pub(crate) fn to_real(x: &[Complex64]) -> Vec<f64> {
    x.iter().flat_map(|z| [z.re, z.im]).collect()
}

pub(crate) fn apply_j(v: &[f64]) -> Vec<f64> {
    v.chunks(2).flat_map(|p| [-p[1], p[0]]).collect()
}

fn real_quadratic(m: &[f64], v: &[f64]) -> f64 {
    let big = v.len();
    let mut acc = 0.0;
    for i in 0..big {
        for j in 0..big {
            acc += v[i] * m[i * big + j] * v[j];
        }
    }
    acc
}

pub(crate) fn require_unit_mix(mix: &[f64]) -> Result<()> {
    let s: f64 = mix.iter().map(|l| l * l).sum();
    if (s - 1.0).abs() > 1e-12 {
        return Err(invalid(format!("mix must satisfy Σλ² = 1, got {s}")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::comparison::kahler_model_laplacian;
    use crate::numkit::{complex_gaussian, rng_from_seed};
    use std::f64::consts::FRAC_1_SQRT_2;

    fn product() -> ModelSpace {
        ModelSpace::cp1_product(2).unwrap()
    }

    #[test]
    fn normal_basis_is_orthonormal_and_orthogonal_to_gamma() {
        let f = GeodesicFrame::new(&ModelSpace::cp1_product(3).unwrap(), &[0.6, 0.0, 0.8]).unwrap();
        let m = 5;
        for a in 0..m {
            let ca: Vec<f64> = f.normal_col(a).collect();
            let g: f64 = ca.iter().zip(f.gamma()).map(|(x, y)| x * y).sum();
            assert!(g.abs() < 1e-14);
            for b in 0..m {
                let cb: Vec<f64> = f.normal_col(b).collect();
                let ip: f64 = ca.iter().zip(&cb).map(|(x, y)| x * y).sum();
                assert!((ip - if a == b { 1.0 } else { 0.0 }).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn jacobi_operator_matches_profile() {
        let f = GeodesicFrame::new(&product(), &[FRAC_1_SQRT_2, FRAC_1_SQRT_2]).unwrap();
        let k = f.jacobi_normal();
        let kc = CMatrix::from_fn(3, 3, |i, j| Complex64::new(k[i * 3 + j], 0.0));
        let ev = crate::numkit::hermitian_eigen(&kc).unwrap().values;
        let want = f.profile().expanded();
        for (g, w) in ev.iter().zip(&want) {
            assert!((g - w).abs() < 1e-14);
        }
    }

    #[test]
    fn riccati_hessian_matches_closed_form() {
        for (model, mix) in [
            (ModelSpace::space_form(3, 1.0).unwrap(), vec![1.0]),
            (ModelSpace::space_form(2, -0.5).unwrap(), vec![1.0]),
            (product(), vec![0.6, 0.8]),
        ] {
            let f = GeodesicFrame::new(&model, &mix).unwrap();
            let ell = 0.8;
            let num = f.real_hessian(&f.riccati(ell).unwrap());
            let exact = f.closed_form_hessian(ell).unwrap();
            let dev = num.iter().zip(&exact).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            assert!(dev < 1e-9, "{model}: {dev:e}");
        }
    }

    #[test]
    fn trace_is_model_laplacian() {
        let f = GeodesicFrame::new(&ModelSpace::space_form(3, 1.0).unwrap(), &[1.0]).unwrap();
        let st = f.riccati(1.1).unwrap();
        assert!((st.trace() - kahler_model_laplacian(3, 1.0, 1.1).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn levi_matrix_reproduces_form() {
        let f = GeodesicFrame::new(&ModelSpace::cp1_product(3).unwrap(), &[0.5, 0.5, FRAC_1_SQRT_2]).unwrap();
        let hess = f.closed_form_hessian(0.9).unwrap();
        let h = f.levi_matrix(&hess);
        assert!(h.is_hermitian());
        let mut rng = rng_from_seed(3);
        for _ in 0..50 {
            let x: Vec<Complex64> = (0..3).map(|_| complex_gaussian(&mut rng)).collect();
            let q = h.quadratic_form(&x);
            assert!(q.im.abs() < 1e-12);
            assert!((q.re - f.levi_form(&hess, &x)).abs() < 1e-12);
        }
    }

    #[test]
    fn space_form_levi_eigenvalues() {
        let (c, ell) = (1.0, 0.9);
        let f = GeodesicFrame::new(&ModelSpace::space_form(3, c).unwrap(), &[1.0]).unwrap();
        let hess = f.closed_form_hessian(ell).unwrap();
        let h = f.levi_matrix(&hess);
        let eg = f.e_gamma().to_vec();
        assert!((h.quadratic_form(&eg).re - 0.5 * snlog(2.0 * c, ell).unwrap()).abs() < 1e-14);
        let w = f.complex_normal_basis();
        let ev = crate::numkit::hermitian_eigen(&h.compress(&w)).unwrap().values;
        for v in ev {
            assert!((v - snlog(c / 2.0, ell).unwrap()).abs() < 1e-14);
        }
    }

    #[test]
    fn rejects_bad_mix_and_hyperquadric() {
        assert!(GeodesicFrame::new(&product(), &[1.0, 0.1]).is_err());
        assert!(GeodesicFrame::new(&ModelSpace::hyperquadric(3).unwrap(), &[1.0]).is_err());
    }
}
