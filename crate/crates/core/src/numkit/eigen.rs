use num_complex::Complex64;

use super::{CMatrix, C0};
use crate::error::{Error, Result};
use crate::tolerance;

const MAX_SWEEPS: usize = 100;

/// Eigen-decomposition `A = V Λ V†` of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    /// Eigenvalues in ascending order.
    pub values: Vec<f64>,
    /// Unitary matrix whose j-th column belongs to `values[j]`.
    pub vectors: CMatrix,
}

impl HermitianEigen {
    /// Sum of the `k` smallest eigenvalues.
    pub fn lowest_sum(&self, k: usize) -> f64 {
        self.values[..k].iter().sum()
    }

    /// `‖A − V Λ V†‖_F`.
    pub fn residual(&self, a: &CMatrix) -> f64 {
        let lambda = CMatrix::from_real_diag(&self.values);
        let rebuilt = &(&self.vectors * &lambda) * &self.vectors.adjoint();
        a.sub(&rebuilt).norm()
    }
}

/// Cyclic complex Jacobi eigensolver.
///
/// Each rotation first removes the phase of the pivot `a_pq` and then applies
/// the classical real Jacobi rotation that annihilates it. Sweeps continue
/// until the off-diagonal mass drops below `ε·‖A‖`.
pub fn hermitian_eigen(a: &CMatrix) -> Result<HermitianEigen> {
    if !a.is_square() {
        return Err(Error::InvalidArgument(format!("eigen-decomposition needs a square matrix, got {}x{}", a.rows(), a.cols())));
    }
    let deviation = a.hermitian_deviation();
    if deviation > tolerance::HERMITIAN_REL * (1.0 + a.norm()) {
        return Err(Error::NotHermitian { deviation });
    }

    let n = a.rows();
    // symmetrise so that the iteration sees an exactly Hermitian matrix
    let mut m = CMatrix::from_fn(n, n, |i, j| (a[(i, j)] + a[(j, i)].conj()) * 0.5);
    let mut v = CMatrix::identity(n);
    let scale = m.norm().max(f64::MIN_POSITIVE);
    let target = f64::EPSILON * scale;

    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m[(i, j)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= target {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut m, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| m[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]));
    let values = order.iter().map(|&i| diag[i]).collect();
    let vectors = CMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    Ok(HermitianEigen { values, vectors })
}

fn rotate(m: &mut CMatrix, v: &mut CMatrix, p: usize, q: usize) {
    let apq = m[(p, q)];
    let mag = apq.norm();
    if mag == 0.0 {
        return;
    }
    let n = m.rows();
    let app = m[(p, p)].re;
    let aqq = m[(q, q)].re;
    // tiny pivots relative to both diagonals are flushed, as in the real algorithm
    if mag < f64::EPSILON * 1e-3 * (app.abs() + aqq.abs()) {
        m[(p, q)] = C0;
        m[(q, p)] = C0;
        return;
    }
    let phase = apq / mag;
    let theta = (aqq - app) / (2.0 * mag);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let t = if theta == 0.0 { 1.0 } else { t };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    // G = D·R with D = diag(1, conj(phase)) on (p, q)
    let g_pp = Complex64::new(c, 0.0);
    let g_pq = Complex64::new(s, 0.0);
    let g_qp = -phase.conj() * s;
    let g_qq = phase.conj() * c;

    for k in 0..n {
        let akp = m[(k, p)];
        let akq = m[(k, q)];
        m[(k, p)] = akp * g_pp + akq * g_qp;
        m[(k, q)] = akp * g_pq + akq * g_qq;
    }
    for k in 0..n {
        let apk = m[(p, k)];
        let aqk = m[(q, k)];
        m[(p, k)] = g_pp.conj() * apk + g_qp.conj() * aqk;
        m[(q, k)] = g_pq.conj() * apk + g_qq.conj() * aqk;
    }
    m[(p, q)] = C0;
    m[(q, p)] = C0;
    m[(p, p)] = Complex64::new(m[(p, p)].re, 0.0);
    m[(q, q)] = Complex64::new(m[(q, q)].re, 0.0);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * g_pp + vkq * g_qp;
        v[(k, q)] = vkp * g_pq + vkq * g_qq;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkit::{random_unitary, rng_from_seed};
    use rand::Rng;

    fn random_hermitian(n: usize, seed: u64) -> CMatrix {
        let mut rng = rng_from_seed(seed);
        let mut m = CMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(rng.gen_range(-2.0..2.0), 0.0);
            for j in (i + 1)..n {
                let z = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                m[(i, j)] = z;
                m[(j, i)] = z.conj();
            }
        }
        m
    }

    #[test]
    fn identity_and_diagonal() {
        let e = hermitian_eigen(&CMatrix::identity(3)).unwrap();
        assert_eq!(e.values, vec![1.0, 1.0, 1.0]);
        let e = hermitian_eigen(&CMatrix::from_real_diag(&[3.0, 1.0, 2.0])).unwrap();
        assert_eq!(e.values, vec![1.0, 2.0, 3.0]);
        // eigenvector of 1 is e_1
        assert!((e.vectors[(1, 0)].norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_non_hermitian() {
        let mut m = CMatrix::identity(2);
        m[(0, 1)] = Complex64::new(1.0, 0.0);
        assert!(matches!(hermitian_eigen(&m), Err(Error::NotHermitian { .. })));
        assert!(hermitian_eigen(&CMatrix::zeros(2, 3)).is_err());
    }

    /// det(H − λI) for a 3×3 Hermitian matrix; real up to rounding.
    fn charpoly3(h: &CMatrix, lambda: f64) -> f64 {
        let a = |i: usize, j: usize| {
            if i == j {
                h[(i, j)] - lambda
            } else {
                h[(i, j)]
            }
        };
        let det = a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) - a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0))
            + a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
        det.re
    }

    fn bisection_roots(h: &CMatrix) -> Vec<f64> {
        let bound = 1.0 + (0..3).map(|i| (0..3).map(|j| h[(i, j)].norm()).sum::<f64>()).fold(0.0, f64::max);
        let steps = 20_000;
        let mut roots = Vec::new();
        let grid: Vec<f64> = (0..=steps).map(|s| -bound + 2.0 * bound * s as f64 / steps as f64).collect();
        for w in grid.windows(2) {
            let (mut lo, mut hi) = (w[0], w[1]);
            let (flo, fhi) = (charpoly3(h, lo), charpoly3(h, hi));
            if flo == 0.0 {
                roots.push(lo);
                continue;
            }
            if flo * fhi > 0.0 {
                continue;
            }
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if charpoly3(h, lo) * charpoly3(h, mid) <= 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            roots.push(0.5 * (lo + hi));
        }
        roots
    }

    #[test]
    fn matches_characteristic_polynomial_roots() {
        for seed in 0..20 {
            let h = random_hermitian(3, seed);
            let roots = bisection_roots(&h);
            assert_eq!(roots.len(), 3, "seed {seed}: expected three simple roots");
            let e = hermitian_eigen(&h).unwrap();
            for (got, want) in e.values.iter().zip(&roots) {
                assert!((got - want).abs() < 1e-9, "seed {seed}: {got} vs {want}");
            }
        }
    }

    #[test]
    fn reconstruction_1000_random() {
        for trial in 0..1000u64 {
            let n = 1 + (trial as usize % 12);
            let h = random_hermitian(n, 1000 + trial);
            let e = hermitian_eigen(&h).unwrap();
            let res = e.residual(&h);
            assert!(res <= 1e-9 * h.norm().max(1e-300), "trial {trial}: residual {res}");
            assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
            // A V = V Λ columnwise
            for j in 0..n {
                let av = h.mul_vec(&e.vectors.column(j));
                let lv: Vec<_> = e.vectors.column(j).iter().map(|z| z * e.values[j]).collect();
                let d: f64 = av.iter().zip(&lv).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt();
                assert!(d <= 1e-10 * h.norm(), "trial {trial} col {j}: {d}");
            }
        }
    }

    #[test]
    fn degenerate_spectrum_after_conjugation() {
        let u = random_unitary(5, 7).unwrap();
        let d = CMatrix::from_real_diag(&[2.0, 2.0, -1.0, 2.0, 0.5]);
        let h = &(&u * &d) * &u.adjoint();
        let e = hermitian_eigen(&h).unwrap();
        let want = [-1.0, 0.5, 2.0, 2.0, 2.0];
        for (g, w) in e.values.iter().zip(want) {
            assert!((g - w).abs() < 1e-12);
        }
    }

    #[test]
    fn handles_78_dimensional_input() {
        let h = random_hermitian(78, 99);
        let e = hermitian_eigen(&h).unwrap();
        assert!(e.residual(&h) <= 1e-10 * h.norm());
    }
}
