//! The symmetrized curvature operator on `Sym² T¹⁰`.
//!
//! In the orthonormal basis `E_p⊗E_p` and `(E_p⊗E_q + E_q⊗E_p)/√2` the matrix
//! entries are `μ_pq μ_rs R_{p r̄ q s̄}` with `μ = √2` on off-diagonal pairs
//! and `1` on diagonal ones.

use std::f64::consts::SQRT_2;

use num_complex::Complex64;
use rand_distr::{Distribution, Uniform};

use crate::curvature::KahlerCurvature;
use crate::error::{invalid, Error, Result};
use crate::numkit::{hermitian_eigen, random_unitary_with, CMatrix, HermitianEigen, SeededRng, C0};
use crate::tolerance;

/// Ordered basis of `Sym² ℂⁿ`: pairs `(p, q)` with `p ≤ q`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymBasis {
    n: usize,
    pairs: Vec<(usize, usize)>,
}

impl SymBasis {
    pub fn new(n: usize) -> Self {
        let pairs = (0..n).flat_map(|p| (p..n).map(move |q| (p, q))).collect();
        Self { n, pairs }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `N = n(n+1)/2`.
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    /// Position of the unordered pair `{i, k}`.
    pub fn position(&self, i: usize, k: usize) -> usize {
        let (p, q) = if i <= k { (i, k) } else { (k, i) };
        // pairs before row p: n + (n-1) + ... + (n-p+1)
        p * self.n - p * (p.saturating_sub(1)) / 2 + (q - p)
    }

    /// `√2` for `p < q`, `1` for `p = q`.
    pub fn weight(&self, a: usize) -> f64 {
        let (p, q) = self.pairs[a];
        if p == q {
            1.0
        } else {
            SQRT_2
        }
    }

    /// Element `a` as an `n×n` symmetric coefficient array `a^{ik}`.
    pub fn element(&self, a: usize) -> CMatrix {
        let (p, q) = self.pairs[a];
        let mut m = CMatrix::zeros(self.n, self.n);
        if p == q {
            m[(p, p)] = Complex64::new(1.0, 0.0);
        } else {
            m[(p, q)] = Complex64::new(1.0 / SQRT_2, 0.0);
            m[(q, p)] = Complex64::new(1.0 / SQRT_2, 0.0);
        }
        m
    }
}

/// Matrix and spectrum of `𝒮`.
#[derive(Debug, Clone)]
pub struct SymOperator {
    basis: SymBasis,
    mat: CMatrix,
    eigen: HermitianEigen,
}

impl SymOperator {
    /// Assembles `𝒮` from a curvature tensor. Tensors violating the Kähler
    /// symmetries are rejected.
    pub fn build(r: &KahlerCurvature) -> Result<Self> {
        r.check_symmetries()?;
        let basis = SymBasis::new(r.dim());
        let big_n = basis.len();
        let mut mat = CMatrix::zeros(big_n, big_n);
        for (a, &(p, q)) in basis.pairs().iter().enumerate() {
            for (b, &(s, t)) in basis.pairs().iter().enumerate() {
                let w = basis.weight(a) * basis.weight(b);
                mat[(a, b)] = r.get(p, s, q, t) * w;
            }
        }
        Self::from_matrix(basis, mat)
    }

    fn from_matrix(basis: SymBasis, mat: CMatrix) -> Result<Self> {
        let eigen = hermitian_eigen(&mat)?;
        Ok(Self { basis, mat, eigen })
    }

    pub fn n(&self) -> usize {
        self.basis.n()
    }

    /// `N = n(n+1)/2`.
    pub fn size(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &SymBasis {
        &self.basis
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    /// Ascending eigenvalues.
    pub fn spectrum(&self) -> &[f64] {
        &self.eigen.values
    }

    pub fn eigen(&self) -> &HermitianEigen {
        &self.eigen
    }

    /// `𝒮 − 2c·id`.
    pub fn shifted(&self, c: f64) -> Self {
        let shift = CMatrix::identity(self.size()).scale(2.0 * c);
        let values = self.eigen.values.iter().map(|v| v - 2.0 * c).collect();
        Self {
            basis: self.basis.clone(),
            mat: self.mat.sub(&shift),
            eigen: HermitianEigen { values, vectors: self.eigen.vectors.clone() },
        }
    }

    /// Sum of the `k` smallest eigenvalues.
    pub fn k_sum(&self, k: usize) -> Result<f64> {
        check_k(k, self.size())?;
        Ok(self.eigen.lowest_sum(k))
    }

    /// Absolute slack used for sign decisions on this operator.
    pub fn tolerance(&self) -> f64 {
        tolerance::scaled(self.mat.norm())
    }
}

fn check_k(k: usize, dim: usize) -> Result<()> {
    if k == 0 || k > dim {
        return Err(invalid(format!("k must lie in 1..={dim}, got {k}")));
    }
    Ok(())
}

/// Sum of the `k` smallest eigenvalues of `𝒮(R)`.
pub fn k_sum(r: &KahlerCurvature, k: usize) -> Result<f64> {
    SymOperator::build(r)?.k_sum(k)
}

/// Whether `𝒮 − 2c·id` is k-semipositive, with slack `1e-10·(1 + ‖𝒮‖)`.
pub fn is_k_semipositive(r: &KahlerCurvature, c: f64, k: usize) -> Result<bool> {
    let s = SymOperator::build(r)?;
    let tol = s.tolerance();
    Ok(s.shifted(c).k_sum(k)? >= -tol)
}

/// Ky Fan minimum: `min Σ_s ⟨A e_s, e_s⟩` over orthonormal k-frames, which is
/// the sum of the `k` smallest eigenvalues.
pub fn kyfan_min(a: &CMatrix, k: usize) -> Result<f64> {
    check_k(k, a.rows())?;
    Ok(hermitian_eigen(a)?.lowest_sum(k))
}

/// `Σ_s ⟨A e_s, e_s⟩` over the columns of `frame`.
pub fn frame_trace(a: &CMatrix, frame: &CMatrix) -> f64 {
    (0..frame.cols()).map(|s| a.quadratic_form(&frame.column(s)).re).sum()
}

/// Both sides of a frame inequality and its verdict.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

impl FrameCheck {
    pub fn gap(&self) -> f64 {
        self.lhs - self.rhs
    }
}

fn require_k_semipositive(r: &KahlerCurvature, c: f64, k: usize) -> Result<()> {
    if !is_k_semipositive(r, c, k)? {
        return Err(Error::PreconditionUnmet(format!("𝒮 − 2·({c})·id is not {k}-semipositive")));
    }
    Ok(())
}

fn require_frame(r: &KahlerCurvature, frame: &CMatrix) -> Result<()> {
    let n = r.dim();
    if frame.rows() != n || frame.cols() != n {
        return Err(invalid(format!("frame must be {n}×{n}")));
    }
    let dev = (&frame.adjoint() * frame).sub(&CMatrix::identity(n)).max_abs();
    if dev > 1e-10 {
        return Err(invalid(format!("frame is not unitary (deviation {dev:e})")));
    }
    Ok(())
}

/// `R(e, ē, f, f̄)` for frame columns `a`, `b`.
fn frame_hbsc(r: &KahlerCurvature, frame: &CMatrix, a: usize, b: usize) -> f64 {
    let x = frame.column(a);
    let y = frame.column(b);
    r.eval(&x, &x, &y, &y).re
}

/// The mixed estimate
/// `R(E_n,Ē_n,E_n,Ē_n) + α Σ_{i<n} R(E_n,Ē_n,E_i,Ē_i) ≥ 2c + α(n−1)c`,
/// where `E_n` is the last column of `frame`.
///
/// Requires `1 ≤ k < n`, `α ≥ 2(k−1)/(n−1)` and `𝒮 − 2c·id` k-semipositive;
/// failures are reported as [`Error::PreconditionUnmet`].
pub fn mixed_estimate_check(r: &KahlerCurvature, c: f64, k: usize, alpha: f64, frame: &CMatrix) -> Result<FrameCheck> {
    MixedEstimate::new(r, c, k)?.check(alpha, frame)
}

/// [`mixed_estimate_check`] with the hypothesis verified once, for sweeps
/// over many frames and weights.
#[derive(Debug, Clone)]
pub struct MixedEstimate<'a> {
    r: &'a KahlerCurvature,
    c: f64,
    k: usize,
}

impl<'a> MixedEstimate<'a> {
    pub fn new(r: &'a KahlerCurvature, c: f64, k: usize) -> Result<Self> {
        let n = r.dim();
        if k == 0 || k >= n {
            return Err(Error::PreconditionUnmet(format!("need 1 ≤ k < n, got k={k}, n={n}")));
        }
        require_k_semipositive(r, c, k)?;
        Ok(Self { r, c, k })
    }

    /// `2(k−1)/(n−1)`.
    pub fn alpha_min(&self) -> f64 {
        2.0 * (self.k as f64 - 1.0) / (self.r.dim() as f64 - 1.0)
    }

    pub fn check(&self, alpha: f64, frame: &CMatrix) -> Result<FrameCheck> {
        Ok(self.check_many(&[alpha], frame)?[0])
    }

    /// One verdict per weight, sharing the curvature evaluations.
    pub fn check_many(&self, alphas: &[f64], frame: &CMatrix) -> Result<Vec<FrameCheck>> {
        let n = self.r.dim();
        require_frame(self.r, frame)?;
        if let Some(&a) = alphas.iter().find(|&&a| a < self.alpha_min()) {
            return Err(Error::PreconditionUnmet(format!("α = {a} below 2(k−1)/(n−1) = {}", self.alpha_min())));
        }
        let last = frame.column(n - 1);
        let b = self.r.bisectional_form(&last);
        let hsc = b.quadratic_form(&last).re;
        let cross: f64 = (0..n - 1).map(|i| b.quadratic_form(&frame.column(i)).re).sum();
        Ok(alphas
            .iter()
            .map(|&alpha| {
                let lhs = hsc + alpha * cross;
                let rhs = 2.0 * self.c + alpha * (n as f64 - 1.0) * self.c;
                FrameCheck { lhs, rhs, holds: lhs >= rhs - tolerance::INEQUALITY }
            })
            .collect())
    }
}

/// `Ric ≥ (n+1)c` under k-semipositivity of `𝒮 − 2c·id` with `k ≤ (n+1)/2`.
/// Returns the minimum Ricci eigenvalue, the bound and the verdict.
pub fn ricci_from_kpos_check(r: &KahlerCurvature, c: f64, k: usize) -> Result<FrameCheck> {
    let n = r.dim();
    if k == 0 || 2 * k > n + 1 {
        return Err(Error::PreconditionUnmet(format!("need 1 ≤ k ≤ (n+1)/2, got k={k}, n={n}")));
    }
    require_k_semipositive(r, c, k)?;
    let lhs = r.ricci_min_eigenvalue();
    let rhs = (n as f64 + 1.0) * c;
    Ok(FrameCheck { lhs, rhs, holds: lhs >= rhs - tolerance::INEQUALITY })
}

/// `R(E_n,Ē_n,E_n,Ē_n) + 2 Σ_{i<k} R(E_n,Ē_n,E_i,Ē_i) ≥ 2kc`, with `E_n` the
/// last column of `frame` and `E_1..E_{k−1}` its first columns.
pub fn weighted_frame_check(r: &KahlerCurvature, c: f64, k: usize, frame: &CMatrix) -> Result<FrameCheck> {
    let n = r.dim();
    require_frame(r, frame)?;
    if k == 0 || k > n {
        return Err(Error::PreconditionUnmet(format!("need 1 ≤ k ≤ n, got k={k}, n={n}")));
    }
    require_k_semipositive(r, c, k)?;
    let last = n - 1;
    let cross: f64 = (0..k - 1).map(|i| frame_hbsc(r, frame, last, i)).sum();
    let lhs = frame_hbsc(r, frame, last, last) + 2.0 * cross;
    let rhs = 2.0 * k as f64 * c;
    Ok(FrameCheck { lhs, rhs, holds: lhs >= rhs - tolerance::INEQUALITY })
}

/// Inverse of the operator assembly: the unique Kähler tensor whose `𝒮`
/// matrix is `q` (Hermitian, `N×N`).
pub fn tensor_from_sym_form(n: usize, q: &CMatrix) -> Result<KahlerCurvature> {
    let basis = SymBasis::new(n);
    if q.rows() != basis.len() || q.cols() != basis.len() {
        return Err(invalid(format!("form must be {0}×{0}", basis.len())));
    }
    if !q.is_hermitian() {
        return Err(Error::NotHermitian { deviation: q.hermitian_deviation() });
    }
    let mut comp = vec![C0; n.pow(4)];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let a = basis.position(i, k);
                    let b = basis.position(j, l);
                    // average the two stored copies so the result is exactly symmetric
                    let v = (q[(a, b)] + q[(b, a)].conj()) * 0.5;
                    comp[((i * n + j) * n + k) * n + l] = v / (basis.weight(a) * basis.weight(b));
                }
            }
        }
    }
    KahlerCurvature::from_components(n, comp)
}

/// Random Kähler tensor: `𝒮 = U diag(d) U†` with `d` uniform in `[-2, 2]`.
pub fn random_kahler_tensor(n: usize, rng: &mut SeededRng) -> Result<KahlerCurvature> {
    let big_n = n * (n + 1) / 2;
    let u = random_unitary_with(big_n, rng)?;
    let dist = Uniform::new_inclusive(-2.0, 2.0);
    let d: Vec<f64> = (0..big_n).map(|_| dist.sample(rng)).collect();
    let q = &(&u * &CMatrix::from_real_diag(&d)) * &u.adjoint();
    tensor_from_sym_form(n, &q)
}

/// Adds a multiple of the constant-HBSC tensor so that the k smallest
/// eigenvalues of `𝒮 − 2c·id` sum to `margin`. With `margin = 0` the result
/// sits exactly on the boundary of the hypothesis.
pub fn shift_to_hypothesis(r: &KahlerCurvature, c: f64, k: usize, margin: f64) -> Result<KahlerCurvature> {
    let ksum = SymOperator::build(r)?.shifted(c).k_sum(k)?;
    let s = (margin - ksum) / k as f64;
    // (s/2)·const_hbsc(n, 1) shifts 𝒮 by s·id
    r.add_scaled(&KahlerCurvature::const_hbsc(r.dim(), 1.0)?, s / 2.0)
}
