//! Kähler curvature tensors in a fixed unitary frame and the model catalog.
//!
//! Components are stored as `comp(i, j, k, l) = R(E_i, Ē_j, E_k, Ē_l)`. The
//! constant-bisectional-curvature tensor is normalised as
//! `c·(δ_ij δ_kl + δ_il δ_kj)`, which gives `HSC = 2c`, `Ric = (n+1)c` and a
//! symmetrized operator `2c·id`.

mod model;

pub(crate) use model::check_mix;
pub use model::{ModelSpace, RadialBlock, RadialProfile, SpaceFormFactor};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::numkit::{hermitian_eigen, norm, CMatrix, C0};

const UNIT_TOL: f64 = 1e-10;

/// Rank-4 complex curvature array `R_{i j̄ k l̄}` with Kähler symmetries.
#[derive(Debug, Clone, PartialEq)]
pub struct KahlerCurvature {
    n: usize,
    comp: Vec<Complex64>,
}

/// JSON dump: `{ "n": .., "comp": [[re, im], ...] }`, row-major over `(i, j, k, l)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TensorDump {
    pub n: usize,
    pub comp: Vec<[f64; 2]>,
}

/// Results of [`KahlerCurvature::queries`].
#[derive(Debug, Clone)]
pub struct CurvatureQueries {
    pub hsc: f64,
    pub hbsc: f64,
    pub ricci_matrix: CMatrix,
    pub ricci_min_eigenvalue: f64,
}

impl KahlerCurvature {
    pub fn zeros(n: usize) -> Self {
        Self { n, comp: vec![C0; n.pow(4)] }
    }

    fn from_fn(n: usize, mut f: impl FnMut(usize, usize, usize, usize) -> Complex64) -> Self {
        let mut comp = Vec::with_capacity(n.pow(4));
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        comp.push(f(i, j, k, l));
                    }
                }
            }
        }
        Self { n, comp }
    }

    /// Validating constructor from a flat row-major component array.
    pub fn from_components(n: usize, comp: Vec<Complex64>) -> Result<Self> {
        if n == 0 {
            return Err(invalid("curvature tensor needs n ≥ 1"));
        }
        if comp.len() != n.pow(4) {
            return Err(invalid(format!("expected {} components, got {}", n.pow(4), comp.len())));
        }
        let r = Self { n, comp };
        r.check_symmetries()?;
        Ok(r)
    }

    /// Constant holomorphic bisectional curvature `c`.
    pub fn const_hbsc(n: usize, c: f64) -> Result<Self> {
        if n == 0 {
            return Err(invalid("const_hbsc needs n ≥ 1"));
        }
        Ok(Self::from_fn(n, |i, j, k, l| {
            let d = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
            Complex64::new(c * (d(i, j) * d(k, l) + d(i, l) * d(k, j)), 0.0)
        }))
    }

    /// Hyperquadric `Q_n ⊂ ℂP^{n+1}` in an adapted unitary frame:
    /// `δ_ij δ_kl + δ_il δ_kj − δ_ik δ_jl`.
    pub fn hyperquadric(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(invalid(format!("hyperquadric needs n ≥ 2, got {n}")));
        }
        Ok(Self::from_fn(n, |i, j, k, l| {
            let d = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
            Complex64::new(d(i, j) * d(k, l) + d(i, l) * d(k, j) - d(i, k) * d(j, l), 0.0)
        }))
    }

    /// Riemannian product: block tensor, nonzero only when all four indices
    /// lie in one factor.
    pub fn product(factors: &[KahlerCurvature]) -> Result<Self> {
        if factors.is_empty() {
            return Err(invalid("product needs at least one factor"));
        }
        let n: usize = factors.iter().map(|f| f.n).sum();
        let mut out = Self::zeros(n);
        let mut offset = 0;
        for f in factors {
            let m = f.n;
            for i in 0..m {
                for j in 0..m {
                    for k in 0..m {
                        for l in 0..m {
                            let idx = out.index(offset + i, offset + j, offset + k, offset + l);
                            out.comp[idx] = f.get(i, j, k, l);
                        }
                    }
                }
            }
            offset += m;
        }
        Ok(out)
    }

    /// Curvature of `λ·g`: unitary-frame components divide by `λ`.
    pub fn scale_metric(&self, lambda: f64) -> Result<Self> {
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(invalid(format!("metric factor must be positive, got {lambda}")));
        }
        Ok(Self { n: self.n, comp: self.comp.iter().map(|z| z / lambda).collect() })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    fn index(&self, i: usize, j: usize, k: usize, l: usize) -> usize {
        ((i * self.n + j) * self.n + k) * self.n + l
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> Complex64 {
        self.comp[self.index(i, j, k, l)]
    }

    pub fn components(&self) -> &[Complex64] {
        &self.comp
    }

    pub fn max_abs(&self) -> f64 {
        self.comp.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `self + s·other`.
    pub fn add_scaled(&self, other: &Self, s: f64) -> Result<Self> {
        if self.n != other.n {
            return Err(invalid("tensor dimensions differ"));
        }
        Ok(Self { n: self.n, comp: self.comp.iter().zip(&other.comp).map(|(a, b)| a + b * s).collect() })
    }

    /// Largest violation among the pair symmetries and Hermitian reality.
    pub fn symmetry_deviation(&self) -> f64 {
        let n = self.n;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let r = self.get(i, j, k, l);
                        worst = worst
                            .max((r - self.get(k, j, i, l)).norm())
                            .max((r - self.get(i, l, k, j)).norm())
                            .max((r - self.get(j, i, l, k).conj()).norm());
                    }
                }
            }
        }
        worst
    }

    pub fn check_symmetries(&self) -> Result<()> {
        let deviation = self.symmetry_deviation();
        if deviation > crate::tolerance::scaled(self.max_abs()) {
            return Err(Error::SymmetryViolation { deviation });
        }
        Ok(())
    }

    /// `R(X, Ȳ, Z, W̄) = Σ R_{ij̄kl̄} X^i conj(Y^j) Z^k conj(W^l)`.
    pub fn eval(&self, x: &[Complex64], y: &[Complex64], z: &[Complex64], w: &[Complex64]) -> Complex64 {
        let n = self.n;
        let mut acc = C0;
        for i in 0..n {
            if x[i] == C0 {
                continue;
            }
            for j in 0..n {
                let xy = x[i] * y[j].conj();
                if xy == C0 {
                    continue;
                }
                for k in 0..n {
                    let xyz = xy * z[k];
                    if xyz == C0 {
                        continue;
                    }
                    for l in 0..n {
                        acc += xyz * w[l].conj() * self.get(i, j, k, l);
                    }
                }
            }
        }
        acc
    }

    /// The Hermitian matrix `B` with `B_lk = R(X, X̄, E_k, Ē_l)`, so that
    /// `V†BV = R(X, X̄, V, V̄)`.
    pub fn bisectional_form(&self, x: &[Complex64]) -> CMatrix {
        let n = self.n;
        let mut b = CMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let xx = x[i] * x[j].conj();
                if xx == C0 {
                    continue;
                }
                for k in 0..n {
                    for l in 0..n {
                        b[(l, k)] += xx * self.get(i, j, k, l);
                    }
                }
            }
        }
        b
    }

    /// Holomorphic sectional curvature of a unit (1,0)-vector.
    pub fn hsc(&self, x: &[Complex64]) -> Result<f64> {
        self.require_unit(x)?;
        Ok(self.eval(x, x, x, x).re)
    }

    /// Holomorphic bisectional curvature of unit (1,0)-vectors.
    pub fn hbsc(&self, x: &[Complex64], y: &[Complex64]) -> Result<f64> {
        self.require_unit(x)?;
        self.require_unit(y)?;
        Ok(self.eval(x, x, y, y).re)
    }

    /// `Ric_ij = Σ_k R_{ij̄kk̄}`.
    pub fn ricci_matrix(&self) -> CMatrix {
        let n = self.n;
        CMatrix::from_fn(n, n, |i, j| (0..n).map(|k| self.get(i, j, k, k)).sum())
    }

    pub fn ricci_min_eigenvalue(&self) -> f64 {
        hermitian_eigen(&self.ricci_matrix()).expect("Ricci matrix of a Kähler tensor is Hermitian").values[0]
    }

    pub fn queries(&self, x: &[Complex64], y: &[Complex64]) -> Result<CurvatureQueries> {
        let ricci_matrix = self.ricci_matrix();
        let ricci_min_eigenvalue = hermitian_eigen(&ricci_matrix)?.values[0];
        Ok(CurvatureQueries { hsc: self.hsc(x)?, hbsc: self.hbsc(x, y)?, ricci_matrix, ricci_min_eigenvalue })
    }

    /// Components in the frame `E'_a = Σ_i U_ia E_i` (columns of a unitary `U`).
    pub fn transform(&self, u: &CMatrix) -> Result<Self> {
        let n = self.n;
        if u.rows() != n || u.cols() != n {
            return Err(invalid("frame change must be n×n"));
        }
        // contract one slot at a time: O(n⁵) per slot
        let mut cur = self.comp.clone();
        for slot in 0..4 {
            let mut next = vec![C0; n.pow(4)];
            let stride = n.pow(3 - slot as u32);
            for idx in 0..n.pow(4) {
                let digit = (idx / stride) % n;
                let base = idx - digit * stride;
                let mut acc = C0;
                for m in 0..n {
                    let coef = if slot % 2 == 0 { u[(m, digit)] } else { u[(m, digit)].conj() };
                    acc += coef * cur[base + m * stride];
                }
                next[idx] = acc;
            }
            cur = next;
        }
        Ok(Self { n, comp: cur })
    }

    pub fn to_dump(&self) -> TensorDump {
        TensorDump { n: self.n, comp: self.comp.iter().map(|z| [z.re, z.im]).collect() }
    }

    pub fn from_dump(dump: &TensorDump) -> Result<Self> {
        Self::from_components(dump.n, dump.comp.iter().map(|&[re, im]| Complex64::new(re, im)).collect())
    }

    fn require_unit(&self, x: &[Complex64]) -> Result<()> {
        if x.len() != self.n {
            return Err(invalid(format!("vector has length {}, expected {}", x.len(), self.n)));
        }
        let len = norm(x);
        if (len - 1.0).abs() > UNIT_TOL {
            return Err(invalid(format!("vector must be unit, has norm {len}")));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkit::{random_unitary, rng_from_seed};
    use rand::Rng;

    fn basis(n: usize, i: usize) -> Vec<Complex64> {
        let mut v = vec![C0; n];
        v[i] = Complex64::new(1.0, 0.0);
        v
    }

    fn catalog() -> Vec<KahlerCurvature> {
        let mut out = Vec::new();
        for n in 1..=4 {
            for c in [-2.0, -1.0, 0.0, 0.5, 1.0] {
                out.push(KahlerCurvature::const_hbsc(n, c).unwrap());
            }
        }
        for n in 2..=5 {
            out.push(KahlerCurvature::hyperquadric(n).unwrap());
        }
        let cp1 = KahlerCurvature::const_hbsc(1, 1.5).unwrap();
        out.push(KahlerCurvature::product(&[cp1.clone(), cp1.clone(), cp1]).unwrap());
        out.push(
            KahlerCurvature::product(&[KahlerCurvature::const_hbsc(2, 1.0).unwrap(), KahlerCurvature::hyperquadric(2).unwrap()])
                .unwrap(),
        );
        out
    }

    #[test]
    fn cpn_ricci_is_three_at_n_two() {
        let r = KahlerCurvature::const_hbsc(2, 1.0).unwrap();
        let ric = r.ricci_matrix();
        assert!(ric.sub(&CMatrix::identity(2).scale(3.0)).max_abs() < 1e-15);
    }

    #[test]
    fn flat_is_zero() {
        let r = KahlerCurvature::const_hbsc(1, 0.0).unwrap();
        assert_eq!(r, KahlerCurvature::zeros(1));
    }

    #[test]
    fn hyperquadric_ricci_is_n() {
        let r = KahlerCurvature::hyperquadric(2).unwrap();
        assert!(r.ricci_matrix().sub(&CMatrix::identity(2).scale(2.0)).max_abs() < 1e-15);
        // cross-check Σ_k comp(i,j,k,k) = n δ_ij entrywise
        for n in 2..6 {
            let r = KahlerCurvature::hyperquadric(n).unwrap();
            for i in 0..n {
                for j in 0..n {
                    let s: Complex64 = (0..n).map(|k| r.get(i, j, k, k)).sum();
                    let want = if i == j { n as f64 } else { 0.0 };
                    assert_eq!(s, Complex64::new(want, 0.0));
                }
            }
        }
        assert!(KahlerCurvature::hyperquadric(1).is_err());
    }

    #[test]
    fn product_rules() {
        let a = KahlerCurvature::const_hbsc(2, 0.7).unwrap();
        assert_eq!(KahlerCurvature::product(std::slice::from_ref(&a)).unwrap(), a);
        assert!(KahlerCurvature::product(&[]).is_err());
        // (ℂP¹ with HSC n+1)^n has Ricci (n+1)·I
        for n in 1..=4 {
            let h = (n + 1) as f64;
            let f = KahlerCurvature::const_hbsc(1, h / 2.0).unwrap();
            let p = KahlerCurvature::product(&vec![f; n]).unwrap();
            assert!(p.ricci_matrix().sub(&CMatrix::identity(n).scale(h)).max_abs() < 1e-14);
        }
    }

    #[test]
    fn scaling_rules() {
        let r = KahlerCurvature::const_hbsc(1, 1.0).unwrap();
        let s = r.scale_metric(2.0 / 3.0).unwrap();
        assert!((s.hsc(&basis(1, 0)).unwrap() - 3.0).abs() < 1e-14);
        assert_eq!(r.scale_metric(1.0).unwrap(), r);
        let twice = r.scale_metric(0.5).unwrap().scale_metric(3.0).unwrap();
        let once = r.scale_metric(1.5).unwrap();
        for (a, b) in twice.components().iter().zip(once.components()) {
            assert!((a - b).norm() < 1e-15);
        }
        assert!(r.scale_metric(0.0).is_err());
        assert!(r.scale_metric(-1.0).is_err());
    }

    #[test]
    fn const_hbsc_queries() {
        let mut rng = rng_from_seed(5);
        for n in 1..=4 {
            for c in [-1.0, 0.5, 2.0] {
                let r = KahlerCurvature::const_hbsc(n, c).unwrap();
                for seed in 0..10 {
                    let u = random_unitary(n, seed + rng.gen::<u64>() % 1000).unwrap();
                    let x = u.column(0);
                    assert!((r.hsc(&x).unwrap() - 2.0 * c).abs() < 1e-12);
                    if n > 1 {
                        // orthonormal pair: HBSC = c
                        assert!((r.hbsc(&x, &u.column(1)).unwrap() - c).abs() < 1e-12);
                    }
                }
                if n >= 2 {
                    assert!((r.hbsc(&basis(n, 0), &basis(n, 1)).unwrap() - c).abs() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn zero_tensor_queries() {
        let r = KahlerCurvature::zeros(3);
        let q = r.queries(&basis(3, 0), &basis(3, 2)).unwrap();
        assert_eq!((q.hsc, q.hbsc, q.ricci_min_eigenvalue), (0.0, 0.0, 0.0));
    }

    #[test]
    fn non_unit_rejected() {
        let r = KahlerCurvature::const_hbsc(2, 1.0).unwrap();
        let x = vec![Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)];
        assert!(r.hsc(&x).is_err());
        assert!(r.hbsc(&basis(2, 0), &x).is_err());
    }

    #[test]
    fn ricci_consistency_sweep() {
        for n in 1..=8 {
            for c in [-2.0, -1.0, 0.0, 1.0, 2.0] {
                let r = KahlerCurvature::const_hbsc(n, c).unwrap();
                let want = (n + 1) as f64 * c;
                assert!((r.ricci_min_eigenvalue() - want).abs() <= 1e-12, "n={n} c={c}");
            }
        }
    }

    #[test]
    fn symmetry_closure_on_random_tuples() {
        let mut rng = rng_from_seed(11);
        for r in catalog() {
            let n = r.dim();
            for _ in 0..10_000 {
                let (i, j, k, l) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
                let v = r.get(i, j, k, l);
                assert_eq!(v, r.get(k, j, i, l));
                assert_eq!(v, r.get(i, l, k, j));
                assert_eq!(v, r.get(j, i, l, k).conj());
            }
        }
    }

    #[test]
    fn symmetry_violation_detected() {
        let mut comp = KahlerCurvature::const_hbsc(2, 1.0).unwrap().comp;
        comp[1] = Complex64::new(0.3, 0.0);
        assert!(matches!(KahlerCurvature::from_components(2, comp), Err(Error::SymmetryViolation { .. })));
    }

    #[test]
    fn transform_preserves_symmetries_and_ricci_trace() {
        for (s, r) in catalog().into_iter().enumerate() {
            let u = random_unitary(r.dim(), s as u64).unwrap();
            let t = r.transform(&u).unwrap();
            assert!(t.symmetry_deviation() < 1e-12);
            let tr = |m: &CMatrix| (0..m.rows()).map(|i| m[(i, i)].re).sum::<f64>();
            assert!((tr(&t.ricci_matrix()) - tr(&r.ricci_matrix())).abs() < 1e-11);
        }
    }

    #[test]
    fn eval_matches_transformed_component() {
        let r = KahlerCurvature::hyperquadric(3).unwrap();
        let u = random_unitary(3, 8).unwrap();
        let t = r.transform(&u).unwrap();
        let (e0, e1, e2) = (u.column(0), u.column(1), u.column(2));
        assert!((t.get(0, 1, 2, 0) - r.eval(&e0, &e1, &e2, &e0)).norm() < 1e-13);
    }

    #[test]
    fn bisectional_form_contracts() {
        let r = KahlerCurvature::hyperquadric(4).unwrap();
        let u = random_unitary(4, 3).unwrap();
        let x = u.column(3);
        let b = r.bisectional_form(&x);
        assert!(b.is_hermitian());
        for i in 0..4 {
            let e = u.column(i);
            let direct = r.eval(&x, &x, &e, &e);
            assert!((b.quadratic_form(&e) - direct).norm() < 1e-13);
        }
    }

    #[test]
    fn dump_roundtrip() {
        let r = KahlerCurvature::hyperquadric(2).unwrap();
        let d = r.to_dump();
        assert_eq!(d.comp.len(), 16);
        assert_eq!(KahlerCurvature::from_dump(&d).unwrap(), r);
    }
}
