//! Grid sweeps of the Laplacian and partial-Hessian comparisons on catalog
//! models.

use std::fmt;

use rand::Rng;

use super::{riccati_delta_r, GeodesicFrame, DEFAULT_STEPS_PER_RADIUS};
use crate::comparison::{domain_end, kahler_model_laplacian, radius_c, riemannian_model_laplacian, snlog};
use crate::curvature::ModelSpace;
use crate::error::{invalid, Error, Result};
use crate::numkit::{hermitian_eigen, rng_from_seed};
use crate::sym_op::is_k_semipositive;
use crate::tolerance::INEQUALITY;

/// Mixes whose conjugate radius is this close to the grid point are skipped.
const CUT_MARGIN: f64 = 0.98;

/// A named upper bound for `Δr` together with its curvature hypothesis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundKind {
    /// `HSC ≥ 2c` and `Ric ≥ (n+1)c`; bound is the constant-HBSC Laplacian.
    HscRic { c: f64 },
    /// `c < 0`, `k ≤ (n+1)/2`, `𝒮 − 2c` k-semipositive.
    SymNeg { c: f64, k: usize },
    /// `c > 0`, `k < (n+1)/2`, `𝒮 − 2c` k-semipositive, radius below
    /// `C(k, n)/√c`.
    SymPos { c: f64, k: usize },
    /// The constant-HBSC Laplacian with no hypothesis check.
    Naive { c: f64 },
    /// Real Ricci bound `Ric ≥ ric`; Riemannian model in dimension `2n`.
    Riemannian { ric: f64 },
}

impl BoundKind {
    pub fn value(&self, n: usize, r: f64) -> Result<f64> {
        match *self {
            Self::HscRic { c } | Self::SymNeg { c, .. } | Self::SymPos { c, .. } | Self::Naive { c } => {
                kahler_model_laplacian(n, c, r)
            }
            Self::Riemannian { ric } => {
                let m = 2 * n;
                riemannian_model_laplacian(m, ric / (m as f64 - 1.0), r)
            }
        }
    }

    /// Largest radius at which the bound is finite and, for `SymPos`, the
    /// ball restriction holds.
    pub fn radius_limit(&self, n: usize) -> Result<f64> {
        Ok(match *self {
            Self::HscRic { c } | Self::SymNeg { c, .. } | Self::Naive { c } => domain_end(2.0 * c),
            Self::SymPos { c, k } => (radius_c(k, n)? / c.sqrt()).min(domain_end(2.0 * c)),
            Self::Riemannian { ric } => domain_end(ric / (2.0 * n as f64 - 1.0)),
        })
    }

    /// Verifies the hypothesis on `model`; returns a one-line diagnostic.
    pub fn check_hypothesis(&self, model: &ModelSpace) -> Result<String> {
        let n = model.dim();
        let nf = n as f64;
        let refuse = |msg: String| Err(Error::PreconditionUnmet(msg));
        match *self {
            Self::HscRic { c } => {
                let hsc = model.min_hsc()?;
                let ric = model.curvature()?.ricci_min_eigenvalue();
                if hsc < 2.0 * c - INEQUALITY || ric < (nf + 1.0) * c - INEQUALITY {
                    return refuse(format!(
                        "min HSC = {hsc}, min Ric = {ric}; need HSC ≥ {} and Ric ≥ {}",
                        2.0 * c,
                        (nf + 1.0) * c
                    ));
                }
                Ok(format!("min HSC = {hsc} ≥ {}, min Ric = {ric} ≥ {}", 2.0 * c, (nf + 1.0) * c))
            }
            Self::SymNeg { c, k } | Self::SymPos { c, k } => {
                let neg = matches!(self, Self::SymNeg { .. });
                if neg && !(c < 0.0) || !neg && !(c > 0.0) {
                    return refuse(format!("c = {c} has the wrong sign for this bound"));
                }
                if k == 0 || (neg && 2 * k > n + 1) || (!neg && 2 * k > n) {
                    return refuse(format!("k = {k} out of range for n = {n}"));
                }
                if !is_k_semipositive(&model.curvature()?, c, k)? {
                    return refuse(format!("𝒮 − {}·id is not {k}-semipositive", 2.0 * c));
                }
                Ok(format!("𝒮 − {}·id is {k}-semipositive", 2.0 * c))
            }
            Self::Naive { .. } => Ok("no hypothesis checked".into()),
            Self::Riemannian { ric } => {
                let got = model.curvature()?.ricci_min_eigenvalue();
                if got < ric - INEQUALITY {
                    return refuse(format!("min Ric = {got} < {ric}"));
                }
                Ok(format!("min Ric = {got} ≥ {ric}"))
            }
        }
    }

    /// A violation is the expected outcome for the unchecked bound.
    pub fn expects_violation(&self) -> bool {
        matches!(self, Self::Naive { .. })
    }
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::HscRic { c } => write!(f, "hsc-ric(c={c})"),
            Self::SymNeg { c, k } => write!(f, "sym-neg(c={c},k={k})"),
            Self::SymPos { c, k } => write!(f, "sym-pos(c={c},k={k})"),
            Self::Naive { c } => write!(f, "naive(c={c})"),
            Self::Riemannian { ric } => write!(f, "riemannian(ric={ric})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub r: f64,
    /// Mix attaining the maximum of `Δr` at this radius.
    pub mix: Vec<f64>,
    pub actual: f64,
    pub bound: f64,
    /// `bound − actual`.
    pub gap: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepReport {
    pub model: String,
    pub bound: BoundKind,
    pub hypothesis: String,
    pub tol: f64,
    pub rows: Vec<SweepRow>,
}

impl SweepReport {
    pub fn min_gap(&self) -> f64 {
        self.rows.iter().map(|r| r.gap).fold(f64::INFINITY, f64::min)
    }

    /// Row with the smallest gap.
    pub fn worst(&self) -> Option<&SweepRow> {
        self.rows.iter().min_by(|a, b| a.gap.total_cmp(&b.gap))
    }

    /// Rows whose gap falls below `−tol`.
    pub fn violations(&self) -> usize {
        self.rows.iter().filter(|r| r.gap < -self.tol).count()
    }

    pub fn expect_violation(&self) -> bool {
        self.bound.expects_violation()
    }

    /// For checked bounds: no violations. For the unchecked bound: every
    /// grid point violates it by more than `tol`.
    pub fn passed(&self) -> bool {
        if self.expect_violation() {
            !self.rows.is_empty() && self.rows.iter().all(|r| r.gap < -self.tol)
        } else {
            self.violations() == 0
        }
    }
}

/// Compares `max_λ Δr` over `mixes` to `bound` at each radius in `grid`.
///
/// Mixes are skipped at radii within 2% of their conjugate radius; a grid
/// point with no admissible mix is an error, as is one outside the bound's
/// domain. The hypothesis of `bound` is checked first.
pub fn comparison_sweep(model: &ModelSpace, bound: BoundKind, grid: &[f64], mixes: &[Vec<f64>], tol: f64) -> Result<SweepReport> {
    let hypothesis = bound.check_hypothesis(model)?;
    if grid.is_empty() || mixes.is_empty() {
        return Err(invalid("sweep needs a non-empty grid and at least one mix"));
    }
    let n = model.dim();
    let limit = bound.radius_limit(n)?;
    let profiles = mixes.iter().map(|m| model.radial_profile(m).map(|p| (m, p))).collect::<Result<Vec<_>>>()?;
    let mut rows = Vec::with_capacity(grid.len());
    for &r in grid {
        if !(r > 0.0) || r >= limit {
            return Err(crate::error::domain(format!("grid point r = {r} outside (0, {limit}) for {bound}")));
        }
        let mut best: Option<(f64, &Vec<f64>)> = None;
        for (mix, p) in &profiles {
            if r >= CUT_MARGIN * p.conjugate_radius() {
                continue;
            }
            let v = riccati_delta_r(p, r, r / DEFAULT_STEPS_PER_RADIUS)?.delta_r;
            if best.is_none_or(|(b, _)| v > b) {
                best = Some((v, mix));
            }
        }
        let (actual, mix) = best.ok_or_else(|| invalid(format!("no admissible mix at r = {r}")))?;
        let b = bound.value(n, r)?;
        rows.push(SweepRow { r, mix: mix.clone(), actual, bound: b, gap: b - actual });
    }
    Ok(SweepReport { model: model.label(), bound, hypothesis, tol, rows })
}

/// Unit mixes for `m` factors: the axes, the uniform mix, then `count`
/// random non-negative unit vectors from `seed`.
pub fn sample_mixes(m: usize, count: usize, seed: u64) -> Result<Vec<Vec<f64>>> {
    if m == 0 {
        return Err(invalid("need at least one factor"));
    }
    let mut out = Vec::with_capacity(m + 1 + count);
    for i in 0..m {
        let mut e = vec![0.0; m];
        e[i] = 1.0;
        out.push(e);
    }
    if m > 1 {
        out.push(vec![1.0 / (m as f64).sqrt(); m]);
        let mut rng = rng_from_seed(seed);
        for _ in 0..count {
            let v: Vec<f64> = (0..m).map(|_| rng.gen_range(0.0..1.0f64)).collect();
            let len = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if len > 1e-3 {
                out.push(v.iter().map(|x| x / len).collect());
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct KHessianRow {
    pub r: f64,
    /// Sum of the `k` smallest eigenvalues of `∂∂̄r` on `E_r^⊥`.
    pub smallest_sum: f64,
    /// Sum of the `k` largest; bounds every orthonormal `k`-frame.
    pub largest_sum: f64,
    pub bound: f64,
    /// `bound − largest_sum`.
    pub gap: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct KHessianReport {
    pub model: String,
    pub mix: Vec<f64>,
    pub c: f64,
    pub k: usize,
    pub tol: f64,
    pub rows: Vec<KHessianRow>,
}

impl KHessianReport {
    pub fn min_gap(&self) -> f64 {
        self.rows.iter().map(|r| r.gap).fold(f64::INFINITY, f64::min)
    }

    pub fn violations(&self) -> usize {
        self.rows.iter().filter(|r| r.gap < -self.tol).count()
    }

    pub fn passed(&self) -> bool {
        self.violations() == 0
    }
}

/// Compares partial traces of `∂∂̄r` over `k`-frames orthogonal to `E_r`
/// with `k·snlog(c/2, r)` along the geodesic with the given mix.
pub fn k_hessian_check(model: &ModelSpace, mix: &[f64], c: f64, k: usize, grid: &[f64], tol: f64) -> Result<KHessianReport> {
    let n = model.dim();
    if k == 0 || k >= n {
        return Err(Error::PreconditionUnmet(format!("need 1 ≤ k < n, got k = {k}, n = {n}")));
    }
    if !is_k_semipositive(&model.curvature()?, c, k)? {
        return Err(Error::PreconditionUnmet(format!("𝒮 − {}·id is not {k}-semipositive", 2.0 * c)));
    }
    let frame = GeodesicFrame::new(model, mix)?;
    let limit = frame.conjugate_radius().min(domain_end(c / 2.0));
    let basis = frame.complex_normal_basis();
    let mut rows = Vec::with_capacity(grid.len());
    for &r in grid {
        if !(r > 0.0) || r >= limit {
            return Err(crate::error::domain(format!("grid point r = {r} outside (0, {limit})")));
        }
        let state = frame.riccati(r)?;
        let levi = frame.levi_matrix(&frame.real_hessian(&state));
        let eig = hermitian_eigen(&levi.compress(&basis))?;
        let smallest_sum: f64 = eig.values[..k].iter().sum();
        let largest_sum: f64 = eig.values[eig.values.len() - k..].iter().sum();
        let bound = k as f64 * snlog(c / 2.0, r)?;
        rows.push(KHessianRow { r, smallest_sum, largest_sum, bound, gap: bound - largest_sum });
    }
    Ok(KHessianReport { model: model.label(), mix: mix.to_vec(), c, k, tol, rows })
}
