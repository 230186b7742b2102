//! The complex index form and its bound on `∂∂̄r`.
//!
//! Fields live in the parallel frame, where catalog curvature components are
//! constant along the geodesic.

use num_complex::Complex64;
use rand::Rng;

use super::GeodesicFrame;
use crate::comparison::{domain_end, sn_unchecked};
use crate::error::{domain, invalid, Error, Result};
use crate::numkit::{complex_gaussian, hermitian_eigen, inner, norm, quad, rng_from_seed};
use crate::tolerance;

/// Largest accepted Simpson error estimate.
const QUAD_LIMIT: f64 = 1e-8;

/// A perturbed field whose gap falls below `EQUALITY_GAP` must lie within
/// `EQUALITY_DIST` of the sn-field. The gap grows quadratically in the
/// distance, so the two thresholds are paired accordingly.
pub const EQUALITY_GAP: f64 = 1e-8;
pub const EQUALITY_DIST: f64 = 1e-3;

/// A (1,0)-vector field sampled on an equally spaced grid of `[0, ℓ]`, with
/// its covariant derivative.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldSample {
    pub ell: f64,
    pub grid: Vec<f64>,
    pub values: Vec<Vec<Complex64>>,
    pub derivs: Vec<Vec<Complex64>>,
}

impl FieldSample {
    /// Samples `f(t) = (V(t), V′(t))` at `samples` points (odd, ≥ 3).
    pub fn from_fn(ell: f64, samples: usize, f: impl Fn(f64) -> (Vec<Complex64>, Vec<Complex64>)) -> Result<Self> {
        if samples < 3 || samples.is_multiple_of(2) {
            return Err(invalid(format!("need an odd number (≥ 3) of samples, got {samples}")));
        }
        if !(ell > 0.0) || !ell.is_finite() {
            return Err(invalid(format!("length must be positive, got {ell}")));
        }
        let grid: Vec<f64> = (0..samples).map(|i| ell * i as f64 / (samples - 1) as f64).collect();
        let (values, derivs) = grid.iter().map(|&t| f(t)).unzip();
        Ok(Self { ell, grid, values, derivs })
    }

    pub fn step(&self) -> f64 {
        self.grid[1] - self.grid[0]
    }

    pub fn end_value(&self) -> &[Complex64] {
        self.values.last().expect("non-empty grid")
    }

    /// Sup-norm distance between two fields on the same grid.
    pub fn sup_distance(&self, other: &Self) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt())
            .fold(0.0, f64::max)
    }

    fn integrate(&self, g: impl Fn(usize) -> f64) -> Result<f64> {
        let samples: Vec<f64> = (0..self.grid.len()).map(g).collect();
        let (value, estimate) = quad::simpson_samples(&samples, self.step())?;
        if estimate > QUAD_LIMIT {
            return Err(Error::Accuracy { estimate, limit: QUAD_LIMIT });
        }
        Ok(value)
    }
}

/// `𝒳_γ(V, V̄) = ∫₀^ℓ |V′|² − ½R(E_γ, Ē_γ, V, V̄) dt`.
pub fn index_form(frame: &GeodesicFrame, field: &FieldSample) -> Result<f64> {
    check_field(frame, field)?;
    let b = frame.curvature().bisectional_form(frame.e_gamma());
    field.integrate(|i| norm(&field.derivs[i]).powi(2) - 0.5 * b.quadratic_form(&field.values[i]).re)
}

/// `𝒳_γ(V, V̄) − ½∫₀^ℓ |⟨V′, E_γ⟩|² dt`, an upper bound for `(∂∂̄r)(X, X̄)`
/// whenever `V(0) = 0` and `V(ℓ) = X`.
pub fn hessian_upper_bound(frame: &GeodesicFrame, x: &[Complex64], field: &FieldSample) -> Result<f64> {
    let end = field.end_value();
    if x.len() != end.len() {
        return Err(invalid("endpoint dimension mismatch"));
    }
    let mismatch = end.iter().zip(x).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    if mismatch > 1e-12 * (1.0 + norm(x)) {
        return Err(invalid(format!("field does not end at X (mismatch {mismatch:e})")));
    }
    let radial = field.integrate(|i| inner(&field.derivs[i], frame.e_gamma()).norm_sqr())?;
    Ok(index_form(frame, field)? - 0.5 * radial)
}

fn check_field(frame: &GeodesicFrame, field: &FieldSample) -> Result<()> {
    if field.values.iter().chain(&field.derivs).any(|v| v.len() != frame.dim()) {
        return Err(invalid("field dimension does not match the model"));
    }
    if norm(&field.values[0]) > 1e-14 {
        return Err(invalid("admissible fields vanish at t = 0"));
    }
    Ok(())
}

fn sn_ratio(kappa: f64, t: f64, ell: f64) -> (f64, f64) {
    let base = sn_unchecked(kappa, ell);
    let d = if kappa > 0.0 {
        (kappa.sqrt() * t).cos()
    } else if kappa < 0.0 {
        ((-kappa).sqrt() * t).cosh()
    } else {
        1.0
    };
    (sn_unchecked(kappa, t) / base, d / base)
}

/// The sn-field ending at `X`: the `E_γ` component follows
/// `sn_{HSC(E_γ)}`, and each eigendirection of `R(E_γ, Ē_γ, ·, ·)` on
/// `E_γ^⊥` with eigenvalue `β` follows `sn_{β/2}`. On a constant-HBSC model
/// this is the Jacobi field with endpoint `X`.
pub fn canonical_field(frame: &GeodesicFrame, x: &[Complex64], ell: f64, samples: usize) -> Result<FieldSample> {
    let n = frame.dim();
    if x.len() != n {
        return Err(invalid("endpoint dimension mismatch"));
    }
    let eg = frame.e_gamma().to_vec();
    let b = frame.curvature().bisectional_form(&eg);
    let mut modes: Vec<(f64, Vec<Complex64>)> = vec![(b.quadratic_form(&eg).re, eg.clone())];
    if n > 1 {
        let w = frame.complex_normal_basis();
        let eig = hermitian_eigen(&b.compress(&w))?;
        for (j, &beta) in eig.values.iter().enumerate() {
            let u = eig.vectors.column(j);
            modes.push((beta / 2.0, w.mul_vec(&u)));
        }
    }
    for (kappa, _) in &modes {
        if ell >= domain_end(*kappa) {
            return Err(domain(format!("ℓ = {ell} reaches the first zero of sn_{kappa}")));
        }
    }
    let coeffs: Vec<Complex64> = modes.iter().map(|(_, e)| inner(x, e)).collect();
    FieldSample::from_fn(ell, samples, |t| {
        let mut v = vec![Complex64::new(0.0, 0.0); n];
        let mut dv = v.clone();
        for ((kappa, e), a) in modes.iter().zip(&coeffs) {
            let (s, ds) = sn_ratio(*kappa, t, ell);
            for i in 0..n {
                v[i] += a * s * e[i];
                dv[i] += a * ds * e[i];
            }
        }
        (v, dv)
    })
}

/// `V + φ·w` with `φ(t) = (t/ℓ)(1 − t/ℓ)(1 + β sin(mπt/ℓ))`, which keeps
/// both endpoints fixed.
pub fn perturbed_field(base: &FieldSample, w: &[Complex64], m: u32, beta: f64) -> FieldSample {
    let ell = base.ell;
    let freq = m as f64 * std::f64::consts::PI / ell;
    let mut out = base.clone();
    for (idx, &t) in base.grid.iter().enumerate() {
        let u = t / ell;
        let bump = u * (1.0 - u);
        let dbump = (1.0 - 2.0 * u) / ell;
        let p = 1.0 + beta * (freq * t).sin();
        let dp = beta * freq * (freq * t).cos();
        let phi = bump * p;
        let dphi = dbump * p + bump * dp;
        for i in 0..w.len() {
            out.values[idx][i] += w[i] * phi;
            out.derivs[idx][i] += w[i] * dphi;
        }
    }
    // the sampled endpoints are exact zeros of φ
    let last = out.values.len() - 1;
    out.values[0] = base.values[0].clone();
    out.values[last] = base.values[last].clone();
    out
}

/// Outcome of [`thm21_suite`].
#[derive(Debug, Clone, PartialEq)]
pub struct Thm21Report {
    pub trials: usize,
    /// Largest `|bound − actual|` for the sn-fields.
    pub canonical_max_abs_gap: f64,
    /// Smallest `bound − actual` over sn-fields.
    pub canonical_min_gap: f64,
    /// Smallest `bound − actual` over perturbed fields.
    pub perturbed_min_gap: f64,
    /// Perturbed fields undercutting the Hessian by more than the slack.
    pub violations: usize,
    /// Perturbed fields with gap below [`EQUALITY_GAP`] that are not within
    /// [`EQUALITY_DIST`] of the sn-field (only meaningful on constant-HBSC
    /// models).
    pub equality_mismatches: usize,
    pub seed: u64,
    /// Trial index of the smallest perturbed gap.
    pub worst_trial: usize,
}

/// Compares the index-form bound against the Riccati value of `∂∂̄r` at
/// radius `ell` for random unit endpoints: the sn-field and one random
/// perturbation of it per trial.
pub fn thm21_suite(frame: &GeodesicFrame, ell: f64, trials: usize, seed: u64, samples: usize) -> Result<Thm21Report> {
    let n = frame.dim();
    let state = frame.riccati(ell)?;
    let h = frame.levi_matrix(&frame.real_hessian(&state));
    let mut rng = rng_from_seed(seed);
    let mut report = Thm21Report {
        trials,
        canonical_max_abs_gap: 0.0,
        canonical_min_gap: f64::INFINITY,
        perturbed_min_gap: f64::INFINITY,
        violations: 0,
        equality_mismatches: 0,
        seed,
        worst_trial: 0,
    };
    for trial in 0..trials {
        let mut x: Vec<Complex64> = (0..n).map(|_| complex_gaussian(&mut rng)).collect();
        let len = norm(&x);
        x.iter_mut().for_each(|z| *z /= len);
        let actual = h.quadratic_form(&x).re;

        let canon = canonical_field(frame, &x, ell, samples)?;
        let gap_c = hessian_upper_bound(frame, &x, &canon)? - actual;
        report.canonical_max_abs_gap = report.canonical_max_abs_gap.max(gap_c.abs());
        report.canonical_min_gap = report.canonical_min_gap.min(gap_c);

        let amp = 10f64.powf(rng.gen_range(-5.0..0.0));
        let w: Vec<Complex64> = (0..n).map(|_| complex_gaussian(&mut rng) * amp).collect();
        let m = rng.gen_range(1..=4u32);
        let beta = rng.gen_range(-0.5..0.5);
        let pert = perturbed_field(&canon, &w, m, beta);
        let gap = hessian_upper_bound(frame, &x, &pert)? - actual;
        if gap < report.perturbed_min_gap {
            report.perturbed_min_gap = gap;
            report.worst_trial = trial;
        }
        if gap < -tolerance::INEQUALITY {
            report.violations += 1;
        }
        if gap < EQUALITY_GAP && pert.sup_distance(&canon) > EQUALITY_DIST {
            report.equality_mismatches += 1;
        }
    }
    Ok(report)
}

/// Unit endpoint `X` for direct use with the field constructors.
pub fn unit_vector(x: &[Complex64]) -> Result<Vec<Complex64>> {
    let len = norm(x);
    if !(len > 0.0) {
        return Err(invalid("zero vector"));
    }
    Ok(x.iter().map(|z| z / len).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::comparison::snlog;
    use crate::curvature::ModelSpace;

    fn e(n: usize, i: usize) -> Vec<Complex64> {
        let mut v = vec![Complex64::new(0.0, 0.0); n];
        v[i] = Complex64::new(1.0, 0.0);
        v
    }

    #[test]
    fn index_form_of_sn_fields() {
        for c in [-1.0, 0.5, 1.0] {
            let n = 3;
            let frame = GeodesicFrame::new(&ModelSpace::space_form(n, c).unwrap(), &[1.0]).unwrap();
            let ell = 1.1;
            // E_γ is the first coordinate, so E_1 is normal to it
            let vi = canonical_field(&frame, &e(n, 1), ell, 2001).unwrap();
            let x = index_form(&frame, &vi).unwrap();
            assert!((x - snlog(c / 2.0, ell).unwrap()).abs() < 1e-7, "c={c}");
            let vn = canonical_field(&frame, &e(n, 0), ell, 2001).unwrap();
            let b = hessian_upper_bound(&frame, &e(n, 0), &vn).unwrap();
            assert!((b - 0.5 * snlog(2.0 * c, ell).unwrap()).abs() < 1e-7, "c={c}");
        }
    }

    #[test]
    fn zero_field() {
        let frame = GeodesicFrame::new(&ModelSpace::space_form(2, 1.0).unwrap(), &[1.0]).unwrap();
        let z =
            FieldSample::from_fn(1.0, 101, |_| (vec![Complex64::new(0.0, 0.0); 2], vec![Complex64::new(0.0, 0.0); 2])).unwrap();
        assert_eq!(index_form(&frame, &z).unwrap(), 0.0);
    }

    #[test]
    fn flat_linear_field_is_sharp() {
        let frame = GeodesicFrame::new(&ModelSpace::space_form(2, 0.0).unwrap(), &[1.0]).unwrap();
        let ell = 0.7;
        let x = e(2, 1);
        let lin =
            FieldSample::from_fn(ell, 201, |t| (x.iter().map(|z| z * (t / ell)).collect(), x.iter().map(|z| z / ell).collect()))
                .unwrap();
        let b = hessian_upper_bound(&frame, &x, &lin).unwrap();
        assert!((b - 1.0 / ell).abs() < 1e-12);
    }

    #[test]
    fn endpoint_and_origin_are_checked() {
        let frame = GeodesicFrame::new(&ModelSpace::space_form(2, 1.0).unwrap(), &[1.0]).unwrap();
        let v = canonical_field(&frame, &e(2, 1), 1.0, 101).unwrap();
        assert!(hessian_upper_bound(&frame, &e(2, 0), &v).is_err());
        let shifted = FieldSample::from_fn(1.0, 101, |_| (e(2, 1), vec![Complex64::new(0.0, 0.0); 2])).unwrap();
        assert!(index_form(&frame, &shifted).is_err());
    }

    #[test]
    fn coarse_grid_is_an_accuracy_error() {
        let frame = GeodesicFrame::new(&ModelSpace::space_form(2, 1.0).unwrap(), &[1.0]).unwrap();
        let v = canonical_field(&frame, &e(2, 1), 2.0, 5).unwrap();
        assert!(matches!(index_form(&frame, &v), Err(Error::Accuracy { .. })));
    }

    #[test]
    fn perturbation_keeps_endpoints_and_raises_bound() {
        let frame = GeodesicFrame::new(&ModelSpace::space_form(3, 1.0).unwrap(), &[1.0]).unwrap();
        let ell = 1.0;
        let x = unit_vector(&[Complex64::new(0.3, 0.1), Complex64::new(-0.5, 0.2), Complex64::new(0.0, 0.7)]).unwrap();
        let v = canonical_field(&frame, &x, ell, 1001).unwrap();
        let w = vec![Complex64::new(0.2, -0.1); 3];
        let p = perturbed_field(&v, &w, 2, 0.3);
        assert_eq!(p.values[0], v.values[0]);
        assert_eq!(p.end_value(), v.end_value());
        assert!(hessian_upper_bound(&frame, &x, &p).unwrap() > hessian_upper_bound(&frame, &x, &v).unwrap() + 1e-4);
    }

    #[test]
    fn dominance_small_suite() {
        for (model, mix, ell) in [
            (ModelSpace::space_form(2, 1.0).unwrap(), vec![1.0], 1.2),
            (ModelSpace::space_form(3, -1.0).unwrap(), vec![1.0], 1.5),
            (ModelSpace::cp1_product(2).unwrap(), vec![0.6, 0.8], 0.9),
        ] {
            let frame = GeodesicFrame::new(&model, &mix).unwrap();
            let r = thm21_suite(&frame, ell, 20, 5, 1001).unwrap();
            assert_eq!(r.violations, 0, "{model}: {r:?}");
            assert!(r.canonical_min_gap > -1e-8);
            if let ModelSpace::SpaceForm { .. } = model {
                assert!(r.canonical_max_abs_gap < 1e-6, "{r:?}");
                assert_eq!(r.equality_mismatches, 0);
            }
        }
    }
}
