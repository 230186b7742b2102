use std::f64::consts::{FRAC_1_SQRT_2, PI};

use kcmp_core::comparison::{kahler_model_laplacian, snlog};
use kcmp_core::geodesic::{
    comparison_sweep, k_hessian_check, product_laplacian_max, riccati_delta_r, sample_mixes, BoundKind, GeodesicFrame,
};
use kcmp_core::numkit::Complex64;
use kcmp_core::series::g_eval_closed;
use kcmp_core::sym_op::{ricci_from_kpos_check, weighted_frame_check};
use kcmp_core::{KahlerCurvature, ModelSpace};

#[test]
fn cpn_ricci_and_hsc() {
    for n in 1..=5 {
        let r = KahlerCurvature::const_hbsc(n, 1.0).unwrap();
        assert!((r.ricci_min_eigenvalue() - (n as f64 + 1.0)).abs() < 1e-12);
        let mut x = vec![Complex64::new(0.0, 0.0); n];
        x[0] = Complex64::new(0.6, 0.0);
        x[n - 1] += Complex64::new(0.0, 0.8);
        if n > 1 {
            assert!((r.hsc(&x).unwrap() - 2.0).abs() < 1e-12);
        }
    }
}

#[test]
fn hyperquadric_ricci_from_k_positivity() {
    // 𝒮 = {2−n, 2, …}: 2-semipositive with c = 0 once n ≤ 4
    let r = KahlerCurvature::hyperquadric(3).unwrap();
    let check = ricci_from_kpos_check(&r, 0.0, 2).unwrap();
    assert!(check.holds);
    assert!((check.lhs - 3.0).abs() < 1e-12);
}

#[test]
fn weighted_frame_on_cpn_is_sharp() {
    let r = KahlerCurvature::const_hbsc(4, 1.0).unwrap();
    let frame = kcmp_core::numkit::random_unitary(4, 11).unwrap();
    for k in 1..=4 {
        let c = weighted_frame_check(&r, 1.0, k, &frame).unwrap();
        assert!(c.gap().abs() < 1e-12);
    }
}

#[test]
fn product_hessian_matches_closed_form() {
    let model = ModelSpace::cp1_product(3).unwrap();
    let frame = GeodesicFrame::new(&model, &[0.48, 0.6, 0.64]).unwrap();
    let ell = 0.7;
    let state = frame.riccati(ell).unwrap();
    let numeric = frame.real_hessian(&state);
    let closed = frame.closed_form_hessian(ell).unwrap();
    let dev = numeric.iter().zip(&closed).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    assert!(dev < 1e-8, "{dev}");
}

#[test]
fn riccati_on_cpn_levi_form() {
    // every direction orthogonal to E_r has ∂∂̄r = snlog(c/2, r); E_r itself ½snlog(2c, r)
    let frame = GeodesicFrame::new(&ModelSpace::space_form(3, 1.0).unwrap(), &[1.0]).unwrap();
    let r = 1.1;
    let levi = frame.levi_matrix(&frame.real_hessian(&frame.riccati(r).unwrap()));
    let eg = frame.e_gamma().to_vec();
    assert!((levi.quadratic_form(&eg).re - 0.5 * snlog(2.0, r).unwrap()).abs() < 1e-8);
    let normal = frame.complex_normal_basis();
    for j in 0..2 {
        assert!((levi.quadratic_form(&normal.column(j)).re - snlog(0.5, r).unwrap()).abs() < 1e-8);
    }
}

#[test]
fn series_agrees_with_product_laplacian() {
    for i in 1..50 {
        let r = 2.2 * i as f64 / 50.0;
        let direct = product_laplacian_max(2, r).unwrap() - kahler_model_laplacian(2, 1.0, r).unwrap();
        assert!((g_eval_closed(r).unwrap() - direct).abs() < 1e-10, "r = {r}");
    }
}

#[test]
fn naive_bound_fails_at_the_uniform_mix() {
    let model = ModelSpace::cp1_product(2).unwrap();
    let uniform = [vec![FRAC_1_SQRT_2, FRAC_1_SQRT_2]];
    let grid: Vec<f64> = (1..=50).map(|i| 2.2 * i as f64 / 50.0).collect();
    let rep = comparison_sweep(&model, BoundKind::Naive { c: 1.0 }, &grid, &uniform, 1e-8).unwrap();
    assert!(rep.rows.iter().all(|r| r.gap < 0.0));
    // The excess grows like r⁵/315, so it clears the tolerance from r ≈ 0.1 on.
    let grid: Vec<f64> = (0..50).map(|i| 0.1 + 2.1 * i as f64 / 49.0).collect();
    let rep = comparison_sweep(&model, BoundKind::Naive { c: 1.0 }, &grid, &uniform, 1e-8).unwrap();
    assert!(rep.passed(), "{:?}", rep.rows.iter().map(|r| r.gap).fold(f64::NEG_INFINITY, f64::max));
}

#[test]
fn riemannian_bound_holds_on_cpn() {
    let model = ModelSpace::space_form(2, 1.0).unwrap();
    let grid: Vec<f64> = (1..=20).map(|i| 0.1 * i as f64).collect();
    let rep = comparison_sweep(&model, BoundKind::Riemannian { ric: 3.0 }, &grid, &[vec![1.0]], 1e-8).unwrap();
    assert!(rep.passed());
    assert!(rep.min_gap() > 0.0);
}

#[test]
fn sym_pos_respects_the_ball() {
    let model = ModelSpace::space_form(4, 1.0).unwrap();
    let bound = BoundKind::SymPos { c: 1.0, k: 2 };
    let limit = bound.radius_limit(4).unwrap();
    assert!(limit < PI / 2f64.sqrt());
    let rep = comparison_sweep(&model, bound, &[0.5 * limit, 0.9 * limit], &[vec![1.0]], 1e-8).unwrap();
    assert!(rep.passed());
    assert!(comparison_sweep(&model, bound, &[1.01 * limit], &[vec![1.0]], 1e-8).is_err());
}

#[test]
fn k_hessian_on_product_mixes() {
    let model = ModelSpace::cp1_product(2).unwrap();
    for mix in sample_mixes(2, 10, 3).unwrap() {
        let profile = model.radial_profile(&mix).unwrap();
        let top = 0.9 * profile.conjugate_radius().min(3.0);
        let grid: Vec<f64> = (1..=5).map(|i| top * i as f64 / 5.0).collect();
        let rep = k_hessian_check(&model, &mix, 0.0, 1, &grid, 1e-8).unwrap();
        assert!(rep.passed(), "{mix:?}: {}", rep.min_gap());
    }
}

#[test]
fn riccati_rejects_conjugate_points() {
    let model = ModelSpace::cp1_product(2).unwrap();
    let profile = model.radial_profile(&[1.0, 0.0]).unwrap();
    let conj = profile.conjugate_radius();
    assert!((conj - PI / 3f64.sqrt()).abs() < 1e-12);
    assert!(riccati_delta_r(&profile, 1.05 * conj, 0.001).is_err());
}

#[test]
fn dump_survives_json() {
    let r = KahlerCurvature::hyperquadric(3).unwrap();
    let text = serde_json::to_string(&r.to_dump()).unwrap();
    let dump: kcmp_core::curvature::TensorDump = serde_json::from_str(&text).unwrap();
    let back = KahlerCurvature::from_dump(&dump).unwrap();
    assert_eq!(back, r);
    let mut broken = dump.clone();
    broken.comp[1][0] += 0.5;
    assert!(KahlerCurvature::from_dump(&broken).is_err());
}
