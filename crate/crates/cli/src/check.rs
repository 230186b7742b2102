//! `kcmp check <suite>`.

use kcmp_core::comparison::{diam_constants, domain_end};
use kcmp_core::geodesic::{
    comparison_sweep, k_hessian_check, product_laplacian, product_laplacian_max, riccati_delta_r, sample_mixes, thm21_suite,
    BoundKind, GeodesicFrame, SweepReport, DEFAULT_STEPS_PER_RADIUS,
};
use kcmp_core::numkit::{random_unitary_with, rng_from_seed};
use kcmp_core::sym_op::{is_k_semipositive, random_kahler_tensor, shift_to_hypothesis, MixedEstimate};
use kcmp_core::ModelSpace;
use rand::Rng;
use serde_json::json;

use crate::catalog::{curvature, factor_count, resolve};
use crate::commands::{grid_or, mix_or_uniform, render_radial, render_summary};
use crate::grid::{parse_mix, GridSpec};
use crate::report::{RadialReport, Row};
use crate::{usage, CliError, Format, Outcome, Params};

const LEMMA31_TENSORS: usize = 200;
const LEMMA31_FRAMES: usize = 100;
const LEMMA31_ALPHAS: usize = 10;
const LEMMA31_ALPHA_MAX: f64 = 4.0;
const THM21_TRIALS: usize = 50;
const THM21_SAMPLES: usize = 2001;
const SWEEP_MIXES: usize = 100;

fn k_or(p: &Params, default: usize) -> usize {
    p.k.unwrap_or(default)
}

/// Seed of tensor `t` in a lemma31 run, so a failure can be replayed alone.
fn tensor_seed(seed: u64, t: usize) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(t as u64)
}

/// Grid from `--grid`, or `count` points on `[lo·limit, hi·limit]`.
fn grid_within(p: &Params, limit: f64, lo: f64, hi: f64, count: usize) -> Result<Vec<f64>, CliError> {
    match &p.grid {
        Some(g) => Ok(GridSpec::parse(g)?.points()),
        None => {
            let limit = if limit.is_finite() { limit } else { 3.0 };
            Ok(GridSpec { start: lo * limit, end: hi * limit, count }.points())
        }
    }
}

/// Random Kähler tensors shifted onto the hypothesis (`--c`, `--k`), checked
/// against the mixed frame estimate over random frames and weights.
pub(crate) fn lemma31(p: &Params) -> Result<Outcome, CliError> {
    let n = p.n;
    let c = p.c();
    let k = k_or(p, 1);
    if n < 2 || k == 0 || k >= n {
        return Err(usage(format!("lemma31 needs n ≥ 2 and 1 ≤ k < n, got n = {n}, k = {k}")));
    }
    let tol = p.inequality_tol();
    let alpha_min = 2.0 * (k as f64 - 1.0) / (n as f64 - 1.0);
    let alphas: Vec<f64> = (0..LEMMA31_ALPHAS)
        .map(|i| alpha_min + (LEMMA31_ALPHA_MAX - alpha_min) * i as f64 / (LEMMA31_ALPHAS - 1) as f64)
        .collect();
    let mut out_fail = Vec::new();
    let mut checks = 0usize;
    let mut violations = 0usize;
    let mut min_gap = f64::INFINITY;
    for t in 0..LEMMA31_TENSORS {
        let ts = tensor_seed(p.seed, t);
        let mut rng = rng_from_seed(ts);
        let base = random_kahler_tensor(n, &mut rng)?;
        let margin = if t < LEMMA31_TENSORS / 10 { 0.0 } else { rng.gen_range(0.0..1.0) };
        let r = shift_to_hypothesis(&base, c, k, margin)?;
        let est = MixedEstimate::new(&r, c, k)?;
        for f in 0..LEMMA31_FRAMES {
            let frame = random_unitary_with(n, &mut rng)?;
            for (fc, alpha) in est.check_many(&alphas, &frame)?.into_iter().zip(&alphas) {
                checks += 1;
                min_gap = min_gap.min(fc.gap());
                if fc.gap() < -tol {
                    violations += 1;
                    if out_fail.len() < 10 {
                        out_fail.push(format!(
                            "lhs {} < rhs {} (tensor seed {ts}, tensor {t}, frame {f}, α = {alpha})",
                            fc.lhs, fc.rhs
                        ));
                    }
                }
            }
        }
    }
    let body = json!({
        "n": n, "k": k, "c": c, "seed": p.seed,
        "tensors": LEMMA31_TENSORS, "frames_per_tensor": LEMMA31_FRAMES, "alphas": alphas,
        "checks": checks, "violations": violations, "min_gap": min_gap,
    });
    let mut out = Outcome::new(render_summary(p, body, Format::Text)?);
    for f in out_fail {
        out.fail(f);
    }
    Ok(out)
}

/// Index-form upper bound for `∂∂̄r` at each radius of the grid.
pub(crate) fn thm21(p: &Params) -> Result<Outcome, CliError> {
    let model = resolve(&p.model, p.n, p.c())?;
    let mix = mix_or_uniform(p, &model)?;
    let frame = GeodesicFrame::new(&model, &mix)?;
    let grid = grid_within(p, frame.conjugate_radius(), 0.1, 0.9, 5)?;
    let tol = p.ode_tol();
    let constant = model.space_form_factors()?.len() == 1;
    let mut out_fail = Vec::new();
    let mut lines = Vec::new();
    for (i, &ell) in grid.iter().enumerate() {
        let seed = p.seed.wrapping_add(i as u64);
        let rep = thm21_suite(&frame, ell, THM21_TRIALS, seed, THM21_SAMPLES)?;
        if rep.violations > 0 {
            out_fail.push(format!(
                "{} perturbed fields undercut the Hessian at ℓ = {ell} (seed {seed}, worst trial {}, gap {:e})",
                rep.violations, rep.worst_trial, rep.perturbed_min_gap
            ));
        }
        if rep.canonical_max_abs_gap > tol {
            out_fail.push(format!("sn-field gap {:e} exceeds {tol:e} at ℓ = {ell} (seed {seed})", rep.canonical_max_abs_gap));
        }
        if constant && rep.equality_mismatches > 0 {
            out_fail.push(format!(
                "{} near-equality fields far from the sn-field at ℓ = {ell} (seed {seed})",
                rep.equality_mismatches
            ));
        }
        lines.push(json!({
            "ell": ell, "seed": seed, "trials": rep.trials,
            "sn_field_max_abs_gap": rep.canonical_max_abs_gap,
            "perturbed_min_gap": rep.perturbed_min_gap,
            "violations": rep.violations,
            "equality_mismatches": rep.equality_mismatches,
        }));
    }
    let report = match p.format.unwrap_or(Format::Text) {
        Format::Json => crate::report::pretty(&crate::report::versioned(json!({
            "model": model.label(), "mix": mix, "equality_checked": constant, "radii": lines,
        }))),
        Format::Text => {
            let mut s = format!("model: {}\nmix: {mix:?}\nequality clause checked: {constant}\n", model.label());
            for l in &lines {
                s.push_str(&format!(
                    "ℓ = {}: sn-field |gap| ≤ {:.2e}, perturbed min gap {:.2e}, {} undercuts, {} equality mismatches\n",
                    l["ell"],
                    l["sn_field_max_abs_gap"].as_f64().unwrap_or(f64::NAN),
                    l["perturbed_min_gap"].as_f64().unwrap_or(f64::NAN),
                    l["violations"],
                    l["equality_mismatches"]
                ));
            }
            s
        }
        Format::Csv => return Err(usage("CSV output is only available for radial reports")),
    };
    let mut out = Outcome::new(report);
    for f in out_fail {
        out.fail(f);
    }
    Ok(out)
}

/// `cp1-product` with `--n` factors: Riccati against the closed product
/// Laplacian for sampled mixes, and the sampled maximum against the
/// closed-form maximum.
pub(crate) fn product(p: &Params) -> Result<Outcome, CliError> {
    let n = p.n;
    if n < 2 {
        return Err(usage("check product needs --n ≥ 2"));
    }
    let model = ModelSpace::cp1_product(n)?;
    let hsc = vec![(n + 1) as f64; n];
    let mixes = match &p.mix {
        Some(m) => vec![parse_mix(m)?],
        None => sample_mixes(n, SWEEP_MIXES, p.seed)?,
    };
    if mixes.iter().any(|m| m.len() != n) {
        return Err(usage(format!("--mix must have {n} entries")));
    }
    let grid = grid_or(p, "0.05:1.0:50")?;
    let ode_tol = p.ode_tol();
    let ineq_tol = p.inequality_tol();
    let profiles = mixes.iter().map(|m| model.radial_profile(m)).collect::<Result<Vec<_>, _>>()?;
    let mut rows = Vec::with_capacity(grid.len());
    let mut out_fail = Vec::new();
    let mut max_ode_err: f64 = 0.0;
    for &r in &grid {
        let mut best = f64::NEG_INFINITY;
        for (mix, prof) in mixes.iter().zip(&profiles) {
            if r >= 0.98 * prof.conjugate_radius() {
                continue;
            }
            let ric = riccati_delta_r(prof, r, r / DEFAULT_STEPS_PER_RADIUS)?.delta_r;
            let closed = product_laplacian(&hsc, r, mix)?;
            let err = (ric - closed).abs();
            max_ode_err = max_ode_err.max(err);
            if err > ode_tol {
                out_fail.push(format!("Riccati vs closed form differs by {err:e} at r = {r}, mix {mix:?} (seed {})", p.seed));
            }
            best = best.max(closed);
        }
        if best == f64::NEG_INFINITY {
            return Err(usage(format!("no mix is admissible at r = {r}; shrink the grid")));
        }
        let bound = product_laplacian_max(n, r)?;
        if best - bound > ineq_tol {
            out_fail.push(format!("sampled maximum {best} exceeds the closed maximum {bound} at r = {r} (seed {})", p.seed));
        }
        rows.push(Row::new(r, best, bound));
    }
    let rep = RadialReport {
        command: "check product".into(),
        model: model.label(),
        bound: "closed-form maximum".into(),
        rows,
        summary: json!({"mixes": mixes.len(), "seed": p.seed, "max_ode_error": max_ode_err}),
    };
    let mut out = Outcome::new(render_radial(p, &rep));
    for f in out_fail {
        out.fail(f);
    }
    Ok(out)
}

/// Sums of the `k` largest Levi eigenvalues of `r` on `E_r^⊥` against
/// `k·snlog(c/2, r)`.
pub(crate) fn khessian(p: &Params) -> Result<Outcome, CliError> {
    let model = resolve(&p.model, p.n, p.c())?;
    let mix = mix_or_uniform(p, &model)?;
    let c = p.c.unwrap_or(0.0);
    let k = k_or(p, 1);
    let frame = GeodesicFrame::new(&model, &mix)?;
    let limit = frame.conjugate_radius().min(domain_end(c / 2.0));
    let grid = grid_within(p, limit, 0.05, 0.9, 30)?;
    let rep = k_hessian_check(&model, &mix, c, k, &grid, p.inequality_tol())?;
    let rows = rep.rows.iter().map(|r| Row::new(r.r, r.largest_sum, r.bound)).collect();
    let radial = RadialReport {
        command: "check khessian".into(),
        model: model.label(),
        bound: format!("{k}·snlog({}, r)", c / 2.0),
        rows,
        summary: json!({"mix": mix, "c": c, "k": k, "min_gap": rep.min_gap(), "violations": rep.violations()}),
    };
    let mut out = Outcome::new(render_radial(p, &radial));
    for row in rep.rows.iter().filter(|r| r.gap < -rep.tol) {
        out.fail(format!("sum of {k} largest eigenvalues {} exceeds {} at r = {}", row.largest_sum, row.bound, row.r));
    }
    Ok(out)
}

/// Diameter bound from `(k, c)` against the model's diameter.
pub(crate) fn diam(p: &Params) -> Result<Outcome, CliError> {
    let model = resolve(&p.model, p.n, p.c())?;
    let c = p.c();
    let k = k_or(p, 1);
    if !is_k_semipositive(&curvature(&model)?, c, k)? {
        return Err(kcmp_core::Error::PreconditionUnmet(format!("𝒮 − {}·id is not {k}-semipositive", 2.0 * c)).into());
    }
    let d = diam_constants(k, c)?;
    let actual = model.diameter()?;
    let holds = actual <= d.bound + p.inequality_tol() * d.bound.max(1.0);
    let body = json!({
        "model": model.label(), "k": k, "c": c,
        "nu": d.nu, "bound": d.bound, "diameter": actual, "holds": holds,
    });
    let mut out = Outcome::new(render_summary(p, body, Format::Text)?);
    if !holds {
        out.fail(format!("diameter {actual} exceeds the bound {}", d.bound));
    }
    Ok(out)
}

/// The unchecked constant-HBSC bound on `CP¹ × CP¹`; passes when every grid
/// point violates it.
pub(crate) fn example52(p: &Params) -> Result<Outcome, CliError> {
    let model = ModelSpace::cp1_product(2)?;
    let grid = grid_or(p, "0.1:2.2:50")?;
    let mixes = sample_mixes(2, SWEEP_MIXES, p.seed)?;
    let rep = comparison_sweep(&model, BoundKind::Naive { c: 1.0 }, &grid, &mixes, p.inequality_tol())?;
    sweep_outcome(p, "check example52", &rep)
}

fn parse_bound(name: &str, p: &Params, n: usize) -> Result<BoundKind, CliError> {
    let c = p.c();
    let k = k_or(p, 1);
    Ok(match name {
        "hsc-ric" => BoundKind::HscRic { c },
        "sym-neg" => BoundKind::SymNeg { c, k },
        "sym-pos" => BoundKind::SymPos { c, k },
        "naive" => BoundKind::Naive { c },
        "riemannian" => BoundKind::Riemannian { ric: (n as f64 + 1.0) * c },
        other => return Err(usage(format!("unknown bound '{other}'; expected hsc-ric, sym-neg, sym-pos, naive or riemannian"))),
    })
}

/// `max_λ Δr` over sampled mixes against a named bound.
pub(crate) fn sweep(p: &Params, bound: Option<&str>) -> Result<Outcome, CliError> {
    let model = resolve(&p.model, p.n, p.c())?;
    let bound = parse_bound(bound.unwrap_or("hsc-ric"), p, model.dim())?;
    let mixes = match &p.mix {
        Some(_) => vec![mix_or_uniform(p, &model)?],
        None => sample_mixes(factor_count(&model)?, SWEEP_MIXES, p.seed)?,
    };
    let limit = bound.radius_limit(model.dim())?.min(model.diameter()?);
    let grid = grid_within(p, limit, 0.05, 0.95, 30)?;
    let rep = comparison_sweep(&model, bound, &grid, &mixes, p.inequality_tol())?;
    sweep_outcome(p, "check sweep", &rep)
}

fn sweep_outcome(p: &Params, command: &str, rep: &SweepReport) -> Result<Outcome, CliError> {
    let radial = RadialReport {
        command: command.into(),
        model: rep.model.clone(),
        bound: rep.bound.to_string(),
        rows: rep.rows.iter().map(|r| Row::new(r.r, r.actual, r.bound)).collect(),
        summary: json!({
            "hypothesis": rep.hypothesis,
            "seed": p.seed,
            "expect_violation": rep.expect_violation(),
            "violations": rep.violations(),
            "min_gap": rep.min_gap(),
        }),
    };
    let mut out = Outcome::new(render_radial(p, &radial));
    if rep.expect_violation() {
        for r in rep.rows.iter().filter(|r| r.gap >= -rep.tol) {
            out.fail(format!("expected a violation at r = {} but Δr = {} ≤ {}", r.r, r.actual, r.bound));
        }
    } else {
        for r in rep.rows.iter().filter(|r| r.gap < -rep.tol) {
            out.fail(format!("Δr = {} exceeds {} at r = {} (mix {:?}, seed {})", r.actual, r.bound, r.r, r.mix, p.seed));
        }
    }
    Ok(out)
}
