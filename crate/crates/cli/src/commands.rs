use std::collections::BTreeMap;

use kcmp_core::comparison::{ball_volume, bg_ratio, domain_end, kahler_model_laplacian, product_ball_volume, snlog};
use kcmp_core::geodesic::{riccati_delta_r, BoundKind, DEFAULT_STEPS_PER_RADIUS};
use kcmp_core::series::{closed_rounding, compare_evaluators, g_coefficients, to_decimal};
use kcmp_core::sym_op::is_k_semipositive;
use kcmp_core::{ModelSpace, RadialProfile, SymOperator};
use serde_json::json;

use crate::catalog::{curvature, factor_count, resolve};
use crate::grid::{parse_mix, GridSpec};
use crate::report::{pretty, text, versioned, RadialReport, Row};
use crate::{usage, CliError, Format, Outcome, Params};

/// Renders a radial report; CSV unless `--format` says otherwise.
pub(crate) fn render_radial(p: &Params, rep: &RadialReport) -> String {
    match p.format.unwrap_or(Format::Csv) {
        Format::Csv => rep.csv(),
        Format::Json => rep.json(),
        Format::Text => {
            let mut out = text(&json!({"command": rep.command, "model": rep.model, "bound": rep.bound}));
            out.push_str(&rep.csv());
            out.push_str(&text(&rep.summary));
            out
        }
    }
}

/// Renders a summary object; text unless `--format` says otherwise.
pub(crate) fn render_summary(p: &Params, body: serde_json::Value, default: Format) -> Result<String, CliError> {
    match p.format.unwrap_or(default) {
        Format::Json => Ok(pretty(&versioned(body))),
        Format::Text => Ok(text(&body)),
        Format::Csv => Err(usage("CSV output is only available for radial reports")),
    }
}

pub(crate) fn grid_or(p: &Params, default: &str) -> Result<Vec<f64>, CliError> {
    Ok(GridSpec::parse(p.grid.as_deref().unwrap_or(default))?.points())
}

/// `--mix`, or the uniform mix over the model's factors.
pub(crate) fn mix_or_uniform(p: &Params, model: &ModelSpace) -> Result<Vec<f64>, CliError> {
    let m = factor_count(model)?;
    match &p.mix {
        Some(text) => {
            let mix = parse_mix(text)?;
            if mix.len() != m {
                return Err(usage(format!("--mix has {} entries, model has {m} factors", mix.len())));
            }
            Ok(mix)
        }
        None => Ok(vec![1.0 / (m as f64).sqrt(); m]),
    }
}

/// `Σ multiplicity · snlog(κ, r)` over the blocks of a radial profile.
pub(crate) fn profile_closed_form(profile: &RadialProfile, r: f64) -> Result<f64, CliError> {
    let mut acc = 0.0;
    for b in &profile.blocks {
        acc += b.multiplicity as f64 * snlog(b.curvature, r)?;
    }
    Ok(acc)
}

pub(crate) fn spectrum(p: &Params, dump: bool) -> Result<Outcome, CliError> {
    let model = resolve(&p.model, p.n, p.c())?;
    let r = curvature(&model)?;
    if dump {
        let d = r.to_dump();
        let body = json!({"model": model.label(), "n": d.n, "comp": d.comp});
        return Ok(Outcome::new(render_summary(p, body, Format::Json)?));
    }
    let op = SymOperator::build(&r)?;
    let mut ksum = BTreeMap::new();
    for k in 1..=op.size() {
        ksum.insert(k.to_string(), op.k_sum(k)?);
    }
    let mut body = json!({
        "model": model.label(),
        "n": op.n(),
        "N": op.size(),
        "eigenvalues": op.spectrum(),
        "ksum": ksum,
    });
    if let Some(k) = p.k {
        if k == 0 || k > op.size() {
            return Err(usage(format!("--k must be in 1..={}", op.size())));
        }
        let c = p.c.unwrap_or(0.0);
        body["semipositive"] = json!({"k": k, "c": c, "holds": is_k_semipositive(&r, c, k)?});
    }
    Ok(Outcome::new(render_summary(p, body, Format::Json)?))
}

pub(crate) fn laplacian(p: &Params) -> Result<Outcome, CliError> {
    let model = resolve(&p.model, p.n, p.c())?;
    let mix = mix_or_uniform(p, &model)?;
    let profile = model.radial_profile(&mix)?;
    let grid = grid_or(p, "0.1:2.0:20")?;
    let n = model.dim();
    let c = p.c();
    let tol = p.ode_tol();
    let mut rows = Vec::with_capacity(grid.len());
    let mut max_err: f64 = 0.0;
    let mut failures = Vec::new();
    for &r in &grid {
        let actual = riccati_delta_r(&profile, r, r / DEFAULT_STEPS_PER_RADIUS)?.delta_r;
        let closed = profile_closed_form(&profile, r)?;
        let err = (actual - closed).abs();
        max_err = max_err.max(err);
        if err > tol {
            failures.push(format!("Riccati vs closed form differs by {err:e} at r = {r} (mix {mix:?})"));
        }
        let row = Row::new(r, actual, kahler_model_laplacian(n, c, r)?);
        if row.gap < -p.inequality_tol() * (1.0 + row.bound.abs()) {
            failures.push(format!("Δr = {actual} exceeds the model value {} at r = {r} (mix {mix:?})", row.bound));
        }
        rows.push(row);
    }
    let rep = RadialReport {
        command: "laplacian".into(),
        model: model.label(),
        bound: format!("hbsc(n={n},c={c})"),
        summary: json!({"mix": mix, "max_ode_error": max_err, "tol": tol}),
        rows,
    };
    let mut out = Outcome::new(render_radial(p, &rep));
    for f in failures {
        out.fail(f);
    }
    Ok(out)
}

pub(crate) fn volume(p: &Params) -> Result<Outcome, CliError> {
    let model = resolve(&p.model, p.n, p.c())?;
    let c = p.c();
    let hypothesis = BoundKind::HscRic { c }.check_hypothesis(&model)?;
    let factors = model.space_form_factors()?;
    let n = model.dim();
    let diam = model.diameter()?;
    let reach = diam.min(domain_end(2.0 * c));
    let grid = match &p.grid {
        Some(g) => GridSpec::parse(g)?.points(),
        None if reach.is_finite() => GridSpec { start: 0.05 * reach, end: reach, count: 20 }.points(),
        None => GridSpec { start: 0.1, end: 3.0, count: 20 }.points(),
    };
    let tol = p.inequality_tol();
    let mut rows = Vec::with_capacity(grid.len());
    let mut samples = Vec::with_capacity(grid.len());
    let mut out_failures = Vec::new();
    for &delta in &grid {
        let actual = product_ball_volume(&factors, delta)?;
        let bound = ball_volume(n, c, delta)?;
        if bound - actual < -tol * bound.max(1.0) {
            out_failures.push(format!("volume exceeds the model ball at δ = {delta}: {actual} > {bound}"));
        }
        rows.push(Row::new(delta, actual, bound));
        samples.push((delta, actual));
    }
    let curve = bg_ratio(&samples, n, c, &model.label())?;
    let monotone = curve.is_non_increasing(tol);
    if !monotone {
        let i = curve.values.windows(2).position(|w| w[1] > w[0] + tol).unwrap_or(0);
        out_failures.push(format!("volume ratio increases between δ = {} and δ = {}", curve.grid[i], curve.grid[i + 1]));
    }
    let mut summary = json!({
        "hypothesis": hypothesis,
        "ratio": curve.values,
        "ratio_non_increasing": monotone,
    });
    if diam.is_finite() {
        summary["total_volume"] = json!(product_ball_volume(&factors, diam)?);
    }
    if c > 0.0 {
        summary["model_total_volume"] = json!(ball_volume(n, c, domain_end(2.0 * c))?);
    }
    let rep = RadialReport { command: "volume".into(), model: model.label(), bound: format!("hbsc(n={n},c={c})"), rows, summary };
    let mut out = Outcome::new(render_radial(p, &rep));
    for f in out_failures {
        out.fail(f);
    }
    Ok(out)
}

pub(crate) fn series(p: &Params, eval: Option<f64>, order: usize) -> Result<Outcome, CliError> {
    if !(3..=200).contains(&order) {
        return Err(usage(format!("--order must be in 3..=200, got {order}")));
    }
    let s = g_coefficients(order)?;
    let positive = s.all_nonzero_positive();
    let mut out_fail = Vec::new();
    if !positive {
        out_fail.push(format!("a nonzero coefficient up to k = {order} is not positive"));
    }
    let terms: Vec<_> = (1..=order)
        .map(|k| {
            json!({
                "k": k,
                "bracket": s.brackets[k - 1].to_string(),
                "coeff": s.coeff(k).to_string(),
                "coeff_decimal": to_decimal(s.coeff(k), 17),
            })
        })
        .collect();
    let mut body = json!({
        "order": order,
        "zero_indices": s.zero_indices(),
        "all_nonzero_positive": positive,
    });
    let mut eval_lines = String::new();
    if let Some(r) = eval {
        let a = compare_evaluators(&s, r)?;
        if !a.holds() {
            out_fail.push(format!("series and closed form differ by {:e} > {:e} at r = {r}", a.gap(), a.allowance()));
        }
        let e = json!({
            "r": r,
            "series": a.series.value,
            "tail_bound": a.series.tail,
            "series_rounding": a.series.rounding,
            "closed": a.closed,
            "closed_rounding": closed_rounding(r)?,
            "gap": a.gap(),
            "agrees": a.holds(),
        });
        eval_lines = text(&e);
        body["eval"] = e;
    }
    let report = match p.format.unwrap_or(Format::Text) {
        Format::Json => {
            body["terms"] = json!(terms);
            pretty(&versioned(body))
        }
        Format::Text => {
            let mut out = String::from("k\tT_k\tc_k\tc_k (decimal)\n");
            for k in 1..=order {
                out.push_str(&format!("{k}\t{}\t{}\t{}\n", s.brackets[k - 1], s.coeff(k), to_decimal(s.coeff(k), 17)));
            }
            out.push_str(&format!("zero coefficients at k = {:?}\n", s.zero_indices()));
            out.push_str(&format!("every nonzero coefficient positive (k ≤ {order}): {}\n", if positive { "yes" } else { "no" }));
            out.push_str(&eval_lines);
            out
        }
        Format::Csv => return Err(usage("CSV output is only available for radial reports")),
    };
    let mut out = Outcome::new(report);
    for f in out_fail {
        out.fail(f);
    }
    Ok(out)
}
