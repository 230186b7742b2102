//! Registry of named model geometries.

use kcmp_core::{KahlerCurvature, ModelSpace};

use crate::{usage, CliError};

/// `(name, description)` for every registered model.
pub const CATALOG: &[(&str, &str)] = &[
    ("cpn", "complex projective space: constant bisectional curvature c > 0 in dimension n"),
    ("hbsc", "constant bisectional curvature c (any sign) in dimension n"),
    ("hyperquadric", "the quadric Q^n in its symmetric frame form (spectrum and tensor only)"),
    ("cp1-product", "n copies of CP^1, each with holomorphic sectional curvature n+1"),
];

pub fn catalog_listing() -> String {
    let mut out = String::from("available models:\n");
    for (name, desc) in CATALOG {
        out.push_str(&format!("  {name:<13} {desc}\n"));
    }
    out
}

/// Resolves `name` with dimension `n` and curvature `c`.
pub fn resolve(name: &str, n: usize, c: f64) -> Result<ModelSpace, CliError> {
    if n == 0 {
        return Err(usage("--n must be at least 1"));
    }
    let model = match name {
        "cpn" => {
            if !(c > 0.0) {
                return Err(usage(format!("model cpn needs --c > 0, got {c}")));
            }
            ModelSpace::space_form(n, c)
        }
        "hbsc" => ModelSpace::space_form(n, c),
        "hyperquadric" => ModelSpace::hyperquadric(n),
        "cp1-product" => ModelSpace::cp1_product(n),
        other => return Err(usage(format!("unknown model '{other}'\n{}", catalog_listing().trim_end()))),
    };
    model.map_err(CliError::from)
}

pub fn curvature(model: &ModelSpace) -> Result<KahlerCurvature, CliError> {
    model.curvature().map_err(CliError::from)
}

/// Number of space-form factors, for mix validation and sampling.
pub fn factor_count(model: &ModelSpace) -> Result<usize, CliError> {
    Ok(model.space_form_factors()?.len())
}
