//! Command-line front end for `kcmp-core`.
//!
//! Exit codes: `0` every assertion passed, `1` an assertion failed (the
//! diagnostic carries the seed and grid point), `2` usage or configuration
//! error.

use std::fmt;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub mod catalog;
mod check;
mod commands;
pub mod grid;
pub mod report;

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAILED: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

/// Inequality slack used when `--tol` is absent.
pub const DEFAULT_INEQUALITY_TOL: f64 = kcmp_core::tolerance::INEQUALITY;
/// ODE-vs-closed-form tolerance used when `--tol` is absent.
pub const DEFAULT_ODE_TOL: f64 = kcmp_core::tolerance::ODE_VS_CLOSED_FORM;

#[derive(Debug, Clone, Parser)]
#[command(name = "kcmp", version, about = "Numerical Kähler comparison geometry")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub params: Params,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Spectrum of the symmetrized curvature operator (JSON).
    Spectrum {
        /// Print the curvature tensor instead of the spectrum.
        #[arg(long)]
        dump: bool,
    },
    /// Riccati Δr along a geodesic against the constant-HBSC Laplacian.
    Laplacian,
    /// Ball volumes against the constant-HBSC model and their ratio.
    Volume,
    /// Run a check suite.
    Check {
        suite: Suite,
        /// Bound for `check sweep`: hsc-ric, sym-neg, sym-pos, naive, riemannian.
        #[arg(long)]
        bound: Option<String>,
    },
    /// Coefficients and evaluation of the Laurent series of the product
    /// Laplacian excess.
    Series {
        /// Evaluate both the series and the closed form at this radius.
        #[arg(long)]
        eval: Option<f64>,
        /// Number of coefficients to print.
        #[arg(long, default_value_t = 12)]
        order: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Lemma31,
    Thm21,
    Product,
    Khessian,
    Diam,
    Example52,
    Sweep,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Text,
}

#[derive(Debug, Clone, Args)]
pub struct Params {
    /// Model name; unknown names print the catalog.
    #[arg(long, global = true, default_value = "cpn")]
    pub model: String,
    /// Complex dimension (number of factors for cp1-product).
    #[arg(long, global = true, default_value_t = 2)]
    pub n: usize,
    /// Curvature constant.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub c: Option<f64>,
    /// Positivity index.
    #[arg(long, global = true)]
    pub k: Option<usize>,
    /// Geodesic mix, comma separated; normalised to unit length.
    #[arg(long, global = true)]
    pub mix: Option<String>,
    /// Radial grid `a:b:count`.
    #[arg(long, global = true)]
    pub grid: Option<String>,
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    /// Overrides the relevant default tolerance.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
}

impl Params {
    pub fn c(&self) -> f64 {
        self.c.unwrap_or(1.0)
    }

    pub fn inequality_tol(&self) -> f64 {
        self.tol.unwrap_or(DEFAULT_INEQUALITY_TOL)
    }

    pub fn ode_tol(&self) -> f64 {
        self.tol.unwrap_or(DEFAULT_ODE_TOL)
    }
}

/// A failed run: exit code and message.
#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<kcmp_core::Error> for CliError {
    fn from(e: kcmp_core::Error) -> Self {
        use kcmp_core::Error as E;
        let code = match e {
            E::NotHermitian { .. } | E::SymmetryViolation { .. } | E::Accuracy { .. } => EXIT_FAILED,
            E::InvalidArgument(_) | E::Domain(_) | E::ConjugatePoint { .. } | E::PreconditionUnmet(_) | E::Unsupported(_) => {
                EXIT_USAGE
            }
        };
        Self { code, message: e.to_string() }
    }
}

pub(crate) fn usage(msg: impl Into<String>) -> CliError {
    CliError { code: EXIT_USAGE, message: msg.into() }
}

/// Result of a run: the exit code, the report body and diagnostics for
/// stderr.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub code: u8,
    pub report: String,
    pub diagnostics: Vec<String>,
}

impl Outcome {
    pub(crate) fn new(report: String) -> Self {
        Self { code: EXIT_OK, report, diagnostics: Vec::new() }
    }

    /// Marks the run failed with a reproducer message.
    pub(crate) fn fail(&mut self, msg: impl Into<String>) {
        self.code = EXIT_FAILED;
        self.diagnostics.push(format!("FAIL: {}", msg.into()));
    }

    pub(crate) fn note(&mut self, msg: impl Into<String>) {
        self.diagnostics.push(msg.into());
    }
}

/// Executes `config`. When `--out` is set the report goes to that file and
/// `Outcome::report` is empty.
pub fn run(config: &RunConfig) -> Outcome {
    let result = validate(&config.params).and_then(|()| dispatch(config));
    let mut outcome = match result {
        Ok(o) => o,
        Err(e) => return Outcome { code: e.code, report: String::new(), diagnostics: vec![format!("error: {}", e.message)] },
    };
    if let Some(path) = &config.params.out {
        if let Err(e) = std::fs::write(path, &outcome.report) {
            return Outcome {
                code: EXIT_USAGE,
                report: String::new(),
                diagnostics: vec![format!("error: cannot write {}: {e}", path.display())],
            };
        }
        outcome.note(format!("report written to {}", path.display()));
        outcome.report.clear();
    }
    outcome
}

fn validate(p: &Params) -> Result<(), CliError> {
    if let Some(t) = p.tol {
        if !(t > 0.0) || !t.is_finite() {
            return Err(usage(format!("--tol must be positive, got {t}")));
        }
    }
    if let Some(c) = p.c {
        if !c.is_finite() {
            return Err(usage("--c must be finite"));
        }
    }
    Ok(())
}

fn dispatch(config: &RunConfig) -> Result<Outcome, CliError> {
    let p = &config.params;
    match &config.command {
        Command::Spectrum { dump } => commands::spectrum(p, *dump),
        Command::Laplacian => commands::laplacian(p),
        Command::Volume => commands::volume(p),
        Command::Series { eval, order } => commands::series(p, *eval, *order),
        Command::Check { suite, bound } => match suite {
            Suite::Lemma31 => check::lemma31(p),
            Suite::Thm21 => check::thm21(p),
            Suite::Product => check::product(p),
            Suite::Khessian => check::khessian(p),
            Suite::Diam => check::diam(p),
            Suite::Example52 => check::example52(p),
            Suite::Sweep => check::sweep(p, bound.as_deref()),
        },
    }
}
