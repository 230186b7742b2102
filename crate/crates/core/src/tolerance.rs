//! Central tolerance defaults. Every check in the crate takes its slack from
//! here unless the caller overrides it.

/// Slack for inequality checks (bound − actual ≥ −INEQUALITY).
pub const INEQUALITY: f64 = 1e-8;

/// Agreement between Riccati integration and closed forms.
pub const ODE_VS_CLOSED_FORM: f64 = 1e-6;

/// Relative tolerance used when deciding k-semipositivity of a spectrum.
pub const SPECTRAL_REL: f64 = 1e-10;

/// Hermiticity tolerance relative to the matrix norm.
pub const HERMITIAN_REL: f64 = 1e-12;

/// `1e-10 · (1 + scale)`: the absolute slack for comparisons on quantities
/// whose magnitude is `scale`.
pub fn scaled(scale: f64) -> f64 {
    SPECTRAL_REL * (1.0 + scale.abs())
}
