//! Self-contained numerical kernels: dense complex matrices, a Hermitian
//! Jacobi eigensolver, seeded random unitary frames, adaptive quadrature,
//! a fixed-step RK4 integrator and exact rationals.

mod cmatrix;
mod eigen;
pub mod ode;
pub mod quad;
pub mod rational;
mod unitary;

pub use cmatrix::{inner, norm, CMatrix};
pub use eigen::{hermitian_eigen, HermitianEigen};
pub use num_complex::Complex64;
pub use rational::BigRational;
pub(crate) use unitary::complex_gaussian;
pub use unitary::{random_unitary, random_unitary_with, rng_from_seed, SeededRng};

/// Complex zero.
pub const C0: Complex64 = Complex64::new(0.0, 0.0);
/// Complex one.
pub const C1: Complex64 = Complex64::new(1.0, 0.0);
