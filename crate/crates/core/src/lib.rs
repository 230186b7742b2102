//! Numerical Kähler comparison geometry.
//!
//! The crate evaluates and cross-checks the computable objects of Kähler
//! comparison theory on a catalog of model geometries:
//!
//! - [`curvature`]: Kähler curvature tensors in unitary frames, the model
//!   catalog (constant bisectional curvature, hyperquadric, products, scaling).
//! - [`sym_op`]: the symmetrized curvature operator on `Sym² T¹⁰`, its
//!   spectrum, k-positivity and the frame inequalities built on it.
//! - [`comparison`]: `sn_κ`, model Laplacians, radius/diameter constants and
//!   ball volumes.
//! - [`geodesic`]: Riccati integration of distance Hessians, the complex index
//!   form, product-manifold Laplacians and comparison sweeps.
//! - [`series`]: exact Bernoulli numbers and the Laurent-series certificate of
//!   the product-manifold counterexample.
//! - [`numkit`]: the self-contained numerical kernels underneath.

pub mod comparison;
pub mod curvature;
mod error;
pub mod geodesic;
pub mod numkit;
pub mod series;
pub mod sym_op;
pub mod tolerance;

pub use curvature::{KahlerCurvature, ModelSpace, RadialProfile};
pub use error::{Error, Result};
pub use numkit::{BigRational, CMatrix, Complex64};
pub use sym_op::{SymBasis, SymOperator};
