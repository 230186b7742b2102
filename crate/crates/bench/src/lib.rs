//! Fixtures shared by the benchmarks.

use kcmp_core::numkit::rng_from_seed;
use kcmp_core::sym_op::random_kahler_tensor;
use kcmp_core::{KahlerCurvature, ModelSpace, RadialProfile};

/// Deterministic random Kähler tensor in dimension `n`.
pub fn random_tensor(n: usize, seed: u64) -> KahlerCurvature {
    random_kahler_tensor(n, &mut rng_from_seed(seed)).expect("n ≥ 1")
}

/// Radial profile of the uniform geodesic on `n` copies of CP¹.
pub fn uniform_product_profile(n: usize) -> RadialProfile {
    let model = ModelSpace::cp1_product(n).expect("n ≥ 1");
    model.radial_profile(&vec![1.0 / (n as f64).sqrt(); n]).expect("unit mix")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_build() {
        assert_eq!(random_tensor(3, 1).dim(), 3);
        assert_eq!(uniform_product_profile(2).dim(), 3);
    }
}
