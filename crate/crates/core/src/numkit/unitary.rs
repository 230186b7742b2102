use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::{inner, norm, CMatrix};
use crate::error::{Error, Result};

/// Deterministic generator used throughout the crate.
pub type SeededRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Standard complex Gaussian sample (independent N(0,1) parts).
pub(crate) fn complex_gaussian(rng: &mut SeededRng) -> Complex64 {
    Complex64::new(StandardNormal.sample(rng), StandardNormal.sample(rng))
}

/// Seeded random unitary: Gram–Schmidt on the columns of a complex Gaussian
/// matrix, with a second re-orthogonalisation pass.
pub fn random_unitary(n: usize, seed: u64) -> Result<CMatrix> {
    let mut rng = rng_from_seed(seed);
    random_unitary_with(n, &mut rng)
}

/// As [`random_unitary`], drawing from an existing generator.
pub fn random_unitary_with(n: usize, rng: &mut SeededRng) -> Result<CMatrix> {
    if n == 0 {
        return Err(Error::InvalidArgument("unitary dimension must be at least 1".into()));
    }
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    while cols.len() < n {
        let mut v: Vec<Complex64> = (0..n).map(|_| complex_gaussian(rng)).collect();
        for _ in 0..2 {
            for q in &cols {
                let proj = inner(&v, q);
                for (vi, qi) in v.iter_mut().zip(q) {
                    *vi -= proj * qi;
                }
            }
        }
        let len = norm(&v);
        // a numerically dependent draw is simply redrawn
        if len < 1e-8 {
            continue;
        }
        v.iter_mut().for_each(|z| *z /= len);
        cols.push(v);
    }
    Ok(CMatrix::from_fn(n, n, |i, j| cols[j][i]))
}
