//! Seeded random corpora: Ginibre matrices, Haar unitaries, and random
//! tensor elements.
//!
//! Every random stream is a ChaCha generator keyed by `(seed, index)`, so
//! parallel restarts and sweeps are reproducible regardless of scheduling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::matcore::{svd, ComplexMatrix, C64};

pub type LabRng = ChaCha8Rng;

/// Deterministic generator for stream `index` under `seed`.
pub fn rng_for(seed: u64, index: u64) -> LabRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Standard complex Gaussian: real and imaginary parts are `N(0, 1/2)`.
pub fn complex_gaussian(rng: &mut impl Rng) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn complex_gaussian_vec(n: usize, rng: &mut impl Rng) -> Vec<C64> {
    (0..n).map(|_| complex_gaussian(rng)).collect()
}

/// Matrix with i.i.d. standard complex Gaussian entries.
pub fn ginibre(rows: usize, cols: usize, rng: &mut impl Rng) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| complex_gaussian(rng))
}

/// Haar-distributed unitary (square) or partial isometry (rectangular),
/// taken as the polar factor of a Ginibre matrix.
pub fn haar_isometry(rows: usize, cols: usize, rng: &mut impl Rng) -> ComplexMatrix {
    svd(&ginibre(rows, cols, rng)).polar_factor()
}

/// Uniformly distributed unit vector.
pub fn unit_vector(n: usize, rng: &mut impl Rng) -> Vec<C64> {
    let v = complex_gaussian_vec(n, rng);
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / norm).collect()
}
