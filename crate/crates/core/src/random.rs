//! Seeded test matrices.
//!
//! Entries are drawn from ChaCha8 (`rand_chacha::ChaCha8Rng::seed_from_u64`),
//! taking `2u - 1` for a uniform `u` in `[0, 1)`. ChaCha output is specified
//! bit-for-bit, so a seed yields the same matrix on every platform.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::matrix::DenseMatrix;
use crate::scalar::Scalar;

/// Uniform entries in `[-1, 1)`.
pub fn gen_matrix<T: Scalar>(m: usize, n: usize, seed: u64) -> DenseMatrix<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let data = (0..m * n)
        .map(|_| {
            let u: f64 = rng.random();
            T::from_f64(2.0 * u - 1.0).expect("representable")
        })
        .collect();
    DenseMatrix::from_vec(m, n, data).expect("positive dimensions")
}

/// Like [`gen_matrix`] with `m` added to each diagonal entry.
pub fn gen_dominant_matrix<T: Scalar>(m: usize, n: usize, seed: u64) -> DenseMatrix<T> {
    let mut a = gen_matrix(m, n, seed);
    let shift = T::from_usize(m).expect("representable");
    for i in 0..m.min(n) {
        a[(i, i)] = a[(i, i)] + shift;
    }
    a
}
