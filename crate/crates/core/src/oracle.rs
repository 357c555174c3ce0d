//! Explicit-matrix reference path.
//!
//! Everything here forms dense `n x n` reflectors and multiplies them out.
//! It is slow and exists to validate the in-place kernels and executors.

use crate::kernels::ReflectorStore;
use crate::matrix::DenseMatrix;
use crate::scalar::Scalar;

/// Dense `H_i = I - 2 v vᵀ / ‖v‖²`, with `v = (0.., up[i], fact[i, i+1..n])`.
/// Undefined pivots give the identity.
pub fn explicit_reflector<T: Scalar>(
    fact: &DenseMatrix<T>,
    store: &ReflectorStore<T>,
    i: usize,
) -> DenseMatrix<T> {
    let n = fact.ncols();
    let mut h = DenseMatrix::identity(n);
    if !store.defined[i] {
        return h;
    }
    let mut v = vec![T::zero(); n];
    v[i] = store.up[i];
    v[i + 1..].copy_from_slice(&fact.row(i)[i + 1..]);
    let vv = v.iter().fold(T::zero(), |acc, &x| acc + x * x);
    let two = T::one() + T::one();
    for r in 0..n {
        for c in 0..n {
            h[(r, c)] = h[(r, c)] - two * v[r] * v[c] / vv;
        }
    }
    h
}

/// `H_{p-1} ⋯ H_0`, the orthogonal factor of `A = L Q`.
pub fn accumulated_q<T: Scalar>(fact: &DenseMatrix<T>, store: &ReflectorStore<T>) -> DenseMatrix<T> {
    let mut q = DenseMatrix::identity(fact.ncols());
    for i in 0..store.len() {
        // q <- H_i q, building H_{p-1} ... H_0 from the right
        q = explicit_reflector(fact, store, i).matmul(&q);
    }
    q
}

/// Lower-trapezoidal factor: diagonal and strictly-lower entries of `fact`.
pub fn lower_factor<T: Scalar>(fact: &DenseMatrix<T>) -> DenseMatrix<T> {
    let (m, n) = (fact.nrows(), fact.ncols());
    let mut l = DenseMatrix::zeros(m, n);
    for r in 0..m {
        for c in 0..=r.min(n - 1) {
            l[(r, c)] = fact[(r, c)];
        }
    }
    l
}

/// Rebuilds the original matrix as `L · H_{p-1} ⋯ H_0`.
pub fn reconstruct_original<T: Scalar>(
    fact: &DenseMatrix<T>,
    store: &ReflectorStore<T>,
    original_n: usize,
) -> DenseMatrix<T> {
    assert_eq!(fact.ncols(), original_n, "column count changed");
    lower_factor(fact).matmul(&accumulated_q(fact, store))
}

/// `max |Q Qᵀ - I|` for a square `Q`.
pub fn orthogonality_defect<T: Scalar>(q: &DenseMatrix<T>) -> T {
    q.matmul(&q.transpose())
        .max_abs_diff(&DenseMatrix::identity(q.nrows()))
}
