//! Square solves from the in-place factorization `A = L · H_{p-1} ⋯ H_0`.
//!
//! `A x = r` becomes `L y = r` (forward substitution over the lower factor)
//! followed by `x = H_0 ⋯ H_{p-1} y`, applied from the stored `up`/`b`
//! scalars and the reflector tails without forming `Q`.

use crate::kernels::ReflectorStore;
use crate::matrix::DenseMatrix;
use crate::scalar::Scalar;
use crate::SolveError;

/// A factored matrix together with its reflector intermediates.
#[derive(Debug, Clone)]
pub struct Factorization<T> {
    pub mat: DenseMatrix<T>,
    pub store: ReflectorStore<T>,
}

impl<T: Scalar> Factorization<T> {
    pub fn new(mat: DenseMatrix<T>, store: ReflectorStore<T>) -> Self {
        assert_eq!(store.len(), mat.pivot_count(), "store does not match matrix");
        Self { mat, store }
    }

    /// Factors a copy of `a` with the sequential reference.
    pub fn sequential(a: &DenseMatrix<T>) -> Self {
        let mut mat = a.clone();
        let store = crate::kernels::sequential_factorize(&mut mat);
        Self { mat, store }
    }

    pub fn nrows(&self) -> usize {
        self.mat.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.mat.ncols()
    }

    /// `max |cl| / min |cl|` over the diagonal; infinite when singular.
    pub fn condition_estimate(&self) -> T {
        let p = self.mat.pivot_count();
        let (mut lo, mut hi) = (T::infinity(), T::zero());
        for i in 0..p {
            let d = self.mat[(i, i)].abs();
            lo = lo.min(d);
            hi = hi.max(d);
        }
        if lo == T::zero() {
            T::infinity()
        } else {
            hi / lo
        }
    }

    fn require_square(&self) -> Result<(), SolveError> {
        let (m, n) = (self.nrows(), self.ncols());
        if m != n {
            return Err(SolveError::NotSquare { m, n });
        }
        Ok(())
    }
}

/// Solves `L y = rhs` for the diagonal plus strictly-lower part of the factor.
pub fn forward_substitute<T: Scalar>(fact: &Factorization<T>, rhs: &[T]) -> Result<Vec<T>, SolveError> {
    fact.require_square()?;
    let n = fact.nrows();
    if rhs.len() != n {
        return Err(SolveError::RhsLength {
            expected: n,
            actual: rhs.len(),
        });
    }
    let mut y = Vec::with_capacity(n);
    for i in 0..n {
        let row = fact.mat.row(i);
        let diag = row[i];
        if diag == T::zero() {
            return Err(SolveError::Singular { pivot: i });
        }
        let mut acc = rhs[i];
        for (&l, &yk) in row[..i].iter().zip(&y) {
            acc = acc - l * yk;
        }
        y.push(acc / diag);
    }
    Ok(y)
}

/// Applies `H_{p-1}` first and `H_0` last, i.e. returns `H_0 ⋯ H_{p-1} y`.
pub fn apply_reflectors_reverse<T: Scalar>(fact: &Factorization<T>, y: &[T]) -> Vec<T> {
    assert_eq!(y.len(), fact.ncols(), "vector length must equal column count");
    let mut out = y.to_vec();
    for i in (0..fact.store.len()).rev() {
        apply_one(fact, &mut out, i);
    }
    out
}

/// Applies `H_0` first and `H_{p-1}` last, i.e. returns `H_{p-1} ⋯ H_0 y`.
pub fn apply_reflectors_forward<T: Scalar>(fact: &Factorization<T>, y: &[T]) -> Vec<T> {
    assert_eq!(y.len(), fact.ncols(), "vector length must equal column count");
    let mut out = y.to_vec();
    for i in 0..fact.store.len() {
        apply_one(fact, &mut out, i);
    }
    out
}

fn apply_one<T: Scalar>(fact: &Factorization<T>, y: &mut [T], i: usize) {
    if !fact.store.defined[i] {
        return;
    }
    crate::kernels::reflect_row(fact.mat.row(i), y, i, fact.store.up[i], fact.store.b[i]);
}

/// Solves `A x = rhs` for a square non-singular factorization.
pub fn solve<T: Scalar>(fact: &Factorization<T>, rhs: &[T]) -> Result<Vec<T>, SolveError> {
    let y = forward_substitute(fact, rhs)?;
    Ok(apply_reflectors_reverse(fact, &y))
}
