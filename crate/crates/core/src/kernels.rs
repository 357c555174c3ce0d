//! Row-oriented Householder kernels and the sequential reference factorization.
//!
//! A reflector is built from the segment `x = row[lpivot..n]` of a pivot row and
//! applied to every later row. After the pivot step the pivot row holds `cl` on
//! the diagonal and keeps its tail untouched; together with the scalars `up` and
//! `b` the tail fully describes the reflector `H = I + v vᵀ / b` with
//! `v = (up, x[1..])`.

use crate::matrix::DenseMatrix;
use crate::scalar::Scalar;

/// Outcome of a pivot computation. `defined == false` marks a zero segment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PivotResult<T> {
    pub up: T,
    pub b: T,
    pub defined: bool,
}

impl<T: Scalar> PivotResult<T> {
    pub fn undefined() -> Self {
        Self {
            up: T::zero(),
            b: T::zero(),
            defined: false,
        }
    }
}

/// Per-pivot intermediates kept for later substitution solves.
#[derive(Debug, Clone)]
pub struct ReflectorStore<T> {
    pub up: Vec<T>,
    pub b: Vec<T>,
    pub defined: Vec<bool>,
    written: Vec<bool>,
}

impl<T: Scalar> ReflectorStore<T> {
    pub fn new(pivots: usize) -> Self {
        Self {
            up: vec![T::zero(); pivots],
            b: vec![T::zero(); pivots],
            defined: vec![false; pivots],
            written: vec![false; pivots],
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.up.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.up.is_empty()
    }

    /// Writes slot `i`. Each slot may be written once.
    pub fn record(&mut self, i: usize, result: PivotResult<T>) {
        assert!(!self.written[i], "reflector slot {i} written twice");
        self.written[i] = true;
        self.up[i] = result.up;
        self.b[i] = result.b;
        self.defined[i] = result.defined;
    }

    pub fn is_written(&self, i: usize) -> bool {
        self.written[i]
    }

    pub(crate) fn raw_parts(&mut self) -> (*mut T, *mut T, *mut bool, *mut bool) {
        (
            self.up.as_mut_ptr(),
            self.b.as_mut_ptr(),
            self.defined.as_mut_ptr(),
            self.written.as_mut_ptr(),
        )
    }

    pub fn get(&self, i: usize) -> PivotResult<T> {
        PivotResult {
            up: self.up[i],
            b: self.b[i],
            defined: self.defined[i],
        }
    }

    /// Bitwise equality of `up`, `b` and `defined`.
    pub fn bit_eq(&self, other: &Self) -> bool {
        self.first_mismatch(other).is_none()
    }

    pub fn first_mismatch(&self, other: &Self) -> Option<usize> {
        if self.len() != other.len() {
            return Some(0);
        }
        (0..self.len()).find(|&i| {
            self.defined[i] != other.defined[i]
                || self.up[i].to_bits_u64() != other.up[i].to_bits_u64()
                || self.b[i].to_bits_u64() != other.b[i].to_bits_u64()
        })
    }
}

/// Pivot computation on a single row slice.
pub fn pivot_row_kernel<T: Scalar>(row: &mut [T], lpivot: usize) -> PivotResult<T> {
    let seg = &row[lpivot..];
    let scale = seg.iter().fold(T::zero(), |acc, x| acc.max(x.abs()));
    if scale == T::zero() {
        return PivotResult::undefined();
    }
    let inv = T::one() / scale;
    let sm = seg.iter().fold(T::zero(), |acc, &x| {
        let t = x * inv;
        acc + t * t
    });
    let mut cl = scale * sm.sqrt();
    let first = seg[0];
    if first > T::zero() {
        cl = -cl;
    }
    let up = first - cl;
    row[lpivot] = cl;
    PivotResult {
        up,
        b: up * cl,
        defined: true,
    }
}

/// Applies the reflector stored in `pivot_row` (with scalars `up`, `b`) to `target`.
///
/// The dot product is accumulated left to right so results are reproducible
/// regardless of which thread runs the update.
#[inline]
pub fn reflect_row<T: Scalar>(pivot_row: &[T], target: &mut [T], lpivot: usize, up: T, b: T) {
    debug_assert!(b != T::zero(), "reflector with b == 0");
    let tail = &pivot_row[lpivot + 1..];
    let mut sm = target[lpivot] * up;
    for (&t, &v) in target[lpivot + 1..].iter().zip(tail) {
        sm = sm + t * v;
    }
    if sm == T::zero() {
        return;
    }
    let s = sm / b;
    target[lpivot] = target[lpivot] + s * up;
    for (t, &v) in target[lpivot + 1..].iter_mut().zip(tail) {
        *t = *t + s * v;
    }
}

/// Computes the reflector for pivot `lpivot` from `mat[lpivot, lpivot..n]`.
///
/// Stores `cl` on the diagonal and leaves the tail in place. A zero segment
/// leaves the matrix untouched and yields an undefined result.
pub fn update_pivot_row<T: Scalar>(mat: &mut DenseMatrix<T>, lpivot: usize) -> PivotResult<T> {
    assert!(lpivot < mat.pivot_count(), "pivot {lpivot} out of range");
    pivot_row_kernel(mat.row_mut(lpivot), lpivot)
}

/// Applies reflector `lpivot` to row `j > lpivot`.
pub fn update_trailing_non_pivot_row<T: Scalar>(
    mat: &mut DenseMatrix<T>,
    lpivot: usize,
    j: usize,
    up: T,
    b: T,
) {
    assert!(lpivot < j && j < mat.nrows(), "row {j} is not a trailing row of pivot {lpivot}");
    assert!(b != T::zero(), "b must be nonzero; skip undefined pivots");
    let (pivot_row, target) = mat.row_pair_mut(lpivot, j);
    reflect_row(pivot_row, target, lpivot, up, b);
}

/// Pivot-by-pivot in-place factorization. Reference output for every executor.
pub fn sequential_factorize<T: Scalar>(mat: &mut DenseMatrix<T>) -> ReflectorStore<T> {
    let p = mat.pivot_count();
    let m = mat.nrows();
    let mut store = ReflectorStore::new(p);
    for i in 0..p {
        let res = update_pivot_row(mat, i);
        store.record(i, res);
        if !res.defined {
            continue;
        }
        for j in i + 1..m {
            update_trailing_non_pivot_row(mat, i, j, res.up, res.b);
        }
    }
    store
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::gen_matrix;

    fn approx(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-14 * (1.0 + b.abs())
    }

    /// Explicit reflector `I - 2 v vᵀ / ‖v‖²` applied to a row vector.
    fn apply_explicit(v: &[f64], x: &[f64]) -> Vec<f64> {
        let vv: f64 = v.iter().map(|a| a * a).sum();
        let xv: f64 = x.iter().zip(v).map(|(a, b)| a * b).sum();
        x.iter().zip(v).map(|(a, b)| a - 2.0 * xv / vv * b).collect()
    }

    #[test]
    fn pivot_three_four() {
        let mut a = DenseMatrix::from_rows(&[[3.0, 4.0]]);
        let r = update_pivot_row(&mut a, 0);
        assert!(r.defined);
        assert_eq!((r.up, r.b), (8.0, -40.0));
        assert_eq!(a.row(0), &[-5.0, 4.0]);
        // the reflector maps x onto cl·e1
        let y = apply_explicit(&[8.0, 4.0], &[3.0, 4.0]);
        assert!(approx(y[0], -5.0) && y[1].abs() < 1e-14);
    }

    #[test]
    fn pivot_zero_segment_is_undefined() {
        let mut a = DenseMatrix::from_rows(&[[0.0]]);
        let r = update_pivot_row(&mut a, 0);
        assert_eq!(r, PivotResult::undefined());
        assert_eq!(a.row(0), &[0.0]);
    }

    #[test]
    fn pivot_zero_leading_entry_keeps_sign() {
        let mut a = DenseMatrix::from_rows(&[[0.0, 3.0, 4.0]]);
        let r = update_pivot_row(&mut a, 0);
        assert_eq!((r.up, r.b), (-5.0, -25.0));
        assert_eq!(a.row(0), &[5.0, 3.0, 4.0]);
        let y = apply_explicit(&[-5.0, 3.0, 4.0], &[0.0, 3.0, 4.0]);
        assert!(approx(y[0], 5.0) && y[1].abs() < 1e-14 && y[2].abs() < 1e-14);
    }

    #[test]
    fn pivot_overflow_safe() {
        let big = 1e300_f64;
        let mut a = DenseMatrix::from_rows(&[[big, big]]);
        let r = update_pivot_row(&mut a, 0);
        assert!(r.defined && r.up.is_finite());
        assert!(approx(a[(0, 0)], -big * 2f64.sqrt()));
    }

    #[test]
    fn trailing_row_matches_explicit_reflector() {
        let mut a = DenseMatrix::from_rows(&[[3.0, 4.0], [1.0, 2.0]]);
        let r = update_pivot_row(&mut a, 0);
        update_trailing_non_pivot_row(&mut a, 0, 1, r.up, r.b);
        assert!(approx(a[(1, 0)], -2.2) && approx(a[(1, 1)], 0.4));
        let y = apply_explicit(&[8.0, 4.0], &[1.0, 2.0]);
        assert!(approx(y[0], -2.2) && approx(y[1], 0.4));
    }

    #[test]
    fn trailing_row_orthogonal_is_unchanged() {
        let mut a = DenseMatrix::from_rows(&[[-5.0, 4.0], [1.0, -2.0]]);
        update_trailing_non_pivot_row(&mut a, 0, 1, 8.0, -40.0);
        assert_eq!(a.row(1), &[1.0, -2.0]);
    }

    #[test]
    fn trailing_single_column_negates() {
        let mut a = DenseMatrix::from_rows(&[[2.0], [6.0]]);
        let r = update_pivot_row(&mut a, 0);
        assert_eq!((r.up, r.b, a[(0, 0)]), (4.0, -8.0, -2.0));
        update_trailing_non_pivot_row(&mut a, 0, 1, r.up, r.b);
        assert_eq!(a[(1, 0)], -6.0);
    }

    #[test]
    #[should_panic(expected = "b must be nonzero")]
    fn trailing_rejects_zero_b() {
        let mut a = DenseMatrix::from_rows(&[[0.0, 0.0], [1.0, 2.0]]);
        update_trailing_non_pivot_row(&mut a, 0, 1, 0.0, 0.0);
    }

    #[test]
    fn sequential_two_by_two() {
        let mut a = DenseMatrix::from_rows(&[[3.0, 4.0], [1.0, 2.0]]);
        let s = sequential_factorize(&mut a);
        let expect = [-5.0, 4.0, -2.2, -0.4];
        for (x, e) in a.as_slice().iter().zip(expect) {
            assert!(approx(*x, e), "{a:?}");
        }
        assert!(approx(s.up[0], 8.0) && approx(s.up[1], 0.8));
        assert!(approx(s.b[0], -40.0) && approx(s.b[1], -0.32));
        assert_eq!(s.defined, vec![true, true]);
    }

    #[test]
    fn sequential_one_by_one_identity() {
        let mut a = DenseMatrix::from_rows(&[[1.0]]);
        let s = sequential_factorize(&mut a);
        assert_eq!((a[(0, 0)], s.up[0], s.b[0]), (-1.0, 2.0, -2.0));
    }

    #[test]
    fn sequential_zero_matrix() {
        let mut a = DenseMatrix::<f64>::zeros(2, 2);
        let s = sequential_factorize(&mut a);
        assert_eq!(a, DenseMatrix::zeros(2, 2));
        assert_eq!(s.defined, vec![false, false]);
        assert!((0..2).all(|i| s.is_written(i)));
    }

    #[test]
    fn norm_identity_per_pivot() {
        let mut a = gen_matrix::<f64>(20, 20, 5);
        let s = sequential_factorize(&mut a);
        for i in 0..20 {
            let tail: f64 = a.row(i)[i + 1..].iter().map(|x| x * x).sum();
            let vv = s.up[i] * s.up[i] + tail;
            assert!(s.b[i] < 0.0);
            assert!((vv + 2.0 * s.b[i]).abs() <= 1e-12 * vv);
        }
    }

    #[test]
    fn rectangular_shapes_factor() {
        for (m, n) in [(3, 7), (7, 3), (1, 4), (4, 1)] {
            let mut a = gen_matrix::<f64>(m, n, 11);
            let s = sequential_factorize(&mut a);
            assert_eq!(s.len(), m.min(n));
            assert!(a.is_finite());
        }
    }

    #[test]
    #[should_panic(expected = "written twice")]
    fn store_slot_is_write_once() {
        let mut s = ReflectorStore::<f64>::new(1);
        s.record(0, PivotResult::undefined());
        s.record(0, PivotResult::undefined());
    }

    #[test]
    fn single_precision_factorizes() {
        let mut a = DenseMatrix::from_rows(&[[3.0_f32, 4.0], [1.0, 2.0]]);
        let s = sequential_factorize(&mut a);
        assert_eq!(s.up[0], 8.0);
        assert!((a[(1, 1)] + 0.4).abs() < 1e-6);
    }
}
