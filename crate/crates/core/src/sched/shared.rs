//! Raw shared views of the matrix and reflector store used by worker threads.
//!
//! Soundness rests on the task graph: concurrently running tasks write
//! disjoint rows, and a row is read only after its last writer published a
//! done flag with release ordering.

use std::marker::PhantomData;

use crate::kernels::{PivotResult, ReflectorStore};
use crate::matrix::DenseMatrix;
use crate::scalar::Scalar;

pub(crate) struct SharedMatrix<'a, T> {
    ptr: *mut T,
    nrows: usize,
    ncols: usize,
    _borrow: PhantomData<&'a mut DenseMatrix<T>>,
}

unsafe impl<T: Send> Send for SharedMatrix<'_, T> {}
unsafe impl<T: Send> Sync for SharedMatrix<'_, T> {}

impl<'a, T: Scalar> SharedMatrix<'a, T> {
    pub fn new(mat: &'a mut DenseMatrix<T>) -> Self {
        let (nrows, ncols) = (mat.nrows(), mat.ncols());
        Self {
            ptr: mat.as_mut_slice().as_mut_ptr(),
            nrows,
            ncols,
            _borrow: PhantomData,
        }
    }

    /// # Safety
    /// No other thread may be writing row `i`.
    #[inline]
    pub unsafe fn row(&self, i: usize) -> &[T] {
        debug_assert!(i < self.nrows);
        std::slice::from_raw_parts(self.ptr.add(i * self.ncols), self.ncols)
    }

    /// # Safety
    /// The caller must have exclusive access to row `i` for the lifetime of
    /// the returned slice.
    #[allow(clippy::mut_from_ref)]
    #[inline]
    pub unsafe fn row_mut(&self, i: usize) -> &mut [T] {
        debug_assert!(i < self.nrows);
        std::slice::from_raw_parts_mut(self.ptr.add(i * self.ncols), self.ncols)
    }
}

pub(crate) struct SharedStore<'a, T> {
    up: *mut T,
    b: *mut T,
    defined: *mut bool,
    written: *mut bool,
    len: usize,
    _borrow: PhantomData<&'a mut ReflectorStore<T>>,
}

unsafe impl<T: Send> Send for SharedStore<'_, T> {}
unsafe impl<T: Send> Sync for SharedStore<'_, T> {}

impl<'a, T: Scalar> SharedStore<'a, T> {
    pub fn new(store: &'a mut ReflectorStore<T>) -> Self {
        let len = store.len();
        let (up, b, defined, written) = store.raw_parts();
        Self {
            up,
            b,
            defined,
            written,
            len,
            _borrow: PhantomData,
        }
    }

    /// # Safety
    /// Slot `i` must be owned by the calling task.
    #[inline]
    pub unsafe fn write(&self, i: usize, res: PivotResult<T>) {
        assert!(i < self.len);
        assert!(!*self.written.add(i), "reflector slot {i} written twice");
        *self.written.add(i) = true;
        *self.up.add(i) = res.up;
        *self.b.add(i) = res.b;
        *self.defined.add(i) = res.defined;
    }

    /// # Safety
    /// The task that wrote slot `i` must have published its completion.
    #[inline]
    pub unsafe fn read(&self, i: usize) -> PivotResult<T> {
        debug_assert!(i < self.len);
        debug_assert!(*self.written.add(i), "reflector slot {i} read before publication");
        PivotResult {
            up: *self.up.add(i),
            b: *self.b.add(i),
            defined: *self.defined.add(i),
        }
    }
}

/// Debug-build ownership table: each row may be leased by one in-flight task.
#[cfg(debug_assertions)]
pub(crate) struct RowLeases {
    owner: Vec<std::sync::atomic::AtomicUsize>,
}

#[cfg(debug_assertions)]
impl RowLeases {
    pub fn new(rows: usize) -> Self {
        Self {
            owner: (0..rows).map(|_| std::sync::atomic::AtomicUsize::new(0)).collect(),
        }
    }

    pub fn acquire(&self, rows: std::ops::Range<usize>, task: usize) {
        use std::sync::atomic::Ordering;
        for r in rows {
            if let Err(other) = self.owner[r].compare_exchange(0, task + 1, Ordering::AcqRel, Ordering::Acquire) {
                panic!("row {r} leased by task #{} while task #{task} started", other - 1);
            }
        }
    }

    pub fn release(&self, rows: std::ops::Range<usize>) {
        for r in rows {
            self.owner[r].store(0, std::sync::atomic::Ordering::Release);
        }
    }
}

#[cfg(not(debug_assertions))]
pub(crate) struct RowLeases;

#[cfg(not(debug_assertions))]
impl RowLeases {
    #[inline]
    pub fn new(_rows: usize) -> Self {
        RowLeases
    }
    #[inline]
    pub fn acquire(&self, _rows: std::ops::Range<usize>, _task: usize) {}
    #[inline]
    pub fn release(&self, _rows: std::ops::Range<usize>) {}
}
