//! Task bodies: coalesced pivot work (Diagonal) and coalesced row updates (Trailing).

use super::shared::{SharedMatrix, SharedStore};
use crate::graph::{TaskKind, TaskNode};
use crate::kernels::{pivot_row_kernel, reflect_row, ReflectorStore};
use crate::matrix::DenseMatrix;
use crate::scalar::Scalar;

/// # Safety
/// All parents of `node` are complete and no running task writes any row in
/// `node.rows` or reads it as a pivot row.
pub(crate) unsafe fn exec_task1<T: Scalar>(mat: &SharedMatrix<'_, T>, store: &SharedStore<'_, T>, node: &TaskNode) {
    let row_end = node.rows.end;
    for lpivot in node.pivots.clone() {
        let res = pivot_row_kernel(mat.row_mut(lpivot), lpivot);
        store.write(lpivot, res);
        if !res.defined {
            continue;
        }
        let pivot_row = mat.row(lpivot);
        for j in lpivot + 1..row_end {
            reflect_row(pivot_row, mat.row_mut(j), lpivot, res.up, res.b);
        }
    }
}

/// # Safety
/// All parents of `node` are complete (so the pivot rows and store slots of
/// its block are final) and no running task touches `node.rows`.
pub(crate) unsafe fn exec_task2<T: Scalar>(mat: &SharedMatrix<'_, T>, store: &SharedStore<'_, T>, node: &TaskNode) {
    for lpivot in node.pivots.clone() {
        let res = store.read(lpivot);
        if !res.defined {
            continue;
        }
        let pivot_row = mat.row(lpivot);
        for j in node.rows.clone() {
            reflect_row(pivot_row, mat.row_mut(j), lpivot, res.up, res.b);
        }
    }
}

/// # Safety
/// See [`exec_task1`] and [`exec_task2`].
#[inline]
pub(crate) unsafe fn exec_node<T: Scalar>(mat: &SharedMatrix<'_, T>, store: &SharedStore<'_, T>, node: &TaskNode) {
    match node.kind {
        TaskKind::Diagonal => exec_task1(mat, store, node),
        TaskKind::Trailing => exec_task2(mat, store, node),
    }
}

/// Runs a Diagonal node on one thread: each pivot of the block, then the
/// rows of the node below that pivot.
pub fn run_task1<T: Scalar>(mat: &mut DenseMatrix<T>, store: &mut ReflectorStore<T>, node: &TaskNode) {
    assert_eq!(node.kind, TaskKind::Diagonal, "Task 1 runs Diagonal nodes");
    check_bounds(mat, store, node);
    let shared = SharedMatrix::new(mat);
    let sstore = SharedStore::new(store);
    // exclusive borrows guarantee no concurrent access
    unsafe { exec_task1(&shared, &sstore, node) }
}

/// Applies the already-computed pivots of a Trailing node's block to its rows.
pub fn run_task2<T: Scalar>(mat: &mut DenseMatrix<T>, store: &mut ReflectorStore<T>, node: &TaskNode) {
    assert_eq!(node.kind, TaskKind::Trailing, "Task 2 runs Trailing nodes");
    check_bounds(mat, store, node);
    for i in node.pivots.clone() {
        assert!(store.is_written(i), "pivot {i} not computed yet");
    }
    let shared = SharedMatrix::new(mat);
    let sstore = SharedStore::new(store);
    unsafe { exec_task2(&shared, &sstore, node) }
}

fn check_bounds<T: Scalar>(mat: &DenseMatrix<T>, store: &ReflectorStore<T>, node: &TaskNode) {
    assert!(node.rows.end <= mat.nrows(), "node rows exceed matrix");
    assert!(node.pivots.end <= store.len() && node.pivots.end <= mat.pivot_count());
}
