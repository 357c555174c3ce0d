//! In-place Householder factorization driven by a chunked task graph.
//!
//! The factorization works row by row: pivot `i` builds a reflector from
//! `A[i, i..n]` and applies it to every later row, leaving the lower factor
//! `L` and the reflector tails in place so that `A = L · H_{p-1} ⋯ H_0`. The
//! scalars `up`/`b` of each reflector are kept in a [`ReflectorStore`] for
//! later substitution solves.
//!
//! Work is coalesced into Diagonal tasks (`alpha` pivots each) and Trailing
//! tasks (`beta` rows each), arranged in a DAG and executed by one of four
//! interchangeable executors. All of them reproduce the sequential result
//! bit for bit.
//!
//! ```
//! use dagqr::{factorize, Matrix, SchedulerConfig, SchedulerKind};
//!
//! let mut a = Matrix::from_rows(&[[3.0, 4.0], [1.0, 2.0]]);
//! let cfg = SchedulerConfig { kind: SchedulerKind::LockFree, threads: 2, alpha: 1, beta: 1 };
//! let store = factorize(&mut a, &cfg).unwrap();
//! assert_eq!(a[(0, 0)], -5.0);
//! assert_eq!(store.up[0], 8.0);
//! ```

mod error;
pub mod graph;
pub mod kernels;
pub mod matrix;
pub mod oracle;
pub mod random;
pub mod scalar;
pub mod sched;
pub mod solver;

pub use error::{GraphError, ScheduleError, ShapeError, SolveError};
pub use graph::{build_task_graph, TaskGraph, TaskId, TaskKind, TaskNode};
pub use kernels::{sequential_factorize, update_pivot_row, update_trailing_non_pivot_row, PivotResult, ReflectorStore};
pub use matrix::DenseMatrix;
pub use random::{gen_dominant_matrix, gen_matrix};
pub use scalar::Scalar;
pub use sched::{execute, factorize, ExecOptions, ExecReport, SchedulerConfig, SchedulerKind};
pub use solver::{apply_reflectors_reverse, forward_substitute, solve, Factorization};

/// Double-precision matrix, the element type used by the CLI and benchmarks.
pub type Matrix = DenseMatrix<f64>;
pub type Store = ReflectorStore<f64>;
pub type Fact = Factorization<f64>;
/// Single-precision variants.
pub type Matrix32 = DenseMatrix<f32>;
pub type Store32 = ReflectorStore<f32>;
