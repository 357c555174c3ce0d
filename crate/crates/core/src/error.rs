use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ShapeError {
    #[error("matrix dimensions must be positive, got {nrows}x{ncols}")]
    EmptyDimension { nrows: usize, ncols: usize },
    #[error("expected {expected} elements, got {actual}")]
    DataLength { expected: usize, actual: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("{name} must be at least 1, got {value}")]
    InvalidParameter { name: &'static str, value: usize },
    #[error("task graph contains a cycle ({visited} of {total} nodes ordered)")]
    Cycle { visited: usize, total: usize },
    #[error("graph was built for a {graph_m}x{graph_n} matrix, got {m}x{n}")]
    ShapeMismatch {
        graph_m: usize,
        graph_n: usize,
        m: usize,
        n: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("singular factor: zero diagonal at pivot {pivot}")]
    Singular { pivot: usize },
    #[error("solve requires a square factorization, got {m}x{n}")]
    NotSquare { m: usize, n: usize },
    #[error("right-hand side has length {actual}, expected {expected}")]
    RhsLength { expected: usize, actual: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScheduleError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("watchdog: no task completed for {idle_ms} ms ({completed}/{total} done)\n{dump}")]
    Watchdog {
        idle_ms: u128,
        completed: usize,
        total: usize,
        dump: String,
    },
    #[error("worker thread panicked: {0}")]
    WorkerPanic(String),
}
