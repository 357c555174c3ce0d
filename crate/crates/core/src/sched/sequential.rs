use super::{check_inputs, ExecOptions, ExecReport, RunState};
use crate::graph::TaskGraph;
use crate::kernels::ReflectorStore;
use crate::matrix::DenseMatrix;
use crate::scalar::Scalar;
use crate::ScheduleError;

/// Single-threaded reference executor: runs nodes in priority order
/// (descending bottom level, then Diagonal first, then block indices).
pub fn run_sequential<T: Scalar>(
    graph: &TaskGraph,
    mat: &mut DenseMatrix<T>,
    store: &mut ReflectorStore<T>,
    opts: &ExecOptions,
) -> Result<ExecReport, ScheduleError> {
    check_inputs(graph, mat, store)?;
    let state = RunState::new(graph, mat, store, opts);
    let mut trace = Vec::new();
    for &id in graph.priority_order() {
        state.execute(id, 0, &mut trace);
    }
    Ok(state.into_report(0, trace))
}
