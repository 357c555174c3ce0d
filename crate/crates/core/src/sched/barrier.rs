use std::sync::Barrier;
use std::sync::atomic::{AtomicUsize, Ordering};

use super::{check_inputs, panic_message, ExecOptions, ExecReport, RunState};
use crate::graph::TaskGraph;
use crate::kernels::ReflectorStore;
use crate::matrix::DenseMatrix;
use crate::scalar::Scalar;
use crate::ScheduleError;

/// Level-synchronous executor.
///
/// Per pivot block: worker 0 runs the Diagonal task while the others wait,
/// everyone meets at a barrier, the Trailing tasks are split into contiguous
/// ranges across workers, and a second barrier closes the iteration.
pub fn run_barrier<T: Scalar>(
    graph: &TaskGraph,
    mat: &mut DenseMatrix<T>,
    store: &mut ReflectorStore<T>,
    threads: usize,
    opts: &ExecOptions,
) -> Result<ExecReport, ScheduleError> {
    assert!(threads >= 1, "at least one worker required");
    check_inputs(graph, mat, store)?;
    let state = RunState::new(graph, mat, store, opts);
    let barrier = Barrier::new(threads);
    let rendezvous = AtomicUsize::new(0);

    let results: Vec<_> = std::thread::scope(|s| {
        let handles: Vec<_> = (0..threads)
            .map(|w| {
                let (state, barrier, rendezvous) = (&state, &barrier, &rendezvous);
                s.spawn(move || {
                    let mut trace = Vec::new();
                    let meet = || {
                        if barrier.wait().is_leader() {
                            rendezvous.fetch_add(1, Ordering::Relaxed);
                        }
                    };
                    for block in 0..graph.block_count() {
                        if w == 0 {
                            state.execute(graph.diagonal(block), w, &mut trace);
                        }
                        meet();
                        let trailing = graph.trailing_of(block);
                        let len = trailing.len();
                        let (lo, hi) = (w * len / threads, (w + 1) * len / threads);
                        for id in trailing.skip(lo).take(hi - lo) {
                            state.execute(id, w, &mut trace);
                        }
                        meet();
                    }
                    trace
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join()).collect()
    });

    let mut trace = Vec::new();
    for r in results {
        trace.extend(r.map_err(|e| ScheduleError::WorkerPanic(panic_message(e)))?);
    }
    Ok(state.into_report(rendezvous.into_inner(), trace))
}
