//! Dual-queue executors: a ready (main) queue plus a wait queue for tasks
//! whose releaser finished before their other parents.

use crossbeam_queue::SegQueue;
use crossbeam_utils::Backoff;

use super::queue::{FifoQueue, PriorityQueue, ReadyQueue};
use super::{check_inputs, panic_message, AbortOnPanic, ExecOptions, ExecReport, RunState};
use crate::graph::{TaskGraph, TaskId};
use crate::kernels::ReflectorStore;
use crate::matrix::DenseMatrix;
use crate::scalar::Scalar;
use crate::ScheduleError;
use std::sync::atomic::Ordering;

/// Dual-queue executor with a FIFO main queue.
pub fn run_lockfree<T: Scalar>(
    graph: &TaskGraph,
    mat: &mut DenseMatrix<T>,
    store: &mut ReflectorStore<T>,
    threads: usize,
    opts: &ExecOptions,
) -> Result<ExecReport, ScheduleError> {
    run_dual_queue(graph, mat, store, threads, opts, FifoQueue::new())
}

/// Dual-queue executor whose main queue pops the highest-priority ready task.
pub fn run_priority<T: Scalar>(
    graph: &TaskGraph,
    mat: &mut DenseMatrix<T>,
    store: &mut ReflectorStore<T>,
    threads: usize,
    opts: &ExecOptions,
) -> Result<ExecReport, ScheduleError> {
    run_dual_queue(graph, mat, store, threads, opts, PriorityQueue::new(graph))
}

struct Queues<Q> {
    main: Q,
    wait: SegQueue<TaskId>,
}

fn run_dual_queue<T: Scalar, Q: ReadyQueue>(
    graph: &TaskGraph,
    mat: &mut DenseMatrix<T>,
    store: &mut ReflectorStore<T>,
    threads: usize,
    opts: &ExecOptions,
    main: Q,
) -> Result<ExecReport, ScheduleError> {
    assert!(threads >= 1, "at least one worker required");
    check_inputs(graph, mat, store)?;
    let state = RunState::new(graph, mat, store, opts);
    let queues = Queues {
        main,
        wait: SegQueue::new(),
    };
    state.note_main_push(graph.root);
    queues.main.push(graph.root);

    let results: Vec<_> = std::thread::scope(|s| {
        let handles: Vec<_> = (0..threads)
            .map(|w| {
                let (state, queues) = (&state, &queues);
                s.spawn(move || worker(w, state, queues, opts))
            })
            .collect();
        handles.into_iter().map(|h| h.join()).collect()
    });

    let mut trace = Vec::new();
    let mut watchdog = None;
    for r in results {
        match r.map_err(|e| ScheduleError::WorkerPanic(panic_message(e)))? {
            Ok(t) => trace.extend(t),
            Err(e) => watchdog = watchdog.or(Some(e)),
        }
    }
    if let Some(e) = watchdog {
        return Err(e);
    }
    Ok(state.into_report(0, trace))
}

fn worker<T: Scalar, Q: ReadyQueue>(
    w: usize,
    state: &RunState<'_, T>,
    queues: &Queues<Q>,
    opts: &ExecOptions,
) -> Result<Vec<crate::sched::TraceEvent>, ScheduleError> {
    let _guard = AbortOnPanic(&state.abort);
    let graph = state.graph;
    let mut trace = Vec::new();
    let backoff = Backoff::new();
    let push_ready = |id: TaskId| {
        state.note_main_push(id);
        queues.main.push(id);
    };

    while !state.all_done() {
        if state.abort.load(Ordering::Relaxed) {
            break;
        }
        let mut progressed = false;

        if let Some(id) = queues.main.pop() {
            state.execute(id, w, &mut trace);
            for &child in &graph.node(id).releases {
                if state.parents_done(child) {
                    push_ready(child);
                } else {
                    state.deferrals.fetch_add(1, Ordering::Relaxed);
                    queues.wait.push(child);
                }
            }
            progressed = true;
        }

        // at most one deferred task per round
        if let Some(id) = queues.wait.pop() {
            if state.parents_done(id) {
                push_ready(id);
                progressed = true;
            } else {
                state.deferrals.fetch_add(1, Ordering::Relaxed);
                queues.wait.push(id);
            }
        }

        if progressed {
            backoff.reset();
            continue;
        }
        if state.idle_for() > opts.watchdog && !state.all_done() {
            state.abort.store(true, Ordering::SeqCst);
            return Err(ScheduleError::Watchdog {
                idle_ms: state.idle_for().as_millis(),
                completed: state.completed.load(Ordering::Acquire),
                total: state.total(),
                dump: state.dump(queues.main.len_hint(), queues.wait.len()),
            });
        }
        if backoff.is_completed() {
            std::thread::yield_now();
        } else {
            backoff.snooze();
        }
    }
    Ok(trace)
}
