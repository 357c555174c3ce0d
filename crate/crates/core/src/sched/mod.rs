//! Executors for the chunked task graph.
//!
//! Every executor composes the same kernel calls per row in the same pivot
//! order, so the factored matrix and reflector store are bit-identical to
//! [`sequential_factorize`](crate::kernels::sequential_factorize) for any
//! thread count.

mod barrier;
mod dual_queue;
pub mod queue;
mod sequential;
pub(crate) mod shared;
mod tasks;
mod trace;

use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicBool, AtomicU32, AtomicU64, AtomicUsize, Ordering};
use std::time::{Duration, Instant};

pub use barrier::run_barrier;
pub use dual_queue::{run_lockfree, run_priority};
pub use sequential::run_sequential;
pub use tasks::{run_task1, run_task2};
pub use trace::{write_trace_csv, TraceEvent};

use crate::graph::{build_task_graph, TaskGraph, TaskId};
use crate::kernels::ReflectorStore;
use crate::matrix::DenseMatrix;
use crate::scalar::Scalar;
use crate::{GraphError, ScheduleError};
use shared::{RowLeases, SharedMatrix, SharedStore};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SchedulerKind {
    Sequential,
    Barrier,
    LockFree,
    Priority,
}

impl SchedulerKind {
    pub const ALL: [SchedulerKind; 4] = [
        SchedulerKind::Sequential,
        SchedulerKind::Barrier,
        SchedulerKind::LockFree,
        SchedulerKind::Priority,
    ];

    pub const PARALLEL: [SchedulerKind; 3] = [SchedulerKind::Barrier, SchedulerKind::LockFree, SchedulerKind::Priority];

    pub fn name(self) -> &'static str {
        match self {
            SchedulerKind::Sequential => "seq",
            SchedulerKind::Barrier => "barrier",
            SchedulerKind::LockFree => "lockfree",
            SchedulerKind::Priority => "priority",
        }
    }
}

impl fmt::Display for SchedulerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SchedulerKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "seq" | "sequential" => Ok(SchedulerKind::Sequential),
            "barrier" => Ok(SchedulerKind::Barrier),
            "lockfree" | "lock-free" => Ok(SchedulerKind::LockFree),
            "priority" => Ok(SchedulerKind::Priority),
            other => Err(format!("unknown scheduler `{other}` (expected seq, barrier, lockfree or priority)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SchedulerConfig {
    pub kind: SchedulerKind,
    pub threads: usize,
    pub alpha: usize,
    pub beta: usize,
}

#[derive(Debug, Clone)]
pub struct ExecOptions {
    /// Abort a dual-queue run when no task completes for this long.
    pub watchdog: Duration,
    /// Record per-task start/end timestamps.
    pub trace: bool,
}

impl Default for ExecOptions {
    fn default() -> Self {
        Self {
            watchdog: Duration::from_secs(30),
            trace: false,
        }
    }
}

/// Instrumentation collected during one run.
#[derive(Debug, Clone, Default)]
pub struct ExecReport {
    pub executed: usize,
    /// Tasks in the order they started.
    pub start_order: Vec<TaskId>,
    /// Times each task id was pushed to the main (ready) queue.
    pub main_pushes: Vec<u32>,
    /// Times each done flag was set.
    pub flag_sets: Vec<u32>,
    /// Barrier rendezvous points passed (barrier executor only).
    pub rendezvous: usize,
    /// Times a task was parked or re-parked on the wait queue.
    pub deferrals: usize,
    pub trace: Vec<TraceEvent>,
}

/// Builds the graph for `cfg` and factorizes `mat` in place.
pub fn factorize<T: Scalar>(mat: &mut DenseMatrix<T>, cfg: &SchedulerConfig) -> Result<ReflectorStore<T>, ScheduleError> {
    let graph = build_task_graph(mat.nrows(), mat.ncols(), cfg.alpha, cfg.beta)?;
    let mut store = ReflectorStore::new(mat.pivot_count());
    execute(cfg.kind, &graph, mat, &mut store, cfg.threads, &ExecOptions::default())?;
    Ok(store)
}

/// Dispatches to the executor for `kind`.
pub fn execute<T: Scalar>(
    kind: SchedulerKind,
    graph: &TaskGraph,
    mat: &mut DenseMatrix<T>,
    store: &mut ReflectorStore<T>,
    threads: usize,
    opts: &ExecOptions,
) -> Result<ExecReport, ScheduleError> {
    match kind {
        SchedulerKind::Sequential => run_sequential(graph, mat, store, opts),
        SchedulerKind::Barrier => run_barrier(graph, mat, store, threads, opts),
        SchedulerKind::LockFree => run_lockfree(graph, mat, store, threads, opts),
        SchedulerKind::Priority => run_priority(graph, mat, store, threads, opts),
    }
}

fn check_inputs<T: Scalar>(graph: &TaskGraph, mat: &DenseMatrix<T>, store: &ReflectorStore<T>) -> Result<(), ScheduleError> {
    if graph.grid.m != mat.nrows() || graph.grid.n != mat.ncols() {
        return Err(GraphError::ShapeMismatch {
            graph_m: graph.grid.m,
            graph_n: graph.grid.n,
            m: mat.nrows(),
            n: mat.ncols(),
        }
        .into());
    }
    assert_eq!(store.len(), mat.pivot_count(), "reflector store sized for a different matrix");
    assert!((0..store.len()).all(|i| !store.is_written(i)), "reflector store already used");
    Ok(())
}

/// State shared by the workers of one run.
pub(crate) struct RunState<'a, T> {
    pub graph: &'a TaskGraph,
    mat: SharedMatrix<'a, T>,
    store: SharedStore<'a, T>,
    leases: RowLeases,
    done: Vec<AtomicBool>,
    pub completed: AtomicUsize,
    main_pushes: Vec<AtomicU32>,
    flag_sets: Vec<AtomicU32>,
    start_seq: Vec<AtomicUsize>,
    next_seq: AtomicUsize,
    pub deferrals: AtomicUsize,
    started: Instant,
    last_progress_ns: AtomicU64,
    pub abort: AtomicBool,
    trace: bool,
}

impl<'a, T: Scalar> RunState<'a, T> {
    pub fn new(graph: &'a TaskGraph, mat: &'a mut DenseMatrix<T>, store: &'a mut ReflectorStore<T>, opts: &ExecOptions) -> Self {
        let n = graph.len();
        let rows = mat.nrows();
        let counters = || (0..n).map(|_| AtomicU32::new(0)).collect::<Vec<_>>();
        Self {
            graph,
            mat: SharedMatrix::new(mat),
            store: SharedStore::new(store),
            leases: RowLeases::new(rows),
            done: (0..n).map(|_| AtomicBool::new(false)).collect(),
            completed: AtomicUsize::new(0),
            main_pushes: counters(),
            flag_sets: counters(),
            start_seq: (0..n).map(|_| AtomicUsize::new(usize::MAX)).collect(),
            next_seq: AtomicUsize::new(0),
            deferrals: AtomicUsize::new(0),
            started: Instant::now(),
            last_progress_ns: AtomicU64::new(0),
            abort: AtomicBool::new(false),
            trace: opts.trace,
        }
    }

    #[inline]
    pub fn total(&self) -> usize {
        self.graph.len()
    }

    #[inline]
    pub fn all_done(&self) -> bool {
        self.completed.load(Ordering::Acquire) == self.total()
    }

    #[inline]
    pub fn is_done(&self, id: TaskId) -> bool {
        self.done[id.0].load(Ordering::Acquire)
    }

    #[inline]
    pub fn parents_done(&self, id: TaskId) -> bool {
        self.graph.node(id).parents.iter().all(|&p| self.is_done(p))
    }

    #[inline]
    pub fn note_main_push(&self, id: TaskId) {
        self.main_pushes[id.0].fetch_add(1, Ordering::Relaxed);
    }

    fn now_ns(&self) -> u64 {
        self.started.elapsed().as_nanos() as u64
    }

    pub fn idle_for(&self) -> Duration {
        let last = self.last_progress_ns.load(Ordering::Relaxed);
        Duration::from_nanos(self.now_ns().saturating_sub(last))
    }

    /// Runs task `id` and publishes its completion.
    ///
    /// The caller guarantees every parent of `id` is done.
    pub fn execute(&self, id: TaskId, worker: usize, trace: &mut Vec<TraceEvent>) {
        let node = self.graph.node(id);
        debug_assert!(self.parents_done(id), "{} started before its parents", node.label());
        let seq = self.next_seq.fetch_add(1, Ordering::Relaxed);
        self.start_seq[id.0].store(seq, Ordering::Relaxed);
        let start = if self.trace { self.now_ns() } else { 0 };
        self.leases.acquire(node.rows.clone(), id.0);
        // parents are complete and the graph keeps concurrent write sets disjoint
        unsafe { tasks::exec_node(&self.mat, &self.store, node) };
        self.leases.release(node.rows.clone());
        if self.trace {
            trace.push(TraceEvent {
                worker,
                task: id,
                start_ns: start,
                end_ns: self.now_ns(),
            });
        }
        let was = self.done[id.0].swap(true, Ordering::AcqRel);
        assert!(!was, "done flag of {} set twice", node.label());
        self.flag_sets[id.0].fetch_add(1, Ordering::Relaxed);
        self.completed.fetch_add(1, Ordering::AcqRel);
        self.last_progress_ns.store(self.now_ns(), Ordering::Relaxed);
    }

    /// Queue/flag snapshot for watchdog diagnostics.
    pub fn dump(&self, main_len: usize, wait_len: usize) -> String {
        let mut s = format!("main_queue={main_len} wait_queue={wait_len}\npending:");
        let pending = (0..self.total()).map(TaskId).filter(|&t| !self.is_done(t));
        for t in pending.take(16) {
            let node = self.graph.node(t);
            let parents: Vec<String> = node
                .parents
                .iter()
                .map(|&p| format!("{}{}", self.graph.node(p).label(), if self.is_done(p) { "+" } else { "-" }))
                .collect();
            s.push_str(&format!(
                "\n  {} pushes={} parents=[{}]",
                node.label(),
                self.main_pushes[t.0].load(Ordering::Relaxed),
                parents.join(" ")
            ));
        }
        s
    }

    pub fn into_report(self, rendezvous: usize, mut trace: Vec<TraceEvent>) -> ExecReport {
        let mut order: Vec<(usize, TaskId)> = self
            .start_seq
            .iter()
            .enumerate()
            .filter_map(|(i, s)| {
                let s = s.load(Ordering::Relaxed);
                (s != usize::MAX).then_some((s, TaskId(i)))
            })
            .collect();
        order.sort_unstable();
        trace.sort_by_key(|e| (e.start_ns, e.worker));
        ExecReport {
            executed: self.completed.load(Ordering::Acquire),
            start_order: order.into_iter().map(|(_, t)| t).collect(),
            main_pushes: self.main_pushes.iter().map(|c| c.load(Ordering::Relaxed)).collect(),
            flag_sets: self.flag_sets.iter().map(|c| c.load(Ordering::Relaxed)).collect(),
            rendezvous,
            deferrals: self.deferrals.load(Ordering::Relaxed),
            trace,
        }
    }
}

/// Sets the abort flag if the owning worker unwinds.
pub(crate) struct AbortOnPanic<'a>(pub &'a AtomicBool);

impl Drop for AbortOnPanic<'_> {
    fn drop(&mut self) {
        if std::thread::panicking() {
            self.0.store(true, Ordering::SeqCst);
        }
    }
}

pub(crate) fn panic_message(payload: Box<dyn std::any::Any + Send>) -> String {
    payload
        .downcast_ref::<&str>()
        .map(|s| s.to_string())
        .or_else(|| payload.downcast_ref::<String>().cloned())
        .unwrap_or_else(|| "unknown panic".to_string())
}
