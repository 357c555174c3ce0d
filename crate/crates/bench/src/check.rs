//! Bitwise equivalence sweep of the executors against the sequential reference.

use std::fmt;

use dagqr::graph::{build_task_graph, TaskGraph};
use dagqr::sched::{execute, ExecOptions, ExecReport, SchedulerKind};
use dagqr::{gen_matrix, sequential_factorize, Matrix, ReflectorStore, ScheduleError, Store};

use crate::args::Size;

/// Executor under test. The default is [`dagqr::sched::execute`].
pub type Executor<'a> = dyn Fn(SchedulerKind, &TaskGraph, &mut Matrix, &mut Store, usize) -> Result<ExecReport, ScheduleError> + 'a;

#[derive(Debug, Clone)]
pub struct CheckGrid {
    pub sizes: Vec<Size>,
    pub alphas: Vec<usize>,
    pub betas: Vec<usize>,
    pub threads: Vec<usize>,
    pub schedulers: Vec<SchedulerKind>,
    pub seeds: Vec<u64>,
}

impl Default for CheckGrid {
    fn default() -> Self {
        Self {
            sizes: [5, 16, 64, 300].into_iter().map(Size::square).collect(),
            alphas: vec![1, 2, 3, 5, 12],
            betas: vec![1, 2, 3, 5, 12],
            threads: vec![1, 2, 4, 8],
            schedulers: SchedulerKind::PARALLEL.to_vec(),
            seeds: vec![1],
        }
    }
}

impl CheckGrid {
    pub fn combinations(&self) -> usize {
        self.sizes.len() * self.alphas.len() * self.betas.len() * self.threads.len() * self.schedulers.len() * self.seeds.len()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum MismatchKind {
    Element { row: usize, col: usize },
    Reflector { pivot: usize },
    TaskCount { executed: usize, expected: usize },
    Failed(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mismatch {
    pub scheduler: SchedulerKind,
    pub size: Size,
    pub alpha: usize,
    pub beta: usize,
    pub threads: usize,
    pub seed: u64,
    pub kind: MismatchKind,
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "mismatch: scheduler={} size={} alpha={} beta={} threads={} seed={}: ",
            self.scheduler, self.size, self.alpha, self.beta, self.threads, self.seed
        )?;
        match &self.kind {
            MismatchKind::Element { row, col } => write!(f, "first differing element ({row}, {col})"),
            MismatchKind::Reflector { pivot } => write!(f, "reflector scalars differ at pivot {pivot}"),
            MismatchKind::TaskCount { executed, expected } => {
                write!(f, "executed {executed} tasks, graph has {expected}")
            }
            MismatchKind::Failed(e) => write!(f, "run failed: {e}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckSummary {
    pub runs: usize,
    /// Tasks executed, summed over runs.
    pub tasks: usize,
}

impl fmt::Display for CheckSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "pass: {} runs, {} tasks, all bitwise identical to the sequential reference", self.runs, self.tasks)
    }
}

/// Runs the default executor over every grid combination.
pub fn cmd_check(grid: &CheckGrid) -> Result<CheckSummary, Box<Mismatch>> {
    cmd_check_with(grid, &|kind, g, m, s, t| execute(kind, g, m, s, t, &ExecOptions::default()))
}

/// Like [`cmd_check`] with an injected executor. Stops at the first mismatch.
pub fn cmd_check_with(grid: &CheckGrid, exec: &Executor<'_>) -> Result<CheckSummary, Box<Mismatch>> {
    let mut summary = CheckSummary { runs: 0, tasks: 0 };
    for &size in &grid.sizes {
        for &seed in &grid.seeds {
            let input: Matrix = gen_matrix(size.m, size.n, seed);
            let mut reference = input.clone();
            let ref_store = sequential_factorize(&mut reference);
            for &alpha in &grid.alphas {
                for &beta in &grid.betas {
                    let graph = build_task_graph(size.m, size.n, alpha, beta).expect("grid values are positive");
                    for &scheduler in &grid.schedulers {
                        for &threads in &grid.threads {
                            let fail = |kind| {
                                Box::new(Mismatch {
                                    scheduler,
                                    size,
                                    alpha,
                                    beta,
                                    threads,
                                    seed,
                                    kind,
                                })
                            };
                            let mut m = input.clone();
                            let mut s = ReflectorStore::new(m.pivot_count());
                            let report = exec(scheduler, &graph, &mut m, &mut s, threads)
                                .map_err(|e| fail(MismatchKind::Failed(e.to_string())))?;
                            if report.executed != graph.len() {
                                return Err(fail(MismatchKind::TaskCount {
                                    executed: report.executed,
                                    expected: graph.len(),
                                }));
                            }
                            if let Some((row, col)) = m.first_bit_mismatch(&reference) {
                                return Err(fail(MismatchKind::Element { row, col }));
                            }
                            if let Some(pivot) = s.first_mismatch(&ref_store) {
                                return Err(fail(MismatchKind::Reflector { pivot }));
                            }
                            summary.runs += 1;
                            summary.tasks += report.executed;
                        }
                    }
                }
            }
        }
    }
    Ok(summary)
}
