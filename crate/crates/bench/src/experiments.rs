//! Sweep, scale and throughput experiments. Each returns its CSV rows.

use std::fmt;
use std::io::{self, Write};

use dagqr::graph::build_task_graph;
use dagqr::sched::SchedulerKind;
use dagqr::{gen_matrix, Matrix, ScheduleError};

use crate::timing::{time_run, RunSettings};

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub scheduler: SchedulerKind,
    pub alpha: usize,
    pub beta: usize,
    pub median_seconds: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScaleRow {
    pub scheduler: SchedulerKind,
    pub size: usize,
    pub median_seconds: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThroughputRow {
    pub scheduler: SchedulerKind,
    pub threads: usize,
    pub median_seconds: f64,
}

impl SweepRow {
    pub const CSV_HEADER: &'static str = "scheduler,alpha,beta,median_seconds";
}

impl ScaleRow {
    pub const CSV_HEADER: &'static str = "scheduler,size,median_seconds";
}

impl ThroughputRow {
    pub const CSV_HEADER: &'static str = "scheduler,threads,median_seconds";
}

impl fmt::Display for SweepRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{},{:.9}", self.scheduler, self.alpha, self.beta, self.median_seconds)
    }
}

impl fmt::Display for ScaleRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{:.9}", self.scheduler, self.size, self.median_seconds)
    }
}

impl fmt::Display for ThroughputRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{:.9}", self.scheduler, self.threads, self.median_seconds)
    }
}

pub fn write_csv<W: Write, R: fmt::Display>(mut out: W, header: &str, rows: &[R]) -> io::Result<()> {
    writeln!(out, "{header}")?;
    for r in rows {
        writeln!(out, "{r}")?;
    }
    Ok(())
}

/// Every `(alpha, beta)` cell for the two dual-queue executors.
pub fn cmd_sweep(
    size: usize,
    threads: usize,
    alphas: &[usize],
    betas: &[usize],
    seed: u64,
    settings: &RunSettings,
) -> Result<Vec<SweepRow>, ScheduleError> {
    let input: Matrix = gen_matrix(size, size, seed);
    let mut rows = Vec::with_capacity(2 * alphas.len() * betas.len());
    for scheduler in [SchedulerKind::LockFree, SchedulerKind::Priority] {
        for &alpha in alphas {
            for &beta in betas {
                let graph = build_task_graph(size, size, alpha, beta)?;
                let (t, _, _) = time_run(scheduler, &graph, &input, threads, settings)?;
                rows.push(SweepRow {
                    scheduler,
                    alpha,
                    beta,
                    median_seconds: t,
                });
            }
        }
    }
    Ok(rows)
}

/// Fastest cell per scheduler, first one wins ties.
pub fn sweep_argmin(rows: &[SweepRow]) -> Vec<&SweepRow> {
    let mut best: Vec<&SweepRow> = Vec::new();
    for r in rows {
        match best.iter_mut().find(|b| b.scheduler == r.scheduler) {
            Some(b) if r.median_seconds < b.median_seconds => *b = r,
            Some(_) => {}
            None => best.push(r),
        }
    }
    best
}

/// Barrier vs. the dual-queue executors across matrix sizes.
pub fn cmd_scale(
    sizes: &[usize],
    alpha: usize,
    beta: usize,
    threads: usize,
    seed: u64,
    settings: &RunSettings,
) -> Result<Vec<ScaleRow>, ScheduleError> {
    let mut rows = Vec::new();
    for &size in sizes {
        let input: Matrix = gen_matrix(size, size, seed);
        let graph = build_task_graph(size, size, alpha, beta)?;
        for scheduler in SchedulerKind::PARALLEL {
            let (t, _, _) = time_run(scheduler, &graph, &input, threads, settings)?;
            rows.push(ScaleRow {
                scheduler,
                size,
                median_seconds: t,
            });
        }
    }
    Ok(rows)
}

/// Fixed size, varying worker count.
pub fn cmd_throughput(
    size: usize,
    alpha: usize,
    beta: usize,
    threads: &[usize],
    seed: u64,
    settings: &RunSettings,
) -> Result<Vec<ThroughputRow>, ScheduleError> {
    let input: Matrix = gen_matrix(size, size, seed);
    let graph = build_task_graph(size, size, alpha, beta)?;
    let mut rows = Vec::new();
    for scheduler in SchedulerKind::PARALLEL {
        for &t in threads {
            let (secs, _, _) = time_run(scheduler, &graph, &input, t, settings)?;
            rows.push(ThroughputRow {
                scheduler,
                threads: t,
                median_seconds: secs,
            });
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn argmin_per_scheduler() {
        let row = |scheduler, alpha, t| SweepRow {
            scheduler,
            alpha,
            beta: alpha,
            median_seconds: t,
        };
        let rows = vec![
            row(SchedulerKind::LockFree, 2, 0.5),
            row(SchedulerKind::LockFree, 4, 0.2),
            row(SchedulerKind::Priority, 2, 0.1),
            row(SchedulerKind::Priority, 4, 0.3),
        ];
        let best = sweep_argmin(&rows);
        assert_eq!(best.len(), 2);
        assert_eq!((best[0].alpha, best[1].alpha), (4, 2));
    }
}
