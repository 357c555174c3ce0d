use std::fmt;
use std::time::Instant;

use dagqr::graph::TaskGraph;
use dagqr::sched::{execute, ExecOptions, SchedulerKind};
use dagqr::{Matrix, ReflectorStore, ScheduleError, Store};

/// One timed configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchRecord {
    pub scheduler: SchedulerKind,
    pub m: usize,
    pub n: usize,
    pub alpha: usize,
    pub beta: usize,
    pub threads: usize,
    pub seed: u64,
    pub reps: usize,
    pub median_seconds: f64,
    /// Bitwise agreement with the sequential reference; `None` when not checked.
    pub correct: Option<bool>,
}

impl BenchRecord {
    pub const CSV_HEADER: &'static str = "scheduler,m,n,alpha,beta,threads,seed,reps,median_seconds,correct";
}

impl fmt::Display for BenchRecord {
    /// CSV row matching [`BenchRecord::CSV_HEADER`].
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let correct = match self.correct {
            Some(true) => "true",
            Some(false) => "false",
            None => "na",
        };
        write!(
            f,
            "{},{},{},{},{},{},{},{},{:.9},{}",
            self.scheduler,
            self.m,
            self.n,
            self.alpha,
            self.beta,
            self.threads,
            self.seed,
            self.reps,
            self.median_seconds,
            correct
        )
    }
}

#[derive(Debug, Clone, Copy)]
pub struct RunSettings {
    pub reps: usize,
    /// Run once untimed before measuring.
    pub warmup: bool,
    /// Report zero for every timing (for byte-stable output).
    pub no_time: bool,
}

impl Default for RunSettings {
    fn default() -> Self {
        Self {
            reps: 3,
            warmup: false,
            no_time: false,
        }
    }
}

pub fn median(samples: &mut [f64]) -> f64 {
    assert!(!samples.is_empty(), "median of nothing");
    samples.sort_by(f64::total_cmp);
    let mid = samples.len() / 2;
    if samples.len() % 2 == 1 {
        samples[mid]
    } else {
        0.5 * (samples[mid - 1] + samples[mid])
    }
}

/// Times `reps` runs of one executor and returns the median wall time in
/// seconds, plus the factorization from the last run.
pub fn time_run(
    kind: SchedulerKind,
    graph: &TaskGraph,
    input: &Matrix,
    threads: usize,
    settings: &RunSettings,
) -> Result<(f64, Matrix, Store), ScheduleError> {
    assert!(settings.reps >= 1, "reps must be at least 1");
    let opts = ExecOptions::default();
    if settings.warmup {
        let mut m = input.clone();
        let mut s = ReflectorStore::new(m.pivot_count());
        execute(kind, graph, &mut m, &mut s, threads, &opts)?;
    }
    let mut samples = Vec::with_capacity(settings.reps);
    let mut last = None;
    for _ in 0..settings.reps {
        let mut m = input.clone();
        let mut s = ReflectorStore::new(m.pivot_count());
        let start = Instant::now();
        execute(kind, graph, &mut m, &mut s, threads, &opts)?;
        samples.push(start.elapsed().as_secs_f64());
        last = Some((m, s));
    }
    let (m, s) = last.expect("at least one rep");
    let t = if settings.no_time { 0.0 } else { median(&mut samples) };
    Ok((t, m, s))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn median_odd_even() {
        assert_eq!(median(&mut [3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&mut [4.0, 1.0, 2.0, 3.0]), 2.5);
        assert_eq!(median(&mut [7.0]), 7.0);
    }

    #[test]
    fn record_row() {
        let r = BenchRecord {
            scheduler: SchedulerKind::LockFree,
            m: 4,
            n: 4,
            alpha: 2,
            beta: 2,
            threads: 1,
            seed: 9,
            reps: 3,
            median_seconds: 0.0,
            correct: Some(true),
        };
        assert_eq!(r.to_string(), "lockfree,4,4,2,2,1,9,3,0.000000000,true");
        assert_eq!(BenchRecord::CSV_HEADER.split(',').count(), r.to_string().split(',').count());
    }

    #[test]
    fn timed_run_is_positive() {
        let a = dagqr::gen_matrix(32, 32, 1);
        let g = dagqr::build_task_graph(32, 32, 4, 4).unwrap();
        let (t, _, _) = time_run(SchedulerKind::LockFree, &g, &a, 2, &RunSettings::default()).unwrap();
        assert!(t > 0.0);
    }
}
