use std::io::{self, Write};

use crate::graph::{TaskGraph, TaskId};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TraceEvent {
    pub worker: usize,
    pub task: TaskId,
    /// Nanoseconds since the run started (monotonic clock).
    pub start_ns: u64,
    pub end_ns: u64,
}

/// CSV with columns `worker,task,start_ns,end_ns`; `task` is the quoted node label.
pub fn write_trace_csv<W: Write>(mut out: W, graph: &TaskGraph, events: &[TraceEvent]) -> io::Result<()> {
    writeln!(out, "worker,task,start_ns,end_ns")?;
    for e in events {
        writeln!(out, "{},\"{}\",{},{}", e.worker, graph.node(e.task).label(), e.start_ns, e.end_ns)?;
    }
    Ok(())
}
