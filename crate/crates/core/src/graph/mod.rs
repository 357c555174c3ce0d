//! Chunked task DAG for the row-oriented factorization.
//!
//! Pivots are grouped into blocks of `alpha`, rows into blocks of `beta`.
//! Pivot block `I` produces one Diagonal task that computes its pivots and
//! updates rows up to the next row-block boundary (`diag_end(I)`), plus one
//! Trailing task per row block lying entirely below `diag_end(I)`.

mod build;
mod dot;
mod levels;
mod validate;

use std::fmt;
use std::ops::Range;

pub use build::{build_task_graph, mark_critical_and_releasers};
pub use dot::to_dot;
pub use levels::{compute_levels, Levels};
pub use validate::{validate_graph, ValidationReport, Violation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TaskId(pub usize);

impl TaskId {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for TaskId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TaskKind {
    /// Pivot computations for a block plus the rows up to `diag_end`.
    Diagonal,
    /// Applies a finished pivot block to one row block.
    Trailing,
}

/// Pivot and row partitioning for given `alpha`/`beta`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChunkGrid {
    pub alpha: usize,
    pub beta: usize,
    pub m: usize,
    pub n: usize,
    pub pivots: usize,
    pub pivot_blocks: Vec<Range<usize>>,
    pub row_blocks: Vec<Range<usize>>,
}

impl ChunkGrid {
    pub fn new(m: usize, n: usize, alpha: usize, beta: usize) -> Self {
        let pivots = m.min(n);
        let split = |len: usize, width: usize| -> Vec<Range<usize>> {
            (0..len)
                .step_by(width)
                .map(|s| s..(s + width).min(len))
                .collect()
        };
        Self {
            alpha,
            beta,
            m,
            n,
            pivots,
            pivot_blocks: split(pivots, alpha),
            row_blocks: split(m, beta),
        }
    }

    /// Smallest row-block boundary at or after the end of pivot block `block`.
    pub fn diag_end(&self, block: usize) -> usize {
        let end = self.pivot_blocks[block].end;
        (end.div_ceil(self.beta) * self.beta).min(self.m)
    }

    /// Row block containing `row`.
    #[inline]
    pub fn row_block_of(&self, row: usize) -> usize {
        row / self.beta
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaskNode {
    pub id: TaskId,
    pub kind: TaskKind,
    /// Pivot block index `I`.
    pub block: usize,
    /// Row block index `J`; `None` for Diagonal nodes.
    pub row_block: Option<usize>,
    pub pivots: Range<usize>,
    pub rows: Range<usize>,
    pub parents: Vec<TaskId>,
    pub children: Vec<TaskId>,
    pub critical: bool,
    /// Children this node is responsible for enqueueing.
    pub releases: Vec<TaskId>,
    pub releaser: Option<TaskId>,
    pub top_level: u32,
    pub bottom_level: u32,
    pub priority: u32,
}

impl TaskNode {
    /// Short human label, `D3` or `T2,5`.
    pub fn label(&self) -> String {
        match (self.kind, self.row_block) {
            (TaskKind::Diagonal, _) => format!("D{}", self.block),
            (TaskKind::Trailing, Some(j)) => format!("T{},{}", self.block, j),
            (TaskKind::Trailing, None) => format!("T{},?", self.block),
        }
    }

    /// Ordering among equal priorities: Diagonal first, then smaller `I`, then smaller `J`.
    pub fn tie_key(&self) -> (TaskKind, usize, usize) {
        (self.kind, self.block, self.row_block.unwrap_or(0))
    }

    /// `(pivot, row)` trailing updates performed by this node.
    pub fn work_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let rows = self.rows.clone();
        let kind = self.kind;
        self.pivots.clone().flat_map(move |i| {
            let start = match kind {
                TaskKind::Diagonal => i + 1,
                TaskKind::Trailing => rows.start,
            };
            (start..rows.end).map(move |j| (i, j))
        })
    }
}

#[derive(Debug, Clone)]
pub struct TaskGraph {
    pub grid: ChunkGrid,
    pub nodes: Vec<TaskNode>,
    pub root: TaskId,
    diagonals: Vec<TaskId>,
    /// All ids sorted by descending priority, then tie key.
    priority_order: Vec<TaskId>,
    /// Position of each id within `priority_order`.
    rank: Vec<usize>,
}

impl TaskGraph {
    #[inline]
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    #[inline]
    pub fn node(&self, id: TaskId) -> &TaskNode {
        &self.nodes[id.0]
    }

    pub fn diagonal(&self, block: usize) -> TaskId {
        self.diagonals[block]
    }

    pub fn block_count(&self) -> usize {
        self.diagonals.len()
    }

    /// Trailing ids of pivot block `block`, ascending row block. They are
    /// stored contiguously after their Diagonal node.
    pub fn trailing_of(&self, block: usize) -> impl ExactSizeIterator<Item = TaskId> + Clone {
        let start = self.diagonals[block].0 + 1;
        let end = self
            .diagonals
            .get(block + 1)
            .map(|d| d.0)
            .unwrap_or(self.nodes.len());
        (start..end).map(TaskId)
    }

    pub fn find(&self, kind: TaskKind, block: usize, row_block: Option<usize>) -> Option<TaskId> {
        match kind {
            TaskKind::Diagonal => self.diagonals.get(block).copied(),
            TaskKind::Trailing => self
                .trailing_of(block)
                .find(|&t| self.nodes[t.0].row_block == row_block),
        }
    }

    /// Ids in execution order for a single worker: descending priority, ties by kind/I/J.
    pub fn priority_order(&self) -> &[TaskId] {
        &self.priority_order
    }

    #[inline]
    pub fn rank(&self, id: TaskId) -> usize {
        self.rank[id.0]
    }

    pub fn edge_count(&self) -> usize {
        self.nodes.iter().map(|n| n.children.len()).sum()
    }

    /// Removes the edge `parent -> child`. For fault-injection tests.
    pub fn remove_edge(&mut self, parent: TaskId, child: TaskId) -> bool {
        let p = &mut self.nodes[parent.0];
        let had = p.children.contains(&child);
        p.children.retain(|&c| c != child);
        p.releases.retain(|&c| c != child);
        let c = &mut self.nodes[child.0];
        c.parents.retain(|&q| q != parent);
        if c.releaser == Some(parent) {
            c.releaser = None;
        }
        had
    }
}
