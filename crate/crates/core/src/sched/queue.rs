//! Main-queue implementations for the dual-queue executors.

use std::sync::atomic::{AtomicU64, Ordering};

use crossbeam_queue::SegQueue;

use crate::graph::{TaskGraph, TaskId};

/// Ready-task queue shared by all workers.
pub trait ReadyQueue: Sync {
    fn push(&self, id: TaskId);
    fn pop(&self) -> Option<TaskId>;
    fn len_hint(&self) -> usize;
}

/// Lock-free MPMC FIFO.
#[derive(Default)]
pub struct FifoQueue {
    inner: SegQueue<TaskId>,
}

impl FifoQueue {
    pub fn new() -> Self {
        Self::default()
    }
}

impl ReadyQueue for FifoQueue {
    #[inline]
    fn push(&self, id: TaskId) {
        self.inner.push(id);
    }

    #[inline]
    fn pop(&self) -> Option<TaskId> {
        self.inner.pop()
    }

    fn len_hint(&self) -> usize {
        self.inner.len()
    }
}

/// Lock-free priority queue over a fixed universe of ranks `0..capacity`,
/// where each rank is inserted at most once. `pop` returns the smallest rank
/// present, i.e. the highest-priority task.
///
/// Membership is a two-level bitset: one bit per rank and one summary bit per
/// 64-rank word. Insertion sets the word bit before the summary bit; a popper
/// that clears a summary bit re-checks the word and restores the bit if an
/// insertion raced in, so no present rank is ever hidden.
pub struct RankQueue {
    words: Vec<AtomicU64>,
    summary: Vec<AtomicU64>,
}

impl RankQueue {
    pub fn with_capacity(capacity: usize) -> Self {
        let nwords = capacity.div_ceil(64).max(1);
        let nsummary = nwords.div_ceil(64);
        Self {
            words: (0..nwords).map(|_| AtomicU64::new(0)).collect(),
            summary: (0..nsummary).map(|_| AtomicU64::new(0)).collect(),
        }
    }

    pub fn insert(&self, rank: usize) {
        let (w, bit) = (rank / 64, 1u64 << (rank % 64));
        let prev = self.words[w].fetch_or(bit, Ordering::SeqCst);
        debug_assert_eq!(prev & bit, 0, "rank {rank} inserted twice");
        self.summary[w / 64].fetch_or(1u64 << (w % 64), Ordering::SeqCst);
    }

    pub fn pop_min(&self) -> Option<usize> {
        for (s, summary) in self.summary.iter().enumerate() {
            loop {
                let sw = summary.load(Ordering::SeqCst);
                if sw == 0 {
                    break;
                }
                let w = s * 64 + sw.trailing_zeros() as usize;
                let sbit = 1u64 << (w % 64);
                let word = &self.words[w];
                loop {
                    let cur = word.load(Ordering::SeqCst);
                    if cur == 0 {
                        summary.fetch_and(!sbit, Ordering::SeqCst);
                        if word.load(Ordering::SeqCst) != 0 {
                            summary.fetch_or(sbit, Ordering::SeqCst);
                        }
                        break;
                    }
                    let bit = 1u64 << cur.trailing_zeros();
                    if word.fetch_and(!bit, Ordering::SeqCst) & bit != 0 {
                        return Some(w * 64 + cur.trailing_zeros() as usize);
                    }
                }
            }
        }
        None
    }

    pub fn count(&self) -> usize {
        self.words
            .iter()
            .map(|w| w.load(Ordering::Relaxed).count_ones() as usize)
            .sum()
    }
}

/// Priority main queue: orders tasks by the graph's priority rank.
pub struct PriorityQueue<'g> {
    graph: &'g TaskGraph,
    ranks: RankQueue,
}

impl<'g> PriorityQueue<'g> {
    pub fn new(graph: &'g TaskGraph) -> Self {
        Self {
            graph,
            ranks: RankQueue::with_capacity(graph.len()),
        }
    }
}

impl ReadyQueue for PriorityQueue<'_> {
    #[inline]
    fn push(&self, id: TaskId) {
        self.ranks.insert(self.graph.rank(id));
    }

    #[inline]
    fn pop(&self) -> Option<TaskId> {
        self.ranks
            .pop_min()
            .map(|r| self.graph.priority_order()[r])
    }

    fn len_hint(&self) -> usize {
        self.ranks.count()
    }
}
