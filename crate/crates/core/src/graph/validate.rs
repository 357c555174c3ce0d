use std::fmt;

use super::levels::topological_order;
use super::{TaskGraph, TaskId, TaskKind};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    Cycle,
    EdgeMismatch { parent: TaskId, child: TaskId },
    PivotCoverage { pivot: usize, diagonals: usize },
    WorkCoverage { pivot: usize, row: usize, count: usize },
    UncoveredDependency { task: TaskId, missing: TaskId },
    Releaser { task: TaskId, releasers: usize },
    ReleaserNotParent { task: TaskId, releaser: TaskId },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Cycle => write!(f, "cycle detected"),
            Violation::EdgeMismatch { parent, child } => {
                write!(f, "parent/child lists disagree on edge {parent} -> {child}")
            }
            Violation::PivotCoverage { pivot, diagonals } => {
                write!(f, "pivot {pivot} owned by {diagonals} diagonal tasks")
            }
            Violation::WorkCoverage { pivot, row, count } => {
                write!(f, "update (pivot {pivot}, row {row}) performed {count} times")
            }
            Violation::UncoveredDependency { task, missing } => {
                write!(f, "uncovered dependency: {task} does not depend on {missing}")
            }
            Violation::Releaser { task, releasers } => {
                write!(f, "task {task} has {releasers} releasers")
            }
            Violation::ReleaserNotParent { task, releaser } => {
                write!(f, "task {task} is released by non-parent {releaser}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub nodes: usize,
    pub edges: usize,
    pub violation: Option<Violation>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.violation {
            None => write!(f, "pass ({} nodes, {} edges)", self.nodes, self.edges),
            Some(v) => write!(f, "fail: {v}"),
        }
    }
}

/// Structural checks on a task graph. Reports the first violation found.
pub fn validate_graph(graph: &TaskGraph) -> ValidationReport {
    ValidationReport {
        nodes: graph.len(),
        edges: graph.edge_count(),
        violation: first_violation(graph),
    }
}

fn first_violation(graph: &TaskGraph) -> Option<Violation> {
    let nodes = &graph.nodes;

    for n in nodes {
        for &c in &n.children {
            if !nodes[c.0].parents.contains(&n.id) {
                return Some(Violation::EdgeMismatch { parent: n.id, child: c });
            }
        }
        for &p in &n.parents {
            if !nodes[p.0].children.contains(&n.id) {
                return Some(Violation::EdgeMismatch { parent: p, child: n.id });
            }
        }
    }

    if topological_order(graph).is_err() {
        return Some(Violation::Cycle);
    }

    let p = graph.grid.pivots;
    let m = graph.grid.m;
    let mut owners = vec![0usize; p];
    for n in nodes.iter().filter(|n| n.kind == TaskKind::Diagonal) {
        for i in n.pivots.clone() {
            owners[i] += 1;
        }
    }
    if let Some(pivot) = owners.iter().position(|&c| c != 1) {
        return Some(Violation::PivotCoverage {
            pivot,
            diagonals: owners[pivot],
        });
    }

    // per pivot, the row intervals of tasks touching it must tile (pivot, m)
    let mut spans: Vec<Vec<(usize, usize)>> = vec![Vec::new(); p];
    for n in nodes {
        for i in n.pivots.clone() {
            let start = match n.kind {
                TaskKind::Diagonal => i + 1,
                TaskKind::Trailing => n.rows.start,
            };
            if start < n.rows.end {
                spans[i].push((start, n.rows.end));
            }
        }
    }
    for (pivot, s) in spans.iter_mut().enumerate() {
        s.sort_unstable();
        let mut next = pivot + 1;
        for &(a, b) in s.iter() {
            if a != next {
                let (row, count) = if a > next { (next, 0) } else { (a, 2) };
                return Some(Violation::WorkCoverage { pivot, row, count });
            }
            next = b;
        }
        if next < m {
            return Some(Violation::WorkCoverage { pivot, row: next, count: 0 });
        }
    }

    // each level-I task must depend on D(I) (for Trailing) and on every
    // level-(I-1) task writing one of its rows
    for n in nodes {
        if n.kind == TaskKind::Trailing {
            let d = graph.diagonal(n.block);
            if !n.parents.contains(&d) {
                return Some(Violation::UncoveredDependency { task: n.id, missing: d });
            }
        }
        if n.block == 0 {
            continue;
        }
        let prev = std::iter::once(graph.diagonal(n.block - 1)).chain(graph.trailing_of(n.block - 1));
        for q in prev {
            let r = &nodes[q.0].rows;
            if r.start < n.rows.end && n.rows.start < r.end && !n.parents.contains(&q) {
                return Some(Violation::UncoveredDependency { task: n.id, missing: q });
            }
        }
    }

    let mut released = vec![0usize; nodes.len()];
    for n in nodes {
        for &c in &n.releases {
            released[c.0] += 1;
            if !nodes[c.0].parents.contains(&n.id) {
                return Some(Violation::ReleaserNotParent { task: c, releaser: n.id });
            }
        }
    }
    for (i, &count) in released.iter().enumerate() {
        let expected = usize::from(TaskId(i) != graph.root);
        if count != expected {
            return Some(Violation::Releaser {
                task: TaskId(i),
                releasers: count,
            });
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_task_graph;

    #[test]
    fn built_graphs_pass() {
        for (m, n, a, b) in [(5, 5, 1, 1), (6, 6, 2, 3), (7, 3, 2, 5), (3, 9, 4, 1), (300, 300, 12, 12)] {
            let g = build_task_graph(m, n, a, b).unwrap();
            let r = validate_graph(&g);
            assert!(r.passed(), "{m}x{n} a={a} b={b}: {r}");
        }
        assert_eq!(validate_graph(&build_task_graph(300, 300, 12, 12).unwrap()).nodes, 325);
    }

    #[test]
    fn removed_edge_is_uncovered_dependency() {
        let mut g = build_task_graph(5, 5, 1, 1).unwrap();
        let t = g.find(TaskKind::Trailing, 1, Some(2)).unwrap();
        let cover = g.find(TaskKind::Trailing, 0, Some(2)).unwrap();
        assert!(g.remove_edge(cover, t));
        let r = validate_graph(&g);
        assert!(r.to_string().contains("uncovered dependency"), "{r}");
    }

    #[test]
    fn one_sided_edge_is_reported() {
        let mut g = build_task_graph(4, 4, 1, 1).unwrap();
        let d = g.diagonal(0);
        g.nodes[d.0].children.pop();
        assert!(matches!(validate_graph(&g).violation, Some(Violation::EdgeMismatch { .. })));
    }

    #[test]
    fn double_releaser_is_reported() {
        let mut g = build_task_graph(4, 4, 1, 1).unwrap();
        let d1 = g.diagonal(1);
        let child = g.nodes[d1.0].children[0];
        g.nodes[d1.0].releases.push(child);
        assert!(matches!(validate_graph(&g).violation, Some(Violation::Releaser { .. })));
    }
}
