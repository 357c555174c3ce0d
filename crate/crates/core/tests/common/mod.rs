//! Independent oracles for graph checks. None of these use the builder's
//! level computation or topological sort.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use dagqr::graph::{TaskGraph, TaskId, TaskKind};

/// Set of nodes reachable from `from` (excluding `from` itself).
pub fn reachable(g: &TaskGraph, from: TaskId) -> Vec<bool> {
    let mut seen = vec![false; g.len()];
    let mut stack = vec![from];
    while let Some(v) = stack.pop() {
        for &c in &g.node(v).children {
            if !seen[c.0] {
                seen[c.0] = true;
                stack.push(c);
            }
        }
    }
    seen
}

/// Longest paths by relaxation to a fixpoint (Bellman-Ford style, O(V·E)).
pub fn relaxed_levels(g: &TaskGraph) -> (Vec<u32>, Vec<u32>) {
    let n = g.len();
    let mut top = vec![0u32; n];
    let mut bottom = vec![0u32; n];
    for _ in 0..=n {
        let mut changed = false;
        for v in &g.nodes {
            for &c in &v.children {
                if top[c.0] < top[v.id.0] + 1 {
                    top[c.0] = top[v.id.0] + 1;
                    changed = true;
                }
                if bottom[v.id.0] < bottom[c.0] + 1 {
                    bottom[v.id.0] = bottom[c.0] + 1;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    (top, bottom)
}

/// Longest path from `v` to any leaf by enumerating every path.
pub fn enumerate_bottom(g: &TaskGraph, v: TaskId) -> u32 {
    g.node(v)
        .children
        .iter()
        .map(|&c| 1 + enumerate_bottom(g, c))
        .max()
        .unwrap_or(0)
}

/// Longest path from `root` to `v` by enumerating every path backwards.
pub fn enumerate_top(g: &TaskGraph, v: TaskId) -> u32 {
    g.node(v)
        .parents
        .iter()
        .map(|&p| 1 + enumerate_top(g, p))
        .max()
        .unwrap_or(0)
}

/// Rows written by a node: pivot rows and every updated row.
pub fn written_rows(g: &TaskGraph, id: TaskId) -> std::ops::Range<usize> {
    g.node(id).rows.clone()
}

/// Checks that every pair of tasks writing the same row is ordered by a path,
/// lower pivot level first. Returns a description of the first failure.
pub fn order_safety(g: &TaskGraph) -> Result<(), String> {
    let mut writers: BTreeMap<usize, Vec<TaskId>> = BTreeMap::new();
    for v in &g.nodes {
        for r in written_rows(g, v.id) {
            writers.entry(r).or_default().push(v.id);
        }
    }
    let reach: Vec<Vec<bool>> = (0..g.len()).map(|i| reachable(g, TaskId(i))).collect();
    for (row, mut ws) in writers {
        ws.sort_by_key(|&t| g.node(t).block);
        for pair in ws.windows(2) {
            let (a, b) = (pair[0], pair[1]);
            if g.node(a).block == g.node(b).block {
                return Err(format!("row {row} written twice at level {}", g.node(a).block));
            }
            if !reach[a.0][b.0] {
                return Err(format!(
                    "row {row}: {} not ordered before {}",
                    g.node(a).label(),
                    g.node(b).label()
                ));
            }
        }
    }
    for v in g.nodes.iter().filter(|v| v.kind == TaskKind::Trailing) {
        let d = g.diagonal(v.block);
        if !reach[d.0][v.id.0] {
            return Err(format!("{} may read pivot rows before {}", v.label(), g.node(d).label()));
        }
    }
    Ok(())
}

/// Each (pivot, row) trailing update appears exactly once across all nodes
/// and each pivot belongs to exactly one Diagonal node.
pub fn coverage(g: &TaskGraph) -> Result<(), String> {
    let (m, p) = (g.grid.m, g.grid.pivots);
    let mut count: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for v in &g.nodes {
        for pair in v.work_pairs() {
            *count.entry(pair).or_default() += 1;
        }
    }
    let expected: BTreeSet<(usize, usize)> = (0..p).flat_map(|i| (i + 1..m).map(move |j| (i, j))).collect();
    let got: BTreeSet<(usize, usize)> = count.keys().copied().collect();
    if got != expected {
        return Err(format!("work set mismatch: {} pairs vs {} expected", got.len(), expected.len()));
    }
    if let Some((pair, c)) = count.iter().find(|(_, &c)| c != 1) {
        return Err(format!("pair {pair:?} covered {c} times"));
    }
    let mut pivots = vec![0; p];
    for v in g.nodes.iter().filter(|v| v.kind == TaskKind::Diagonal) {
        for i in v.pivots.clone() {
            pivots[i] += 1;
        }
    }
    if pivots.iter().any(|&c| c != 1) {
        return Err("pivot ownership".into());
    }
    Ok(())
}

/// Edge set of the unit-chunk graph written with 1-based `T_{i,j}` names:
/// `T_{i,j}` (j > i) depends on `T_{i,i}` and `T_{i-1,j}`; `T_{i,i}` depends on `T_{i-1,i}`.
pub fn unit_chunk_edges(m: usize) -> BTreeSet<((usize, usize), (usize, usize))> {
    let mut edges = BTreeSet::new();
    for i in 1..=m {
        for j in i..=m {
            if j > i {
                edges.insert(((i, i), (i, j)));
            }
            if i > 1 {
                edges.insert(((i - 1, j), (i, j)));
            }
        }
    }
    edges
}

/// 1-based `T_{i,j}` name for a node of an `alpha = beta = 1` graph.
pub fn unit_name(g: &TaskGraph, id: TaskId) -> (usize, usize) {
    let n = g.node(id);
    match n.kind {
        TaskKind::Diagonal => (n.block + 1, n.block + 1),
        TaskKind::Trailing => (n.block + 1, n.row_block.unwrap() + 1),
    }
}
