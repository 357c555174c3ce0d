use super::{compute_levels, ChunkGrid, TaskGraph, TaskId, TaskKind, TaskNode};
use crate::GraphError;

fn node(id: usize, kind: TaskKind, block: usize, row_block: Option<usize>, grid: &ChunkGrid, rows: std::ops::Range<usize>) -> TaskNode {
    TaskNode {
        id: TaskId(id),
        kind,
        block,
        row_block,
        pivots: grid.pivot_blocks[block].clone(),
        rows,
        parents: Vec::new(),
        children: Vec::new(),
        critical: false,
        releases: Vec::new(),
        releaser: None,
        top_level: 0,
        bottom_level: 0,
        priority: 0,
    }
}

/// Builds the chunked task graph for an `m x n` matrix.
///
/// Node ids are assigned level by level: `D(I)` followed by `T(I, J)` for
/// ascending `J`. That order is topological.
pub fn build_task_graph(m: usize, n: usize, alpha: usize, beta: usize) -> Result<TaskGraph, GraphError> {
    for (name, value) in [("m", m), ("n", n), ("alpha", alpha), ("beta", beta)] {
        if value == 0 {
            return Err(GraphError::InvalidParameter { name, value });
        }
    }
    let grid = ChunkGrid::new(m, n, alpha, beta);
    let mut nodes: Vec<TaskNode> = Vec::new();
    let mut diagonals = Vec::with_capacity(grid.pivot_blocks.len());
    // trailing[I][J] = id of T(I, J) if present
    let mut trailing: Vec<Vec<Option<TaskId>>> = Vec::with_capacity(grid.pivot_blocks.len());

    for block in 0..grid.pivot_blocks.len() {
        let start = grid.pivot_blocks[block].start;
        let diag_end = grid.diag_end(block);
        let d = nodes.len();
        nodes.push(node(d, TaskKind::Diagonal, block, None, &grid, start..diag_end));
        diagonals.push(TaskId(d));
        let mut row = vec![None; grid.row_blocks.len()];
        for (j, rb) in grid.row_blocks.iter().enumerate() {
            if rb.start >= diag_end {
                let t = nodes.len();
                nodes.push(node(t, TaskKind::Trailing, block, Some(j), &grid, rb.clone()));
                row[j] = Some(TaskId(t));
            }
        }
        trailing.push(row);
    }

    let mut edges: Vec<(TaskId, TaskId)> = Vec::new();
    for block in 0..diagonals.len() {
        let d = diagonals[block];
        if block > 0 {
            // every level-(I-1) task whose rows meet D(I)'s rows
            let rows = nodes[d.0].rows.clone();
            let prev_diag = diagonals[block - 1];
            let prev = std::iter::once(prev_diag).chain(trailing[block - 1].iter().flatten().copied());
            for p in prev {
                let pr = &nodes[p.0].rows;
                if pr.start < rows.end && rows.start < pr.end {
                    edges.push((p, d));
                }
            }
        }
        for (j, t) in trailing[block].iter().enumerate() {
            let Some(t) = *t else { continue };
            edges.push((d, t));
            if block > 0 {
                let cover = trailing[block - 1][j].unwrap_or(diagonals[block - 1]);
                if cover != d {
                    edges.push((cover, t));
                }
            }
        }
    }
    for (p, c) in edges {
        if !nodes[c.0].parents.contains(&p) {
            nodes[c.0].parents.push(p);
            nodes[p.0].children.push(c);
        }
    }

    let count = nodes.len();
    let mut graph = TaskGraph {
        grid,
        nodes,
        root: TaskId(0),
        diagonals,
        priority_order: Vec::new(),
        rank: vec![0; count],
    };
    mark_critical_and_releasers(&mut graph);
    assign_priorities(&mut graph)?;
    Ok(graph)
}

/// Marks the critical chain and picks exactly one releasing parent per node.
///
/// Diagonal nodes and every Trailing parent of a Diagonal node are critical.
/// `T(I, J)` is released by `D(I)`. `D(I)` is released by its Trailing parent
/// with the smallest row block (the one holding the first pivot row when that
/// row lies in a Trailing block), or by `D(I-1)` when it has no Trailing parent.
pub fn mark_critical_and_releasers(graph: &mut TaskGraph) {
    for n in &mut graph.nodes {
        n.critical = false;
        n.releases.clear();
        n.releaser = None;
    }
    let ids: Vec<TaskId> = (0..graph.nodes.len()).map(TaskId).collect();
    for &id in &ids {
        let (kind, block) = (graph.nodes[id.0].kind, graph.nodes[id.0].block);
        let releaser = match kind {
            TaskKind::Diagonal => {
                graph.nodes[id.0].critical = true;
                if block == 0 {
                    None
                } else {
                    let parents = graph.nodes[id.0].parents.clone();
                    let trailing = parents
                        .iter()
                        .copied()
                        .filter(|p| graph.nodes[p.0].kind == TaskKind::Trailing)
                        .min_by_key(|p| graph.nodes[p.0].row_block);
                    for p in &parents {
                        if graph.nodes[p.0].kind == TaskKind::Trailing {
                            graph.nodes[p.0].critical = true;
                        }
                    }
                    Some(trailing.unwrap_or(graph.diagonals[block - 1]))
                }
            }
            TaskKind::Trailing => Some(graph.diagonals[block]),
        };
        if let Some(r) = releaser {
            graph.nodes[id.0].releaser = Some(r);
            graph.nodes[r.0].releases.push(id);
        }
    }
}

fn assign_priorities(graph: &mut TaskGraph) -> Result<(), GraphError> {
    let levels = compute_levels(graph)?;
    for (n, (&top, &bottom)) in graph.nodes.iter_mut().zip(levels.top.iter().zip(&levels.bottom)) {
        n.top_level = top;
        n.bottom_level = bottom;
        n.priority = bottom;
    }
    let mut order: Vec<TaskId> = (0..graph.nodes.len()).map(TaskId).collect();
    order.sort_by_key(|id| {
        let n = &graph.nodes[id.0];
        (std::cmp::Reverse(n.priority), n.tie_key())
    });
    for (pos, id) in order.iter().enumerate() {
        graph.rank[id.0] = pos;
    }
    graph.priority_order = order;
    Ok(())
}
