use super::{TaskGraph, TaskId};
use crate::GraphError;

/// Longest-path levels with unit edge weights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Levels {
    /// Longest path from a root to the node, excluding the node.
    pub top: Vec<u32>,
    /// Longest path from the node to a leaf.
    pub bottom: Vec<u32>,
}

/// Kahn ordering over the parent/child lists. Fails on a cycle.
pub(crate) fn topological_order(graph: &TaskGraph) -> Result<Vec<TaskId>, GraphError> {
    let total = graph.nodes.len();
    let mut indegree: Vec<usize> = graph.nodes.iter().map(|n| n.parents.len()).collect();
    let mut stack: Vec<TaskId> = (0..total).filter(|&i| indegree[i] == 0).map(TaskId).collect();
    let mut order = Vec::with_capacity(total);
    while let Some(id) = stack.pop() {
        order.push(id);
        for &c in &graph.nodes[id.0].children {
            indegree[c.0] -= 1;
            if indegree[c.0] == 0 {
                stack.push(c);
            }
        }
    }
    if order.len() != total {
        return Err(GraphError::Cycle {
            visited: order.len(),
            total,
        });
    }
    Ok(order)
}

pub fn compute_levels(graph: &TaskGraph) -> Result<Levels, GraphError> {
    let order = topological_order(graph)?;
    let n = graph.nodes.len();
    let mut top = vec![0u32; n];
    for &id in &order {
        for &c in &graph.nodes[id.0].children {
            top[c.0] = top[c.0].max(top[id.0] + 1);
        }
    }
    let mut bottom = vec![0u32; n];
    for &id in order.iter().rev() {
        for &p in &graph.nodes[id.0].parents {
            bottom[p.0] = bottom[p.0].max(bottom[id.0] + 1);
        }
    }
    Ok(Levels { top, bottom })
}
