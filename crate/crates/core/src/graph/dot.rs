use std::fmt::Write;

use super::TaskGraph;

/// Graphviz rendering. Labels carry the task name, priority and a `*` for
/// critical nodes; critical nodes are filled.
pub fn to_dot(graph: &TaskGraph) -> String {
    let mut out = String::from("digraph taskgraph {\n  node [shape=box];\n");
    for n in &graph.nodes {
        let star = if n.critical { " *" } else { "" };
        let style = if n.critical { ", style=filled, fillcolor=lightgray" } else { "" };
        let _ = writeln!(
            out,
            "  n{} [label=\"{} p={}{}\"{}];",
            n.id.0,
            n.label(),
            n.priority,
            star,
            style
        );
    }
    for n in &graph.nodes {
        for c in &n.children {
            let _ = writeln!(out, "  n{} -> n{};", n.id.0, c.0);
        }
    }
    out.push_str("}\n");
    out
}
