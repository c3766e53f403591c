use std::collections::BTreeSet;
use std::fmt::Write;

use super::{EdgeId, LabeledGraph, VertexId};

/// Rendering knobs for [`to_dot`].
#[derive(Clone, Debug, Default)]
pub struct DotOptions {
    pub root: Option<VertexId>,
    /// Vertex groups drawn as clusters, e.g. zones.
    pub clusters: Vec<(String, Vec<VertexId>)>,
    /// Edges drawn dotted, e.g. bridges.
    pub dotted: BTreeSet<EdgeId>,
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

const FADED: &str = "color=\"#00000055\", fontcolor=\"#00000077\"";

/// Graphviz rendering. Vertices are captioned `id^label`, edges by their
/// label; `⊤`-labeled elements are drawn faded.
pub fn to_dot(g: &LabeledGraph, opts: &DotOptions) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "digraph {} {{", quote(if g.name().is_empty() { "G" } else { g.name() }));
    let _ = writeln!(out, "  node [shape=plaintext];");
    let vertex_line = |v: VertexId| {
        let mut attrs = vec![format!("label={}", quote(&format!("{}^{}", g.vertex_name(v), g.vlabel(v))))];
        if g.vlabel(v).is_top() {
            attrs.push(FADED.to_string());
        }
        if opts.root == Some(v) {
            attrs.push("shape=circle, style=dotted".to_string());
        }
        format!("{} [{}];", quote(g.vertex_name(v)), attrs.join(", "))
    };
    let mut clustered = BTreeSet::new();
    for (i, (name, members)) in opts.clusters.iter().enumerate() {
        let _ = writeln!(out, "  subgraph cluster_{i} {{");
        let _ = writeln!(out, "    label={}; color=gray;", quote(name));
        for &v in members {
            clustered.insert(v);
            let _ = writeln!(out, "    {}", vertex_line(v));
        }
        let _ = writeln!(out, "  }}");
    }
    for v in g.vertices().filter(|v| !clustered.contains(v)) {
        let _ = writeln!(out, "  {}", vertex_line(v));
    }
    for e in g.edges() {
        let mut attrs = vec![format!("label={}", quote(&g.elabel(e).to_string()))];
        if g.elabel(e).is_top() {
            attrs.push(FADED.to_string());
        }
        if opts.dotted.contains(&e) {
            attrs.push("style=dotted".to_string());
        }
        let _ = writeln!(
            out,
            "  {} -> {} [{}];",
            quote(g.vertex_name(g.src(e))),
            quote(g.vertex_name(g.tgt(e))),
            attrs.join(", ")
        );
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Label;

    #[test]
    fn captions_and_fading() {
        let mut g = LabeledGraph::new("L'");
        g.add_vertex("eps", Label::symbol("f")).unwrap();
        g.add_vertex("C", Label::Top).unwrap();
        g.add_edge_between("C>eps", "C", "eps", Label::Top).unwrap();
        let dot = to_dot(&g, &DotOptions { root: g.vertex_by_name("eps"), ..Default::default() });
        assert!(dot.contains("label=\"eps^f\""));
        assert!(dot.contains("label=\"C^^T^\", color=\"#00000055\""));
        assert!(dot.contains("\"C\" -> \"eps\" [label=\"^T^\", color"));
        assert!(dot.contains("shape=circle"));
    }
}
