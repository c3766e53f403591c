//! Line-oriented graph text format.
//!
//! ```text
//! graph G
//! v x a
//! v y _|_
//! e xy x y 1
//! root x
//! ```

use thiserror::Error;

use super::{GraphError, LabeledGraph, VertexId};
use crate::lattice::{Label, LabelError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: {source}")]
    Label { line: usize, source: LabelError },
    #[error("line {line}: {source}")]
    Graph { line: usize, source: GraphError },
    #[error("no graph found")]
    Empty,
}

fn syntax(line: usize, msg: impl Into<String>) -> FormatError {
    FormatError::Syntax { line, msg: msg.into() }
}

/// Non-blank, non-comment lines with their 1-based line numbers.
pub(crate) fn significant_lines(text: &str) -> Vec<(usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .collect()
}

fn parse_label(line: usize, s: &str) -> Result<Label, FormatError> {
    s.parse().map_err(|source| FormatError::Label { line, source })
}

/// Parses one `graph` block. The first line must be the header.
pub(crate) fn parse_graph_block(lines: &[(usize, &str)]) -> Result<(LabeledGraph, Option<VertexId>), FormatError> {
    let Some(&(hline, header)) = lines.first() else {
        return Err(FormatError::Empty);
    };
    let toks: Vec<&str> = header.split_whitespace().collect();
    if toks.len() != 2 || toks[0] != "graph" {
        return Err(syntax(hline, "expected `graph <name>`"));
    }
    let mut g = LabeledGraph::new(toks[1]);
    let mut root = None;
    for &(ln, text) in &lines[1..] {
        let toks: Vec<&str> = text.split_whitespace().collect();
        let graph_err = |source| FormatError::Graph { line: ln, source };
        match toks.as_slice() {
            ["v", id, label] => {
                g.add_vertex(*id, parse_label(ln, label)?).map_err(graph_err)?;
            }
            ["e", id, s, t, label] => {
                let label = parse_label(ln, label)?;
                g.add_edge_between(*id, s, t, label).map_err(graph_err)?;
            }
            ["root", id] => {
                if root.is_some() {
                    return Err(syntax(ln, "root given twice"));
                }
                root = Some(g.require_vertex(id).map_err(graph_err)?);
            }
            _ => return Err(syntax(ln, format!("unrecognized line `{text}`"))),
        }
    }
    Ok((g, root))
}

/// Splits lines into blocks, each starting at a line whose first word is
/// one of `headers`.
pub(crate) fn split_blocks<'a>(
    lines: &[(usize, &'a str)],
    headers: &[&str],
) -> Result<Vec<Vec<(usize, &'a str)>>, FormatError> {
    let mut blocks: Vec<Vec<(usize, &str)>> = Vec::new();
    for &(ln, text) in lines {
        let first = text.split_whitespace().next().unwrap_or("");
        if headers.contains(&first) {
            blocks.push(vec![(ln, text)]);
        } else if let Some(b) = blocks.last_mut() {
            b.push((ln, text));
        } else {
            return Err(syntax(ln, format!("expected one of {headers:?}")));
        }
    }
    Ok(blocks)
}

/// Parses a file holding exactly one graph.
pub fn parse_graph(text: &str) -> Result<(LabeledGraph, Option<VertexId>), FormatError> {
    let mut all = parse_graphs(text)?;
    match all.len() {
        0 => Err(FormatError::Empty),
        1 => Ok(all.pop().unwrap()),
        _ => Err(syntax(0, "expected a single graph block")),
    }
}

/// Parses a sequence of graph blocks.
pub fn parse_graphs(text: &str) -> Result<Vec<(LabeledGraph, Option<VertexId>)>, FormatError> {
    let lines = significant_lines(text);
    split_blocks(&lines, &["graph"])?
        .iter()
        .map(|b| parse_graph_block(b))
        .collect()
}

/// Renders a graph (and optional root) in the text format.
pub fn write_graph(g: &LabeledGraph, root: Option<VertexId>) -> String {
    let mut out = format!("graph {}\n", if g.name().is_empty() { "G" } else { g.name() });
    for v in g.vertices() {
        out.push_str(&format!("v {} {}\n", g.vertex_name(v), g.vlabel(v)));
    }
    for e in g.edges() {
        out.push_str(&format!(
            "e {} {} {} {}\n",
            g.edge_name(e),
            g.vertex_name(g.src(e)),
            g.vertex_name(g.tgt(e)),
            g.elabel(e)
        ));
    }
    if let Some(r) = root {
        out.push_str(&format!("root {}\n", g.vertex_name(r)));
    }
    out
}
