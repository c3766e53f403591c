//! Text format for PBPO⁺ rules: five graph blocks followed by five
//! morphism blocks.
//!
//! ```text
//! rule overwrite
//! graph L
//! v x _|_
//! graph K
//! ...
//! morphism l K L
//! v x x
//! ```

use std::collections::BTreeMap;
use std::sync::Arc;

use thiserror::Error;

use crate::engine::{EngineError, PbpoRule};
use crate::graph::format::{parse_graph_block, significant_lines, split_blocks};
use crate::graph::{write_graph, FormatError, GraphError, GraphMorphism, GraphRef};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuleFileError {
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: {source}")]
    Graph { line: usize, source: GraphError },
    #[error("missing {0}")]
    Missing(String),
    #[error(transparent)]
    Engine(#[from] EngineError),
}

const GRAPHS: [&str; 5] = ["L", "K", "R", "Lp", "Kp"];
/// Morphism names with their expected domain and codomain.
const MORPHISMS: [(&str, &str, &str); 5] =
    [("l", "K", "L"), ("r", "K", "R"), ("lp", "Kp", "Lp"), ("tL", "L", "Lp"), ("tK", "K", "Kp")];

pub fn parse_rule(text: &str) -> Result<PbpoRule, RuleFileError> {
    let lines = significant_lines(text);
    let blocks = split_blocks(&lines, &["rule", "graph", "morphism"])?;
    let mut name = String::from("rule");
    let mut graphs: BTreeMap<String, GraphRef> = BTreeMap::new();
    let mut morphisms: BTreeMap<String, GraphMorphism> = BTreeMap::new();
    for block in &blocks {
        let (hline, header) = block[0];
        let toks: Vec<&str> = header.split_whitespace().collect();
        let syntax = |msg: String| RuleFileError::Syntax { line: hline, msg };
        match toks[0] {
            "rule" => {
                if toks.len() != 2 || block.len() != 1 {
                    return Err(syntax("expected `rule <name>` on its own".into()));
                }
                name = toks[1].to_string();
            }
            "graph" => {
                let (g, _) = parse_graph_block(block)?;
                if !GRAPHS.contains(&g.name()) {
                    return Err(syntax(format!("unexpected graph `{}`, expected one of {GRAPHS:?}", g.name())));
                }
                if graphs.insert(g.name().to_string(), Arc::new(g)).is_some() {
                    return Err(syntax("graph given twice".into()));
                }
            }
            _ => {
                let [_, mname, dom, cod] = toks.as_slice() else {
                    return Err(syntax("expected `morphism <name> <dom> <cod>`".into()));
                };
                let Some(&(_, edom, ecod)) = MORPHISMS.iter().find(|(n, _, _)| n == mname) else {
                    return Err(syntax(format!("unknown morphism `{mname}`")));
                };
                if (*dom, *cod) != (edom, ecod) {
                    return Err(syntax(format!("morphism {mname} must go from {edom} to {ecod}")));
                }
                let get = |g: &str| graphs.get(g).cloned().ok_or_else(|| syntax(format!("graph {g} must precede morphism {mname}")));
                let (dg, cg) = (get(dom)?, get(cod)?);
                let mut vpairs = Vec::new();
                let mut epairs = Vec::new();
                for &(ln, text) in &block[1..] {
                    match text.split_whitespace().collect::<Vec<_>>().as_slice() {
                        ["v", a, b] => vpairs.push((*a, *b, ln)),
                        ["e", a, b] => epairs.push((*a, *b, ln)),
                        _ => return Err(RuleFileError::Syntax { line: ln, msg: format!("unrecognized line `{text}`") }),
                    }
                }
                let f = build_morphism(&dg, &cg, &vpairs, &epairs, hline)?;
                if morphisms.insert(mname.to_string(), f).is_some() {
                    return Err(syntax("morphism given twice".into()));
                }
            }
        }
    }
    for g in GRAPHS {
        if !graphs.contains_key(g) {
            return Err(RuleFileError::Missing(format!("graph {g}")));
        }
    }
    let mut take = |m: &str| morphisms.remove(m).ok_or_else(|| RuleFileError::Missing(format!("morphism {m}")));
    let (l, r, lp, tl, tk) = (take("l")?, take("r")?, take("lp")?, take("tL")?, take("tK")?);
    Ok(PbpoRule::new(name, l, r, lp, tl, tk)?)
}

fn build_morphism(
    dom: &GraphRef,
    cod: &GraphRef,
    vpairs: &[(&str, &str, usize)],
    epairs: &[(&str, &str, usize)],
    header_line: usize,
) -> Result<GraphMorphism, RuleFileError> {
    let graph_err = |line: usize| move |source| RuleFileError::Graph { line, source };
    let mut vmap = vec![None; dom.vertex_count()];
    for &(a, b, ln) in vpairs {
        let v = dom.require_vertex(a).map_err(graph_err(ln))?;
        vmap[v.0] = Some(cod.require_vertex(b).map_err(graph_err(ln))?);
    }
    let mut emap = vec![None; dom.edge_count()];
    for &(a, b, ln) in epairs {
        let e = dom.require_edge(a).map_err(graph_err(ln))?;
        emap[e.0] = Some(cod.require_edge(b).map_err(graph_err(ln))?);
    }
    let unmapped = |what: &str, name: &str| RuleFileError::Syntax {
        line: header_line,
        msg: format!("{what} `{name}` of {} is unmapped", dom.name()),
    };
    let vmap = (0..vmap.len())
        .map(|i| vmap[i].ok_or_else(|| unmapped("vertex", dom.vertex_name(crate::graph::VertexId(i)))))
        .collect::<Result<Vec<_>, _>>()?;
    let emap = (0..emap.len())
        .map(|i| emap[i].ok_or_else(|| unmapped("edge", dom.edge_name(crate::graph::EdgeId(i)))))
        .collect::<Result<Vec<_>, _>>()?;
    GraphMorphism::new(dom.clone(), cod.clone(), vmap, emap).map_err(graph_err(header_line))
}

pub fn write_rule(rule: &PbpoRule) -> String {
    let mut out = format!("rule {}\n", rule.name.replace(char::is_whitespace, ""));
    let graphs = [rule.lhs(), rule.interface(), rule.rhs(), rule.lhs_type(), rule.interface_type()];
    for (name, g) in GRAPHS.iter().zip(graphs) {
        out.push_str(&write_graph(&g.renamed(*name), None));
    }
    let morphisms = [&rule.l, &rule.r, &rule.l_prime, &rule.t_l, &rule.t_k];
    for ((name, dom, cod), f) in MORPHISMS.iter().zip(morphisms) {
        out.push_str(&format!("morphism {name} {dom} {cod}\n{f}"));
    }
    out
}
