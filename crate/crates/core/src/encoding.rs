//! Linear terms and rules as graphs.
//!
//! A term becomes a rooted tree: symbol vertices are named by their
//! position (`eps`, `1`, `21`, ...), variables by their name with label
//! `⊥`, and the edge to the `i`-th argument is named `src>tgt` and labeled
//! `i`.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use thiserror::Error;

use crate::cat_ops::{pushout, CatError, CospanResult};
use crate::engine::{apply_at_vertex, EngineError, PbpoRule};
use crate::graph::{GraphError, GraphMorphism, GraphRef, LabeledGraph, RootedGraph, VertexId};
use crate::lattice::{is_identifier, Label, Signature};
use crate::term::{Position, Term, TermError, Trs, TrsRule};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EncodingError {
    #[error(transparent)]
    Term(#[from] TermError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Cat(#[from] CatError),
    #[error("vertex name `{0}` is already taken")]
    NameCollision(String),
    #[error("encoded rule is malformed: {0}")]
    MalformedRule(String),
}

/// Name of the context vertex added by the upper closure.
pub const CONTEXT_VERTEX: &str = "C";

/// Vertex name for a variable head. Names that clash with the root
/// position or the context vertex get a `#1` suffix.
pub fn variable_vertex_name(x: &str) -> String {
    if x == "eps" || x == CONTEXT_VERTEX {
        format!("{x}#1")
    } else {
        x.to_string()
    }
}

fn edge_name(g: &LabeledGraph, s: VertexId, t: VertexId) -> String {
    format!("{}>{}", g.vertex_name(s), g.vertex_name(t))
}

#[derive(Clone, Debug)]
pub struct TermEncoding {
    pub rooted: RootedGraph,
    pub position_of: BTreeMap<VertexId, Position>,
    pub variable_heads: BTreeSet<VertexId>,
}

impl TermEncoding {
    pub fn graph(&self) -> &LabeledGraph {
        &self.rooted.graph
    }

    pub fn root(&self) -> VertexId {
        self.rooted.root
    }

    pub fn vertex_at(&self, p: &Position) -> Option<VertexId> {
        self.position_of.iter().find(|(_, q)| *q == p).map(|(v, _)| *v)
    }
}

/// The encoding `t°` of a linear term.
pub fn encode_term(sig: &Signature, t: &Term) -> Result<TermEncoding, EncodingError> {
    t.check(sig)?;
    if let Some(x) = repeated(t) {
        return Err(TermError::NonLinear(x).into());
    }
    let mut g = LabeledGraph::new(t.to_string());
    let mut position_of = BTreeMap::new();
    let mut variable_heads = BTreeSet::new();
    fn go(
        t: &Term,
        p: Position,
        g: &mut LabeledGraph,
        pos: &mut BTreeMap<VertexId, Position>,
        heads: &mut BTreeSet<VertexId>,
    ) -> Result<VertexId, GraphError> {
        let v = match t {
            Term::Var(x) => {
                let v = g.add_vertex(variable_vertex_name(x), Label::Bottom)?;
                heads.insert(v);
                v
            }
            Term::App(f, args) => {
                let v = g.add_vertex(p.to_string(), Label::symbol(f.as_str()))?;
                for (i, a) in args.iter().enumerate() {
                    let i = i as u32 + 1;
                    let w = go(a, p.child(i), g, pos, heads)?;
                    let name = edge_name(g, v, w);
                    g.add_edge(name, v, w, Label::index(i))?;
                }
                v
            }
        };
        pos.insert(v, p);
        Ok(v)
    }
    let root = go(t, Position::root(), &mut g, &mut position_of, &mut variable_heads)?;
    Ok(TermEncoding { rooted: RootedGraph::new(g, root)?, position_of, variable_heads })
}

fn repeated(t: &Term) -> Option<String> {
    let mut seen = BTreeSet::new();
    t.var_occurrences().into_iter().find(|x| !seen.insert(*x)).map(str::to_string)
}

/// Positions of the vertices of a tree rooted at `root` whose edges carry
/// distinct argument indices. `None` if the graph is not such a tree.
pub fn tree_positions(g: &LabeledGraph, root: VertexId) -> Option<BTreeMap<VertexId, Position>> {
    if g.edge_count() + 1 != g.vertex_count() || g.in_degree(root) != 0 {
        return None;
    }
    let mut pos = BTreeMap::new();
    let mut stack = vec![(root, Position::root())];
    while let Some((v, p)) = stack.pop() {
        if pos.insert(v, p.clone()).is_some() {
            return None;
        }
        for &e in g.out_edges(v) {
            let i = g.elabel(e).as_index()?;
            stack.push((g.tgt(e), p.child(i)));
        }
    }
    (pos.len() == g.vertex_count()).then_some(pos)
}

/// Inverse of [`encode_term`] up to variable renaming.
///
/// Without a root, the unique vertex without incoming edges is used.
/// A `⊥` leaf keeps its vertex name as variable name when that is an
/// identifier outside the signature; others get `x1`, `x2`, ... in
/// left-to-right order.
pub fn decode_term(sig: &Signature, g: &LabeledGraph, root: Option<VertexId>) -> Option<Term> {
    let root = match root {
        Some(r) => r,
        None => {
            let mut sources = g.vertices().filter(|&v| g.in_degree(v) == 0);
            let r = sources.next()?;
            if sources.next().is_some() {
                return None;
            }
            r
        }
    };
    tree_positions(g, root)?;
    let kept: BTreeSet<&str> = g
        .vertices()
        .filter(|&v| g.vlabel(v).is_bottom())
        .map(|v| g.vertex_name(v))
        .filter(|n| is_identifier(n) && !sig.contains(n))
        .collect();
    let mut next_fresh = 0;
    let mut fresh = || loop {
        next_fresh += 1;
        let name = format!("x{next_fresh}");
        if !kept.contains(name.as_str()) && !sig.contains(&name) {
            return name;
        }
    };
    fn go(
        sig: &Signature,
        g: &LabeledGraph,
        v: VertexId,
        kept: &BTreeSet<&str>,
        fresh: &mut dyn FnMut() -> String,
    ) -> Option<Term> {
        match g.vlabel(v) {
            Label::Bottom if g.out_degree(v) == 0 => {
                let name = g.vertex_name(v);
                Some(Term::var(if kept.contains(name) { name.to_string() } else { fresh() }))
            }
            l => {
                let f = l.as_symbol()?;
                let arity = sig.arity(f)?;
                if g.out_degree(v) != arity {
                    return None;
                }
                let mut children = vec![None; arity];
                for &e in g.out_edges(v) {
                    let i = g.elabel(e).as_index()? as usize;
                    if i == 0 || i > arity || children[i - 1].is_some() {
                        return None;
                    }
                    children[i - 1] = Some(g.tgt(e));
                }
                let args = children
                    .into_iter()
                    .map(|c| go(sig, g, c?, kept, fresh))
                    .collect::<Option<Vec<_>>>()?;
                Some(Term::app(f, args))
            }
        }
    }
    go(sig, g, root, &kept, &mut fresh)
}

/// Adds `C` (`⊤`) with edges `C>root` and `C>C` (both `⊤`).
pub fn upper_context_closure(g: &RootedGraph) -> Result<RootedGraph, EncodingError> {
    let mut h = g.graph.clone();
    if h.vertex_by_name(CONTEXT_VERTEX).is_some() {
        return Err(EncodingError::NameCollision(CONTEXT_VERTEX.into()));
    }
    let c = h.add_vertex(CONTEXT_VERTEX, Label::Top)?;
    let to_root = edge_name(&h, c, g.root);
    h.add_edge(to_root, c, g.root, Label::Top)?;
    let loop_name = edge_name(&h, c, c);
    h.add_edge(loop_name, c, c, Label::Top)?;
    Ok(RootedGraph::new(h, g.root)?)
}

/// Relabels each `x` in `xs` to `⊤` and hangs a `⊤` vertex `x'` with a
/// loop below it.
pub fn lower_context_closure(g: &RootedGraph, xs: &BTreeSet<VertexId>) -> Result<RootedGraph, EncodingError> {
    let mut h = g.graph.clone();
    for &x in xs {
        h = h.with_vertex_label(x, Label::Top);
        let primed = format!("{}'", h.vertex_name(x));
        if h.vertex_by_name(&primed).is_some() {
            return Err(EncodingError::NameCollision(primed));
        }
        let xp = h.add_vertex(primed, Label::Top)?;
        let down = edge_name(&h, x, xp);
        h.add_edge(down, x, xp, Label::Top)?;
        let loop_name = edge_name(&h, xp, xp);
        h.add_edge(loop_name, xp, xp, Label::Top)?;
    }
    Ok(RootedGraph::new(h, g.root)?)
}

/// Upper closure of the lower closure.
pub fn context_closure(g: &RootedGraph, xs: &BTreeSet<VertexId>) -> Result<RootedGraph, EncodingError> {
    upper_context_closure(&lower_context_closure(g, xs)?)
}

/// Discrete graph on `Var(t) ∪ {eps}`, all `⊥`, rooted at `eps`.
pub fn interface_graph(t: &Term) -> RootedGraph {
    let mut g = LabeledGraph::new(format!("I({t})"));
    let root = g.add_vertex("eps", Label::Bottom).expect("empty graph");
    for x in t.var_occurrences() {
        let name = variable_vertex_name(x);
        if g.vertex_by_name(&name).is_none() {
            g.add_vertex(name, Label::Bottom).expect("fresh name");
        }
    }
    RootedGraph::new(g, root).expect("root exists")
}

#[derive(Clone, Debug)]
pub struct EncodedRule {
    pub rule: PbpoRule,
    pub source: TrsRule,
    pub lhs_encoding: TermEncoding,
    pub rhs_encoding: TermEncoding,
}

impl EncodedRule {
    /// Root of `L`.
    pub fn lhs_root(&self) -> VertexId {
        self.lhs_encoding.root()
    }

    /// Pushout of `K' ← K → R`: the schematic effect of the rule.
    pub fn derived_rhs_type(&self) -> Result<CospanResult, EncodingError> {
        Ok(pushout(&self.rule.r, &self.rule.t_k)?)
    }
}

fn named(g: LabeledGraph, name: &str) -> GraphRef {
    Arc::new(g.renamed(name))
}

/// Encodes a linear rule `l → r`.
pub fn encode_rule(sig: &Signature, rule: &TrsRule) -> Result<EncodedRule, EncodingError> {
    let rule = TrsRule::new(rule.lhs.clone(), rule.rhs.clone())?;
    let lhs_encoding = encode_term(sig, &rule.lhs)?;
    let rhs_encoding = encode_term(sig, &rule.rhs)?;
    let interface = interface_graph(&rule.rhs);

    let l_vars: BTreeSet<VertexId> = lhs_encoding.variable_heads.clone();
    let k_vars: BTreeSet<VertexId> = interface.graph.vertices().filter(|&v| v != interface.root).collect();
    let lp = context_closure(&lhs_encoding.rooted, &l_vars)?;
    let kp = context_closure(&interface, &k_vars)?;

    let l_g = named(lhs_encoding.graph().clone(), "L");
    let k_g = named(interface.graph.clone(), "K");
    let r_g = named(rhs_encoding.graph().clone(), "R");
    let lp_g = named(lp.graph, "Lp");
    let kp_g = named(kp.graph, "Kp");

    let l = GraphMorphism::inclusion(k_g.clone(), l_g.clone())?;
    let r = match &rule.rhs {
        Term::Var(x) => {
            let x = variable_vertex_name(x);
            GraphMorphism::from_names(k_g.clone(), r_g.clone(), &[("eps", &x), (&x, &x)], &[])?
        }
        Term::App(..) => GraphMorphism::inclusion(k_g.clone(), r_g.clone())?,
    };
    let l_prime = GraphMorphism::inclusion(kp_g.clone(), lp_g.clone())?;
    let t_l = GraphMorphism::inclusion(l_g, lp_g)?;
    let t_k = GraphMorphism::inclusion(k_g, kp_g)?;
    let pbpo = PbpoRule::new(rule.to_string(), l, r, l_prime, t_l, t_k)?;
    if let Some(d) = pbpo.defects().first() {
        return Err(EncodingError::MalformedRule(d.to_string()));
    }
    Ok(EncodedRule { rule: pbpo, source: rule, lhs_encoding, rhs_encoding })
}

pub fn encode_system(trs: &Trs) -> Result<Vec<EncodedRule>, EncodingError> {
    trs.rules.iter().map(|r| encode_rule(&trs.signature, r)).collect()
}

/// Applies an encoded rule with the root of `L` sent to the vertex at
/// position `p`.
pub fn apply_at_position(
    erule: &EncodedRule,
    enc: &TermEncoding,
    p: &Position,
) -> Result<Option<GraphRef>, EncodingError> {
    let Some(v) = enc.vertex_at(p) else {
        return Ok(None);
    };
    let g = Arc::new(enc.graph().clone());
    Ok(apply_at_vertex(&erule.rule, &g, erule.lhs_root(), v)?)
}
