//! Seeded random generators for terms, rules, host graphs and small
//! morphism diagrams.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::encoding::encode_term;
use crate::graph::{GraphMorphism, GraphRef, LabeledGraph, VertexId};
use crate::lattice::{leq, Label, Signature};
use crate::term::{apply_substitution, replace_at, Position, Substitution, Term, TrsRule};

pub type Rng8 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng8 {
    rand::SeedableRng::seed_from_u64(seed)
}

/// f/2 g/1 h/1 a/0 b/0
pub fn default_signature() -> Signature {
    Signature::from_pairs([("f", 2), ("g", 1), ("h", 1), ("a", 0), ("b", 0)]).expect("valid signature")
}

/// Hands out `prefix1`, `prefix2`, ...
#[derive(Debug, Clone)]
pub struct FreshVars {
    prefix: String,
    next: usize,
}

impl FreshVars {
    pub fn new(prefix: &str) -> Self {
        FreshVars { prefix: prefix.to_string(), next: 1 }
    }

    pub fn next_name(&mut self) -> String {
        let s = format!("{}{}", self.prefix, self.next);
        self.next += 1;
        s
    }
}

type Arities = Vec<(String, usize)>;

fn symbols_by_arity(sig: &Signature) -> (Arities, Arities) {
    sig.symbols().map(|(f, n)| (f.to_string(), n)).partition(|(_, n)| *n == 0)
}

/// Random linear term with at most `budget` function symbols. Variables
/// come from `var`; when `var` yields `None` a constant is used instead.
pub fn random_term(
    rng: &mut Rng8,
    sig: &Signature,
    budget: usize,
    var_prob: f64,
    var: &mut dyn FnMut() -> Option<String>,
) -> Term {
    let (constants, functions) = symbols_by_arity(sig);
    term_rec(rng, &constants, &functions, budget, var_prob, var)
}

fn term_rec(
    rng: &mut Rng8,
    constants: &[(String, usize)],
    functions: &[(String, usize)],
    budget: usize,
    var_prob: f64,
    var: &mut dyn FnMut() -> Option<String>,
) -> Term {
    if budget == 0 || rng.gen_bool(var_prob) {
        if let Some(x) = var() {
            return Term::var(x);
        }
        if let Some((c, _)) = constants.choose(rng) {
            return Term::constant(c.clone());
        }
    }
    let pick_constant = functions.is_empty() || (!constants.is_empty() && budget == 1 && rng.gen_bool(0.5));
    if pick_constant {
        let (c, _) = constants.choose(rng).expect("signature has a constant");
        return Term::constant(c.clone());
    }
    let (f, n) = functions.choose(rng).unwrap().clone();
    let mut left = budget - 1;
    let mut args = Vec::with_capacity(n);
    for i in 0..n {
        let share = if i + 1 == n { left } else { rng.gen_range(0..=left) };
        left -= share;
        args.push(term_rec(rng, constants, functions, share, var_prob, var));
    }
    Term::app(f, args)
}

const RULE_VARS: [&str; 6] = ["x", "y", "z", "w", "u", "v"];

/// Random left-linear, right-linear rule whose left-hand side has between
/// 1 and `max_lhs` symbols. Right-hand variables are a subset of the left.
pub fn random_linear_rule(rng: &mut Rng8, sig: &Signature, max_lhs: usize, max_rhs: usize) -> TrsRule {
    loop {
        let mut next = 0usize;
        let budget = rng.gen_range(1..=max_lhs.max(1));
        let mut lvar = || {
            let x = RULE_VARS.get(next).map(|s| s.to_string());
            next += 1;
            x
        };
        let lhs = random_term(rng, sig, budget, 0.35, &mut lvar);
        if lhs.is_var() {
            continue;
        }
        let mut pool: Vec<String> = lhs.vars().into_iter().map(String::from).collect();
        pool.shuffle(rng);
        let rhs_budget = rng.gen_range(0..=max_rhs);
        let mut rvar = || pool.pop();
        let rhs = random_term(rng, sig, rhs_budget, 0.4, &mut rvar);
        if let Ok(rule) = TrsRule::new(lhs, rhs) {
            return rule;
        }
    }
}

/// A term `C[lσ]` together with the position of the hole. Variables in
/// the context and the substitution are `v1`, `v2`, ...; the whole term
/// has at most `max_symbols` symbols.
pub fn random_redex_instance(
    rng: &mut Rng8,
    sig: &Signature,
    rule: &TrsRule,
    max_symbols: usize,
) -> Option<(Term, Position)> {
    let lsyms = rule.lhs.symbol_count();
    if lsyms > max_symbols {
        return None;
    }
    for _ in 0..100 {
        let mut fresh = FreshVars::new("v");
        let spare = max_symbols - lsyms;
        let ctx_budget = rng.gen_range(0..=spare.min(4));
        let mut cv = || Some(fresh.next_name());
        let ctx = random_term(rng, sig, ctx_budget, 0.3, &mut cv);
        let hole_candidates: Vec<Position> = ctx.positions();
        let p = hole_candidates.choose(rng).unwrap().clone();
        let mut sigma = Substitution::new();
        for x in rule.lhs.vars() {
            let b = rng.gen_range(0..=2);
            let mut sv = || Some(fresh.next_name());
            sigma.insert(x.to_string(), random_term(rng, sig, b, 0.4, &mut sv));
        }
        let redex = apply_substitution(&rule.lhs, &sigma);
        let s = replace_at(&ctx, &p, redex).ok()?;
        if s.symbol_count() <= max_symbols {
            return Some((s, p));
        }
    }
    None
}

/// Random linear term with `v1`, `v2`, ... as variables.
pub fn random_host_term(rng: &mut Rng8, sig: &Signature, max_symbols: usize) -> Term {
    let mut fresh = FreshVars::new("v");
    let budget = rng.gen_range(1..=max_symbols.max(1));
    let mut var = || Some(fresh.next_name());
    random_term(rng, sig, budget, 0.2, &mut var)
}

fn add_fresh_edge(g: &mut LabeledGraph, s: VertexId, t: VertexId, label: Label) -> crate::graph::EdgeId {
    let name = g.fresh_edge_name(&format!("{}>{}", g.vertex_name(s), g.vertex_name(t)));
    g.add_edge(name, s, t, label).expect("valid endpoints")
}

fn random_label(rng: &mut Rng8, pool: &[Label]) -> Label {
    pool.choose(rng).cloned().unwrap_or(Label::Bottom)
}

/// Encodes a random term and then applies a few random mutations: extra
/// edges, relabelings, isolated vertices and unions with further term
/// encodings. Never exceeds `max_vertices` vertices.
pub fn random_host_graph(rng: &mut Rng8, sig: &Signature, max_vertices: usize) -> LabeledGraph {
    let t = random_host_term(rng, sig, max_vertices.saturating_sub(1).max(1));
    let mut g = encode_term(sig, &t).map(|e| e.rooted.graph).unwrap_or_else(|_| LabeledGraph::new("G"));
    while g.vertex_count() > max_vertices {
        let t = random_host_term(rng, sig, 2);
        g = encode_term(sig, &t).map(|e| e.rooted.graph).unwrap_or_else(|_| LabeledGraph::new("G"));
    }
    mutate_graph(rng, sig, g, max_vertices)
}

/// Applies up to three random mutations to `g` without exceeding
/// `max_vertices` vertices.
pub fn mutate_graph(rng: &mut Rng8, sig: &Signature, mut g: LabeledGraph, max_vertices: usize) -> LabeledGraph {
    let universe = sig.label_universe();
    let vertex_labels: Vec<Label> = universe.iter().filter(|l| l.as_index().is_none()).cloned().collect();
    let edge_labels: Vec<Label> = universe.iter().filter(|l| l.as_symbol().is_none()).cloned().collect();
    let mutations = rng.gen_range(0..=3);
    for _ in 0..mutations {
        match rng.gen_range(0..4) {
            0 if g.vertex_count() > 0 => {
                let n = g.vertex_count();
                let s = VertexId(rng.gen_range(0..n));
                let t = VertexId(rng.gen_range(0..n));
                let l = random_label(rng, &edge_labels);
                add_fresh_edge(&mut g, s, t, l);
            }
            1 if g.vertex_count() > 0 => {
                let v = VertexId(rng.gen_range(0..g.vertex_count()));
                g = g.with_vertex_label(v, random_label(rng, &vertex_labels));
            }
            2 if g.vertex_count() < max_vertices => {
                let name = g.fresh_vertex_name("n");
                let l = random_label(rng, &vertex_labels);
                let _ = g.add_vertex(name, l);
            }
            3 => {
                let room = max_vertices.saturating_sub(g.vertex_count());
                if room > 0 {
                    let u = random_host_term(rng, sig, room.min(2));
                    if let Ok(enc) = encode_term(sig, &u) {
                        if g.vertex_count() + enc.rooted.graph.vertex_count() <= max_vertices {
                            g = g.disjoint_union(&enc.rooted.graph);
                        }
                    }
                }
            }
            _ => {}
        }
    }
    g.renamed("G")
}

/// Random graph with `n` vertices and up to `max_edges` edges, labels
/// drawn from the given pools.
pub fn random_graph(
    rng: &mut Rng8,
    name: &str,
    n: usize,
    max_edges: usize,
    vertex_labels: &[Label],
    edge_labels: &[Label],
) -> LabeledGraph {
    let mut g = LabeledGraph::new(name);
    for i in 0..n {
        g.add_vertex(format!("v{i}"), random_label(rng, vertex_labels)).expect("fresh name");
    }
    if n > 0 {
        for _ in 0..rng.gen_range(0..=max_edges) {
            let s = VertexId(rng.gen_range(0..n));
            let t = VertexId(rng.gen_range(0..n));
            let l = random_label(rng, edge_labels);
            add_fresh_edge(&mut g, s, t, l);
        }
    }
    g
}

fn raise(rng: &mut Rng8, l: &Label, pool: &[Label]) -> Label {
    let above: Vec<&Label> = pool.iter().filter(|m| leq(l, m)).collect();
    above.choose(rng).map(|m| (*m).clone()).unwrap_or_else(|| l.clone())
}

/// A random morphism out of `a`: the codomain is a quotient of `a` (when
/// `mono` is false) with raised labels and some extra elements. The
/// codomain has at most `max_size` elements when possible.
pub fn random_morphism_from(
    rng: &mut Rng8,
    a: &GraphRef,
    cod_name: &str,
    mono: bool,
    max_size: usize,
    pool: &[Label],
) -> GraphMorphism {
    let n = a.vertex_count();
    // Vertex quotient.
    let mut class: Vec<usize> = (0..n).collect();
    if !mono && n > 1 {
        for _ in 0..rng.gen_range(0..n) {
            let i = rng.gen_range(0..n);
            let j = rng.gen_range(0..n);
            let (ci, cj) = (class[i], class[j]);
            for c in class.iter_mut() {
                if *c == cj {
                    *c = ci;
                }
            }
        }
    }
    let mut b = LabeledGraph::new(cod_name);
    let mut vmap = vec![VertexId(0); n];
    let mut rep_vertex: std::collections::BTreeMap<usize, VertexId> = Default::default();
    for v in a.vertices() {
        let c = class[v.0];
        let id = match rep_vertex.get(&c) {
            Some(&id) => id,
            None => {
                let members: Vec<&Label> = a.vertices().filter(|w| class[w.0] == c).map(|w| a.vlabel(w)).collect();
                let lub = crate::lattice::join(members);
                let label = raise(rng, &lub, pool);
                let id = b.add_vertex(a.vertex_name(v), label).expect("fresh name");
                rep_vertex.insert(c, id);
                id
            }
        };
        vmap[v.0] = id;
    }
    // Edges: merge parallel images sometimes when not mono.
    let mut emap = Vec::with_capacity(a.edge_count());
    for e in a.edges() {
        let (s, t) = (vmap[a.src(e).0], vmap[a.tgt(e).0]);
        let reuse = if mono {
            None
        } else {
            let existing: Vec<_> = b.edges_between(s, t).filter(|&f| leq(a.elabel(e), b.elabel(f))).collect();
            if !existing.is_empty() && rng.gen_bool(0.5) {
                existing.choose(rng).copied()
            } else {
                None
            }
        };
        let id = match reuse {
            Some(f) => f,
            None => {
                let label = raise(rng, a.elabel(e), pool);
                let name = b.fresh_edge_name(a.edge_name(e));
                b.add_edge(name, s, t, label).expect("valid endpoints")
            }
        };
        emap.push(id);
    }
    // Extra elements.
    while b.size() < max_size && rng.gen_bool(0.5) {
        if b.vertex_count() == 0 || rng.gen_bool(0.4) {
            let name = b.fresh_vertex_name("n");
            b.add_vertex(name, random_label(rng, pool)).expect("fresh name");
        } else {
            let k = b.vertex_count();
            let s = VertexId(rng.gen_range(0..k));
            let t = VertexId(rng.gen_range(0..k));
            let l = random_label(rng, pool);
            add_fresh_edge(&mut b, s, t, l);
        }
    }
    GraphMorphism::new(a.clone(), Arc::new(b), vmap, emap).expect("well-formed morphism")
}

/// A random morphism into `x`: the domain is built by picking images in
/// `x` and lowering labels. With `mono`, distinct elements get distinct
/// images.
pub fn random_morphism_into(
    rng: &mut Rng8,
    x: &GraphRef,
    dom_name: &str,
    mono: bool,
    max_size: usize,
    pool: &[Label],
) -> Option<GraphMorphism> {
    if x.vertex_count() == 0 {
        let d = Arc::new(LabeledGraph::new(dom_name));
        return GraphMorphism::new(d, x.clone(), vec![], vec![]).ok();
    }
    let mut d = LabeledGraph::new(dom_name);
    let mut vmap = Vec::new();
    let mut emap = Vec::new();
    let mut free_vertices: Vec<VertexId> = x.vertices().collect();
    free_vertices.shuffle(rng);
    let nv = rng.gen_range(0..=max_size.min(if mono { x.vertex_count() } else { 4 }));
    for i in 0..nv {
        let img = if mono {
            free_vertices.pop()?
        } else {
            VertexId(rng.gen_range(0..x.vertex_count()))
        };
        let below: Vec<&Label> = pool.iter().filter(|l| leq(l, x.vlabel(img))).collect();
        let label = below.choose(rng).map(|l| (*l).clone()).unwrap_or(Label::Bottom);
        d.add_vertex(format!("d{i}"), label).expect("fresh name");
        vmap.push(img);
    }
    let mut used_edges = std::collections::BTreeSet::new();
    for _ in 0..rng.gen_range(0..=3) {
        if d.size() >= max_size || d.vertex_count() == 0 {
            break;
        }
        let s = VertexId(rng.gen_range(0..d.vertex_count()));
        let t = VertexId(rng.gen_range(0..d.vertex_count()));
        let cands: Vec<_> = x
            .edges_between(vmap[s.0], vmap[t.0])
            .filter(|e| !mono || !used_edges.contains(e))
            .collect();
        let Some(&e) = cands.choose(rng) else { continue };
        let below: Vec<&Label> = pool.iter().filter(|l| leq(l, x.elabel(e))).collect();
        let label = below.choose(rng).map(|l| (*l).clone()).unwrap_or(Label::Bottom);
        add_fresh_edge(&mut d, s, t, label);
        used_edges.insert(e);
        emap.push(e);
    }
    GraphMorphism::new(Arc::new(d), x.clone(), vmap, emap).ok()
}
