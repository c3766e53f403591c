//! Pullbacks and pushouts of lattice-labeled graphs, and brute-force
//! checks of their universal properties.
//!
//! Pullbacks are computed pointwise on matching pairs with the meet of
//! the component labels. Pushouts are only taken along a monomorphism:
//! the apex is the quotient of the disjoint union, each element labeled
//! with the join of its preimages.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::sync::Arc;

use thiserror::Error;

use crate::graph::{fresh_name, EdgeId, GraphMorphism, GraphRef, LabeledGraph, MorphismSearch, VertexId};
use crate::lattice::{join, meet, Label};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatError {
    #[error("span legs have different domains")]
    DomainMismatch,
    #[error("cospan legs have different codomains")]
    CodomainMismatch,
    #[error("pushout leg is not monic")]
    NotMono,
    #[error("input morphism is not valid: {0}")]
    Invalid(String),
}

/// A cocone `B → apex ← C` over a span.
#[derive(Clone, Debug)]
pub struct CospanResult {
    pub apex: GraphRef,
    pub left: GraphMorphism,
    pub right: GraphMorphism,
}

/// A cone `B ← apex → C` over a cospan.
#[derive(Clone, Debug)]
pub struct SpanResult {
    pub apex: GraphRef,
    pub left: GraphMorphism,
    pub right: GraphMorphism,
}

fn same_graph(a: &GraphRef, b: &GraphRef) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

fn ensure_valid(f: &GraphMorphism) -> Result<(), CatError> {
    let v = f.violations();
    if v.is_empty() {
        Ok(())
    } else {
        Err(CatError::Invalid(format!("{} -> {}: {}", f.dom().name(), f.cod().name(), v[0])))
    }
}

/// Pushout of `B ←b− A −c↣ C`.
///
/// Apex elements that receive something from `C` keep the least `C` name
/// among their preimages; elements that only come from `B` keep their `B`
/// name, freshened against names already taken.
pub fn pushout(b: &GraphMorphism, c: &GraphMorphism) -> Result<CospanResult, CatError> {
    if !same_graph(b.dom(), c.dom()) {
        return Err(CatError::DomainMismatch);
    }
    ensure_valid(b)?;
    ensure_valid(c)?;
    if !c.is_mono() {
        return Err(CatError::NotMono);
    }
    let (a_g, b_g, c_g) = (&**b.dom(), &**b.cod(), &**c.cod());

    // Vertex classes: one per B vertex, then one per C vertex outside im(c).
    let mut c_vertex_class = vec![usize::MAX; c_g.vertex_count()];
    for a in a_g.vertices() {
        c_vertex_class[c.vertex(a).0] = b.vertex(a).0;
    }
    let mut n_vclasses = b_g.vertex_count();
    let mut c_only_vertices = Vec::new();
    for y in c_g.vertices() {
        if c_vertex_class[y.0] == usize::MAX {
            c_vertex_class[y.0] = n_vclasses;
            n_vclasses += 1;
            c_only_vertices.push(y);
        }
    }
    let mut c_edge_class = vec![usize::MAX; c_g.edge_count()];
    for a in a_g.edges() {
        c_edge_class[c.edge(a).0] = b.edge(a).0;
    }
    let mut n_eclasses = b_g.edge_count();
    let mut c_only_edges = Vec::new();
    for y in c_g.edges() {
        if c_edge_class[y.0] == usize::MAX {
            c_edge_class[y.0] = n_eclasses;
            n_eclasses += 1;
            c_only_edges.push(y);
        }
    }

    let vnames = class_names(
        n_vclasses,
        c_g.vertices().map(|y| (c_vertex_class[y.0], c_g.vertex_name(y))),
        b_g.vertices().map(|x| (x.0, b_g.vertex_name(x))),
    );
    let enames = class_names(
        n_eclasses,
        c_g.edges().map(|y| (c_edge_class[y.0], c_g.edge_name(y))),
        b_g.edges().map(|x| (x.0, b_g.edge_name(x))),
    );

    let mut vlabels: Vec<Vec<&Label>> = vec![Vec::new(); n_vclasses];
    for x in b_g.vertices() {
        vlabels[x.0].push(b_g.vlabel(x));
    }
    for y in c_g.vertices() {
        vlabels[c_vertex_class[y.0]].push(c_g.vlabel(y));
    }
    let mut elabels: Vec<Vec<&Label>> = vec![Vec::new(); n_eclasses];
    for x in b_g.edges() {
        elabels[x.0].push(b_g.elabel(x));
    }
    for y in c_g.edges() {
        elabels[c_edge_class[y.0]].push(c_g.elabel(y));
    }

    let mut apex = LabeledGraph::new(format!("{}+{}", b_g.name(), c_g.name()));
    for (i, name) in vnames.iter().enumerate() {
        apex.add_vertex(name.clone(), join(vlabels[i].iter().copied()))
            .expect("class names are unique");
    }
    let endpoints = |k: usize| -> (usize, usize) {
        if k < b_g.edge_count() {
            let e = EdgeId(k);
            (b_g.src(e).0, b_g.tgt(e).0)
        } else {
            let y = c_only_edges[k - b_g.edge_count()];
            (c_vertex_class[c_g.src(y).0], c_vertex_class[c_g.tgt(y).0])
        }
    };
    for (k, name) in enames.iter().enumerate() {
        let (s, t) = endpoints(k);
        apex.add_edge(name.clone(), VertexId(s), VertexId(t), join(elabels[k].iter().copied()))
            .expect("class names are unique");
    }
    let apex = Arc::new(apex);
    let left = GraphMorphism::new(
        b.cod().clone(),
        apex.clone(),
        b_g.vertices().collect(),
        b_g.edges().collect(),
    )
    .expect("total");
    let right = GraphMorphism::new(
        c.cod().clone(),
        apex.clone(),
        c_vertex_class.iter().map(|&k| VertexId(k)).collect(),
        c_edge_class.iter().map(|&k| EdgeId(k)).collect(),
    )
    .expect("total");
    Ok(CospanResult { apex, left, right })
}

fn class_names<'a>(
    n: usize,
    c_members: impl Iterator<Item = (usize, &'a str)>,
    b_members: impl Iterator<Item = (usize, &'a str)>,
) -> Vec<String> {
    let mut names: Vec<Option<String>> = vec![None; n];
    for (k, name) in c_members {
        match &names[k] {
            Some(prev) if prev.as_str() <= name => {}
            _ => names[k] = Some(name.to_string()),
        }
    }
    let mut taken: HashSet<String> = names.iter().flatten().cloned().collect();
    for (k, name) in b_members {
        if names[k].is_none() {
            let fresh = fresh_name(name, |n| taken.contains(n));
            taken.insert(fresh.clone());
            names[k] = Some(fresh);
        }
    }
    names.into_iter().map(|n| n.expect("every class has a member")).collect()
}

/// Pullback of `B −b→ X ←c− C`.
///
/// Apex elements are the pairs with equal images; a pair is named after
/// its `B` component when that component occurs in no other pair.
pub fn pullback(b: &GraphMorphism, c: &GraphMorphism) -> Result<SpanResult, CatError> {
    if !same_graph(b.cod(), c.cod()) {
        return Err(CatError::CodomainMismatch);
    }
    ensure_valid(b)?;
    ensure_valid(c)?;
    let (b_g, c_g) = (&**b.dom(), &**c.dom());

    let mut c_by_vertex: HashMap<VertexId, Vec<VertexId>> = HashMap::new();
    for q in c_g.vertices() {
        c_by_vertex.entry(c.vertex(q)).or_default().push(q);
    }
    let mut c_by_edge: HashMap<EdgeId, Vec<EdgeId>> = HashMap::new();
    for q in c_g.edges() {
        c_by_edge.entry(c.edge(q)).or_default().push(q);
    }

    let vpairs: Vec<(VertexId, VertexId)> = b_g
        .vertices()
        .flat_map(|p| {
            c_by_vertex
                .get(&b.vertex(p))
                .into_iter()
                .flatten()
                .map(move |&q| (p, q))
        })
        .collect();
    let epairs: Vec<(EdgeId, EdgeId)> = b_g
        .edges()
        .flat_map(|p| c_by_edge.get(&b.edge(p)).into_iter().flatten().map(move |&q| (p, q)))
        .collect();
    let vpair_index: HashMap<(VertexId, VertexId), usize> =
        vpairs.iter().enumerate().map(|(i, &p)| (p, i)).collect();

    let pair_names = |pairs: &[(usize, usize)], lname: &dyn Fn(usize) -> String, rname: &dyn Fn(usize) -> String| {
        let mut count: HashMap<usize, usize> = HashMap::new();
        for &(p, _) in pairs {
            *count.entry(p).or_default() += 1;
        }
        let mut taken = HashSet::new();
        pairs
            .iter()
            .map(|&(p, q)| {
                let base = if count[&p] == 1 {
                    lname(p)
                } else {
                    format!("{}~{}", lname(p), rname(q))
                };
                let name = fresh_name(&base, |n| taken.contains(n));
                taken.insert(name.clone());
                name
            })
            .collect::<Vec<String>>()
    };
    let vraw: Vec<(usize, usize)> = vpairs.iter().map(|(p, q)| (p.0, q.0)).collect();
    let eraw: Vec<(usize, usize)> = epairs.iter().map(|(p, q)| (p.0, q.0)).collect();
    let vnames = pair_names(
        &vraw,
        &|i| b_g.vertex_name(VertexId(i)).to_string(),
        &|i| c_g.vertex_name(VertexId(i)).to_string(),
    );
    let enames = pair_names(
        &eraw,
        &|i| b_g.edge_name(EdgeId(i)).to_string(),
        &|i| c_g.edge_name(EdgeId(i)).to_string(),
    );

    let mut apex = LabeledGraph::new(format!("{}x{}", b_g.name(), c_g.name()));
    for (i, &(p, q)) in vpairs.iter().enumerate() {
        apex.add_vertex(vnames[i].clone(), meet([b_g.vlabel(p), c_g.vlabel(q)]))
            .expect("unique");
    }
    for (i, &(p, q)) in epairs.iter().enumerate() {
        let s = vpair_index[&(b_g.src(p), c_g.src(q))];
        let t = vpair_index[&(b_g.tgt(p), c_g.tgt(q))];
        apex.add_edge(enames[i].clone(), VertexId(s), VertexId(t), meet([b_g.elabel(p), c_g.elabel(q)]))
            .expect("unique");
    }
    let apex = Arc::new(apex);
    let left = GraphMorphism::new(
        apex.clone(),
        b.dom().clone(),
        vpairs.iter().map(|p| p.0).collect(),
        epairs.iter().map(|p| p.0).collect(),
    )
    .expect("total");
    let right = GraphMorphism::new(
        apex.clone(),
        c.dom().clone(),
        vpairs.iter().map(|p| p.1).collect(),
        epairs.iter().map(|p| p.1).collect(),
    )
    .expect("total");
    Ok(SpanResult { apex, left, right })
}

/// Whether `b ∘ f = c ∘ g` as maps.
pub fn square_commutes(f: &GraphMorphism, g: &GraphMorphism, b: &GraphMorphism, c: &GraphMorphism) -> bool {
    match (f.then(b), g.then(c)) {
        (Ok(x), Ok(y)) => x.same_maps(&y),
        _ => false,
    }
}

/// Whether the commuting square `B ←f− P −g→ C`, `B −b→ X ←c− C` is a
/// pullback: the induced map into the canonical pullback is an iso.
pub fn is_pullback_square(f: &GraphMorphism, g: &GraphMorphism, b: &GraphMorphism, c: &GraphMorphism) -> bool {
    if !square_commutes(f, g, b, c) || !f.is_valid() || !g.is_valid() {
        return false;
    }
    let Ok(pb) = pullback(b, c) else {
        return false;
    };
    let p = &**f.dom();
    if p.vertex_count() != pb.apex.vertex_count() || p.edge_count() != pb.apex.edge_count() {
        return false;
    }
    let vindex: HashMap<(VertexId, VertexId), VertexId> = pb
        .apex
        .vertices()
        .map(|v| ((pb.left.vertex(v), pb.right.vertex(v)), v))
        .collect();
    let eindex: HashMap<(EdgeId, EdgeId), EdgeId> = pb
        .apex
        .edges()
        .map(|e| ((pb.left.edge(e), pb.right.edge(e)), e))
        .collect();
    let mut seen_v = HashSet::new();
    for v in p.vertices() {
        let Some(&w) = vindex.get(&(f.vertex(v), g.vertex(v))) else {
            return false;
        };
        if !seen_v.insert(w) || p.vlabel(v) != pb.apex.vlabel(w) {
            return false;
        }
    }
    let mut seen_e = HashSet::new();
    for e in p.edges() {
        let Some(&w) = eindex.get(&(f.edge(e), g.edge(e))) else {
            return false;
        };
        if !seen_e.insert(w) || p.elabel(e) != pb.apex.elabel(w) {
            return false;
        }
    }
    true
}

// ---------------------------------------------------------------------------
// Universal-property oracles
// ---------------------------------------------------------------------------

const PROBE_QUOTIENT_LIMIT: usize = 6;

type PartialMaps = (Vec<Option<VertexId>>, Vec<Option<EdgeId>>);

/// Candidate sets for a map `dom → target` that must agree with
/// `leg`-images: element `x` of `dom` must go to `required(x)`.
/// Returns `None` if two requirements conflict.
fn fixed_assignments(
    n_vertices: usize,
    n_edges: usize,
    vreqs: impl Iterator<Item = (VertexId, VertexId)>,
    ereqs: impl Iterator<Item = (EdgeId, EdgeId)>,
) -> Option<PartialMaps> {
    let mut vs = vec![None; n_vertices];
    for (v, w) in vreqs {
        match vs[v.0] {
            Some(prev) if prev != w => return None,
            _ => vs[v.0] = Some(w),
        }
    }
    let mut es = vec![None; n_edges];
    for (e, f) in ereqs {
        match es[e.0] {
            Some(prev) if prev != f => return None,
            _ => es[e.0] = Some(f),
        }
    }
    Some((vs, es))
}

fn search_with_fixed<'a>(
    dom: &'a LabeledGraph,
    cod: &'a LabeledGraph,
    vs: &[Option<VertexId>],
    es: &[Option<EdgeId>],
) -> MorphismSearch<'a> {
    let mut s = MorphismSearch::new(dom, cod);
    for (i, w) in vs.iter().enumerate() {
        if let Some(w) = w {
            s = s.fix_vertex(VertexId(i), *w);
        }
    }
    for (i, f) in es.iter().enumerate() {
        if let Some(f) = f {
            s = s.fix_edge(EdgeId(i), *f);
        }
    }
    s
}

/// Candidate apex with each label lowered to the join of its preimages.
fn tightened_apex(candidate: &CospanResult) -> LabeledGraph {
    let apex = &*candidate.apex;
    let mut vl: Vec<Vec<&Label>> = vec![Vec::new(); apex.vertex_count()];
    let mut el: Vec<Vec<&Label>> = vec![Vec::new(); apex.edge_count()];
    for leg in [&candidate.left, &candidate.right] {
        let d = &**leg.dom();
        for v in d.vertices() {
            vl[leg.vertex(v).0].push(d.vlabel(v));
        }
        for e in d.edges() {
            el[leg.edge(e).0].push(d.elabel(e));
        }
    }
    let mut g = LabeledGraph::new("tight");
    for v in apex.vertices() {
        g.add_vertex(apex.vertex_name(v), join(vl[v.0].iter().copied())).unwrap();
    }
    for e in apex.edges() {
        g.add_edge(apex.edge_name(e), apex.src(e), apex.tgt(e), join(el[e.0].iter().copied()))
            .unwrap();
    }
    g
}

/// Quotient identifying vertices `u` and `w`; labels are joined.
fn merge_vertices(g: &LabeledGraph, u: VertexId, w: VertexId) -> LabeledGraph {
    let mut q = LabeledGraph::new("quotient");
    let mut map = vec![VertexId(0); g.vertex_count()];
    for v in g.vertices() {
        if v == w {
            continue;
        }
        let label = if v == u { join([g.vlabel(u), g.vlabel(w)]) } else { g.vlabel(v).clone() };
        map[v.0] = q.add_vertex(g.vertex_name(v), label).unwrap();
    }
    map[w.0] = map[u.0];
    for e in g.edges() {
        q.add_edge(g.edge_name(e), map[g.src(e).0], map[g.tgt(e).0], g.elabel(e).clone())
            .unwrap();
    }
    q
}

/// Quotient identifying two parallel edges.
fn merge_edges(g: &LabeledGraph, e1: EdgeId, e2: EdgeId) -> LabeledGraph {
    let mut q = LabeledGraph::new("quotient");
    for v in g.vertices() {
        q.add_vertex(g.vertex_name(v), g.vlabel(v).clone()).unwrap();
    }
    for e in g.edges() {
        if e == e2 {
            continue;
        }
        let label = if e == e1 { join([g.elabel(e1), g.elabel(e2)]) } else { g.elabel(e).clone() };
        q.add_edge(g.edge_name(e), g.src(e), g.tgt(e), label).unwrap();
    }
    q
}

/// Two `⊤` vertices with one `⊤` edge per ordered pair: morphisms into it
/// are 2-colorings of vertices.
fn vertex_classifier() -> LabeledGraph {
    let mut g = LabeledGraph::new("two-vertices");
    let vs = [g.add_vertex("0", Label::Top).unwrap(), g.add_vertex("1", Label::Top).unwrap()];
    for s in vs {
        for t in vs {
            g.add_edge(format!("{}{}", s.0, t.0), s, t, Label::Top).unwrap();
        }
    }
    g
}

/// One `⊤` vertex with two `⊤` loops: morphisms into it are 2-colorings of
/// edges.
fn edge_classifier() -> LabeledGraph {
    let mut g = LabeledGraph::new("two-loops");
    let v = g.add_vertex("0", Label::Top).unwrap();
    g.add_edge("a", v, v, Label::Top).unwrap();
    g.add_edge("b", v, v, Label::Top).unwrap();
    g
}

/// Probe objects used by [`verify_pushout_universal`] by default.
pub fn default_pushout_probes(candidate: &CospanResult) -> Vec<LabeledGraph> {
    let apex = &*candidate.apex;
    let tight = tightened_apex(candidate);
    let mut probes = vec![apex.clone(), tight.clone(), vertex_classifier(), edge_classifier()];
    if tight.vertex_count() <= PROBE_QUOTIENT_LIMIT {
        let vs: Vec<VertexId> = tight.vertices().collect();
        for (i, &u) in vs.iter().enumerate() {
            for &w in &vs[i + 1..] {
                probes.push(merge_vertices(&tight, u, w));
            }
        }
        for e1 in tight.edges() {
            for e2 in tight.edges().filter(|&e2| e2 > e1) {
                if tight.src(e1) == tight.src(e2) && tight.tgt(e1) == tight.tgt(e2) {
                    probes.push(merge_edges(&tight, e1, e2));
                }
            }
        }
    }
    probes
}

/// Checks a candidate pushout of `B ←b− A −c→ C` against every cocone into
/// each probe object: exactly one mediating morphism must exist.
pub fn check_pushout_universal(
    b: &GraphMorphism,
    c: &GraphMorphism,
    candidate: &CospanResult,
    probes: &[LabeledGraph],
) -> Result<(), String> {
    let (left, right) = (&candidate.left, &candidate.right);
    if !same_graph(b.cod(), left.dom()) || !same_graph(c.cod(), right.dom()) {
        return Err("legs do not fit the span".into());
    }
    if !same_graph(left.cod(), &candidate.apex) || !same_graph(right.cod(), &candidate.apex) {
        return Err("legs do not land in the apex".into());
    }
    if !left.is_valid() || !right.is_valid() {
        return Err("a leg is not a valid morphism".into());
    }
    if !square_commutes(b, c, left, right) {
        return Err("square does not commute".into());
    }
    let (a_g, b_g, c_g, apex) = (&**b.dom(), &**b.cod(), &**c.cod(), &*candidate.apex);
    for q in probes {
        let fs = MorphismSearch::new(b_g, q).run_raw();
        for (fv, fe) in fs {
            // g must agree with f along the span.
            let Some((gv, ge)) = fixed_assignments(
                c_g.vertex_count(),
                c_g.edge_count(),
                a_g.vertices().map(|x| (c.vertex(x), fv[b.vertex(x).0])),
                a_g.edges().map(|x| (c.edge(x), fe[b.edge(x).0])),
            ) else {
                continue;
            };
            for (gv, ge) in search_with_fixed(c_g, q, &gv, &ge).run_raw() {
                let reqs = fixed_assignments(
                    apex.vertex_count(),
                    apex.edge_count(),
                    b_g.vertices()
                        .map(|x| (left.vertex(x), fv[x.0]))
                        .chain(c_g.vertices().map(|y| (right.vertex(y), gv[y.0]))),
                    b_g.edges()
                        .map(|x| (left.edge(x), fe[x.0]))
                        .chain(c_g.edges().map(|y| (right.edge(y), ge[y.0]))),
                );
                let count = match reqs {
                    None => 0,
                    Some((hv, he)) => search_with_fixed(apex, q, &hv, &he).limit(2).run_raw().len(),
                };
                if count != 1 {
                    return Err(format!(
                        "cocone into probe `{}` has {} mediating morphisms",
                        q.name(),
                        count
                    ));
                }
            }
        }
    }
    Ok(())
}

pub fn verify_pushout_universal(b: &GraphMorphism, c: &GraphMorphism, candidate: &CospanResult) -> bool {
    let probes = default_pushout_probes(candidate);
    check_pushout_universal(b, c, candidate, &probes).is_ok()
}

pub fn verify_pushout_universal_with(
    b: &GraphMorphism,
    c: &GraphMorphism,
    candidate: &CospanResult,
    extra_probes: &[LabeledGraph],
) -> bool {
    let mut probes = default_pushout_probes(candidate);
    probes.extend_from_slice(extra_probes);
    check_pushout_universal(b, c, candidate, &probes).is_ok()
}

/// Single-element "figures" for every label in `labels`: a vertex, an edge
/// between two `⊥` vertices, and a loop on a `⊥` vertex. Cones from these
/// detect exactly which pairs (with which labels) a pullback must contain.
fn figures(labels: &BTreeSet<Label>) -> Vec<LabeledGraph> {
    let mut out = Vec::new();
    for l in labels {
        let mut v = LabeledGraph::new(format!("vertex^{l}"));
        v.add_vertex("p", l.clone()).unwrap();
        out.push(v);
        let mut e = LabeledGraph::new(format!("edge^{l}"));
        let s = e.add_vertex("s", Label::Bottom).unwrap();
        let t = e.add_vertex("t", Label::Bottom).unwrap();
        e.add_edge("e", s, t, l.clone()).unwrap();
        out.push(e);
        let mut lp = LabeledGraph::new(format!("loop^{l}"));
        let s = lp.add_vertex("s", Label::Bottom).unwrap();
        lp.add_edge("e", s, s, l.clone()).unwrap();
        out.push(lp);
    }
    out
}

fn labels_of(g: &LabeledGraph, into: &mut BTreeSet<Label>) {
    into.extend(g.vertices().map(|v| g.vlabel(v).clone()));
    into.extend(g.edges().map(|e| g.elabel(e).clone()));
}

/// Probe objects used by [`verify_pullback_universal`] by default.
pub fn default_pullback_probes(b: &GraphMorphism, c: &GraphMorphism, candidate: &SpanResult) -> Vec<LabeledGraph> {
    let apex = &*candidate.apex;
    let mut probes = Vec::new();
    // The figures below already pin down the apex element by element; the
    // apex and its one-element deletions are extra coverage for small cases
    // (enumerating cones from a large apex is exponential).
    if apex.size() <= PROBE_QUOTIENT_LIMIT {
        probes.push(apex.clone());
        let all_v: BTreeSet<VertexId> = apex.vertices().collect();
        let all_e: BTreeSet<EdgeId> = apex.edges().collect();
        for v in apex.vertices() {
            let mut vs = all_v.clone();
            vs.remove(&v);
            probes.push(apex.subgraph(&vs, &all_e));
        }
        for e in apex.edges() {
            let mut es = all_e.clone();
            es.remove(&e);
            probes.push(apex.subgraph(&all_v, &es));
        }
    }
    let mut labels: BTreeSet<Label> = [Label::Bottom, Label::Top].into_iter().collect();
    for g in [&**b.dom(), &**c.dom(), &**b.cod(), apex] {
        labels_of(g, &mut labels);
    }
    probes.extend(figures(&labels));
    probes
}

/// Checks a candidate pullback of `B −b→ X ←c− C` against every cone from
/// each probe object: exactly one mediating morphism must exist.
pub fn check_pullback_universal(
    b: &GraphMorphism,
    c: &GraphMorphism,
    candidate: &SpanResult,
    probes: &[LabeledGraph],
) -> Result<(), String> {
    let (left, right) = (&candidate.left, &candidate.right);
    if !same_graph(left.cod(), b.dom()) || !same_graph(right.cod(), c.dom()) {
        return Err("legs do not fit the cospan".into());
    }
    if !same_graph(left.dom(), &candidate.apex) || !same_graph(right.dom(), &candidate.apex) {
        return Err("legs do not start at the apex".into());
    }
    if !left.is_valid() || !right.is_valid() {
        return Err("a leg is not a valid morphism".into());
    }
    if !square_commutes(left, right, b, c) {
        return Err("square does not commute".into());
    }
    let (b_g, c_g, apex) = (&**b.dom(), &**c.dom(), &*candidate.apex);
    let mut c_fibre_v: BTreeMap<VertexId, Vec<VertexId>> = BTreeMap::new();
    for y in c_g.vertices() {
        c_fibre_v.entry(c.vertex(y)).or_default().push(y);
    }
    let mut c_fibre_e: BTreeMap<EdgeId, Vec<EdgeId>> = BTreeMap::new();
    for y in c_g.edges() {
        c_fibre_e.entry(c.edge(y)).or_default().push(y);
    }
    let mut apex_fibre_v: BTreeMap<(VertexId, VertexId), Vec<VertexId>> = BTreeMap::new();
    for a in apex.vertices() {
        apex_fibre_v.entry((left.vertex(a), right.vertex(a))).or_default().push(a);
    }
    let mut apex_fibre_e: BTreeMap<(EdgeId, EdgeId), Vec<EdgeId>> = BTreeMap::new();
    for a in apex.edges() {
        apex_fibre_e.entry((left.edge(a), right.edge(a))).or_default().push(a);
    }
    for p in probes {
        for (fv, fe) in MorphismSearch::new(p, b_g).run_raw() {
            let mut gs = MorphismSearch::new(p, c_g);
            for v in p.vertices() {
                let fibre = c_fibre_v.get(&b.vertex(fv[v.0])).cloned().unwrap_or_default();
                gs = gs.restrict_vertex(v, fibre);
            }
            for e in p.edges() {
                let fibre = c_fibre_e.get(&b.edge(fe[e.0])).cloned().unwrap_or_default();
                gs = gs.restrict_edge(e, fibre);
            }
            for (gv, ge) in gs.run_raw() {
                let mut hs = MorphismSearch::new(p, apex).limit(2);
                for v in p.vertices() {
                    let fibre = apex_fibre_v.get(&(fv[v.0], gv[v.0])).cloned().unwrap_or_default();
                    hs = hs.restrict_vertex(v, fibre);
                }
                for e in p.edges() {
                    let fibre = apex_fibre_e.get(&(fe[e.0], ge[e.0])).cloned().unwrap_or_default();
                    hs = hs.restrict_edge(e, fibre);
                }
                let count = hs.run_raw().len();
                if count != 1 {
                    return Err(format!("cone from probe `{}` has {} mediating morphisms", p.name(), count));
                }
            }
        }
    }
    Ok(())
}

pub fn verify_pullback_universal(b: &GraphMorphism, c: &GraphMorphism, candidate: &SpanResult) -> bool {
    let probes = default_pullback_probes(b, c, candidate);
    check_pullback_universal(b, c, candidate, &probes).is_ok()
}

pub fn verify_pullback_universal_with(
    b: &GraphMorphism,
    c: &GraphMorphism,
    candidate: &SpanResult,
    extra_probes: &[LabeledGraph],
) -> bool {
    let mut probes = default_pullback_probes(b, c, candidate);
    probes.extend_from_slice(extra_probes);
    check_pullback_universal(b, c, candidate, &probes).is_ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::are_isomorphic;

    fn graph(name: &str, vs: &[(&str, Label)], es: &[(&str, &str, &str, Label)]) -> GraphRef {
        let mut g = LabeledGraph::new(name);
        for (v, l) in vs {
            g.add_vertex(*v, l.clone()).unwrap();
        }
        for (e, s, t, l) in es {
            g.add_edge_between(*e, s, t, l.clone()).unwrap();
        }
        Arc::new(g)
    }

    fn sym(s: &str) -> Label {
        Label::symbol(s)
    }

    #[test]
    fn pushout_over_empty_is_disjoint_union() {
        let a = graph("A", &[], &[]);
        let b = graph("B", &[("u", sym("a"))], &[("l", "u", "u", Label::Bottom)]);
        let c = graph("C", &[("u", sym("b")), ("w", Label::Top)], &[("k", "u", "w", Label::index(1))]);
        let fb = GraphMorphism::new(a.clone(), b.clone(), vec![], vec![]).unwrap();
        let fc = GraphMorphism::new(a, c.clone(), vec![], vec![]).unwrap();
        let po = pushout(&fb, &fc).unwrap();
        assert_eq!(po.apex.vertex_count(), 3);
        assert_eq!(po.apex.edge_count(), 2);
        assert!(are_isomorphic(&po.apex, &Arc::new(b.disjoint_union(&c))).is_some());
        assert!(po.left.is_mono() && po.right.is_mono());
        // C keeps its names; the colliding B vertex is freshened.
        assert_eq!(po.left.vertex_image_name("u"), Some("u#1"));
        assert_eq!(po.right.vertex_image_name("u"), Some("u"));
        assert!(verify_pushout_universal(&fb, &fc, &po));
    }

    #[test]
    fn pushout_label_is_join_of_preimages() {
        // A single ⊥ vertex glued to a B vertex labeled a; join(⊥, a) = a.
        let a = graph("A", &[("s", Label::Bottom)], &[]);
        let b = graph("B", &[("s", sym("a"))], &[]);
        let c = graph("C", &[("s", Label::Bottom), ("t", sym("c"))], &[]);
        let fb = GraphMorphism::inclusion(a.clone(), b).unwrap();
        let fc = GraphMorphism::inclusion(a, c).unwrap();
        let po = pushout(&fb, &fc).unwrap();
        let s = po.apex.vertex_by_name("s").unwrap();
        assert_eq!(po.apex.vlabel(s), &sym("a"));
        assert_eq!(po.apex.vertex_count(), 2);
        assert!(verify_pushout_universal(&fb, &fc, &po));
    }

    #[test]
    fn pushout_rejects_non_mono_leg() {
        let a = graph("A", &[("p", Label::Bottom), ("q", Label::Bottom)], &[]);
        let one = graph("1", &[("z", Label::Bottom)], &[]);
        let collapse = GraphMorphism::from_names(a.clone(), one, &[("p", "z"), ("q", "z")], &[]).unwrap();
        let id = GraphMorphism::identity(a);
        assert_eq!(pushout(&id, &collapse).unwrap_err(), CatError::NotMono);
        assert!(pushout(&collapse, &id).is_ok());
    }

    #[test]
    fn pushout_oracle_rejects_extra_vertex_and_lowered_label() {
        let a = graph("A", &[("s", Label::Bottom)], &[]);
        let b = graph("B", &[("s", sym("a"))], &[]);
        let c = graph("C", &[("s", Label::Bottom), ("t", sym("c"))], &[("st", "s", "t", Label::index(1))]);
        let fb = GraphMorphism::inclusion(a.clone(), b.clone()).unwrap();
        let fc = GraphMorphism::inclusion(a, c.clone()).unwrap();
        let po = pushout(&fb, &fc).unwrap();
        assert!(verify_pushout_universal(&fb, &fc, &po));

        // Extra disconnected vertex, for every possible label.
        for l in [Label::Bottom, sym("a"), sym("z"), Label::Top] {
            let mut bigger = (*po.apex).clone();
            bigger.add_vertex("extra", l).unwrap();
            let bigger = Arc::new(bigger);
            let cand = CospanResult {
                apex: bigger.clone(),
                left: po.left.with_cod(bigger.clone()).unwrap(),
                right: po.right.with_cod(bigger).unwrap(),
            };
            assert!(!verify_pushout_universal(&fb, &fc, &cand));
        }

        // Label of s lowered below join(a, ⊥) = a.
        let s = po.apex.vertex_by_name("s").unwrap();
        let lowered = Arc::new(po.apex.with_vertex_label(s, Label::Bottom));
        let cand = CospanResult {
            apex: lowered.clone(),
            left: po.left.with_cod(lowered.clone()).unwrap(),
            right: po.right.with_cod(lowered).unwrap(),
        };
        assert!(!verify_pushout_universal(&fb, &fc, &cand));

        // Label raised above the join is also not universal.
        let raised = Arc::new(po.apex.with_vertex_label(s, Label::Top));
        let cand = CospanResult {
            apex: raised.clone(),
            left: po.left.with_cod(raised.clone()).unwrap(),
            right: po.right.with_cod(raised).unwrap(),
        };
        assert!(!verify_pushout_universal(&fb, &fc, &cand));
    }

    #[test]
    fn pullback_along_identity_is_domain() {
        let b = graph(
            "B",
            &[("u", sym("a")), ("v", Label::Top)],
            &[("e", "u", "v", Label::index(1)), ("f", "u", "v", Label::index(1))],
        );
        let x = graph("X", &[("p", Label::Top)], &[("l", "p", "p", Label::Top)]);
        let f = GraphMorphism::from_names(b.clone(), x.clone(), &[("u", "p"), ("v", "p")], &[("e", "l"), ("f", "l")]).unwrap();
        let id = GraphMorphism::identity(x);
        let pb = pullback(&f, &id).unwrap();
        assert!(are_isomorphic(&pb.apex, &b).is_some());
        assert!(pb.left.is_iso());
        assert!(verify_pullback_universal(&f, &id, &pb));
        // Names follow B because each B element occurs in exactly one pair.
        assert_eq!(pb.apex.vertex_name(VertexId(0)), "u");
    }

    #[test]
    fn pullback_labels_are_meets_and_oracle_rejects_tampering() {
        let b = graph("B", &[("u", sym("a")), ("w", Label::Top)], &[("e", "u", "w", Label::Top)]);
        let c = graph("C", &[("u", Label::Top), ("w", sym("b"))], &[("e", "u", "w", Label::index(2))]);
        let x = graph("X", &[("u", Label::Top), ("w", Label::Top)], &[("e", "u", "w", Label::Top)]);
        let fb = GraphMorphism::inclusion(b, x.clone()).unwrap();
        let fc = GraphMorphism::inclusion(c, x).unwrap();
        let pb = pullback(&fb, &fc).unwrap();
        assert_eq!(pb.apex.vlabel(VertexId(0)), &sym("a"));
        assert_eq!(pb.apex.vlabel(VertexId(1)), &sym("b"));
        assert_eq!(pb.apex.elabel(EdgeId(0)), &Label::index(2));
        assert!(verify_pullback_universal(&fb, &fc, &pb));
        assert!(is_pullback_square(&pb.left, &pb.right, &fb, &fc));

        // An extra disconnected vertex mapped onto an existing pair.
        let mut bigger = (*pb.apex).clone();
        bigger.add_vertex("extra", Label::Bottom).unwrap();
        let bigger = Arc::new(bigger);
        let mut lv = pb.left.vertex_map().to_vec();
        lv.push(VertexId(0));
        let mut rv = pb.right.vertex_map().to_vec();
        rv.push(VertexId(0));
        let cand = SpanResult {
            apex: bigger.clone(),
            left: GraphMorphism::new(bigger.clone(), pb.left.cod().clone(), lv, pb.left.edge_map().to_vec()).unwrap(),
            right: GraphMorphism::new(bigger, pb.right.cod().clone(), rv, pb.right.edge_map().to_vec()).unwrap(),
        };
        assert!(!verify_pullback_universal(&fb, &fc, &cand));

        // Apex label lowered below the meet: the cone from the correct apex
        // has no mediator.
        let lowered = Arc::new(pb.apex.with_vertex_label(VertexId(0), Label::Bottom));
        let cand = SpanResult {
            apex: lowered.clone(),
            left: pb.left.with_dom(lowered.clone()).unwrap(),
            right: pb.right.with_dom(lowered).unwrap(),
        };
        assert!(!verify_pullback_universal(&fb, &fc, &cand));
        assert!(!verify_pullback_universal_with(&fb, &fc, &cand, &[(*pb.apex).clone()]));
    }
}
