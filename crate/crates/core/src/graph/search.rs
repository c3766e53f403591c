//! Backtracking search for graph morphisms.

use std::sync::Arc;

use super::{EdgeId, GraphMorphism, GraphRef, LabeledGraph, VertexId};
use crate::lattice::{CompleteLattice, Label};

/// Configurable enumeration of morphisms `dom → cod`.
///
/// Vertices are assigned first, most constrained then highest degree
/// first, pruning on labels and on the existence of a compatible edge for
/// every already-determined incident edge. Edges are assigned afterwards.
/// Results come out in a deterministic order.
pub struct MorphismSearch<'a> {
    dom: &'a LabeledGraph,
    cod: &'a LabeledGraph,
    mono: bool,
    exact_labels: bool,
    vertex_candidates: Vec<Option<Vec<VertexId>>>,
    edge_candidates: Vec<Option<Vec<EdgeId>>>,
    limit: Option<usize>,
}

type RawMorphism = (Vec<VertexId>, Vec<EdgeId>);

impl<'a> MorphismSearch<'a> {
    pub fn new(dom: &'a LabeledGraph, cod: &'a LabeledGraph) -> Self {
        MorphismSearch {
            dom,
            cod,
            mono: false,
            exact_labels: false,
            vertex_candidates: vec![None; dom.vertex_count()],
            edge_candidates: vec![None; dom.edge_count()],
            limit: None,
        }
    }

    /// Only injective morphisms.
    pub fn mono(mut self, yes: bool) -> Self {
        self.mono = yes;
        self
    }

    /// Require equal labels instead of `≤`.
    pub fn exact_labels(mut self, yes: bool) -> Self {
        self.exact_labels = yes;
        self
    }

    pub fn limit(mut self, n: usize) -> Self {
        self.limit = Some(n);
        self
    }

    /// Restricts the image of `v` to `candidates` (intersected with any
    /// earlier restriction).
    pub fn restrict_vertex(mut self, v: VertexId, candidates: Vec<VertexId>) -> Self {
        let slot = &mut self.vertex_candidates[v.0];
        *slot = Some(match slot.take() {
            None => candidates,
            Some(prev) => prev.into_iter().filter(|c| candidates.contains(c)).collect(),
        });
        self
    }

    pub fn restrict_edge(mut self, e: EdgeId, candidates: Vec<EdgeId>) -> Self {
        let slot = &mut self.edge_candidates[e.0];
        *slot = Some(match slot.take() {
            None => candidates,
            Some(prev) => prev.into_iter().filter(|c| candidates.contains(c)).collect(),
        });
        self
    }

    pub fn fix_vertex(self, v: VertexId, w: VertexId) -> Self {
        self.restrict_vertex(v, vec![w])
    }

    pub fn fix_edge(self, e: EdgeId, f: EdgeId) -> Self {
        self.restrict_edge(e, vec![f])
    }

    fn label_ok(&self, a: &Label, b: &Label) -> bool {
        if self.exact_labels {
            a == b
        } else {
            a.leq(b)
        }
    }

    fn edge_allowed(&self, e: EdgeId, f: EdgeId) -> bool {
        self.label_ok(self.dom.elabel(e), self.cod.elabel(f))
            && self.edge_candidates[e.0].as_ref().is_none_or(|c| c.contains(&f))
    }

    fn vertex_order(&self) -> Vec<VertexId> {
        let mut order: Vec<VertexId> = self.dom.vertices().collect();
        let degree = |v: VertexId| self.dom.in_degree(v) + self.dom.out_degree(v);
        order.sort_by_key(|&v| {
            let constrained = self.vertex_candidates[v.0].as_ref().map_or(usize::MAX, |c| c.len());
            (constrained, std::cmp::Reverse(degree(v)), v)
        });
        order
    }

    pub fn run_raw(&self) -> Vec<RawMorphism> {
        let mut out = Vec::new();
        if self.mono
            && (self.dom.vertex_count() > self.cod.vertex_count() || self.dom.edge_count() > self.cod.edge_count())
        {
            return out;
        }
        let order = self.vertex_order();
        let mut vmap: Vec<Option<VertexId>> = vec![None; self.dom.vertex_count()];
        let mut used = vec![false; self.cod.vertex_count()];
        self.assign_vertex(&order, 0, &mut vmap, &mut used, &mut out);
        out
    }

    pub fn run(&self, dom: &GraphRef, cod: &GraphRef) -> Vec<GraphMorphism> {
        debug_assert!(std::ptr::eq(&**dom, self.dom) || **dom == *self.dom);
        self.run_raw()
            .into_iter()
            .map(|(v, e)| GraphMorphism::new(dom.clone(), cod.clone(), v, e).expect("search yields total maps"))
            .collect()
    }

    fn full(&self, out: &[RawMorphism]) -> bool {
        self.limit.is_some_and(|n| out.len() >= n)
    }

    fn assign_vertex(
        &self,
        order: &[VertexId],
        depth: usize,
        vmap: &mut Vec<Option<VertexId>>,
        used: &mut Vec<bool>,
        out: &mut Vec<RawMorphism>,
    ) {
        if self.full(out) {
            return;
        }
        if depth == order.len() {
            let vm: Vec<VertexId> = vmap.iter().map(|v| v.unwrap()).collect();
            let mut emap = vec![EdgeId(0); self.dom.edge_count()];
            let mut used_e = vec![false; self.cod.edge_count()];
            self.assign_edge(&vm, 0, &mut emap, &mut used_e, out);
            return;
        }
        let v = order[depth];
        let all: Vec<VertexId>;
        let candidates: &[VertexId] = match &self.vertex_candidates[v.0] {
            Some(c) => c,
            None => {
                all = self.cod.vertices().collect();
                &all
            }
        };
        for &w in candidates {
            if self.mono && used[w.0] {
                continue;
            }
            if !self.label_ok(self.dom.vlabel(v), self.cod.vlabel(w)) {
                continue;
            }
            vmap[v.0] = Some(w);
            if self.incident_edges_feasible(v, vmap) {
                used[w.0] = true;
                self.assign_vertex(order, depth + 1, vmap, used, out);
                used[w.0] = false;
            }
            vmap[v.0] = None;
            if self.full(out) {
                return;
            }
        }
    }

    fn incident_edges_feasible(&self, v: VertexId, vmap: &[Option<VertexId>]) -> bool {
        let check = |e: EdgeId| -> bool {
            let (s, t) = (self.dom.src(e), self.dom.tgt(e));
            match (vmap[s.0], vmap[t.0]) {
                (Some(ws), Some(wt)) => self.cod.edges_between(ws, wt).any(|f| self.edge_allowed(e, f)),
                _ => true,
            }
        };
        self.dom.out_edges(v).iter().all(|&e| check(e)) && self.dom.in_edges(v).iter().all(|&e| check(e))
    }

    fn assign_edge(
        &self,
        vmap: &[VertexId],
        idx: usize,
        emap: &mut Vec<EdgeId>,
        used: &mut Vec<bool>,
        out: &mut Vec<RawMorphism>,
    ) {
        if self.full(out) {
            return;
        }
        if idx == self.dom.edge_count() {
            out.push((vmap.to_vec(), emap.clone()));
            return;
        }
        let e = EdgeId(idx);
        let (ws, wt) = (vmap[self.dom.src(e).0], vmap[self.dom.tgt(e).0]);
        let candidates: Vec<EdgeId> = self.cod.edges_between(ws, wt).collect();
        for f in candidates {
            if (self.mono && used[f.0]) || !self.edge_allowed(e, f) {
                continue;
            }
            emap[idx] = f;
            used[f.0] = true;
            self.assign_edge(vmap, idx + 1, emap, used, out);
            used[f.0] = false;
            if self.full(out) {
                return;
            }
        }
    }
}

/// Every valid morphism `a → b` (only injective ones when `mono_only`).
pub fn enumerate_morphisms(a: &GraphRef, b: &GraphRef, mono_only: bool) -> Vec<GraphMorphism> {
    MorphismSearch::new(a, b).mono(mono_only).run(a, b)
}

/// A label-preserving bijection `a → b`, if one exists.
pub fn are_isomorphic(a: &GraphRef, b: &GraphRef) -> Option<GraphMorphism> {
    if a.label_profile() != b.label_profile() {
        return None;
    }
    MorphismSearch::new(a, b)
        .mono(true)
        .exact_labels(true)
        .limit(1)
        .run(a, b)
        .into_iter()
        .next()
}

/// Convenience wrapper for plain graph values.
pub fn isomorphic(a: &LabeledGraph, b: &LabeledGraph) -> bool {
    are_isomorphic(&Arc::new(a.clone()), &Arc::new(b.clone())).is_some()
}
