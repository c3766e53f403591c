use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use super::{EdgeId, GraphError, GraphRef, LabeledGraph, VertexId};
use crate::lattice::CompleteLattice;

/// A premorphism between labeled graphs that may only raise labels.
///
/// Construction checks totality only; [`GraphMorphism::violations`] reports
/// the structural and label laws.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphMorphism {
    dom: GraphRef,
    cod: GraphRef,
    vmap: Vec<VertexId>,
    emap: Vec<EdgeId>,
}

/// A broken clause of the morphism laws.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MorphismViolation {
    Source { edge: String },
    Target { edge: String },
    VertexLabel { vertex: String },
    EdgeLabel { edge: String },
}

impl fmt::Display for MorphismViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MorphismViolation::Source { edge } => write!(f, "source of edge `{edge}` does not commute"),
            MorphismViolation::Target { edge } => write!(f, "target of edge `{edge}` does not commute"),
            MorphismViolation::VertexLabel { vertex } => write!(f, "label of vertex `{vertex}` decreases"),
            MorphismViolation::EdgeLabel { edge } => write!(f, "label of edge `{edge}` decreases"),
        }
    }
}

impl GraphMorphism {
    pub fn new(
        dom: GraphRef,
        cod: GraphRef,
        vmap: Vec<VertexId>,
        emap: Vec<EdgeId>,
    ) -> Result<Self, GraphError> {
        if vmap.len() != dom.vertex_count() || emap.len() != dom.edge_count() {
            return Err(GraphError::MalformedMorphism(format!(
                "{} -> {}: maps are not total",
                dom.name(),
                cod.name()
            )));
        }
        if vmap.iter().any(|v| v.0 >= cod.vertex_count()) || emap.iter().any(|e| e.0 >= cod.edge_count()) {
            return Err(GraphError::MalformedMorphism(format!(
                "{} -> {}: image outside codomain",
                dom.name(),
                cod.name()
            )));
        }
        Ok(GraphMorphism { dom, cod, vmap, emap })
    }

    /// Builds a morphism from `(dom name, cod name)` pairs.
    pub fn from_names(
        dom: GraphRef,
        cod: GraphRef,
        vpairs: &[(&str, &str)],
        epairs: &[(&str, &str)],
    ) -> Result<Self, GraphError> {
        let mut vmap = vec![None; dom.vertex_count()];
        for (a, b) in vpairs {
            let v = dom.require_vertex(a)?;
            vmap[v.0] = Some(cod.require_vertex(b)?);
        }
        let mut emap = vec![None; dom.edge_count()];
        for (a, b) in epairs {
            let e = dom.require_edge(a)?;
            emap[e.0] = Some(cod.require_edge(b)?);
        }
        let missing = |what: &str, name: &str| {
            GraphError::MalformedMorphism(format!("{} -> {}: {what} `{name}` unmapped", dom.name(), cod.name()))
        };
        let vmap = vmap
            .iter()
            .enumerate()
            .map(|(i, v)| v.ok_or_else(|| missing("vertex", dom.vertex_name(VertexId(i)))))
            .collect::<Result<Vec<_>, _>>()?;
        let emap = emap
            .iter()
            .enumerate()
            .map(|(i, e)| e.ok_or_else(|| missing("edge", dom.edge_name(EdgeId(i)))))
            .collect::<Result<Vec<_>, _>>()?;
        GraphMorphism::new(dom, cod, vmap, emap)
    }

    /// Maps every element to the element of the same name in `cod`.
    pub fn inclusion(dom: GraphRef, cod: GraphRef) -> Result<Self, GraphError> {
        let vmap = dom
            .vertices()
            .map(|v| cod.require_vertex(dom.vertex_name(v)))
            .collect::<Result<Vec<_>, _>>()?;
        let emap = dom
            .edges()
            .map(|e| cod.require_edge(dom.edge_name(e)))
            .collect::<Result<Vec<_>, _>>()?;
        GraphMorphism::new(dom, cod, vmap, emap)
    }

    pub fn identity(g: GraphRef) -> Self {
        let vmap = g.vertices().collect();
        let emap = g.edges().collect();
        GraphMorphism {
            dom: g.clone(),
            cod: g,
            vmap,
            emap,
        }
    }

    pub fn dom(&self) -> &GraphRef {
        &self.dom
    }

    pub fn cod(&self) -> &GraphRef {
        &self.cod
    }

    pub fn vertex(&self, v: VertexId) -> VertexId {
        self.vmap[v.0]
    }

    pub fn edge(&self, e: EdgeId) -> EdgeId {
        self.emap[e.0]
    }

    pub fn vertex_map(&self) -> &[VertexId] {
        &self.vmap
    }

    pub fn edge_map(&self) -> &[EdgeId] {
        &self.emap
    }

    /// Image of a vertex given by name, as a name.
    pub fn vertex_image_name(&self, name: &str) -> Option<&str> {
        let v = self.dom.vertex_by_name(name)?;
        Some(self.cod.vertex_name(self.vertex(v)))
    }

    pub fn violations(&self) -> Vec<MorphismViolation> {
        let (d, c) = (&*self.dom, &*self.cod);
        let mut out = Vec::new();
        for v in d.vertices() {
            if !d.vlabel(v).leq(c.vlabel(self.vertex(v))) {
                out.push(MorphismViolation::VertexLabel {
                    vertex: d.vertex_name(v).to_string(),
                });
            }
        }
        for e in d.edges() {
            let f = self.edge(e);
            let name = || d.edge_name(e).to_string();
            if c.src(f) != self.vertex(d.src(e)) {
                out.push(MorphismViolation::Source { edge: name() });
            }
            if c.tgt(f) != self.vertex(d.tgt(e)) {
                out.push(MorphismViolation::Target { edge: name() });
            }
            if !d.elabel(e).leq(c.elabel(f)) {
                out.push(MorphismViolation::EdgeLabel { edge: name() });
            }
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.violations().is_empty()
    }

    /// Injective on vertices and edges; these are exactly the monos of
    /// finite lattice-labeled graphs.
    pub fn is_mono(&self) -> bool {
        let vs: HashSet<_> = self.vmap.iter().collect();
        let es: HashSet<_> = self.emap.iter().collect();
        vs.len() == self.vmap.len() && es.len() == self.emap.len()
    }

    pub fn is_bijective(&self) -> bool {
        self.is_mono()
            && self.vmap.len() == self.cod.vertex_count()
            && self.emap.len() == self.cod.edge_count()
    }

    /// Bijective and label-preserving, so the inverse is a morphism too.
    pub fn is_iso(&self) -> bool {
        self.is_valid()
            && self.is_bijective()
            && self.dom.vertices().all(|v| self.dom.vlabel(v) == self.cod.vlabel(self.vertex(v)))
            && self.dom.edges().all(|e| self.dom.elabel(e) == self.cod.elabel(self.edge(e)))
    }

    /// Inverse of an isomorphism.
    pub fn inverse(&self) -> Option<GraphMorphism> {
        if !self.is_bijective() {
            return None;
        }
        let mut vmap = vec![VertexId(0); self.vmap.len()];
        for (i, v) in self.vmap.iter().enumerate() {
            vmap[v.0] = VertexId(i);
        }
        let mut emap = vec![EdgeId(0); self.emap.len()];
        for (i, e) in self.emap.iter().enumerate() {
            emap[e.0] = EdgeId(i);
        }
        Some(GraphMorphism {
            dom: self.cod.clone(),
            cod: self.dom.clone(),
            vmap,
            emap,
        })
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &GraphMorphism) -> Result<GraphMorphism, GraphError> {
        if !Arc::ptr_eq(&self.cod, &next.dom) && *self.cod != *next.dom {
            return Err(GraphError::MalformedMorphism(format!(
                "cannot compose: codomain `{}` differs from domain `{}`",
                self.cod.name(),
                next.dom.name()
            )));
        }
        Ok(GraphMorphism {
            dom: self.dom.clone(),
            cod: next.cod.clone(),
            vmap: self.vmap.iter().map(|&v| next.vertex(v)).collect(),
            emap: self.emap.iter().map(|&e| next.edge(e)).collect(),
        })
    }

    /// Same maps, with the codomain swapped for a graph of identical shape
    /// (used when a codomain has been relabeled or renamed).
    pub fn with_cod(&self, cod: GraphRef) -> Result<GraphMorphism, GraphError> {
        GraphMorphism::new(self.dom.clone(), cod, self.vmap.clone(), self.emap.clone())
    }

    pub fn with_dom(&self, dom: GraphRef) -> Result<GraphMorphism, GraphError> {
        GraphMorphism::new(dom, self.cod.clone(), self.vmap.clone(), self.emap.clone())
    }

    /// Same maps, compared irrespective of which `Arc` holds the graphs.
    pub fn same_maps(&self, other: &GraphMorphism) -> bool {
        self.vmap == other.vmap && self.emap == other.emap
    }
}

/// `g ∘ f`, defined when `cod(f) = dom(g)`.
pub fn compose(f: &GraphMorphism, g: &GraphMorphism) -> Result<GraphMorphism, GraphError> {
    f.then(g)
}

impl fmt::Display for GraphMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (d, c): (&LabeledGraph, &LabeledGraph) = (&self.dom, &self.cod);
        for v in d.vertices() {
            writeln!(f, "v {} {}", d.vertex_name(v), c.vertex_name(self.vertex(v)))?;
        }
        for e in d.edges() {
            writeln!(f, "e {} {}", d.edge_name(e), c.edge_name(self.edge(e)))?;
        }
        Ok(())
    }
}
