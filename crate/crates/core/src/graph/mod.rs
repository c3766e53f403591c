//! Finite lattice-labeled graphs and the morphisms between them.

mod dot;
pub(crate) mod format;
mod morphism;
mod search;

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::lattice::Label;

pub use dot::{to_dot, DotOptions};
pub use format::{parse_graph, parse_graphs, write_graph, FormatError};
pub use morphism::{compose, GraphMorphism, MorphismViolation};
pub use search::{are_isomorphic, enumerate_morphisms, isomorphic, MorphismSearch};

/// Dense vertex index into a [`LabeledGraph`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub usize);

/// Dense edge index into a [`LabeledGraph`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId(pub usize);

impl VertexId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl EdgeId {
    pub fn index(self) -> usize {
        self.0
    }
}

pub type GraphRef = Arc<LabeledGraph>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),
    #[error("duplicate edge `{0}`")]
    DuplicateEdge(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown edge `{0}`")]
    UnknownEdge(String),
    #[error("morphism {0}")]
    MalformedMorphism(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct VertexData {
    name: String,
    label: Label,
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct EdgeData {
    name: String,
    src: VertexId,
    tgt: VertexId,
    label: Label,
}

/// A finite graph with named vertices and edges, each carrying a [`Label`].
///
/// Identifiers are dense indices internally; the names survive
/// serialization. Equality compares vertices and edges (names, labels,
/// incidence, and insertion order) and ignores the graph's own name.
#[derive(Clone, Debug, Default)]
pub struct LabeledGraph {
    name: String,
    vertices: Vec<VertexData>,
    edges: Vec<EdgeData>,
    vertex_index: HashMap<String, VertexId>,
    edge_index: HashMap<String, EdgeId>,
    out_adj: Vec<Vec<EdgeId>>,
    in_adj: Vec<Vec<EdgeId>>,
}

impl PartialEq for LabeledGraph {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices && self.edges == other.edges
    }
}

impl Eq for LabeledGraph {}

impl LabeledGraph {
    pub fn new(name: impl Into<String>) -> Self {
        LabeledGraph {
            name: name.into(),
            ..Default::default()
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn renamed(&self, name: impl Into<String>) -> Self {
        let mut g = self.clone();
        g.name = name.into();
        g
    }

    pub fn add_vertex(&mut self, name: impl Into<String>, label: Label) -> Result<VertexId, GraphError> {
        let name = name.into();
        if self.vertex_index.contains_key(&name) {
            return Err(GraphError::DuplicateVertex(name));
        }
        let id = VertexId(self.vertices.len());
        self.vertex_index.insert(name.clone(), id);
        self.vertices.push(VertexData { name, label });
        self.out_adj.push(Vec::new());
        self.in_adj.push(Vec::new());
        Ok(id)
    }

    pub fn add_edge(
        &mut self,
        name: impl Into<String>,
        src: VertexId,
        tgt: VertexId,
        label: Label,
    ) -> Result<EdgeId, GraphError> {
        let name = name.into();
        if self.edge_index.contains_key(&name) {
            return Err(GraphError::DuplicateEdge(name));
        }
        for v in [src, tgt] {
            if v.0 >= self.vertices.len() {
                return Err(GraphError::UnknownVertex(format!("#{}", v.0)));
            }
        }
        let id = EdgeId(self.edges.len());
        self.edge_index.insert(name.clone(), id);
        self.edges.push(EdgeData { name, src, tgt, label });
        self.out_adj[src.0].push(id);
        self.in_adj[tgt.0].push(id);
        Ok(id)
    }

    /// Adds an edge between vertices given by name.
    pub fn add_edge_between(
        &mut self,
        name: impl Into<String>,
        src: &str,
        tgt: &str,
        label: Label,
    ) -> Result<EdgeId, GraphError> {
        let s = self.require_vertex(src)?;
        let t = self.require_vertex(tgt)?;
        self.add_edge(name, s, t, label)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Number of vertices plus edges.
    pub fn size(&self) -> usize {
        self.vertices.len() + self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.vertices.len()).map(VertexId)
    }

    pub fn edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        (0..self.edges.len()).map(EdgeId)
    }

    pub fn src(&self, e: EdgeId) -> VertexId {
        self.edges[e.0].src
    }

    pub fn tgt(&self, e: EdgeId) -> VertexId {
        self.edges[e.0].tgt
    }

    pub fn vlabel(&self, v: VertexId) -> &Label {
        &self.vertices[v.0].label
    }

    pub fn elabel(&self, e: EdgeId) -> &Label {
        &self.edges[e.0].label
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertices[v.0].name
    }

    pub fn edge_name(&self, e: EdgeId) -> &str {
        &self.edges[e.0].name
    }

    pub fn vertex_by_name(&self, name: &str) -> Option<VertexId> {
        self.vertex_index.get(name).copied()
    }

    pub fn edge_by_name(&self, name: &str) -> Option<EdgeId> {
        self.edge_index.get(name).copied()
    }

    pub fn require_vertex(&self, name: &str) -> Result<VertexId, GraphError> {
        self.vertex_by_name(name)
            .ok_or_else(|| GraphError::UnknownVertex(name.to_string()))
    }

    pub fn require_edge(&self, name: &str) -> Result<EdgeId, GraphError> {
        self.edge_by_name(name)
            .ok_or_else(|| GraphError::UnknownEdge(name.to_string()))
    }

    pub fn out_edges(&self, v: VertexId) -> &[EdgeId] {
        &self.out_adj[v.0]
    }

    pub fn in_edges(&self, v: VertexId) -> &[EdgeId] {
        &self.in_adj[v.0]
    }

    pub fn out_degree(&self, v: VertexId) -> usize {
        self.out_adj[v.0].len()
    }

    pub fn in_degree(&self, v: VertexId) -> usize {
        self.in_adj[v.0].len()
    }

    /// Edges from `s` to `t`, in insertion order.
    pub fn edges_between(&self, s: VertexId, t: VertexId) -> impl Iterator<Item = EdgeId> + '_ {
        self.out_adj[s.0]
            .iter()
            .copied()
            .filter(move |&e| self.edges[e.0].tgt == t)
    }

    /// A name derived from `base` that is not yet used by any vertex.
    pub fn fresh_vertex_name(&self, base: &str) -> String {
        fresh_name(base, |n| self.vertex_index.contains_key(n))
    }

    pub fn fresh_edge_name(&self, base: &str) -> String {
        fresh_name(base, |n| self.edge_index.contains_key(n))
    }

    /// Copy of the graph with one vertex relabeled.
    pub fn with_vertex_label(&self, v: VertexId, label: Label) -> LabeledGraph {
        let mut g = self.clone();
        g.vertices[v.0].label = label;
        g
    }

    pub fn with_edge_label(&self, e: EdgeId, label: Label) -> LabeledGraph {
        let mut g = self.clone();
        g.edges[e.0].label = label;
        g
    }

    /// Copy with every vertex and edge label replaced through `f`.
    pub fn map_labels(&self, mut f: impl FnMut(&Label) -> Label) -> LabeledGraph {
        let mut g = self.clone();
        for v in &mut g.vertices {
            v.label = f(&v.label);
        }
        for e in &mut g.edges {
            e.label = f(&e.label);
        }
        g
    }

    /// Subgraph on the given vertices and edges. Edges whose endpoints are
    /// not kept are dropped. Relative order of elements is preserved.
    pub fn subgraph(&self, keep_vertices: &BTreeSet<VertexId>, keep_edges: &BTreeSet<EdgeId>) -> LabeledGraph {
        let mut g = LabeledGraph::new(self.name.clone());
        let mut remap = HashMap::new();
        for v in self.vertices() {
            if keep_vertices.contains(&v) {
                let nv = g
                    .add_vertex(self.vertex_name(v), self.vlabel(v).clone())
                    .expect("names are unique");
                remap.insert(v, nv);
            }
        }
        for e in self.edges() {
            if !keep_edges.contains(&e) {
                continue;
            }
            if let (Some(&s), Some(&t)) = (remap.get(&self.src(e)), remap.get(&self.tgt(e))) {
                g.add_edge(self.edge_name(e), s, t, self.elabel(e).clone())
                    .expect("names are unique");
            }
        }
        g
    }

    /// Copy of the graph without the given edges.
    pub fn without_edges(&self, drop: &BTreeSet<EdgeId>) -> LabeledGraph {
        let vs: BTreeSet<VertexId> = self.vertices().collect();
        let es: BTreeSet<EdgeId> = self.edges().filter(|e| !drop.contains(e)).collect();
        self.subgraph(&vs, &es)
    }

    /// Disjoint union; names of `other` are freshened on collision.
    pub fn disjoint_union(&self, other: &LabeledGraph) -> LabeledGraph {
        let mut g = self.clone();
        let mut remap = Vec::with_capacity(other.vertex_count());
        for v in other.vertices() {
            let name = g.fresh_vertex_name(other.vertex_name(v));
            remap.push(g.add_vertex(name, other.vlabel(v).clone()).unwrap());
        }
        for e in other.edges() {
            let name = g.fresh_edge_name(other.edge_name(e));
            g.add_edge(
                name,
                remap[other.src(e).0],
                remap[other.tgt(e).0],
                other.elabel(e).clone(),
            )
            .unwrap();
        }
        g
    }

    /// Sorted multiset of all labels; a cheap isomorphism invariant.
    pub fn label_profile(&self) -> (usize, usize, Vec<Label>, Vec<Label>) {
        let mut vl: Vec<Label> = self.vertices.iter().map(|v| v.label.clone()).collect();
        let mut el: Vec<Label> = self.edges.iter().map(|e| e.label.clone()).collect();
        vl.sort();
        el.sort();
        (self.vertices.len(), self.edges.len(), vl, el)
    }

    /// Whether the graph has a directed cycle (loops included).
    pub fn has_directed_cycle(&self) -> bool {
        // Kahn's algorithm.
        let mut indeg: Vec<usize> = self.vertices().map(|v| self.in_degree(v)).collect();
        let mut stack: Vec<VertexId> = self.vertices().filter(|v| indeg[v.0] == 0).collect();
        let mut seen = 0;
        while let Some(v) = stack.pop() {
            seen += 1;
            for &e in self.out_edges(v) {
                let t = self.tgt(e);
                indeg[t.0] -= 1;
                if indeg[t.0] == 0 {
                    stack.push(t);
                }
            }
        }
        seen != self.vertex_count()
    }
}

pub(crate) fn fresh_name(base: &str, taken: impl Fn(&str) -> bool) -> String {
    if !taken(base) {
        return base.to_string();
    }
    (1..)
        .map(|k| format!("{base}#{k}"))
        .find(|n| !taken(n))
        .expect("unbounded supply")
}

impl fmt::Display for LabeledGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&write_graph(self, None))
    }
}

/// A graph with a distinguished root vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootedGraph {
    pub graph: LabeledGraph,
    pub root: VertexId,
}

impl RootedGraph {
    pub fn new(graph: LabeledGraph, root: VertexId) -> Result<Self, GraphError> {
        if root.0 >= graph.vertex_count() {
            return Err(GraphError::UnknownVertex(format!("#{}", root.0)));
        }
        Ok(RootedGraph { graph, root })
    }

    pub fn root_name(&self) -> &str {
        self.graph.vertex_name(self.root)
    }
}
