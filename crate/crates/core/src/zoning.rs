//! Undirected cycles, node well-formedness and the zoning of a graph.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use thiserror::Error;

use crate::encoding::decode_term;
use crate::graph::{EdgeId, GraphMorphism, LabeledGraph, VertexId};
use crate::lattice::{Label, Signature};
use crate::term::Term;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ZoningError {
    #[error("zone `{0}` does not exist")]
    UnknownZone(String),
    #[error("zone `{0}` contains a directed cycle")]
    CyclicZone(String),
}

/// Whether `t` is reachable from `s` ignoring edge directions and `skip`.
fn undirected_reachable(g: &LabeledGraph, s: VertexId, t: VertexId, skip: EdgeId) -> bool {
    let mut seen = vec![false; g.vertex_count()];
    let mut queue = VecDeque::from([s]);
    seen[s.0] = true;
    while let Some(v) = queue.pop_front() {
        if v == t {
            return true;
        }
        let around = g.out_edges(v).iter().map(|&e| (e, g.tgt(e)));
        let back = g.in_edges(v).iter().map(|&e| (e, g.src(e)));
        for (e, w) in around.chain(back) {
            if e != skip && !seen[w.0] {
                seen[w.0] = true;
                queue.push_back(w);
            }
        }
    }
    false
}

/// Edges on some undirected cycle: loops, and edges whose endpoints stay
/// connected once the edge is removed.
pub fn undirected_cycle_edges(g: &LabeledGraph) -> BTreeSet<EdgeId> {
    g.edges()
        .filter(|&e| g.src(e) == g.tgt(e) || undirected_reachable(g, g.src(e), g.tgt(e), e))
        .collect()
}

/// `g` without its cycle edges.
pub fn drop_cycles(g: &LabeledGraph) -> LabeledGraph {
    g.without_edges(&undirected_cycle_edges(g))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NodeClass {
    /// At most one incoming edge.
    pub in_wf: bool,
    /// Labeled by a symbol `f` with out-edges labeled exactly `1..=#f`.
    pub out_wf: bool,
    /// Out-well-formed with in-well-formed children.
    pub good: bool,
}

fn out_well_formed(sig: &Signature, g: &LabeledGraph, v: VertexId) -> bool {
    let Some(arity) = g.vlabel(v).as_symbol().and_then(|f| sig.arity(f)) else {
        return false;
    };
    if g.out_degree(v) != arity {
        return false;
    }
    let mut seen = vec![false; arity];
    for &e in g.out_edges(v) {
        match g.elabel(e).as_index() {
            Some(i) if (i as usize) <= arity && !seen[i as usize - 1] => seen[i as usize - 1] = true,
            _ => return false,
        }
    }
    true
}

/// Classification of every vertex, indexed by vertex id.
pub fn classify_nodes(sig: &Signature, g: &LabeledGraph) -> Vec<NodeClass> {
    let in_wf: Vec<bool> = g.vertices().map(|v| g.in_degree(v) <= 1).collect();
    g.vertices()
        .map(|v| {
            let out_wf = out_well_formed(sig, g, v);
            let good = out_wf && g.out_edges(v).iter().all(|&e| in_wf[g.tgt(e).0]);
            NodeClass { in_wf: in_wf[v.0], out_wf, good }
        })
        .collect()
}

/// Zones are named after their least vertex name.
pub type ZoneId = String;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Zoning {
    pub zone_of_vertex: BTreeMap<VertexId, ZoneId>,
    pub zone_vertices: BTreeMap<ZoneId, BTreeSet<VertexId>>,
    pub zone_edges: BTreeMap<ZoneId, BTreeSet<EdgeId>>,
    pub bridges: BTreeSet<EdgeId>,
    /// The unique vertex without an incoming zone edge, if there is one.
    pub roots: BTreeMap<ZoneId, Option<VertexId>>,
}

impl Zoning {
    pub fn zone_count(&self) -> usize {
        self.zone_vertices.len()
    }

    pub fn zone_ids(&self) -> impl Iterator<Item = &ZoneId> {
        self.zone_vertices.keys()
    }

    /// The zone as a subgraph of `g`.
    pub fn subgraph(&self, g: &LabeledGraph, z: &str) -> Result<LabeledGraph, ZoningError> {
        let vs = self.zone_vertices.get(z).ok_or_else(|| ZoningError::UnknownZone(z.to_string()))?;
        Ok(g.subgraph(vs, &self.zone_edges[z]).renamed(z))
    }

    /// Vertices of zone `z` without outgoing zone edges.
    pub fn leaves(&self, g: &LabeledGraph, z: &str) -> BTreeSet<VertexId> {
        let edges = &self.zone_edges[z];
        self.zone_vertices[z]
            .iter()
            .copied()
            .filter(|&v| !g.out_edges(v).iter().any(|e| edges.contains(e)))
            .collect()
    }

    /// Vertices of zone `z` without incoming zone edges.
    pub fn sources(&self, g: &LabeledGraph, z: &str) -> BTreeSet<VertexId> {
        let edges = &self.zone_edges[z];
        self.zone_vertices[z]
            .iter()
            .copied()
            .filter(|&v| !g.in_edges(v).iter().any(|e| edges.contains(e)))
            .collect()
    }
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

pub fn compute_zoning(sig: &Signature, g: &LabeledGraph) -> Zoning {
    let order: Vec<EdgeId> = g.edges().collect();
    compute_zoning_in_order(sig, g, &order)
}

/// Zoning with the join rule applied to edges in the given order until
/// nothing changes. `order` must list every edge.
pub fn compute_zoning_in_order(sig: &Signature, g: &LabeledGraph, order: &[EdgeId]) -> Zoning {
    let classes = classify_nodes(sig, g);
    let mut parent: Vec<usize> = (0..g.vertex_count()).collect();
    let mut joined = vec![false; g.edge_count()];
    let mut changed = true;
    while changed {
        changed = false;
        for &e in order {
            if !joined[e.0] && classes[g.src(e).0].good {
                joined[e.0] = true;
                let (a, b) = (find(&mut parent, g.src(e).0), find(&mut parent, g.tgt(e).0));
                parent[a.max(b)] = a.min(b);
                changed = true;
            }
        }
    }
    let mut members: BTreeMap<usize, BTreeSet<VertexId>> = BTreeMap::new();
    for v in g.vertices() {
        members.entry(find(&mut parent, v.0)).or_default().insert(v);
    }
    let mut zoning = Zoning {
        zone_of_vertex: BTreeMap::new(),
        zone_vertices: BTreeMap::new(),
        zone_edges: BTreeMap::new(),
        bridges: BTreeSet::new(),
        roots: BTreeMap::new(),
    };
    for vs in members.into_values() {
        let id: ZoneId = vs.iter().map(|&v| g.vertex_name(v)).min().expect("non-empty").to_string();
        for &v in &vs {
            zoning.zone_of_vertex.insert(v, id.clone());
        }
        zoning.zone_vertices.insert(id.clone(), vs);
        zoning.zone_edges.insert(id.clone(), BTreeSet::new());
    }
    for e in g.edges() {
        if joined[e.0] {
            let z = &zoning.zone_of_vertex[&g.src(e)];
            zoning.zone_edges.get_mut(z).unwrap().insert(e);
        } else {
            zoning.bridges.insert(e);
        }
    }
    let ids: Vec<ZoneId> = zoning.zone_ids().cloned().collect();
    for z in ids {
        let sources = zoning.sources(g, &z);
        let root = (sources.len() == 1).then(|| *sources.iter().next().unwrap());
        zoning.roots.insert(z, root);
    }
    zoning
}

/// Replaces the label of every bad node by `to`.
pub fn relabel_bad_nodes(sig: &Signature, g: &LabeledGraph, to: &Label) -> LabeledGraph {
    let classes = classify_nodes(sig, g);
    let mut h = g.clone();
    for v in g.vertices().filter(|v| !classes[v.0].good) {
        h = h.with_vertex_label(v, to.clone());
    }
    h
}

/// The term represented by an acyclic zone once its bad nodes (bad in
/// `g`) are relabeled `⊥`.
pub fn zone_to_term(sig: &Signature, g: &LabeledGraph, zoning: &Zoning, z: &str) -> Result<Option<Term>, ZoningError> {
    let sub = zoning.subgraph(g, z)?;
    if sub.has_directed_cycle() {
        return Err(ZoningError::CyclicZone(z.to_string()));
    }
    let classes = classify_nodes(sig, g);
    let mut relabeled = sub.clone();
    for (i, &v) in zoning.zone_vertices[z].iter().enumerate() {
        if !classes[v.0].good {
            relabeled = relabeled.with_vertex_label(VertexId(i), Label::Bottom);
        }
    }
    Ok(decode_term(sig, &relabeled, None))
}

/// Whether the image of `m` lies inside a single zone of its codomain.
pub fn check_match_in_one_zone(sig: &Signature, m: &GraphMorphism) -> bool {
    let g = &**m.cod();
    let zoning = compute_zoning(sig, g);
    let dom = &**m.dom();
    let mut zones = dom.vertices().map(|v| &zoning.zone_of_vertex[&m.vertex(v)]);
    let Some(z) = zones.next() else {
        return true;
    };
    zones.all(|w| w == z) && dom.edges().all(|e| zoning.zone_edges[z].contains(&m.edge(e)))
}
