//! PBPO⁺ rules and rewrite steps.
//!
//! A rule is the diagram
//!
//! ```text
//!   L <--l-- K --r--> R
//!   |tL      |tK
//!   v        v
//!   L' <-l'- K'
//! ```
//!
//! A step on a host `G_L` picks a monic match `m: L ↣ G_L` and an
//! adherence `α: G_L → L'` whose square with `tL` is a pullback, pulls
//! `α` back along `l'` to get `G_K`, and glues `R` in by a pushout along
//! the unique `u: K ↣ G_K` over `tK`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use thiserror::Error;

use crate::cat_ops::{
    is_pullback_square, pullback, pushout, square_commutes, verify_pullback_universal, verify_pushout_universal,
    CatError, CospanResult, SpanResult,
};
use crate::graph::{are_isomorphic, EdgeId, GraphMorphism, GraphRef, LabeledGraph, MorphismSearch, VertexId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("rule morphisms do not fit together: {0}")]
    Shape(String),
    #[error("not a valid match: {0}")]
    InvalidMatch(String),
    #[error("construction failed: {0}")]
    Construction(#[from] CatError),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

/// A way in which a rule fails to be well-formed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RuleDefect {
    InvalidMorphism { name: &'static str, reason: String },
    NotMono(&'static str),
    NotCommuting,
    NotPullback,
}

impl fmt::Display for RuleDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RuleDefect::InvalidMorphism { name, reason } => write!(f, "morphism {name} is invalid: {reason}"),
            RuleDefect::NotMono(name) => write!(f, "morphism {name} is not monic"),
            RuleDefect::NotCommuting => f.write_str("square tL . l = l' . tK does not commute"),
            RuleDefect::NotPullback => f.write_str("square (l, tK, l', tL) is not a pullback"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct PbpoRule {
    pub name: String,
    /// `K → L`
    pub l: GraphMorphism,
    /// `K → R`
    pub r: GraphMorphism,
    /// `K' → L'`
    pub l_prime: GraphMorphism,
    /// `L ↣ L'`
    pub t_l: GraphMorphism,
    /// `K ↣ K'`
    pub t_k: GraphMorphism,
}

fn same(a: &GraphRef, b: &GraphRef) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl PbpoRule {
    /// Assembles a rule, checking only that domains and codomains line up.
    /// Use [`PbpoRule::defects`] for the remaining conditions.
    pub fn new(
        name: impl Into<String>,
        l: GraphMorphism,
        r: GraphMorphism,
        l_prime: GraphMorphism,
        t_l: GraphMorphism,
        t_k: GraphMorphism,
    ) -> Result<PbpoRule, EngineError> {
        let checks = [
            (same(l.dom(), r.dom()), "dom l = dom r"),
            (same(l.dom(), t_k.dom()), "dom l = dom tK"),
            (same(l.cod(), t_l.dom()), "cod l = dom tL"),
            (same(t_k.cod(), l_prime.dom()), "cod tK = dom l'"),
            (same(l_prime.cod(), t_l.cod()), "cod l' = cod tL"),
        ];
        if let Some((_, what)) = checks.iter().find(|(ok, _)| !ok) {
            return Err(EngineError::Shape(what.to_string()));
        }
        Ok(PbpoRule { name: name.into(), l, r, l_prime, t_l, t_k })
    }

    pub fn lhs(&self) -> &GraphRef {
        self.l.cod()
    }

    pub fn interface(&self) -> &GraphRef {
        self.l.dom()
    }

    pub fn rhs(&self) -> &GraphRef {
        self.r.cod()
    }

    pub fn lhs_type(&self) -> &GraphRef {
        self.t_l.cod()
    }

    pub fn interface_type(&self) -> &GraphRef {
        self.t_k.cod()
    }

    /// Linear rules have a monic `l'`.
    pub fn is_linear(&self) -> bool {
        self.l_prime.is_mono()
    }

    pub fn morphisms(&self) -> [(&'static str, &GraphMorphism); 5] {
        [("l", &self.l), ("r", &self.r), ("lp", &self.l_prime), ("tL", &self.t_l), ("tK", &self.t_k)]
    }

    /// Everything that keeps this from being a PBPO⁺ rule.
    pub fn defects(&self) -> Vec<RuleDefect> {
        let mut out = Vec::new();
        for (name, f) in self.morphisms() {
            if let Some(v) = f.violations().first() {
                out.push(RuleDefect::InvalidMorphism { name, reason: v.to_string() });
            }
        }
        if !out.is_empty() {
            return out;
        }
        for (name, f) in [("tL", &self.t_l), ("tK", &self.t_k)] {
            if !f.is_mono() {
                out.push(RuleDefect::NotMono(name));
            }
        }
        if !square_commutes(&self.l, &self.t_k, &self.t_l, &self.l_prime) {
            out.push(RuleDefect::NotCommuting);
        } else if !is_pullback_square(&self.l, &self.t_k, &self.t_l, &self.l_prime) {
            out.push(RuleDefect::NotPullback);
        }
        out
    }
}

/// A monic match together with an adherence morphism.
#[derive(Clone, Debug)]
pub struct Match {
    pub m: GraphMorphism,
    pub alpha: GraphMorphism,
}

/// Whether `(m, α)` is a strong match: `m` monic, `α ∘ m = tL`, and the
/// square `(1_L, m, tL, α)` a pullback.
pub fn check_match(rule: &PbpoRule, mt: &Match) -> Result<(), EngineError> {
    let bad = |s: &str| Err(EngineError::InvalidMatch(s.to_string()));
    if !same(mt.m.dom(), rule.lhs()) || !same(mt.alpha.cod(), rule.lhs_type()) || !same(mt.m.cod(), mt.alpha.dom()) {
        return bad("morphisms do not fit the rule");
    }
    if !mt.m.is_valid() || !mt.alpha.is_valid() {
        return bad("match or adherence violates the morphism laws");
    }
    if !mt.m.is_mono() {
        return bad("match is not monic");
    }
    let id = GraphMorphism::identity(rule.lhs().clone());
    if !square_commutes(&id, &mt.m, &rule.t_l, &mt.alpha) {
        return bad("adherence does not extend tL");
    }
    if !is_pullback_square(&id, &mt.m, &rule.t_l, &mt.alpha) {
        return bad("match square is not a pullback");
    }
    Ok(())
}

/// All adherences for a fixed monic match, in search order.
pub fn adherences(rule: &PbpoRule, g: &GraphRef, m: &GraphMorphism) -> Vec<GraphMorphism> {
    let (lhs, lp) = (&**rule.lhs(), &**rule.lhs_type());
    // Outside im(m), α must avoid im(tL): otherwise the pullback of tL
    // and α would contain more than L.
    let mut hit_v = vec![None; g.vertex_count()];
    for x in lhs.vertices() {
        hit_v[m.vertex(x).0] = Some(rule.t_l.vertex(x));
    }
    let mut hit_e = vec![None; g.edge_count()];
    for x in lhs.edges() {
        hit_e[m.edge(x).0] = Some(rule.t_l.edge(x));
    }
    let mut in_image_v = vec![false; lp.vertex_count()];
    lhs.vertices().for_each(|x| in_image_v[rule.t_l.vertex(x).0] = true);
    let mut in_image_e = vec![false; lp.edge_count()];
    lhs.edges().for_each(|x| in_image_e[rule.t_l.edge(x).0] = true);
    let free_v: Vec<VertexId> = lp.vertices().filter(|v| !in_image_v[v.0]).collect();
    let free_e: Vec<EdgeId> = lp.edges().filter(|e| !in_image_e[e.0]).collect();

    let mut search = MorphismSearch::new(g, lp);
    for v in g.vertices() {
        search = match hit_v[v.0] {
            Some(w) => search.fix_vertex(v, w),
            None => search.restrict_vertex(v, free_v.clone()),
        };
    }
    for e in g.edges() {
        search = match hit_e[e.0] {
            Some(f) => search.fix_edge(e, f),
            None => search.restrict_edge(e, free_e.clone()),
        };
    }
    let id = GraphMorphism::identity(rule.lhs().clone());
    search
        .run(g, rule.lhs_type())
        .into_iter()
        .filter(|alpha| is_pullback_square(&id, m, &rule.t_l, alpha))
        .collect()
}

fn matches_with(rule: &PbpoRule, g: &GraphRef, fixed: Option<(VertexId, VertexId)>) -> Vec<Match> {
    let mut search = MorphismSearch::new(rule.lhs(), g).mono(true);
    if let Some((x, v)) = fixed {
        search = search.fix_vertex(x, v);
    }
    let mut out = Vec::new();
    for m in search.run(rule.lhs(), g) {
        for alpha in adherences(rule, g, &m) {
            out.push(Match { m: m.clone(), alpha });
        }
    }
    out
}

/// Every strong match of `rule` in `g`.
pub fn find_matches(rule: &PbpoRule, g: &GraphRef) -> Vec<Match> {
    matches_with(rule, g, None)
}

/// Strong matches sending the `L` vertex `x` to `v`.
pub fn find_matches_at(rule: &PbpoRule, g: &GraphRef, x: VertexId, v: VertexId) -> Vec<Match> {
    matches_with(rule, g, Some((x, v)))
}

/// The full step diagram.
#[derive(Clone, Debug)]
pub struct RewriteStep {
    pub rule: PbpoRule,
    pub g_l: GraphRef,
    pub g_k: GraphRef,
    pub g_r: GraphRef,
    /// `L ↣ G_L`
    pub m: GraphMorphism,
    /// `G_L → L'`
    pub alpha: GraphMorphism,
    /// `G_K → G_L`
    pub g_l_leg: GraphMorphism,
    /// `G_K → K'`
    pub u_prime: GraphMorphism,
    /// `K ↣ G_K`
    pub u: GraphMorphism,
    /// `G_K → G_R`
    pub g_r_leg: GraphMorphism,
    /// `R → G_R`
    pub w: GraphMorphism,
}

/// Performs the step for a strong match.
pub fn apply_step(rule: &PbpoRule, mt: &Match) -> Result<RewriteStep, EngineError> {
    check_match(rule, mt)?;
    let SpanResult { apex: g_k, left: g_l_leg, right: u_prime } = pullback(&mt.alpha, &rule.l_prime)?;
    let u = recover_u(rule, &g_k, &u_prime)?;
    let CospanResult { apex: g_r, left: w, right: g_r_leg } = pushout(&rule.r, &u)?;
    Ok(RewriteStep {
        rule: rule.clone(),
        g_l: mt.m.cod().clone(),
        g_k,
        g_r,
        m: mt.m.clone(),
        alpha: mt.alpha.clone(),
        g_l_leg,
        u_prime,
        u,
        g_r_leg,
        w,
    })
}

/// The unique mono `u: K ↣ G_K` with `u' ∘ u = tK`.
fn recover_u(rule: &PbpoRule, g_k: &GraphRef, u_prime: &GraphMorphism) -> Result<GraphMorphism, EngineError> {
    let k = &**rule.interface();
    let mut fibre_v: HashMap<VertexId, Vec<VertexId>> = HashMap::new();
    for p in g_k.vertices() {
        fibre_v.entry(u_prime.vertex(p)).or_default().push(p);
    }
    let mut fibre_e: HashMap<EdgeId, Vec<EdgeId>> = HashMap::new();
    for p in g_k.edges() {
        fibre_e.entry(u_prime.edge(p)).or_default().push(p);
    }
    let mut search = MorphismSearch::new(k, g_k).mono(true).limit(2);
    for x in k.vertices() {
        search = search.restrict_vertex(x, fibre_v.get(&rule.t_k.vertex(x)).cloned().unwrap_or_default());
    }
    for x in k.edges() {
        search = search.restrict_edge(x, fibre_e.get(&rule.t_k.edge(x)).cloned().unwrap_or_default());
    }
    let mut found = search.run(rule.interface(), g_k);
    match found.len() {
        1 => Ok(found.pop().unwrap()),
        n => Err(EngineError::Internal(format!("expected exactly one mono u with u' . u = tK, found {n}"))),
    }
}

impl RewriteStep {
    /// Checks the commuting squares and the universal properties of all
    /// three squares by brute force. Exponential; meant for small graphs.
    pub fn check_diagrams(&self) -> Result<(), String> {
        let id = GraphMorphism::identity(self.rule.lhs().clone());
        if !square_commutes(&id, &self.m, &self.rule.t_l, &self.alpha) {
            return Err("match square does not commute".into());
        }
        let match_square =
            SpanResult { apex: self.rule.lhs().clone(), left: id.clone(), right: self.m.clone() };
        if !verify_pullback_universal(&self.rule.t_l, &self.alpha, &match_square) {
            return Err("match square is not a pullback".into());
        }
        let extraction =
            SpanResult { apex: self.g_k.clone(), left: self.g_l_leg.clone(), right: self.u_prime.clone() };
        if !verify_pullback_universal(&self.alpha, &self.rule.l_prime, &extraction) {
            return Err("extraction square is not a pullback".into());
        }
        match self.u.then(&self.u_prime) {
            Ok(c) if c.same_maps(&self.rule.t_k) => {}
            _ => return Err("u' . u differs from tK".into()),
        }
        if !self.u.is_mono() {
            return Err("u is not monic".into());
        }
        let gluing = CospanResult { apex: self.g_r.clone(), left: self.w.clone(), right: self.g_r_leg.clone() };
        if !verify_pushout_universal(&self.rule.r, &self.u, &gluing) {
            return Err("gluing square is not a pushout".into());
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Strategy {
    /// Follow the first match of the first applicable rule.
    #[default]
    FirstMatch,
    /// Explore every step, identifying isomorphic graphs.
    AllBranchesBfs,
}

impl FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "first" => Ok(Strategy::FirstMatch),
            "bfs" => Ok(Strategy::AllBranchesBfs),
            _ => Err(format!("unknown strategy `{s}` (expected `first` or `bfs`)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transition {
    pub from: usize,
    pub to: usize,
    pub rule: usize,
}

/// States are indices into `states`; state 0 is the start graph.
#[derive(Clone, Debug)]
pub struct Trace {
    pub states: Vec<GraphRef>,
    pub transitions: Vec<Transition>,
    /// States without any applicable step.
    pub normal_forms: Vec<usize>,
    /// Some state at the depth bound still had a step.
    pub bound_hit: bool,
    /// Longest step sequence explored.
    pub depth: usize,
}

impl Trace {
    pub fn steps(&self) -> usize {
        self.transitions.len()
    }
}

/// First applicable step, trying rules in order.
pub fn first_step(rules: &[PbpoRule], g: &GraphRef) -> Result<Option<(usize, RewriteStep)>, EngineError> {
    for (i, rule) in rules.iter().enumerate() {
        if let Some(mt) = find_matches(rule, g).into_iter().next() {
            return apply_step(rule, &mt).map(|s| Some((i, s)));
        }
    }
    Ok(None)
}

/// Every step from `g` as `(rule index, result)`.
pub fn successors(rules: &[PbpoRule], g: &GraphRef) -> Result<Vec<(usize, GraphRef)>, EngineError> {
    let mut out = Vec::new();
    for (i, rule) in rules.iter().enumerate() {
        for mt in find_matches(rule, g) {
            out.push((i, apply_step(rule, &mt)?.g_r));
        }
    }
    Ok(out)
}

/// Bounded rewriting. `max_steps` bounds the sequence length for
/// [`Strategy::FirstMatch`] and the exploration depth for
/// [`Strategy::AllBranchesBfs`].
pub fn rewrite_bounded(
    rules: &[PbpoRule],
    g: GraphRef,
    max_steps: usize,
    strategy: Strategy,
) -> Result<Trace, EngineError> {
    let mut trace = Trace { states: vec![g], transitions: Vec::new(), normal_forms: Vec::new(), bound_hit: false, depth: 0 };
    match strategy {
        Strategy::FirstMatch => {
            loop {
                let cur = trace.states.len() - 1;
                let Some((rule, step)) = first_step(rules, &trace.states[cur])? else {
                    trace.normal_forms.push(cur);
                    break;
                };
                if trace.depth == max_steps {
                    trace.bound_hit = true;
                    break;
                }
                trace.states.push(step.g_r);
                trace.transitions.push(Transition { from: cur, to: cur + 1, rule });
                trace.depth += 1;
            }
        }
        Strategy::AllBranchesBfs => {
            let mut buckets: HashMap<_, Vec<usize>> = HashMap::new();
            buckets.entry(trace.states[0].label_profile()).or_default().push(0);
            let mut frontier = vec![0];
            let mut depth = 0;
            while !frontier.is_empty() {
                let mut next = Vec::new();
                for &s in &frontier {
                    let succ = successors(rules, &trace.states[s].clone())?;
                    if succ.is_empty() {
                        trace.normal_forms.push(s);
                        continue;
                    }
                    if depth == max_steps {
                        trace.bound_hit = true;
                        continue;
                    }
                    for (rule, h) in succ {
                        let bucket = buckets.entry(h.label_profile()).or_default();
                        let to = match bucket.iter().find(|&&i| are_isomorphic(&trace.states[i], &h).is_some()) {
                            Some(&i) => i,
                            None => {
                                let i = trace.states.len();
                                trace.states.push(h);
                                bucket.push(i);
                                next.push(i);
                                i
                            }
                        };
                        let t = Transition { from: s, to, rule };
                        if !trace.transitions.contains(&t) {
                            trace.transitions.push(t);
                        }
                    }
                }
                if !next.is_empty() {
                    depth += 1;
                }
                frontier = next;
            }
            trace.depth = depth;
            trace.normal_forms.sort_unstable();
        }
    }
    Ok(trace)
}

/// The graph obtained by a step, if `rule` applies via some match with
/// `m(x) = v`; all such steps give isomorphic results for encoded rules.
pub fn apply_at_vertex(rule: &PbpoRule, g: &GraphRef, x: VertexId, v: VertexId) -> Result<Option<GraphRef>, EngineError> {
    match find_matches_at(rule, g, x, v).into_iter().next() {
        None => Ok(None),
        Some(mt) => apply_step(rule, &mt).map(|s| Some(s.g_r)),
    }
}

/// Convenience for building graphs by hand.
pub fn graph_from(name: &str, vertices: &[(&str, crate::lattice::Label)], edges: &[(&str, &str, &str, crate::lattice::Label)]) -> LabeledGraph {
    let mut g = LabeledGraph::new(name);
    for (v, l) in vertices {
        g.add_vertex(*v, l.clone()).expect("distinct vertex names");
    }
    for (e, s, t, l) in edges {
        g.add_edge_between(*e, s, t, l.clone()).expect("valid edge");
    }
    g
}
