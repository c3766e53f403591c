//! Randomized property suites over the encoding and the engine. Each suite
//! returns a [`SuiteReport`]; failing cases carry a reproduction as a set
//! of named text files.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::cat_ops::{pullback, pushout, square_commutes, verify_pullback_universal, verify_pushout_universal};
use crate::encoding::{decode_term, encode_rule, encode_term, tree_positions, EncodedRule};
use crate::engine::{apply_step, check_match, find_matches, find_matches_at, rewrite_bounded, Match, PbpoRule, Strategy};
use crate::gen::{
    mutate_graph, random_graph, random_host_graph, random_host_term, random_linear_rule, random_morphism_from,
    random_morphism_into, random_redex_instance, Rng8,
};
use crate::graph::{isomorphic, write_graph, GraphMorphism, GraphRef, LabeledGraph, VertexId};
use crate::lattice::{Label, Signature};
use crate::rule_file::write_rule;
use crate::term::{rewrite_at, Term, Trs, TrsRule};
use crate::zoning::{
    classify_nodes, compute_zoning, compute_zoning_in_order, drop_cycles, undirected_cycle_edges, zone_to_term,
};

/// A failing case: a one-line summary plus files that reproduce it.
#[derive(Clone, Debug)]
pub struct Counterexample {
    pub summary: String,
    pub files: Vec<(String, String)>,
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub name: String,
    pub cases: usize,
    pub skipped: usize,
    pub failures: Vec<Counterexample>,
    pub notes: Vec<String>,
}

const MAX_KEPT_FAILURES: usize = 5;

impl SuiteReport {
    fn new(name: &str) -> Self {
        SuiteReport { name: name.to_string(), cases: 0, skipped: 0, failures: Vec::new(), notes: Vec::new() }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn fail(&mut self, summary: impl Into<String>, files: Vec<(String, String)>) {
        if self.failures.len() < MAX_KEPT_FAILURES {
            self.failures.push(Counterexample { summary: summary.into(), files });
        } else if self.failures.len() == MAX_KEPT_FAILURES {
            self.notes.push("further failures omitted".into());
            self.failures.push(Counterexample { summary: "(more failures omitted)".into(), files: vec![] });
        }
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "ok" } else { "FAILED" };
        write!(f, "{}: {status} ({} cases", self.name, self.cases)?;
        if self.skipped > 0 {
            write!(f, ", {} skipped", self.skipped)?;
        }
        write!(f, ", {} failures)", self.failures.len())?;
        for n in &self.notes {
            write!(f, "\n  note: {n}")?;
        }
        for c in &self.failures {
            write!(f, "\n  counterexample: {}", c.summary)?;
            for (name, body) in &c.files {
                write!(f, "\n  --- {name}\n")?;
                for line in body.lines() {
                    writeln!(f, "  {line}")?;
                }
            }
        }
        Ok(())
    }
}

/// Where the rules of a suite come from.
#[derive(Clone, Copy, Debug)]
pub enum RuleSource<'a> {
    /// Rules of a fixed system.
    System(&'a Trs),
    /// A fresh random linear rule per case.
    Random { sig: &'a Signature, max_lhs: usize, max_rhs: usize },
}

impl RuleSource<'_> {
    fn signature(&self) -> &Signature {
        match self {
            RuleSource::System(trs) => &trs.signature,
            RuleSource::Random { sig, .. } => sig,
        }
    }

    fn pick(&self, rng: &mut Rng8) -> Option<TrsRule> {
        match self {
            RuleSource::System(trs) => trs.rules.choose(rng).cloned(),
            RuleSource::Random { sig, max_lhs, max_rhs } => Some(random_linear_rule(rng, sig, *max_lhs, *max_rhs)),
        }
    }
}

fn term_file(sig: &Signature, rule: &TrsRule, t: &Term) -> (String, String) {
    ("case.trs".into(), format!("{sig}\n{rule}\n# term\n# {t}\n"))
}

fn graph_file(name: &str, g: &LabeledGraph) -> (String, String) {
    (format!("{name}.graph"), write_graph(g, None))
}

/// Renames variables to `_1`, `_2`, ... in left-to-right order.
pub fn canonical_vars(t: &Term) -> Term {
    fn go(t: &Term, seen: &mut BTreeMap<String, String>) -> Term {
        match t {
            Term::Var(x) => {
                let n = seen.len() + 1;
                Term::var(seen.entry(x.clone()).or_insert_with(|| format!("_{n}")).clone())
            }
            Term::App(f, args) => Term::app(f.clone(), args.iter().map(|a| go(a, seen)).collect()),
        }
    }
    go(t, &mut BTreeMap::new())
}

/// Equality up to variable renaming, for linear terms.
pub fn alpha_equivalent(s: &Term, t: &Term) -> bool {
    canonical_vars(s) == canonical_vars(t)
}

/// Encoding commutes with steps: at every position of `C[lσ]`, the graph
/// step exists iff the term step does, has exactly one strong match, and
/// its result is isomorphic to the encoded term result.
pub fn step_preservation(source: RuleSource<'_>, rng: &mut Rng8, samples: usize, max_symbols: usize) -> SuiteReport {
    let mut report = SuiteReport::new("step-preservation");
    let sig = source.signature().clone();
    let mut positions = 0;
    for _ in 0..samples {
        let Some(rule) = source.pick(rng) else {
            report.skipped += 1;
            continue;
        };
        let Some((s, _)) = random_redex_instance(rng, &sig, &rule, max_symbols) else {
            report.skipped += 1;
            continue;
        };
        report.cases += 1;
        let single = Trs { signature: sig.clone(), rules: vec![rule.clone()] };
        let (erule, enc) = match (encode_rule(&sig, &rule), encode_term(&sig, &s)) {
            (Ok(r), Ok(e)) => (r, e),
            (r, e) => {
                let msg = r.err().map(|e| e.to_string()).or(e.err().map(|e| e.to_string())).unwrap_or_default();
                report.fail(format!("encoding failed: {msg}"), vec![term_file(&sig, &rule, &s)]);
                continue;
            }
        };
        let g: GraphRef = Arc::new(enc.graph().clone());
        for p in s.positions() {
            positions += 1;
            let expected = rewrite_at(&single, &s, 0, &p).ok().flatten();
            let v = enc.vertex_at(&p).expect("every position has a vertex");
            let ms = find_matches_at(&erule.rule, &g, erule.lhs_root(), v);
            let mut files = vec![term_file(&sig, &rule, &s), graph_file("host", &g)];
            match (&expected, ms.len()) {
                (None, 0) => {}
                (Some(t), 1) => {
                    let got = match apply_step(&erule.rule, &ms[0]) {
                        Ok(step) => step.g_r,
                        Err(e) => {
                            report.fail(format!("step at {p} failed: {e}"), files);
                            continue;
                        }
                    };
                    let want = encode_term(&sig, t).expect("encodable result");
                    if !isomorphic(&got, want.graph()) {
                        files.push(graph_file("expected", want.graph()));
                        files.push(graph_file("got", &got));
                        report.fail(format!("{s} at {p}: graph result differs from encoding of {t}"), files);
                    }
                }
                (e, n) => {
                    let what = if e.is_some() { "applies" } else { "does not apply" };
                    report.fail(format!("{s} at {p}: term rule {what}, but {n} strong matches"), files);
                }
            }
        }
    }
    report.notes.push(format!("{positions} positions compared"));
    report
}

struct Explored {
    graph: GraphRef,
    term: Term,
}

/// Every graph reachable in at most `depth` steps from an encoded term
/// decodes to a term, and every graph step is the encoding of the term
/// step at the corresponding position. At each root vertex there is at
/// most one strong match, and the number of graph redexes equals the
/// number of term redexes.
pub fn closedness(trs: &Trs, rng: &mut Rng8, samples: usize, depth: usize, max_symbols: usize) -> SuiteReport {
    const STATE_CAP: usize = 64;
    let mut report = SuiteReport::new("closedness");
    let sig = &trs.signature;
    let erules: Vec<EncodedRule> = match trs.rules.iter().map(|r| encode_rule(sig, r)).collect() {
        Ok(r) => r,
        Err(e) => {
            report.fail(format!("cannot encode system: {e}"), vec![]);
            return report;
        }
    };
    let mut steps_seen = 0;
    for _ in 0..samples {
        let start = match trs.rules.choose(rng) {
            Some(rule) if rng.gen_bool(0.7) => random_redex_instance(rng, sig, rule, max_symbols).map(|(s, _)| s),
            _ => None,
        }
        .unwrap_or_else(|| random_host_term(rng, sig, max_symbols));
        report.cases += 1;
        let enc = encode_term(sig, &start).expect("encodable start term");
        let mut frontier = vec![Explored { graph: Arc::new(enc.graph().clone()), term: start.clone() }];
        let mut visited = 0;
        'levels: for _ in 0..depth {
            let mut next = Vec::new();
            for state in &frontier {
                let (g, s) = (&state.graph, &state.term);
                let Some(root) = g.vertices().find(|&v| g.in_degree(v) == 0) else {
                    report.fail("reachable graph has no root", vec![graph_file("state", g)]);
                    break 'levels;
                };
                let pos = tree_positions(g, root).expect("decoded graphs are trees");
                let mut graph_redexes = 0;
                for (k, erule) in erules.iter().enumerate() {
                    let mut per_root: BTreeMap<VertexId, usize> = BTreeMap::new();
                    for mt in find_matches(&erule.rule, g) {
                        let r = mt.m.vertex(erule.lhs_root());
                        *per_root.entry(r).or_default() += 1;
                        let files = || vec![("system.trs".to_string(), trs.to_string()), graph_file("state", g)];
                        let p = &pos[&r];
                        let step = match apply_step(&erule.rule, &mt) {
                            Ok(st) => st,
                            Err(e) => {
                                report.fail(format!("step failed on {s}: {e}"), files());
                                continue;
                            }
                        };
                        steps_seen += 1;
                        let Some(t) = decode_term(sig, &step.g_r, None) else {
                            let mut f = files();
                            f.push(graph_file("result", &step.g_r));
                            report.fail(format!("result of rule {k} at {p} on {s} does not decode"), f);
                            continue;
                        };
                        match rewrite_at(trs, s, k, p) {
                            Ok(Some(want)) if alpha_equivalent(&want, &t) => {}
                            other => {
                                let want = match other {
                                    Ok(Some(w)) => w.to_string(),
                                    _ => "no step".into(),
                                };
                                report.fail(format!("rule {k} at {p} on {s}: graph gives {t}, terms give {want}"), files());
                                continue;
                            }
                        }
                        if visited < STATE_CAP {
                            visited += 1;
                            next.push(Explored { graph: step.g_r.clone(), term: t });
                        }
                    }
                    for (r, n) in per_root {
                        graph_redexes += 1;
                        if n != 1 {
                            report.fail(
                                format!("{n} strong matches of rule {k} at {} on {s}", pos[&r]),
                                vec![("system.trs".into(), trs.to_string()), graph_file("state", g)],
                            );
                        }
                    }
                }
                let term_redexes = crate::term::all_redexes(trs, s).len();
                if term_redexes != graph_redexes {
                    report.fail(
                        format!("{s}: {term_redexes} term redexes but {graph_redexes} graph redexes"),
                        vec![("system.trs".into(), trs.to_string()), graph_file("state", g)],
                    );
                }
            }
            if next.is_empty() {
                break;
            }
            frontier = next;
        }
    }
    report.notes.push(format!("{steps_seen} graph steps checked"));
    report
}

/// A host graph of at most `max_vertices` vertices containing a redex of
/// `rule` before mutation, when one fits.
fn host_for(rng: &mut Rng8, sig: &Signature, rule: &TrsRule, max_vertices: usize) -> LabeledGraph {
    if rng.gen_bool(0.8) {
        for _ in 0..10 {
            let budget = max_vertices.saturating_sub(1).max(1);
            if let Some((s, _)) = random_redex_instance(rng, sig, rule, budget) {
                if let Ok(enc) = encode_term(sig, &s) {
                    if enc.graph().vertex_count() <= max_vertices {
                        return mutate_graph(rng, sig, enc.graph().clone(), max_vertices).renamed("G");
                    }
                }
            }
        }
    }
    random_host_graph(rng, sig, max_vertices)
}

fn rule_files(erule: &EncodedRule) -> (String, String) {
    ("rule.rule".into(), write_rule(&erule.rule))
}

/// Transports a morphism into `g` to one into a graph holding the same
/// element names.
fn retarget(f: &GraphMorphism, h: &GraphRef) -> Option<GraphMorphism> {
    let (d, c) = (&**f.dom(), &**f.cod());
    let vmap = d.vertices().map(|v| h.vertex_by_name(c.vertex_name(f.vertex(v)))).collect::<Option<Vec<_>>>()?;
    let emap = d.edges().map(|e| h.edge_by_name(c.edge_name(f.edge(e)))).collect::<Option<Vec<_>>>()?;
    GraphMorphism::new(f.dom().clone(), h.clone(), vmap, emap).ok()
}

/// Restricts a morphism out of `g` to a graph whose elements are a subset
/// of `g`'s, matched by name.
fn restrict(f: &GraphMorphism, h: &GraphRef) -> Option<GraphMorphism> {
    let d = &**f.dom();
    let vmap = h.vertices().map(|v| d.vertex_by_name(h.vertex_name(v)).map(|w| f.vertex(w))).collect::<Option<Vec<_>>>()?;
    let emap = h.edges().map(|e| d.edge_by_name(h.edge_name(e)).map(|x| f.edge(x))).collect::<Option<Vec<_>>>()?;
    GraphMorphism::new(h.clone(), f.cod().clone(), vmap, emap).ok()
}

/// Whenever `G_L → G_R`, the same match restricted to `[G_L]` is a strong
/// match there and yields `[G_R]` up to isomorphism.
pub fn drop_cycles_commutes(source: RuleSource<'_>, rng: &mut Rng8, samples: usize, max_vertices: usize) -> SuiteReport {
    let mut report = SuiteReport::new("drop-cycles");
    let sig = source.signature().clone();
    let mut steps = 0;
    let mut with_cycles = 0;
    for _ in 0..samples {
        let Some(rule) = source.pick(rng) else {
            report.skipped += 1;
            continue;
        };
        let erule = match encode_rule(&sig, &rule) {
            Ok(r) => r,
            Err(e) => {
                report.fail(format!("cannot encode {rule}: {e}"), vec![]);
                continue;
            }
        };
        let g: GraphRef = Arc::new(host_for(rng, &sig, &rule, max_vertices));
        report.cases += 1;
        let cycles = undirected_cycle_edges(&g);
        if !cycles.is_empty() {
            with_cycles += 1;
        }
        let dropped: GraphRef = Arc::new(drop_cycles(&g));
        for mt in find_matches(&erule.rule, &g) {
            let files = || vec![rule_files(&erule), graph_file("host", &g)];
            let step = match apply_step(&erule.rule, &mt) {
                Ok(s) => s,
                Err(e) => {
                    report.fail(format!("step failed: {e}"), files());
                    continue;
                }
            };
            steps += 1;
            let Some(m2) = retarget(&mt.m, &dropped) else {
                report.fail("match uses a cycle edge", files());
                continue;
            };
            let Some(a2) = restrict(&mt.alpha, &dropped) else {
                report.fail("adherence does not restrict", files());
                continue;
            };
            let mt2 = Match { m: m2, alpha: a2 };
            if let Err(e) = check_match(&erule.rule, &mt2) {
                report.fail(format!("restricted match is not strong: {e}"), files());
                continue;
            }
            match apply_step(&erule.rule, &mt2) {
                Ok(s2) if isomorphic(&s2.g_r, &drop_cycles(&step.g_r)) => {}
                Ok(s2) => {
                    let mut f = files();
                    f.push(graph_file("dropped_result", &s2.g_r));
                    f.push(graph_file("result_dropped", &drop_cycles(&step.g_r)));
                    report.fail("[G_L] step result differs from [G_R]", f);
                }
                Err(e) => report.fail(format!("step on [G_L] failed: {e}"), files()),
            }
        }
    }
    report.notes.push(format!("{steps} steps checked, {with_cycles} hosts with cycle edges"));
    report
}

type MatchKey = (Vec<VertexId>, Vec<crate::graph::EdgeId>, Vec<VertexId>, Vec<crate::graph::EdgeId>);

fn match_key(mt: &Match) -> MatchKey {
    (mt.m.vertex_map().to_vec(), mt.m.edge_map().to_vec(), mt.alpha.vertex_map().to_vec(), mt.alpha.edge_map().to_vec())
}

/// Relabeling one bad node keeps every strong match, and the results agree
/// after relabeling the image of that node. When the node stays bad the
/// matches correspond one to one.
pub fn bad_node_relabeling(source: RuleSource<'_>, rng: &mut Rng8, samples: usize, max_vertices: usize) -> SuiteReport {
    let mut report = SuiteReport::new("bad-node relabeling");
    let sig = source.signature().clone();
    let labels: Vec<Label> = sig.label_universe().into_iter().filter(|l| l.as_index().is_none()).collect();
    let (mut steps, mut both_ways) = (0, 0);
    for _ in 0..samples {
        let Some(rule) = source.pick(rng) else {
            report.skipped += 1;
            continue;
        };
        let Ok(erule) = encode_rule(&sig, &rule) else {
            report.skipped += 1;
            continue;
        };
        let g = host_for(rng, &sig, &rule, max_vertices);
        let classes = classify_nodes(&sig, &g);
        let bad: Vec<VertexId> = g.vertices().filter(|v| !classes[v.0].good).collect();
        let Some(&v) = bad.choose(rng) else {
            report.skipped += 1;
            continue;
        };
        report.cases += 1;
        let label = labels.choose(rng).cloned().unwrap_or(Label::Bottom);
        let g2 = g.with_vertex_label(v, label.clone());
        let still_bad = !classify_nodes(&sig, &g2)[v.0].good;
        let (g, g2): (GraphRef, GraphRef) = (Arc::new(g), Arc::new(g2));
        let files = || vec![rule_files(&erule), graph_file("before", &g), graph_file("after", &g2)];
        let before = find_matches(&erule.rule, &g);
        let after = find_matches(&erule.rule, &g2);
        let after_keys: BTreeMap<MatchKey, &Match> = after.iter().map(|m| (match_key(m), m)).collect();
        for mt in &before {
            let Some(mt2) = after_keys.get(&match_key(mt)) else {
                report.fail(format!("a match is lost by relabeling {}", g.vertex_name(v)), files());
                continue;
            };
            let (Ok(s1), Ok(s2)) = (apply_step(&erule.rule, mt), apply_step(&erule.rule, mt2)) else {
                report.fail("step failed", files());
                continue;
            };
            steps += 1;
            let mut expected = (*s1.g_r).clone();
            for k in s1.g_k.vertices().filter(|&k| s1.g_l_leg.vertex(k) == v) {
                expected = expected.with_vertex_label(s1.g_r_leg.vertex(k), label.clone());
            }
            if !isomorphic(&expected, &s2.g_r) {
                let mut f = files();
                f.push(graph_file("expected", &expected));
                f.push(graph_file("got", &s2.g_r));
                report.fail("results differ beyond the relabeled node", f);
            }
        }
        if still_bad {
            both_ways += 1;
            let before_keys: BTreeSet<MatchKey> = before.iter().map(match_key).collect();
            if after_keys.keys().any(|k| !before_keys.contains(k)) {
                report.fail(format!("relabeling {} creates a match", g.vertex_name(v)), files());
            }
        }
    }
    report.notes.push(format!("{steps} step pairs compared, {both_ways} cases checked in both directions"));
    report
}

/// Pushouts along monos and pullbacks of random small diagrams satisfy
/// their universal properties, and monos are stable.
pub fn categorical(rng: &mut Rng8, samples: usize, max_elements: usize) -> SuiteReport {
    let mut report = SuiteReport::new("categorical");
    let pool = [Label::Bottom, Label::symbol("a"), Label::symbol("b"), Label::index(1), Label::Top];
    let mut done = 0;
    while done < samples {
        // Pushout of b along a mono c.
        let n = rng.gen_range(0..=2);
        let a = Arc::new(random_graph(rng, "A", n, 1, &pool, &pool));
        let c = random_morphism_from(rng, &a, "C", true, max_elements, &pool);
        let mono_b = rng.gen_bool(0.5);
        let b = random_morphism_from(rng, &a, "B", mono_b, max_elements, &pool);
        if c.cod().size() > max_elements || b.cod().size() > max_elements {
            continue;
        }
        done += 1;
        report.cases += 1;
        let files = |f: &GraphMorphism, g: &GraphMorphism| {
            vec![
                graph_file("A", f.dom()),
                graph_file("B", f.cod()),
                graph_file("C", g.cod()),
                ("b.morphism".to_string(), f.to_string()),
                ("c.morphism".to_string(), g.to_string()),
            ]
        };
        match pushout(&b, &c) {
            Ok(po) => {
                if !(po.left.is_valid() && po.right.is_valid() && square_commutes(&b, &c, &po.left, &po.right)) {
                    report.fail("pushout square invalid or not commuting", files(&b, &c));
                } else if !verify_pushout_universal(&b, &c, &po) {
                    report.fail("pushout fails the universal property", files(&b, &c));
                } else if !po.left.is_mono() {
                    report.fail("pushout leg opposite the mono is not monic", files(&b, &c));
                }
            }
            Err(e) => report.fail(format!("pushout failed: {e}"), files(&b, &c)),
        }

        // Pullback of a random cospan.
        let nx = rng.gen_range(1..=3);
        let x = Arc::new(random_graph(rng, "X", nx, max_elements - nx, &pool, &pool));
        let (mono_b, mono_c) = (rng.gen_bool(0.5), rng.gen_bool(0.5));
        let (Some(b), Some(c)) = (
            random_morphism_into(rng, &x, "B", mono_b, max_elements, &pool),
            random_morphism_into(rng, &x, "C", mono_c, max_elements, &pool),
        ) else {
            continue;
        };
        match pullback(&b, &c) {
            Ok(pb) => {
                let bad = |msg: &str| (msg.to_string(), files(&b, &c));
                let failure = if !(pb.left.is_valid() && pb.right.is_valid() && square_commutes(&pb.left, &pb.right, &b, &c)) {
                    Some(bad("pullback square invalid or not commuting"))
                } else if !verify_pullback_universal(&b, &c, &pb) {
                    Some(bad("pullback fails the universal property"))
                } else if (c.is_mono() && !pb.left.is_mono()) || (b.is_mono() && !pb.right.is_mono()) {
                    Some(bad("pullback does not preserve a mono"))
                } else {
                    None
                };
                if let Some((msg, f)) = failure {
                    report.fail(msg, f);
                }
            }
            Err(e) => report.fail(format!("pullback failed: {e}"), files(&b, &c)),
        }
    }
    report
}

/// Zoning does not depend on edge order, bridges run from bad leaves to
/// zone sources, and acyclic zones decode to terms.
pub fn zoning_properties(sig: &Signature, rng: &mut Rng8, samples: usize, max_vertices: usize) -> SuiteReport {
    let mut report = SuiteReport::new("zoning");
    let universe = sig.label_universe();
    let vlabels: Vec<Label> = universe.iter().filter(|l| l.as_index().is_none()).cloned().collect();
    let elabels: Vec<Label> = universe.iter().filter(|l| l.as_symbol().is_none()).cloned().collect();
    let mut acyclic_zones = 0;
    for i in 0..samples {
        let g = if i % 2 == 0 {
            random_host_graph(rng, sig, max_vertices)
        } else {
            let n = rng.gen_range(1..=max_vertices);
            random_graph(rng, "G", n, n + 2, &vlabels, &elabels)
        };
        report.cases += 1;
        let files = || vec![graph_file("G", &g)];
        let z1 = compute_zoning(sig, &g);
        let mut order: Vec<_> = g.edges().collect();
        order.shuffle(rng);
        let z2 = compute_zoning_in_order(sig, &g, &order);
        if z1.zone_vertices != z2.zone_vertices || z1.zone_edges != z2.zone_edges || z1.bridges != z2.bridges {
            report.fail("zoning depends on edge order", files());
        }
        let classes = classify_nodes(sig, &g);
        for &e in &z1.bridges {
            let (s, t) = (g.src(e), g.tgt(e));
            let zs = &z1.zone_of_vertex[&s];
            let zt = &z1.zone_of_vertex[&t];
            if classes[s.0].good || !z1.leaves(&g, zs).contains(&s) || !z1.sources(&g, zt).contains(&t) {
                report.fail(format!("bridge {} violates the endpoint property", g.edge_name(e)), files());
            }
        }
        for z in z1.zone_ids() {
            let sub = z1.subgraph(&g, z).expect("known zone");
            if sub.has_directed_cycle() {
                continue;
            }
            acyclic_zones += 1;
            match zone_to_term(sig, &g, &z1, z) {
                Ok(Some(_)) => {}
                _ => report.fail(format!("acyclic zone {z} does not decode"), files()),
            }
        }
    }
    report.notes.push(format!("{acyclic_zones} acyclic zones decoded"));
    report
}

/// Checks a loaded rule for defects.
pub fn rule_defects(rule: &PbpoRule) -> SuiteReport {
    let mut report = SuiteReport::new(&format!("rule {}", rule.name));
    report.cases = 1;
    for d in rule.defects() {
        report.fail(d.to_string(), vec![("rule.rule".into(), write_rule(rule))]);
    }
    report
}

/// Non-isomorphic normal forms reachable from `g` by exhaustive
/// exploration, plus whether the depth bound was hit.
pub fn normal_forms(rules: &[PbpoRule], g: GraphRef, max_depth: usize) -> Result<(Vec<GraphRef>, bool), crate::engine::EngineError> {
    let trace = rewrite_bounded(rules, g, max_depth, Strategy::AllBranchesBfs)?;
    let forms = trace.normal_forms.iter().map(|&i| trace.states[i].clone()).collect();
    Ok((forms, trace.bound_hit))
}

#[derive(Clone, Copy, Debug)]
pub struct CheckOptions {
    pub seed: u64,
    pub samples: usize,
    pub max_size: usize,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions { seed: 0x5eed, samples: 200, max_size: 8 }
    }
}

/// The suites run for a system: step preservation, closedness (with match
/// determinism), drop-cycles and bad-node relabeling.
pub fn check_system(trs: &Trs, opts: CheckOptions) -> Vec<SuiteReport> {
    let mut rng = crate::gen::rng(opts.seed);
    let src = RuleSource::System(trs);
    vec![
        step_preservation(src, &mut rng, opts.samples, opts.max_size),
        closedness(trs, &mut rng, opts.samples.div_ceil(2), 5, opts.max_size.min(6)),
        drop_cycles_commutes(src, &mut rng, opts.samples, opts.max_size),
        bad_node_relabeling(src, &mut rng, opts.samples, opts.max_size),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{default_signature, rng};

    fn swap() -> Trs {
        Trs::parse("sig a/1 b/1 c/0\na(b(x)) -> b(a(x))\n").unwrap()
    }

    #[test]
    fn canonical_renaming() {
        let sig = default_signature();
        let s = crate::term::parse_term(&sig, "f(y, g(x))").unwrap();
        let t = crate::term::parse_term(&sig, "f(u, g(v))").unwrap();
        let r = crate::term::parse_term(&sig, "f(u, g(u))").unwrap();
        assert!(alpha_equivalent(&s, &t));
        assert!(!alpha_equivalent(&s, &r));
    }

    #[test]
    fn suites_pass_on_small_runs() {
        let trs = swap();
        let reports = check_system(&trs, CheckOptions { seed: 1, samples: 20, max_size: 6 });
        for r in &reports {
            assert!(r.passed(), "{r}");
            assert!(r.cases > 0, "{r}");
        }
    }

    #[test]
    fn random_rules_small_run() {
        let sig = default_signature();
        let src = RuleSource::Random { sig: &sig, max_lhs: 3, max_rhs: 3 };
        let mut r = rng(2);
        let rep = step_preservation(src, &mut r, 30, 8);
        assert!(rep.passed(), "{rep}");
        let rep = drop_cycles_commutes(src, &mut r, 30, 8);
        assert!(rep.passed(), "{rep}");
    }

    #[test]
    fn categorical_small_run() {
        let rep = categorical(&mut rng(3), 20, 6);
        assert!(rep.passed(), "{rep}");
    }

    #[test]
    fn corrupted_rule_is_reported() {
        let trs = swap();
        let erule = encode_rule(&trs.signature, &trs.rules[0]).unwrap();
        let text = write_rule(&erule.rule).replace("morphism tK K Kp\nv eps eps\n", "morphism tK K Kp\nv eps C\n");
        let rule = crate::rule_file::parse_rule(&text).unwrap();
        let rep = rule_defects(&rule);
        assert!(!rep.passed());
        assert!(rep.to_string().contains("counterexample"));
    }
}
