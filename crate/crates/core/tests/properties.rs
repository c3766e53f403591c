use std::collections::BTreeSet;
use std::sync::Arc;

use proptest::prelude::*;
use rand::Rng;

use pbpo::cat_ops::{pullback, pushout, square_commutes};
use pbpo::check::alpha_equivalent;
use pbpo::encoding::{decode_term, encode_rule, encode_term};
use pbpo::engine::{apply_step, find_matches, graph_from};
use pbpo::gen::{
    default_signature, random_graph, random_host_graph, random_linear_rule, random_morphism_from,
    mutate_graph, random_redex_instance, random_term, rng, FreshVars,
};
use pbpo::graph::{isomorphic, parse_graph, write_graph, GraphMorphism, LabeledGraph, VertexId};
use pbpo::lattice::{join, leq, meet, Label};
use pbpo::rule_file::{parse_rule, write_rule};
use pbpo::term::Trs;
use pbpo::zoning::{check_match_in_one_zone, drop_cycles, undirected_cycle_edges};

fn pool() -> Vec<Label> {
    vec![Label::Bottom, Label::symbol("a"), Label::symbol("b"), Label::index(1), Label::index(2), Label::Top]
}

fn label() -> impl Strategy<Value = Label> {
    proptest::sample::select(pool())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lattice_laws(a in label(), b in label(), c in label()) {
        prop_assert!(leq(&Label::Bottom, &a) && leq(&a, &Label::Top));
        let j = join([&a, &b]);
        let m = meet([&a, &b]);
        prop_assert!(leq(&a, &j) && leq(&b, &j));
        prop_assert!(leq(&m, &a) && leq(&m, &b));
        if leq(&a, &c) && leq(&b, &c) {
            prop_assert!(leq(&j, &c));
        }
        if leq(&c, &a) && leq(&c, &b) {
            prop_assert!(leq(&c, &m));
        }
        prop_assert_eq!(join([&a, &m]), a.clone());
        prop_assert_eq!(meet([&a, &j]), a.clone());
    }

    #[test]
    fn label_text_round_trip(a in label()) {
        let text = a.to_string();
        let g = graph_from("G", &[("v", a.clone())], &[]);
        let (back, _) = parse_graph(&write_graph(&g, None)).unwrap();
        prop_assert_eq!(back.vlabel(VertexId(0)), &a, "{}", text);
    }

    #[test]
    fn graph_text_round_trip(seed in any::<u64>(), n in 0usize..6, m in 0usize..8) {
        let mut r = rng(seed);
        let g = random_graph(&mut r, "G", n, m, &pool(), &pool());
        let root = (n > 0).then(|| VertexId(n - 1));
        let text = write_graph(&g, root);
        let (back, back_root) = parse_graph(&text).unwrap();
        prop_assert_eq!(back_root, root);
        prop_assert!(isomorphic(&g, &back));
        prop_assert_eq!(write_graph(&back, back_root), text);
    }

    #[test]
    fn trs_text_round_trip(seed in any::<u64>(), k in 0usize..4) {
        let mut r = rng(seed);
        let sig = default_signature();
        let rules = (0..k).map(|_| random_linear_rule(&mut r, &sig, 3, 3)).collect();
        let trs = Trs::new(sig, rules).unwrap();
        let back = Trs::parse(&trs.to_string()).unwrap();
        prop_assert_eq!(back, trs);
    }

    #[test]
    fn rule_file_round_trip(seed in any::<u64>()) {
        let mut r = rng(seed);
        let sig = default_signature();
        let rule = encode_rule(&sig, &random_linear_rule(&mut r, &sig, 3, 3)).unwrap().rule;
        let text = write_rule(&rule);
        let back = parse_rule(&text).unwrap();
        prop_assert!(back.defects().is_empty());
        prop_assert_eq!(write_rule(&back), text);
    }

    #[test]
    fn encode_decode_round_trip(seed in any::<u64>(), budget in 0usize..7) {
        let mut r = rng(seed);
        let sig = default_signature();
        let mut fresh = FreshVars::new("x");
        let mut var = || Some(fresh.next_name());
        let t = random_term(&mut r, &sig, budget, 0.3, &mut var);
        let enc = encode_term(&sig, &t).unwrap();
        let back = decode_term(&sig, enc.graph(), Some(enc.root())).unwrap();
        prop_assert!(alpha_equivalent(&t, &back), "{} decoded as {}", t, back);
        prop_assert_eq!(decode_term(&sig, enc.graph(), None), Some(back));
    }

    #[test]
    fn random_steps_have_valid_diagrams(seed in any::<u64>()) {
        let mut r = rng(seed);
        let sig = default_signature();
        let tr = random_linear_rule(&mut r, &sig, 2, 2);
        let rule = encode_rule(&sig, &tr).unwrap().rule;
        // A host with a planted redex, then perturbed.
        let g = match random_redex_instance(&mut r, &sig, &tr, 5) {
            Some((t, _)) => mutate_graph(&mut r, &sig, encode_term(&sig, &t).unwrap().rooted.graph, 7),
            None => random_host_graph(&mut r, &sig, 6),
        };
        let g = Arc::new(g);
        for mt in find_matches(&rule, &g) {
            prop_assert!(check_match_in_one_zone(&sig, &mt.m));
            let step = apply_step(&rule, &mt).unwrap();
            if let Err(e) = step.check_diagrams() {
                return Err(TestCaseError::fail(format!("{e}\nrule:\n{}\nhost:\n{}", write_rule(&rule), write_graph(&g, None))));
            }
        }
    }

    #[test]
    fn drop_cycles_is_idempotent_and_acyclic(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = random_host_graph(&mut r, &default_signature(), 7);
        let d = drop_cycles(&g);
        prop_assert!(undirected_cycle_edges(&d).is_empty());
        prop_assert_eq!(d.vertex_count(), g.vertex_count());
        prop_assert_eq!(d.edge_count() + undirected_cycle_edges(&g).len(), g.edge_count());
        prop_assert!(isomorphic(&drop_cycles(&d), &d));
    }

    #[test]
    fn pushout_along_identity_is_trivial(seed in any::<u64>(), n in 0usize..4) {
        let mut r = rng(seed);
        let a = Arc::new(random_graph(&mut r, "A", n, 3, &pool(), &pool()));
        let b = random_morphism_from(&mut r, &a, "B", false, 7, &pool());
        let id = GraphMorphism::identity(a.clone());
        let po = pushout(&b, &id).unwrap();
        prop_assert!(square_commutes(&b, &id, &po.left, &po.right));
        prop_assert!(po.left.is_iso());
    }

}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn cycle_preserving_pullback(seed in any::<u64>(), n in 1usize..5) {
        let mut r = rng(seed);
        let gg = Arc::new(random_graph(&mut r, "G", n, 2 * n + 1, &pool(), &pool()));
        let g = random_morphism_from(&mut r, &gg, "X", false, 10, &pool());
        let x = g.cod();
        // h: inclusion of a random subgraph of X.
        let keep_xv: BTreeSet<_> = x.vertices().filter(|_| r.gen_bool(0.8)).collect();
        let keep_xe: BTreeSet<_> = x
            .edges()
            .filter(|e| keep_xv.contains(&x.src(*e)) && keep_xv.contains(&x.tgt(*e)) && r.gen_bool(0.8))
            .collect();
        let h = GraphMorphism::inclusion(Arc::new(x.subgraph(&keep_xv, &keep_xe).renamed("H")), x.clone()).unwrap();
        let pb = pullback(&g, &h).unwrap();
        let image_v: BTreeSet<VertexId> = h.vertex_map().iter().copied().collect();
        let image_e: BTreeSet<_> = h.edge_map().iter().copied().collect();
        // The part of G lying over the image of h; its cycles qualify.
        let keep_v: BTreeSet<_> = gg.vertices().filter(|v| image_v.contains(&g.vertex(*v))).collect();
        let keep_e: BTreeSet<_> = gg
            .edges()
            .filter(|e| image_e.contains(&g.edge(*e)) && keep_v.contains(&gg.src(*e)) && keep_v.contains(&gg.tgt(*e)))
            .collect();
        let part = gg.subgraph(&keep_v, &keep_e);
        let sigma: BTreeSet<_> = undirected_cycle_edges(&part)
            .into_iter()
            .map(|e| gg.edge_by_name(part.edge_name(e)).unwrap())
            .collect();
        let y_cycles = undirected_cycle_edges(&pb.apex);
        for y in pb.apex.edges() {
            if sigma.contains(&pb.left.edge(y)) {
                prop_assert!(y_cycles.contains(&y), "edge {} of the pullback is not on a cycle", pb.apex.edge_name(y));
            }
        }
    }
}

#[test]
fn cycle_preservation_needs_a_monic_leg() {
    let loop_graph = || graph_from("G", &[("v", Label::Top)], &[("l", "v", "v", Label::Top)]);
    let g_dom = Arc::new(loop_graph());
    let x = Arc::new(loop_graph().renamed("X"));
    let g = GraphMorphism::identity(g_dom).with_cod(x.clone()).unwrap();
    // Two vertices squashed onto the loop vertex.
    let h_dom = Arc::new(graph_from("H", &[("p", Label::Top), ("q", Label::Top)], &[("e", "p", "q", Label::Top)]));
    let h = GraphMorphism::new(h_dom, x, vec![VertexId(0), VertexId(0)], vec![pbpo::graph::EdgeId(0)]).unwrap();
    let pb = pullback(&g, &h).unwrap();
    assert_eq!(pb.apex.edge_count(), 1);
    assert!(undirected_cycle_edges(&pb.apex).is_empty());
}

#[test]
fn empty_graph_round_trips() {
    let g = LabeledGraph::new("E");
    let (back, root) = parse_graph(&write_graph(&g, None)).unwrap();
    assert!(root.is_none() && back.is_empty());
}
