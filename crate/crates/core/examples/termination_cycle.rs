//! A rule that terminates on terms but whose left-hand side embeds
//! into a cycle. The strong match requirement rules out that embedding.

use std::sync::Arc;

use pbpo::encoding::encode_system;
use pbpo::engine::{adherences, find_matches, graph_from, rewrite_bounded, Strategy};
use pbpo::graph::{enumerate_morphisms, parse_graph};
use pbpo::lattice::Label;
use pbpo::term::Trs;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let trs = Trs::parse(include_str!("../fixtures/swap.trs"))?;
    let rules: Vec<_> = encode_system(&trs)?.into_iter().map(|e| e.rule).collect();
    let (cycle, _) = parse_graph(include_str!("../fixtures/ab_cycle.graph"))?;
    let cycle = Arc::new(cycle);

    let rule = &rules[0];
    // L has three vertices, so it only embeds into the longer cycle.
    let long = Arc::new(graph_from(
        "cycle4",
        &[("p", Label::symbol("a")), ("q", Label::symbol("b")), ("r", Label::symbol("a")), ("s", Label::symbol("b"))],
        &[
            ("pq", "p", "q", Label::index(1)),
            ("qr", "q", "r", Label::index(1)),
            ("rs", "r", "s", Label::index(1)),
            ("sp", "s", "p", Label::index(1)),
        ],
    ));
    for g in [&cycle, &long] {
        let monos = enumerate_morphisms(rule.lhs(), g, true);
        let adherent = monos.iter().filter(|m| !adherences(rule, g, m).is_empty()).count();
        println!("{}: {} monic embeddings of L, {adherent} with an adherence", g.name(), monos.len());
        println!("{}: {} strong matches", g.name(), find_matches(rule, g).len());
    }

    let trace = rewrite_bounded(&rules, cycle, 100, Strategy::FirstMatch)?;
    println!("{} steps, bound hit {}", trace.steps(), trace.bound_hit);
    Ok(())
}
