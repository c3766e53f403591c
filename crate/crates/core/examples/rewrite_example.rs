//! Loads a hand-written rule and host graph and rewrites once, printing
//! every graph of the step diagram.

use std::sync::Arc;

use pbpo::engine::{apply_step, find_matches};
use pbpo::graph::{parse_graph, write_graph};
use pbpo::rule_file::parse_rule;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let rule = parse_rule(include_str!("../fixtures/overwrite.rule"))?;
    let (host, _) = parse_graph(include_str!("../fixtures/overwrite_host.graph"))?;
    let host = Arc::new(host);

    let matches = find_matches(&rule, &host);
    println!("{} strong matches", matches.len());
    for mt in &matches {
        let x = rule.lhs().vertices().next().unwrap();
        println!("  x -> {}", host.vertex_name(mt.m.vertex(x)));
    }
    let Some(mt) = matches.first() else { return Ok(()) };
    let step = apply_step(&rule, mt)?;
    step.check_diagrams()?;
    print!("{}", write_graph(&step.g_k.renamed("GK"), None));
    print!("{}", write_graph(&step.g_r.renamed("GR"), None));
    Ok(())
}
