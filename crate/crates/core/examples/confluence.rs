//! Two rules that are confluent on terms but not on a graph where two
//! redexes share a subterm.

use std::sync::Arc;

use pbpo::check::normal_forms;
use pbpo::encoding::{decode_term, encode_system};
use pbpo::graph::{parse_graph, write_graph};
use pbpo::term::Trs;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let trs = Trs::parse(include_str!("../fixtures/confluence.trs"))?;
    let rules: Vec<_> = encode_system(&trs)?.into_iter().map(|e| e.rule).collect();
    let (g, _) = parse_graph(include_str!("../fixtures/confluence.graph"))?;

    let (nfs, bound_hit) = normal_forms(&rules, Arc::new(g), 50)?;
    println!("{} normal forms (bound hit: {bound_hit})", nfs.len());
    for (i, nf) in nfs.iter().enumerate() {
        let term = decode_term(&trs.signature, nf, None).map(|t| t.to_string());
        println!("decodes to {}", term.as_deref().unwrap_or("nothing"));
        print!("{}", write_graph(&nf.renamed(format!("nf{i}")), None));
    }
    Ok(())
}
