//! Splits a graph into zones, decodes each zone as a term, and shows
//! cycle dropping and bad-node relabeling.

use pbpo::graph::{parse_graph, write_graph};
use pbpo::lattice::Label;
use pbpo::term::Trs;
use pbpo::zoning::{classify_nodes, compute_zoning, drop_cycles, relabel_bad_nodes, zone_to_term};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let sig = Trs::parse(include_str!("../fixtures/confluence.trs"))?.signature;
    let (g, _) = parse_graph(include_str!("../fixtures/confluence.graph"))?;

    for (v, class) in g.vertices().zip(classify_nodes(&sig, &g)) {
        println!("{}: {}", g.vertex_name(v), if class.good { "good" } else { "bad" });
    }
    let zoning = compute_zoning(&sig, &g);
    println!("{} zones, {} bridges", zoning.zone_count(), zoning.bridges.len());
    for z in zoning.zone_ids() {
        let term = zone_to_term(&sig, &g, &zoning, z)?.map(|t| t.to_string());
        println!("  zone {z}: {}", term.as_deref().unwrap_or("not a term"));
    }
    print!("{}", write_graph(&relabel_bad_nodes(&sig, &g, &Label::Bottom), None));

    let (cycle, _) = parse_graph(include_str!("../fixtures/ab_cycle.graph"))?;
    print!("{}", write_graph(&drop_cycles(&cycle), None));
    Ok(())
}
