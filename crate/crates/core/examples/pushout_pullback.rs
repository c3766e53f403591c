//! Pushout along a mono and a pullback in labeled graphs, each checked
//! against its universal property.

use std::sync::Arc;

use pbpo::cat_ops::{pullback, pushout, square_commutes, verify_pullback_universal, verify_pushout_universal};
use pbpo::engine::graph_from;
use pbpo::graph::{write_graph, GraphMorphism};
use pbpo::lattice::Label;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let a = Arc::new(graph_from("A", &[("x", Label::Bottom), ("y", Label::Bottom)], &[]));
    // b glues x and y; c adds an edge between them.
    let b_cod = Arc::new(graph_from("B", &[("xy", Label::symbol("f"))], &[]));
    let b = GraphMorphism::from_names(a.clone(), b_cod, &[("x", "xy"), ("y", "xy")], &[])?;
    let c_cod = Arc::new(graph_from(
        "C",
        &[("x", Label::Bottom), ("y", Label::Bottom)],
        &[("e", "x", "y", Label::index(1))],
    ));
    let c = GraphMorphism::inclusion(a, c_cod)?;

    let po = pushout(&b, &c)?;
    println!("pushout:");
    print!("{}", write_graph(&po.apex, None));
    println!(
        "commutes {}, universal {}",
        square_commutes(&b, &c, &po.left, &po.right),
        verify_pushout_universal(&b, &c, &po)
    );

    // Pull the two legs back along each other.
    let pb = pullback(&po.left, &po.right)?;
    println!("pullback:");
    print!("{}", write_graph(&pb.apex, None));
    println!(
        "commutes {}, universal {}",
        square_commutes(&pb.left, &pb.right, &po.left, &po.right),
        verify_pullback_universal(&po.left, &po.right, &pb)
    );
    Ok(())
}
