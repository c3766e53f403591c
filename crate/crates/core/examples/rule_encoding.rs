//! Encodes a term rewrite rule as a graph rule and prints its graphs,
//! the derived right-hand type, and a DOT rendering of L'.

use pbpo::encoding::encode_rule;
use pbpo::graph::{to_dot, write_graph, DotOptions};
use pbpo::rule_file::write_rule;
use pbpo::term::Trs;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let trs = Trs::parse("sig f/3 g/1 h/2 a/0 b/0\nf(x, g(b), y) -> h(g(y), a)\n")?;
    let encoded = encode_rule(&trs.signature, &trs.rules[0])?;
    print!("{}", write_rule(&encoded.rule));

    let rp = encoded.derived_rhs_type()?;
    print!("{}", write_graph(&rp.apex.renamed("Rp"), None));
    println!();
    print!("{}", to_dot(encoded.rule.lhs_type(), &DotOptions::default()));
    Ok(())
}
