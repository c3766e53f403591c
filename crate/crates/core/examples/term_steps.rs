//! Rewrites a term both directly and through its graph encoding at every
//! redex position, and checks that the two agree.

use pbpo::check::alpha_equivalent;
use pbpo::encoding::{apply_at_position, decode_term, encode_rule, encode_term};
use pbpo::term::{all_redexes, parse_term, rewrite_at, Trs};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let trs = Trs::parse("sig f/2 g/1 a/0 b/0\nf(x, a) -> g(x)\ng(g(x)) -> x\n")?;
    let t = parse_term(&trs.signature, "f(g(g(b)), a)")?;
    let enc = encode_term(&trs.signature, &t)?;
    println!("term: {t}");
    for (i, p) in all_redexes(&trs, &t) {
        let expected = rewrite_at(&trs, &t, i, &p)?.expect("redex");
        let erule = encode_rule(&trs.signature, &trs.rules[i])?;
        let g = apply_at_position(&erule, &enc, &p)?.expect("graph step");
        let decoded = decode_term(&trs.signature, &g, None).expect("tree");
        let ok = alpha_equivalent(&expected, &decoded);
        println!("rule {i} at {p}: term {expected}, graph {decoded}, agree {ok}");
    }
    Ok(())
}
