//! Graph rewriting over lattice-labeled graphs, and an embedding of
//! linear term rewriting into it.
//!
//! ```
//! use std::sync::Arc;
//! use pbpo::encoding::{decode_term, encode_system, encode_term};
//! use pbpo::engine::{rewrite_bounded, Strategy};
//! use pbpo::term::{parse_term, Trs};
//!
//! # fn main() -> Result<(), Box<dyn std::error::Error>> {
//! let trs = Trs::parse("sig f/2 g/1 a/0\nf(x, a) -> g(x)\n")?;
//! let rules: Vec<_> = encode_system(&trs)?.into_iter().map(|e| e.rule).collect();
//! let t = parse_term(&trs.signature, "f(g(a), a)")?;
//! let g = Arc::new(encode_term(&trs.signature, &t)?.rooted.graph);
//! let trace = rewrite_bounded(&rules, g, 100, Strategy::FirstMatch)?;
//! let last = trace.states.last().unwrap();
//! assert_eq!(decode_term(&trs.signature, last, None).unwrap().to_string(), "g(g(a))");
//! # Ok(())
//! # }
//! ```

pub mod cat_ops;
pub mod graph;
pub mod lattice;
pub mod term;
pub mod engine;
pub mod encoding;
pub mod zoning;
pub mod rule_file;
pub mod gen;
pub mod check;
pub mod cli;
