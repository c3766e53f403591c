//! Command-line front end. The binary only forwards to [`main_with`].
//!
//! Exit codes: 0 success, 1 property failure or counterexample, 2 input
//! error.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand};
use thiserror::Error;

use crate::check::{check_system, normal_forms, rule_defects, CheckOptions, SuiteReport};
use crate::encoding::{decode_term, encode_system, EncodingError};
use crate::engine::{apply_step, find_matches, rewrite_bounded, EngineError, PbpoRule, Strategy};
use crate::graph::{parse_graph, to_dot, write_graph, DotOptions, FormatError, GraphRef, LabeledGraph, VertexId};
use crate::rule_file::{parse_rule, write_rule, RuleFileError};
use crate::term::{Trs, TrsParseError};
use crate::zoning::{compute_zoning, drop_cycles, undirected_cycle_edges, zone_to_term, ZoningError};

#[derive(Debug, Parser)]
#[command(name = "pbpo", version, about = "PBPO+ graph rewriting and linear term rewriting encodings")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Encode the rules of a TRS as PBPO+ rules.
    Encode {
        trs: PathBuf,
        /// Only this rule (0-based).
        #[arg(long)]
        rule: Option<usize>,
        /// Write rule files here instead of printing them.
        #[arg(long)]
        out_dir: Option<PathBuf>,
        #[arg(long)]
        dot_dir: Option<PathBuf>,
    },
    /// Decode a term-encoding graph.
    Decode {
        graph: PathBuf,
        /// TRS file providing the signature.
        #[arg(long)]
        trs: PathBuf,
    },
    /// Perform one rewrite step.
    Step {
        graph: PathBuf,
        /// Rule file.
        #[arg(long, conflicts_with = "trs")]
        rule: Option<PathBuf>,
        /// TRS file; its encoded rules are tried in order.
        #[arg(long)]
        trs: Option<PathBuf>,
        /// Use the n-th match (0-based) instead of the first.
        #[arg(long, default_value_t = 0)]
        nth: usize,
        #[arg(long)]
        dot_dir: Option<PathBuf>,
    },
    /// Rewrite until a normal form or the step bound.
    Run {
        graph: PathBuf,
        /// Rule files, tried in order.
        #[arg(long = "rule")]
        rules: Vec<PathBuf>,
        /// TRS file whose encoded rules are added after the rule files.
        #[arg(long)]
        trs: Option<PathBuf>,
        #[arg(long, default_value_t = 1000)]
        max_steps: usize,
        #[arg(long, default_value = "first")]
        strategy: Strategy,
        #[arg(long)]
        dot_dir: Option<PathBuf>,
    },
    /// Print the zoning of a graph.
    Zones {
        graph: PathBuf,
        #[arg(long)]
        trs: PathBuf,
        /// Write a DOT rendering with zones as clusters.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Remove all undirected cycle edges.
    Dropcycles { graph: PathBuf },
    /// Run the randomized property suites.
    Check {
        /// TRS whose rules are checked.
        trs: Option<PathBuf>,
        /// Check a rule file for defects instead.
        #[arg(long, conflicts_with = "trs")]
        rule: Option<PathBuf>,
        #[arg(long, default_value_t = CheckOptions::default().seed)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        /// Maximum vertices of random graphs.
        #[arg(long, default_value_t = 8)]
        max_size: usize,
        /// Also list the normal forms reachable from this graph.
        #[arg(long)]
        confluence_graph: Option<PathBuf>,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{path}: {source}")]
    Trs { path: PathBuf, source: TrsParseError },
    #[error("{path}: {source}")]
    Graph { path: PathBuf, source: FormatError },
    #[error("{path}: {source}")]
    Rule { path: PathBuf, source: RuleFileError },
    #[error(transparent)]
    Encoding(#[from] EncodingError),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Zoning(#[from] ZoningError),
    #[error("{0}")]
    Usage(String),
}

/// Outcome of a command that ran to completion.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Ok,
    PropertyFailure,
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.into(), source })
}

fn write_file(path: &Path, body: &str) -> Result<(), CliError> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(|source| CliError::Io { path: dir.into(), source })?;
    }
    fs::write(path, body).map_err(|source| CliError::Io { path: path.into(), source })
}

pub fn load_trs(path: &Path) -> Result<Trs, CliError> {
    Trs::parse(&read(path)?).map_err(|source| CliError::Trs { path: path.into(), source })
}

pub fn load_graph(path: &Path) -> Result<(LabeledGraph, Option<VertexId>), CliError> {
    parse_graph(&read(path)?).map_err(|source| CliError::Graph { path: path.into(), source })
}

pub fn load_rule(path: &Path) -> Result<PbpoRule, CliError> {
    parse_rule(&read(path)?).map_err(|source| CliError::Rule { path: path.into(), source })
}

fn io_out(e: io::Error) -> CliError {
    CliError::Io { path: "<stdout>".into(), source: e }
}

fn dot_file(dir: &Path, name: &str, g: &LabeledGraph, root: Option<VertexId>) -> Result<(), CliError> {
    let opts = DotOptions { root, ..Default::default() };
    write_file(&dir.join(format!("{name}.dot")), &to_dot(g, &opts))
}

/// Runs a parsed command, writing human-readable output to `out`.
pub fn execute(cli: Cli, out: &mut dyn Write) -> Result<Outcome, CliError> {
    match cli.command {
        Command::Encode { trs, rule, out_dir, dot_dir } => encode(&trs, rule, out_dir.as_deref(), dot_dir.as_deref(), out),
        Command::Decode { graph, trs } => {
            let trs = load_trs(&trs)?;
            let (g, root) = load_graph(&graph)?;
            match decode_term(&trs.signature, &g, root) {
                Some(t) => {
                    writeln!(out, "{t}").map_err(io_out)?;
                    Ok(Outcome::Ok)
                }
                None => {
                    writeln!(out, "not a term encoding").map_err(io_out)?;
                    Ok(Outcome::PropertyFailure)
                }
            }
        }
        Command::Step { graph, rule, trs, nth, dot_dir } => {
            let rules = gather_rules(rule.as_slice(), trs.as_deref())?;
            if rules.is_empty() {
                return Err(CliError::Usage("step needs --rule or --trs".into()));
            }
            let g: GraphRef = Arc::new(load_graph(&graph)?.0);
            step(&rules, &g, nth, dot_dir.as_deref(), out)
        }
        Command::Run { graph, rules, trs, max_steps, strategy, dot_dir } => {
            let rules = gather_rules(&rules, trs.as_deref())?;
            if rules.is_empty() {
                return Err(CliError::Usage("run needs at least one --rule or --trs".into()));
            }
            let g: GraphRef = Arc::new(load_graph(&graph)?.0);
            run(&rules, g, max_steps, strategy, dot_dir.as_deref(), out)
        }
        Command::Zones { graph, trs, dot } => {
            let trs = load_trs(&trs)?;
            let (g, _) = load_graph(&graph)?;
            zones(&trs, &g, dot.as_deref(), out)
        }
        Command::Dropcycles { graph } => {
            let (g, root) = load_graph(&graph)?;
            let cyc = undirected_cycle_edges(&g);
            let names: Vec<&str> = cyc.iter().map(|&e| g.edge_name(e)).collect();
            writeln!(out, "# cycle edges: {}", names.join(" ")).map_err(io_out)?;
            write!(out, "{}", write_graph(&drop_cycles(&g), root)).map_err(io_out)?;
            Ok(Outcome::Ok)
        }
        Command::Check { trs, rule, seed, samples, max_size, confluence_graph } => {
            let opts = CheckOptions { seed, samples, max_size };
            check(trs.as_deref(), rule.as_deref(), opts, confluence_graph.as_deref(), out)
        }
    }
}

fn gather_rules(files: &[PathBuf], trs: Option<&Path>) -> Result<Vec<PbpoRule>, CliError> {
    let mut rules = files.iter().map(|p| load_rule(p)).collect::<Result<Vec<_>, _>>()?;
    if let Some(path) = trs {
        let trs = load_trs(path)?;
        rules.extend(encode_system(&trs)?.into_iter().map(|e| e.rule));
    }
    Ok(rules)
}

fn encode(
    trs_path: &Path,
    only: Option<usize>,
    out_dir: Option<&Path>,
    dot_dir: Option<&Path>,
    out: &mut dyn Write,
) -> Result<Outcome, CliError> {
    let trs = load_trs(trs_path)?;
    if let Some(i) = only {
        if i >= trs.rules.len() {
            return Err(CliError::Usage(format!("rule {i} out of range ({} rules)", trs.rules.len())));
        }
    }
    for (i, erule) in encode_system(&trs)?.into_iter().enumerate() {
        if only.is_some_and(|k| k != i) {
            continue;
        }
        let rp = erule.derived_rhs_type()?.apex.renamed("Rp");
        let text = format!("{}{}", write_rule(&erule.rule), write_graph(&rp, None));
        match out_dir {
            Some(dir) => {
                write_file(&dir.join(format!("rule{i}.rule")), &write_rule(&erule.rule))?;
                write_file(&dir.join(format!("rule{i}.rp.graph")), &write_graph(&rp, None))?;
                writeln!(out, "rule {i}: {}", erule.source).map_err(io_out)?;
            }
            None => write!(out, "# rule {i}: {}\n{text}", erule.source).map_err(io_out)?,
        }
        if let Some(dir) = dot_dir {
            let r = &erule.rule;
            let root = Some(erule.lhs_root());
            dot_file(dir, &format!("rule{i}_L"), r.lhs(), root)?;
            dot_file(dir, &format!("rule{i}_K"), r.interface(), None)?;
            dot_file(dir, &format!("rule{i}_R"), r.rhs(), None)?;
            dot_file(dir, &format!("rule{i}_Lp"), r.lhs_type(), root)?;
            dot_file(dir, &format!("rule{i}_Kp"), r.interface_type(), None)?;
            dot_file(dir, &format!("rule{i}_Rp"), &rp, None)?;
        }
    }
    Ok(Outcome::Ok)
}

fn step(rules: &[PbpoRule], g: &GraphRef, nth: usize, dot_dir: Option<&Path>, out: &mut dyn Write) -> Result<Outcome, CliError> {
    let mut seen = 0;
    for rule in rules {
        let matches = find_matches(rule, g);
        if nth >= seen + matches.len() {
            seen += matches.len();
            continue;
        }
        let s = apply_step(rule, &matches[nth - seen])?;
        let image: Vec<&str> = rule.lhs().vertices().map(|v| g.vertex_name(s.m.vertex(v))).collect();
        writeln!(out, "# rule {} at {}", rule.name, image.join(" ")).map_err(io_out)?;
        write!(out, "{}", write_graph(&s.g_k.renamed("GK"), None)).map_err(io_out)?;
        write!(out, "{}", write_graph(&s.g_r.renamed("GR"), None)).map_err(io_out)?;
        if let Some(dir) = dot_dir {
            dot_file(dir, "GL", &s.g_l, None)?;
            dot_file(dir, "GK", &s.g_k, None)?;
            dot_file(dir, "GR", &s.g_r, None)?;
        }
        return Ok(Outcome::Ok);
    }
    writeln!(out, "# no strong match ({seen} found)").map_err(io_out)?;
    Ok(Outcome::Ok)
}

fn run(
    rules: &[PbpoRule],
    g: GraphRef,
    max_steps: usize,
    strategy: Strategy,
    dot_dir: Option<&Path>,
    out: &mut dyn Write,
) -> Result<Outcome, CliError> {
    let trace = rewrite_bounded(rules, g, max_steps, strategy)?;
    writeln!(out, "# steps: {}", trace.steps()).map_err(io_out)?;
    writeln!(out, "# depth: {}", trace.depth).map_err(io_out)?;
    writeln!(out, "# bound hit: {}", trace.bound_hit).map_err(io_out)?;
    let finals: Vec<usize> = match strategy {
        Strategy::FirstMatch => vec![trace.states.len() - 1],
        Strategy::AllBranchesBfs => trace.normal_forms.clone(),
    };
    writeln!(out, "# final graphs: {}", finals.len()).map_err(io_out)?;
    for (k, &i) in finals.iter().enumerate() {
        let h = trace.states[i].renamed(format!("final{k}"));
        write!(out, "{}", write_graph(&h, None)).map_err(io_out)?;
        if let Some(dir) = dot_dir {
            dot_file(dir, &format!("final{k}"), &h, None)?;
        }
    }
    Ok(Outcome::Ok)
}

fn zones(trs: &Trs, g: &LabeledGraph, dot: Option<&Path>, out: &mut dyn Write) -> Result<Outcome, CliError> {
    let sig = &trs.signature;
    let z = compute_zoning(sig, g);
    writeln!(out, "# {} zones, {} bridges", z.zone_count(), z.bridges.len()).map_err(io_out)?;
    for id in z.zone_ids() {
        let vs: Vec<&str> = z.zone_vertices[id].iter().map(|&v| g.vertex_name(v)).collect();
        let root = z.roots[id].map(|r| g.vertex_name(r)).unwrap_or("-");
        let term = match zone_to_term(sig, g, &z, id) {
            Ok(Some(t)) => t.to_string(),
            Ok(None) => "-".into(),
            Err(ZoningError::CyclicZone(_)) => "(cyclic)".into(),
            Err(e) => return Err(e.into()),
        };
        writeln!(out, "zone {id}: vertices {} root {root} term {term}", vs.join(" ")).map_err(io_out)?;
    }
    for &e in &z.bridges {
        writeln!(out, "bridge {} {} {}", g.edge_name(e), g.vertex_name(g.src(e)), g.vertex_name(g.tgt(e))).map_err(io_out)?;
    }
    if let Some(path) = dot {
        let clusters = z.zone_ids().map(|id| (id.clone(), z.zone_vertices[id].iter().copied().collect())).collect();
        let opts = DotOptions { root: None, clusters, dotted: z.bridges.clone() };
        write_file(path, &to_dot(g, &opts))?;
    }
    Ok(Outcome::Ok)
}

fn check(
    trs: Option<&Path>,
    rule: Option<&Path>,
    opts: CheckOptions,
    confluence_graph: Option<&Path>,
    out: &mut dyn Write,
) -> Result<Outcome, CliError> {
    let mut reports: Vec<SuiteReport> = Vec::new();
    if let Some(path) = rule {
        reports.push(rule_defects(&load_rule(path)?));
    }
    let trs = trs.map(load_trs).transpose()?;
    if let Some(trs) = &trs {
        let erules = encode_system(trs)?;
        for e in &erules {
            reports.push(rule_defects(&e.rule));
        }
        reports.extend(check_system(trs, opts));
        if let Some(path) = confluence_graph {
            let g: GraphRef = Arc::new(load_graph(path)?.0);
            let rules: Vec<PbpoRule> = erules.into_iter().map(|e| e.rule).collect();
            let (forms, bound_hit) = normal_forms(&rules, g, opts.max_size.max(50))?;
            writeln!(out, "confluence probe: {} non-isomorphic normal forms{}", forms.len(), if bound_hit { " (bound hit)" } else { "" })
                .map_err(io_out)?;
            for (i, h) in forms.iter().enumerate() {
                write!(out, "{}", write_graph(&h.renamed(format!("nf{i}")), None)).map_err(io_out)?;
            }
        }
    } else if confluence_graph.is_some() {
        return Err(CliError::Usage("--confluence-graph needs a TRS".into()));
    }
    if reports.is_empty() {
        return Err(CliError::Usage("check needs a TRS or --rule".into()));
    }
    for r in &reports {
        writeln!(out, "{r}").map_err(io_out)?;
    }
    Ok(if reports.iter().all(SuiteReport::passed) { Outcome::Ok } else { Outcome::PropertyFailure })
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn main_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    match execute(cli, out) {
        Ok(Outcome::Ok) => 0,
        Ok(Outcome::PropertyFailure) => 1,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}
