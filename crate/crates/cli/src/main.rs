//! `flatset`: the library's operations behind one binary, speaking the
//! PGSET/ACODE text formats and JSON.
//!
//! Every subcommand is a thin adapter over exactly one library call.
//! Exit codes: 0 success, 1 usage or input errors, 2 verification failure
//! (a set that fails `verify`, or a `certify` claim refuted by a witness).
//! Machine output goes to standard out (JSON with `--json`), logs to
//! standard error. A path of `-` means standard in.

use std::io::Read as _;
use std::path::PathBuf;
use std::sync::Arc;
use std::time::Duration;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use flatset::analysis::{spectrum, verify_length_maximal, MaximalityReport};
use flatset::codes::{
    code_to_subspace_set, field_reduce, subspace_set_to_code, weight_distribution,
    weight_distribution_exhaustive,
};
use flatset::constructions::{
    affine_arc, denniston_arc, desarguesian_spread, extended_ternary_golay, frame, hyperoval,
    ovoid, ternary_golay, Construction,
};
use flatset::formulas::{feasible_t_values, predicted_secants, ParameterSet};
use flatset::geometry::{quotient, Point, SubspaceSet};
use flatset::gf::{FiniteField, SubfieldEmbedding};
use flatset::io::{
    rational_json, read_additive_code, read_subspace_set, spectrum_json, write_additive_code,
    write_subspace_set,
};
use flatset::search::{
    confirm_nonexistence, search, SearchOutcome, SearchProblem, SearchStatus, SymmetryBreaking,
};

#[derive(Parser)]
#[command(name = "flatset", version, about = "Sets of flats in PG(n,q) with restricted hyperplane intersections, and their additive codes")]
struct Cli {
    /// Machine-readable JSON on standard out.
    #[arg(long, global = true)]
    json: bool,
    /// Worker width for parallel operations (default: FLATSET_THREADS or 1).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Reserved; all current operations are deterministic.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    cmd: Cmd,
}

/// The base field GF(p^m).
#[derive(Args)]
struct FieldArgs {
    /// Field characteristic (prime).
    #[arg(long)]
    p: u32,
    /// Extension degree over the prime field.
    #[arg(long, default_value_t = 1)]
    m: u32,
}

/// Full parameter set (t, h, k) over GF(q), q = p^m.
#[derive(Args)]
struct ParamArgs {
    #[command(flatten)]
    field: FieldArgs,
    /// Vector dimension of the flats ((h-1)-flats in PG(kh-1, q)).
    #[arg(long, default_value_t = 1)]
    h: u32,
    /// Number of flat slots: the ambient space is PG(kh-1, q).
    #[arg(long)]
    k: u32,
    /// Secant cap: every hyperplane meets the set in at most t elements.
    #[arg(long)]
    t: u64,
}

impl ParamArgs {
    fn parse(&self) -> Result<ParameterSet> {
        Ok(ParameterSet::new(self.field.p, self.field.m, self.h, self.k, self.t)?)
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Intersection spectrum of a PGSET file: s-secant counts over all hyperplanes.
    Spectrum {
        /// PGSET file, or - for standard in.
        #[arg(default_value = "-")]
        input: String,
    },
    /// Check a PGSET file against the size bound for a secant cap t (exit 2 if it falls short).
    Verify {
        #[arg(default_value = "-")]
        input: String,
        /// Secant cap t.
        #[arg(long)]
        t: u32,
    },
    /// Closed-form s-secant count N(t,h,k,s), exact.
    Predict {
        #[command(flatten)]
        params: ParamArgs,
        /// Secant size s.
        #[arg(long)]
        s: u64,
    },
    /// Classify every t in [1, q^h+k-1]: ruled out, forced, open, or trivially existing.
    Feasible {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, default_value_t = 1)]
        h: u32,
        #[arg(long)]
        k: u32,
    },
    /// Field reduction: points of PG(k-1, q^h) (a PGSET with h=1) to (h-1)-flats of PG(kh-1, q).
    Reduce {
        #[arg(default_value = "-")]
        input: String,
        /// Splitting degree h; the input field order must be a perfect h-th power.
        #[arg(long)]
        h: u32,
    },
    /// Convert between the PGSET and ACODE formats.
    Convert {
        #[arg(default_value = "-")]
        input: String,
        /// PGSET in, ACODE out (the correspondence direction set -> code).
        #[arg(long, conflicts_with = "to_set")]
        to_code: bool,
        /// ACODE in, PGSET out.
        #[arg(long)]
        to_set: bool,
    },
    /// Weight distribution of an ACODE file (spectrum-derived by default).
    Weights {
        #[arg(default_value = "-")]
        input: String,
        /// Enumerate all q^{kh} codewords instead of using the spectrum.
        #[arg(long)]
        exhaustive: bool,
        /// Codeword budget for exhaustive mode.
        #[arg(long, default_value_t = 1u64 << 24)]
        budget: u64,
    },
    /// Quotient of a PGSET at one element: the rest of the set in PG((k-1)h-1, q).
    Quotient {
        #[arg(default_value = "-")]
        input: String,
        /// Index of the element to quotient at.
        #[arg(long)]
        at: usize,
    },
    /// Emit a named construction as a PGSET file.
    Examples {
        /// One of: spread, hyperoval, denniston, ovoid, frame, ternary_golay,
        /// extended_ternary_golay, affine_arc.
        name: String,
        #[arg(long)]
        p: Option<u32>,
        #[arg(long, default_value_t = 1)]
        m: u32,
        /// Flat dimension for spread.
        #[arg(long)]
        h: Option<u32>,
        /// Secant cap for denniston.
        #[arg(long)]
        t: Option<u64>,
        /// Slot count for frame (the ambient space is PG(k-1, 2)).
        #[arg(long)]
        k: Option<u32>,
    },
    /// Backtracking search for a set of the target size under the secant cap.
    Search {
        #[command(flatten)]
        params: ParamArgs,
        /// Target size (default: the size bound).
        #[arg(long)]
        n: Option<u64>,
        /// Skip the feasibility short-circuit and search regardless.
        #[arg(long)]
        no_theory: bool,
        /// Pin the first k elements to the unit points (h=1, exact-bound targets).
        #[arg(long)]
        stabilized: bool,
        /// Keep searching after the first witness and report all of them.
        #[arg(long)]
        all: bool,
        /// Node budget.
        #[arg(long)]
        nodes: Option<u64>,
        /// Wall-clock budget in seconds.
        #[arg(long)]
        time_secs: Option<u64>,
        /// Write the traversal certificate (parameters, node count, tree hash) as JSON.
        #[arg(long)]
        cert: Option<PathBuf>,
    },
    /// Exhaustively certify nonexistence at a target size (theory disabled; exit 2 if a witness refutes the claim).
    Certify {
        #[command(flatten)]
        params: ParamArgs,
        /// Target size (default: the size bound).
        #[arg(long)]
        n: Option<u64>,
        /// Acknowledge that a large universe may take a long time.
        #[arg(long)]
        ack_long: bool,
        /// Node budget (running out is an error: no certificate).
        #[arg(long)]
        nodes: Option<u64>,
        /// Wall-clock budget in seconds.
        #[arg(long)]
        time_secs: Option<u64>,
        /// Write the certificate as JSON.
        #[arg(long)]
        cert: Option<PathBuf>,
    },
}

fn main() {
    // Die quietly when a downstream pipe closes (`flatset ... | head`),
    // like any other filter; Rust's default turns SIGPIPE into a panic.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    std::process::exit(run());
}

fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let usage_ok = matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
            let _ = e.print();
            return if usage_ok { 0 } else { 1 };
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            1
        }
    }
}

fn read_input(path: &str) -> Result<String> {
    if path == "-" {
        let mut buf = String::new();
        std::io::stdin().read_to_string(&mut buf).context("reading standard in")?;
        Ok(buf)
    } else {
        std::fs::read_to_string(path).with_context(|| format!("reading {path}"))
    }
}

fn emit_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("JSON serialization"));
}

fn threads(cli: &Cli) -> usize {
    cli.threads
        .or_else(|| std::env::var("FLATSET_THREADS").ok().and_then(|s| s.parse().ok()))
        .unwrap_or(1)
}

fn dispatch(cli: Cli) -> Result<i32> {
    if cli.seed.is_some() {
        eprintln!("note: --seed is reserved; all current operations are deterministic");
    }
    match &cli.cmd {
        Cmd::Spectrum { input } => {
            let set = read_subspace_set(&read_input(input)?)?;
            let sp = spectrum(&set)?;
            if cli.json {
                emit_json(&spectrum_json(&set, &sp));
            } else {
                println!(
                    "set of {} flats (k={}, h={}) in PG({}, {})",
                    set.len(),
                    set.k(),
                    set.h(),
                    set.ambient_dim(),
                    set.field().q()
                );
                for (&s, &count) in sp.counts() {
                    println!("  {s}-secants: {count}");
                }
                println!("hyperplanes: {}  max secant: {}", sp.hyperplanes(), sp.max_secant());
            }
            Ok(0)
        }
        Cmd::Verify { input, t } => {
            let set = read_subspace_set(&read_input(input)?)?;
            let report = verify_length_maximal(&set, *t)?;
            if cli.json {
                emit_json(&report_json(&set, &report));
            } else {
                print_report(&report);
            }
            Ok(if report.is_length_maximal { 0 } else { 2 })
        }
        Cmd::Predict { params, s } => {
            let ps = params.parse()?;
            let count = predicted_secants(&ps, *s)?;
            if cli.json {
                emit_json(&json!({
                    "q": ps.q(), "h": ps.h(), "k": ps.k(), "t": ps.t(), "s": s,
                    "count": rational_json(&count),
                    "integral": count.is_integer(),
                }));
            } else if count.is_integer() {
                println!("{}", count.numer());
            } else {
                println!("{count} (not an integer: no such set exists)");
            }
            Ok(0)
        }
        Cmd::Feasible { field, h, k } => {
            let q = (field.p as u64).pow(field.m);
            let verdicts = feasible_t_values(q, *h, *k)?;
            let surviving: Vec<u64> =
                verdicts.iter().filter(|v| v.status.survives()).map(|v| v.t).collect();
            if cli.json {
                let rows: Vec<Value> = verdicts
                    .iter()
                    .map(|v| {
                        json!({
                            "t": v.t,
                            "bound": v.n.to_string(),
                            "status": v.status.as_str(),
                            "reasons": v.reasons.iter().map(|r| json!({
                                "rule": r.rule, "detail": r.detail,
                            })).collect::<Vec<_>>(),
                        })
                    })
                    .collect();
                emit_json(&json!({
                    "q": q, "h": h, "k": k,
                    "verdicts": rows,
                    "feasible_t": surviving,
                }));
            } else {
                for v in &verdicts {
                    let reasons: Vec<String> =
                        v.reasons.iter().map(|r| format!("{}: {}", r.rule, r.detail)).collect();
                    println!("t={:<4} n={:<8} {:<18} {}", v.t, v.n, v.status.as_str(), reasons.join("; "));
                }
                if surviving.is_empty() {
                    println!("feasible t values: (none)");
                } else {
                    let list: Vec<String> = surviving.iter().map(|t| t.to_string()).collect();
                    println!("feasible t values: {}", list.join(", "));
                }
            }
            Ok(0)
        }
        Cmd::Reduce { input, h } => {
            let set = read_subspace_set(&read_input(input)?)?;
            if set.h() != 1 {
                bail!("reduce expects a set of points (h=1), got h={}", set.h());
            }
            let big = set.field().clone();
            if *h == 0 || big.m() % h != 0 {
                bail!("GF({}) is not an order-h extension for h={h}", big.q());
            }
            let small = Arc::new(FiniteField::new(big.p(), big.m() / h)?);
            let basis = SubfieldEmbedding::default_basis(&big, *h);
            let emb = SubfieldEmbedding::new(big, small, &basis)?;
            let points: Vec<Point> = set
                .elements()
                .iter()
                .map(|e| Point::from_coords(emb.big(), &e.gens()[0]))
                .collect::<flatset::Result<_>>()?;
            let reduced = field_reduce(&points, &emb)?;
            print!("{}", write_subspace_set(&reduced));
            Ok(0)
        }
        Cmd::Convert { input, to_code, to_set } => {
            if !to_code && !to_set {
                bail!("pass one of --to-code or --to-set");
            }
            let text = read_input(input)?;
            if *to_code {
                let set = read_subspace_set(&text)?;
                let emb = SubfieldEmbedding::default_tower(set.field().clone(), set.h())?;
                let code = subspace_set_to_code(&set, emb)?;
                print!("{}", write_additive_code(&code)?);
            } else {
                let code = read_additive_code(&text)?;
                let set = code_to_subspace_set(&code)?;
                print!("{}", write_subspace_set(&set));
            }
            Ok(0)
        }
        Cmd::Weights { input, exhaustive, budget } => {
            let code = read_additive_code(&read_input(input)?)?;
            let wd = if *exhaustive {
                weight_distribution_exhaustive(&code, *budget)?
            } else {
                weight_distribution(&code)?
            };
            if cli.json {
                let mut weights = serde_json::Map::new();
                for (&w, &count) in wd.counts() {
                    weights.insert(w.to_string(), json!(count));
                }
                emit_json(&json!({
                    "n": code.n(), "k": code.k(), "h": code.h(), "q": code.base().q(),
                    "weights": Value::Object(weights),
                    "min_distance": wd.min_distance(),
                }));
            } else {
                println!(
                    "additive [{}, {}]_{}^{} code, {} codewords",
                    code.n(),
                    code.k(),
                    code.base().q(),
                    code.h(),
                    code.size()
                );
                for (&w, &count) in wd.counts() {
                    println!("  A_{w} = {count}");
                }
                match wd.min_distance() {
                    Some(d) => println!("minimum distance: {d}"),
                    None => println!("minimum distance: undefined (no nonzero codeword)"),
                }
            }
            Ok(0)
        }
        Cmd::Quotient { input, at } => {
            let set = read_subspace_set(&read_input(input)?)?;
            let out = quotient(&set, *at)?;
            print!("{}", write_subspace_set(&out.set));
            Ok(0)
        }
        Cmd::Examples { name, p, m, h, t, k } => {
            let c = build_example(name, *p, *m, *h, *t, *k)?;
            eprintln!(
                "{}: q={} h={} k={} t={} ({})",
                c.descriptor.name, c.descriptor.q, c.descriptor.h, c.descriptor.k, c.descriptor.t,
                c.descriptor.note
            );
            print!("{}", write_subspace_set(&c.set));
            Ok(0)
        }
        Cmd::Search { params, n, no_theory, stabilized, all, nodes, time_secs, cert } => {
            let mut prob = SearchProblem::new(params.parse()?)?;
            if let Some(n) = n {
                prob = prob.with_target(*n);
            }
            if *no_theory {
                prob = prob.without_theory();
            }
            if *stabilized {
                prob = prob.with_symmetry(SymmetryBreaking::FirstElementStabilized);
            }
            if *all {
                prob = prob.enumerate_all();
            }
            if let Some(nodes) = nodes {
                prob = prob.with_node_budget(*nodes);
            }
            if let Some(secs) = time_secs {
                prob = prob.with_time_budget(Duration::from_secs(*secs));
            }
            prob = prob.with_parallel_width(threads(&cli));
            let out = search(&prob)?;
            report_search(&cli, &out, cert.as_deref())?;
            Ok(0)
        }
        Cmd::Certify { params, n, ack_long, nodes, time_secs, cert } => {
            let mut prob = SearchProblem::new(params.parse()?)?;
            if let Some(n) = n {
                prob = prob.with_target(*n);
            }
            if let Some(nodes) = nodes {
                prob = prob.with_node_budget(*nodes);
            }
            if let Some(secs) = time_secs {
                prob = prob.with_time_budget(Duration::from_secs(*secs));
            }
            prob = prob.with_parallel_width(threads(&cli));
            let out = confirm_nonexistence(&prob, *ack_long)?;
            report_search(&cli, &out, cert.as_deref())?;
            match out.status {
                SearchStatus::ExhaustedNone => Ok(0),
                // A witness refutes the nonexistence claim.
                SearchStatus::Found => Ok(2),
                _ => Ok(1),
            }
        }
    }
}

fn build_example(
    name: &str,
    p: Option<u32>,
    m: u32,
    h: Option<u32>,
    t: Option<u64>,
    k: Option<u32>,
) -> Result<Construction> {
    let q = |what: &str| -> Result<u64> {
        let p = p.ok_or_else(|| anyhow!("{what} needs --p (and --m for extension fields)"))?;
        Ok((p as u64).pow(m))
    };
    Ok(match name {
        "spread" => {
            let h = h.ok_or_else(|| anyhow!("spread needs --h (the flat dimension, at least 2)"))?;
            desarguesian_spread(q("spread")?, h)?
        }
        "hyperoval" => hyperoval(q("hyperoval")?)?,
        "denniston" => {
            let t = t.ok_or_else(|| anyhow!("denniston needs --t (a proper divisor of q)"))?;
            denniston_arc(q("denniston")?, t)?
        }
        "ovoid" => ovoid(q("ovoid")?)?,
        "frame" => {
            let k = k.ok_or_else(|| anyhow!("frame needs --k (the ambient space is PG(k-1, 2))"))?;
            if k < 2 {
                bail!("frame needs k >= 2");
            }
            frame(k - 1)?
        }
        "ternary_golay" => ternary_golay()?,
        "extended_ternary_golay" => extended_ternary_golay()?,
        "affine_arc" => affine_arc(q("affine_arc")?)?,
        other => bail!(
            "unknown example '{other}' (try spread, hyperoval, denniston, ovoid, frame, ternary_golay, extended_ternary_golay, affine_arc)"
        ),
    })
}

fn report_json(set: &SubspaceSet, r: &MaximalityReport) -> Value {
    json!({
        "n": r.size,
        "k": set.k(),
        "h": set.h(),
        "q": set.field().q(),
        "t": r.t,
        "t_observed": r.t_observed,
        "bound": r.bound.to_string(),
        "is_length_maximal": r.is_length_maximal,
        "equality_conditions_hold": r.equality_conditions_hold(),
        "span_target": r.span_target,
        "worst_span_deficiency": r.worst_span_deficiency,
        "span_checked": r.span_checked,
        "span_exhaustive": r.span_exhaustive,
        "secant_violations": r.secant_violations,
    })
}

fn print_report(r: &MaximalityReport) {
    println!("size {} against bound {} with cap t={}", r.size, r.bound, r.t);
    println!("largest observed secant: {}", r.t_observed);
    if r.is_length_maximal {
        println!("length-maximal: yes");
        println!(
            "  spans: {} (k-1)-subsets checked{}, worst deficiency {}",
            r.span_checked,
            if r.span_exhaustive { "" } else { " (sampled, budget hit)" },
            r.worst_span_deficiency
        );
        if r.secant_violations.is_empty() {
            println!("  secant sizes: all in the admitted range");
        } else {
            println!("  secant sizes outside the admitted range: {:?}", r.secant_violations);
        }
    } else {
        println!("length-maximal: no");
    }
}

fn status_str(s: SearchStatus) -> &'static str {
    match s {
        SearchStatus::Found => "found",
        SearchStatus::ExhaustedNone => "exhausted_none",
        SearchStatus::BudgetExceeded => "budget_exceeded",
        SearchStatus::RuledOutByTheory => "ruled_out_by_theory",
    }
}

fn certificate_json(out: &SearchOutcome) -> Value {
    json!({
        "status": status_str(out.status),
        "n_target": out.n_target,
        "universe": out.universe_size,
        "nodes": out.stats.nodes,
        "prunes": {
            "cap": out.stats.cap_prunes,
            "degree": out.stats.degree_prunes,
            "span": out.stats.span_prunes,
        },
        "tree_hash": out.tree_hash,
    })
}

fn report_search(cli: &Cli, out: &SearchOutcome, cert: Option<&std::path::Path>) -> Result<()> {
    if let Some(path) = cert {
        if out.tree_hash.is_none() {
            bail!("no exhaustion certificate: the traversal did not complete");
        }
        std::fs::write(path, serde_json::to_string_pretty(&certificate_json(out))?)
            .with_context(|| format!("writing {}", path.display()))?;
    }
    if cli.json {
        let mut v = certificate_json(out);
        v["wall_ms"] = json!(out.stats.wall.as_millis() as u64);
        v["witnesses"] = json!(out
            .witnesses
            .iter()
            .map(write_subspace_set)
            .collect::<Vec<_>>());
        v["theory_reasons"] = json!(out
            .theory_reasons
            .iter()
            .map(|r| json!({"rule": r.rule, "detail": r.detail}))
            .collect::<Vec<_>>());
        emit_json(&v);
    } else {
        eprintln!(
            "status: {}  target: {}  universe: {}",
            status_str(out.status),
            out.n_target,
            out.universe_size
        );
        eprintln!(
            "nodes: {}  prunes: cap {} / degree {} / span {}  wall: {:.2?}",
            out.stats.nodes,
            out.stats.cap_prunes,
            out.stats.degree_prunes,
            out.stats.span_prunes,
            out.stats.wall
        );
        for r in &out.theory_reasons {
            eprintln!("theory: {}: {}", r.rule, r.detail);
        }
        if let Some(hash) = &out.tree_hash {
            eprintln!("tree hash: {hash}");
        }
        if out.witnesses.len() > 1 {
            eprintln!("witnesses: {} (printing the first)", out.witnesses.len());
        }
        if let Some(w) = &out.witness {
            print!("{}", write_subspace_set(w));
        }
    }
    Ok(())
}
