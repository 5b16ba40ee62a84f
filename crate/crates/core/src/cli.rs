//! The `qatic` command line.
//!
//! Exit codes: 0 success or a true verdict, 1 a false verdict, 2 usage or
//! parse errors, 3 a resource cap, 4 cache I/O.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::bounds::{classical_n0, Bounds, LeafConvention, Recursive};
use crate::cache::{default_cache_path, BoundsCache};
use crate::error::{Error, Result};
use crate::fano::fano_verdict;
use crate::multiprofile::{parse_multiprofile, MultiProfile};
use crate::order::{contains, prec, squig, Relation};
use crate::poset::{interval, IntervalOptions};
use crate::profile::{parse_profile, PrimePower, Profile};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FALSE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CAP: i32 = 3;
pub const EXIT_CACHE: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "qatic", version, about = "Profiles, orderings, Hasse diagrams and unirationality bounds")]
struct Cli {
    /// Add wall-clock timings to JSON output (makes it nondeterministic).
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide whether a polynomial is a profile for q.
    Check {
        profile: String,
        #[arg(long)]
        q: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Compare two profiles under ≼ (prec), ⊑ (contain) or ⇝ (squig).
    Order {
        a: String,
        b: String,
        #[arg(long, value_enum)]
        relation: RelationArg,
        /// Required for contain and squig.
        #[arg(long)]
        q: Option<u64>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Hasse diagram of the interval below a multi-profile.
    Interval {
        multiprofile: String,
        #[arg(long, value_enum, default_value_t = GraphFormat::Text)]
        format: GraphFormat,
        #[arg(long, default_value_t = 100_000)]
        max_nodes: usize,
        /// Reject members that are not profiles for q.
        #[arg(long)]
        q: Option<u64>,
    },
    /// The thresholds r_0, r, n_1, n_2 and n_0.
    Bounds {
        multiprofile: String,
        /// Also evaluate n_1, n_2, n_0 at this r.
        #[arg(long, allow_hyphen_values = true)]
        r: Option<i64>,
        /// Include every node of the memoized recursion with its values.
        #[arg(long)]
        trace: bool,
        #[command(flatten)]
        engine: EngineArgs,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Expected dimension and related numbers for r-planes.
    Fano {
        multiprofile: String,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        r: u64,
        /// Needed for γ.
        #[arg(long)]
        q: Option<u64>,
        /// Require γ; fails without --q.
        #[arg(long)]
        gamma: bool,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// n_0 for constant profiles, next to classical reference values.
    Table {
        /// Inclusive range such as 3..7.
        #[arg(long, conflicts_with = "preset")]
        degrees: Option<String>,
        #[arg(long, value_enum)]
        preset: Option<Preset>,
        #[command(flatten)]
        engine: EngineArgs,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Debug, Args)]
struct EngineArgs {
    /// Cache file; defaults to $QATIC_CACHE or the user cache directory.
    #[arg(long)]
    cache: Option<PathBuf>,
    #[arg(long, conflicts_with = "cache")]
    no_cache: bool,
    /// Replacement for the n_2 term at r <= 0.
    #[arg(long, value_enum, default_value_t = LeafArg::NodeCount)]
    leaf: LeafArg,
    /// Abort a computation after visiting this many poset nodes.
    #[arg(long, default_value_t = 100_000_000)]
    max_nodes: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GraphFormat {
    Text,
    Json,
    Dot,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RelationArg {
    Prec,
    Contain,
    Squig,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum LeafArg {
    NodeCount,
    Zero,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Preset {
    Paper,
}

/// Parses `args` (including the program name), runs the command and returns
/// the exit code. Results go to `out`, diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match dispatch(&cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

/// Exit code for an error that stopped a command.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::CapExceeded { .. } | Error::MultiplicityOverflow(_) => EXIT_CAP,
        Error::Cache { .. } | Error::Io(_) => EXIT_CACHE,
        Error::Parse(_)
        | Error::NotPrimePower(_)
        | Error::ZeroProfile
        | Error::NotAProfile { .. }
        | Error::InvalidArgument(_) => EXIT_USAGE,
    }
}

struct Input<'a> {
    name: &'a str,
    text: &'a str,
}

fn report_parse(err: &mut dyn Write, input: Input<'_>, e: &Error) {
    if let Error::Parse(p) = e {
        let _ = writeln!(err, "error: cannot parse {}: {p}", input.name);
        let _ = writeln!(err, "  {}", input.text);
        let col = input.text[..p.offset().min(input.text.len())].chars().count();
        let _ = writeln!(err, "  {}^", " ".repeat(col));
    }
}

fn read_profile(err: &mut dyn Write, name: &str, text: &str) -> Result<Profile, i32> {
    parse_profile(text).map_err(|e| {
        report_parse(err, Input { name, text }, &Error::Parse(e));
        EXIT_USAGE
    })
}

fn read_multiprofile(err: &mut dyn Write, text: &str) -> Result<MultiProfile, i32> {
    parse_multiprofile(text).map_err(|e| {
        if matches!(e, Error::Parse(_)) {
            report_parse(err, Input { name: "multi-profile", text }, &e);
        } else {
            let _ = writeln!(err, "error: {e}");
        }
        exit_code(&e)
    })
}

fn print_json(out: &mut dyn Write, v: &Value) -> Result<()> {
    writeln!(out, "{}", serde_json::to_string_pretty(v).expect("json values serialize"))?;
    Ok(())
}

fn envelope(command: &str, args: Value, q: Option<u64>, result: Value) -> Value {
    let mut env = json!({ "command": command, "args": args, "result": result });
    if let Some(q) = q {
        env["q"] = json!(q);
    }
    env
}

fn open_bounds(args: &EngineArgs) -> Result<Bounds> {
    let convention = match args.leaf {
        LeafArg::NodeCount => LeafConvention::NodeCount,
        LeafArg::Zero => LeafConvention::Zero,
    };
    let mut bounds = Bounds::new(convention).with_node_cap(args.max_nodes);
    if !args.no_cache {
        let path = args.cache.clone().or_else(default_cache_path);
        if let Some(path) = path {
            bounds = bounds.with_cache(BoundsCache::open(path)?);
        }
    }
    Ok(bounds)
}

fn dispatch(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let started = Instant::now();
    let timed = |mut v: Value| {
        if cli.timing {
            v["timing_ms"] = json!(started.elapsed().as_millis() as u64);
        }
        v
    };
    match &cli.command {
        Command::Check { profile, q, format } => {
            let a = match read_profile(err, "profile", profile) {
                Ok(a) => a,
                Err(code) => return Ok(code),
            };
            let qq = PrimePower::from_q(*q)?;
            let check = a.check(qq);
            match format {
                Format::Text => {
                    if check.is_profile {
                        writeln!(out, "{a} is a profile for q = {q}")?;
                    } else {
                        writeln!(out, "{a} is not a profile for q = {q}")?;
                    }
                    if let Some((b, c)) = &check.witness {
                        writeln!(out, "witness: {b} and {c} both evaluate to {} at t = {q}", b.numerical_degree(qq))?;
                    }
                }
                Format::Json => {
                    let witness = check.witness.as_ref().map(|(b, c)| {
                        json!({ "b": b, "b_prime": c, "value": b.numerical_degree(qq).to_string() })
                    });
                    let result = json!({
                        "profile": a,
                        "is_profile": check.is_profile,
                        "witness": witness,
                        "stats": a.stats(qq),
                    });
                    print_json(out, &timed(envelope("check", json!({ "profile": profile }), Some(*q), result)))?;
                }
            }
            Ok(if check.is_profile { EXIT_OK } else { EXIT_FALSE })
        }
        Command::Order { a, b, relation, q, format } => {
            let (pa, pb) = match (read_profile(err, "first profile", a), read_profile(err, "second profile", b)) {
                (Ok(x), Ok(y)) => (x, y),
                (Err(code), _) | (_, Err(code)) => return Ok(code),
            };
            let qq = q.map(PrimePower::from_q).transpose()?;
            let need_q = || {
                qq.ok_or_else(|| Error::InvalidArgument(format!("--relation {} needs --q", relation_name(*relation))))
            };
            let verdict = match relation {
                RelationArg::Prec => prec(&pa, &pb),
                RelationArg::Contain => contains(&pa, &pb, need_q()?)?,
                RelationArg::Squig => squig(&pa, &pb, need_q()?)?,
            };
            match format {
                Format::Text => {
                    let symbol = match verdict.relation {
                        Relation::Prec => "≼",
                        Relation::Contain => "⊑",
                        Relation::Squig => "⇝",
                    };
                    let not = if verdict.holds { "" } else { "not " };
                    write!(out, "{pa} {not}{symbol} {pb}")?;
                    match &verdict.witness {
                        Some(w) => writeln!(out, " (witness {w})")?,
                        None => writeln!(out)?,
                    }
                }
                Format::Json => {
                    let args = json!({ "a": a, "b": b, "relation": relation_name(*relation) });
                    let result = json!({ "a": pa, "b": pb, "verdict": verdict });
                    print_json(out, &timed(envelope("order", args, *q, result)))?;
                }
            }
            Ok(if verdict.holds { EXIT_OK } else { EXIT_FALSE })
        }
        Command::Interval { multiprofile, format, max_nodes, q } => {
            let top = match read_multiprofile(err, multiprofile) {
                Ok(x) => x,
                Err(code) => return Ok(code),
            };
            let opts = IntervalOptions {
                max_nodes: *max_nodes,
                q: q.map(PrimePower::from_q).transpose()?,
            };
            let graph = interval(&top, opts)?;
            match format {
                GraphFormat::Text => write!(out, "{}", graph.to_text())?,
                GraphFormat::Dot => write!(out, "{}", graph.to_dot())?,
                GraphFormat::Json => {
                    let args = json!({ "multiprofile": multiprofile, "max_nodes": max_nodes });
                    print_json(out, &timed(envelope("interval", args, *q, graph.to_json())))?;
                }
            }
            Ok(EXIT_OK)
        }
        Command::Bounds { multiprofile, r, trace, engine, format } => {
            let top = match read_multiprofile(err, multiprofile) {
                Ok(x) => x,
                Err(code) => return Ok(code),
            };
            let mut bounds = open_bounds(engine)?;
            let record = bounds.record(&top, r.map(i128::from))?;
            let trace_nodes = if *trace {
                let convention = match engine.leaf {
                    LeafArg::NodeCount => LeafConvention::NodeCount,
                    LeafArg::Zero => LeafConvention::Zero,
                };
                let cap = usize::try_from(engine.max_nodes).unwrap_or(usize::MAX);
                let mut rec = Recursive::new(convention, true).with_node_cap(cap);
                for at in record.n1_at.keys() {
                    rec.r_bound(&top)?;
                    rec.n1(&top, *at)?;
                    rec.n2(&top, *at)?;
                }
                Some(rec.trace()?)
            } else {
                None
            };
            match format {
                Format::Text => {
                    writeln!(out, "multi-profile {}", top.display_text())?;
                    writeln!(out, "r0 = {}", record.r0)?;
                    writeln!(out, "r  = {}", record.r)?;
                    for (at, n1) in &record.n1_at {
                        let n2 = &record.n2_at[at];
                        let n0 = n1.clone().max(n2.clone());
                        writeln!(out, "at r = {at}: n1 = {n1}, n2 = {n2}, n0 = {n0}")?;
                    }
                    if let Some(nodes) = &trace_nodes {
                        for node in nodes {
                            let r = node.r.map(|r| r.to_string()).unwrap_or_else(|| "-".into());
                            write!(out, "  {} r0={} r={r}", node.key.display_text(), node.r0)?;
                            for (at, v) in &node.n1 {
                                write!(out, " n1({at})={v}")?;
                            }
                            for (at, v) in &node.n2 {
                                write!(out, " n2({at})={v}")?;
                            }
                            writeln!(out)?;
                        }
                    }
                }
                Format::Json => {
                    let mut result = serde_json::to_value(&record).expect("record serializes");
                    let n0_at: serde_json::Map<String, Value> = record
                        .n1_at
                        .keys()
                        .map(|at| (at.to_string(), json!(record.n0_at(*at).expect("both maps").to_string())))
                        .collect();
                    result["n0_at"] = Value::Object(n0_at);
                    if let Some(nodes) = &trace_nodes {
                        result["trace"] = serde_json::to_value(nodes).expect("trace serializes");
                    }
                    let args = json!({ "multiprofile": multiprofile, "r": r, "trace": trace, "leaf": leaf_name(engine.leaf) });
                    let mut env = envelope("bounds", args, None, result);
                    if bounds.has_cache() {
                        env["cache"] = json!(bounds.stats());
                    }
                    print_json(out, &timed(env))?;
                }
            }
            Ok(EXIT_OK)
        }
        Command::Fano { multiprofile, n, r, q, gamma, format } => {
            let a = match read_multiprofile(err, multiprofile) {
                Ok(x) => x,
                Err(code) => return Ok(code),
            };
            if *gamma && q.is_none() {
                return Err(Error::InvalidArgument("γ needs --q".into()));
            }
            let qq = q.map(PrimePower::from_q).transpose()?;
            let report = fano_verdict(*n, &a, *r, qq)?;
            match format {
                Format::Text => {
                    writeln!(out, "delta = {}", report.delta)?;
                    writeln!(out, "delta_minus = {}", report.delta_minus)?;
                    writeln!(out, "verdict = {}", serde_json::to_value(report.verdict).expect("verdict").as_str().unwrap_or_default())?;
                    if let Some(g) = &report.gamma {
                        let gv = serde_json::to_value(g).expect("gamma serializes");
                        writeln!(out, "gamma = {}", gv["value"].as_str().unwrap_or_default())?;
                        if let Some(c) = &g.canonical_exponent {
                            writeln!(out, "canonical exponent = {c}")?;
                        }
                    }
                    if let Some(c) = report.covered_by_planes {
                        writeln!(out, "covered by {r}-planes = {c}")?;
                    }
                }
                Format::Json => {
                    let args = json!({ "multiprofile": multiprofile, "n": n, "r": r });
                    let result = serde_json::to_value(&report).expect("report serializes");
                    print_json(out, &timed(envelope("fano", args, *q, result)))?;
                }
            }
            Ok(EXIT_OK)
        }
        Command::Table { degrees, preset, engine, format } => {
            let rows: Vec<(String, MultiProfile, Option<u32>)> = match (degrees, preset) {
                (Some(range), None) => {
                    let (lo, hi) = parse_range(range)?;
                    (lo..=hi)
                        .map(|d| (d.to_string(), MultiProfile::single(Profile::constant(d)).expect("d >= 2"), Some(d)))
                        .collect()
                }
                (None, Some(Preset::Paper)) => {
                    let mut rows: Vec<_> = (3..=10u32)
                        .map(|d| (d.to_string(), MultiProfile::single(Profile::constant(d)).expect("d >= 3"), Some(d)))
                        .collect();
                    for (label, text) in [
                        ("t+1", "[1+t]"),
                        ("2,t+1", "[2,1+t]"),
                        ("t+1,t+1", "[1+t,1+t]"),
                        ("t^2+t+1", "[1+t+t^2]"),
                    ] {
                        rows.push((label.to_string(), text.parse()?, None));
                    }
                    rows
                }
                _ => return Err(Error::InvalidArgument("give either --degrees LO..HI or --preset paper".into())),
            };
            let mut bounds = open_bounds(engine)?;
            let mut table = Vec::new();
            let mut worst = EXIT_OK;
            for (label, a, d) in rows {
                let reference = d.and_then(classical_n0);
                match bounds.n0_auto(&a) {
                    Ok((r, n0)) => table.push(Row { label, r: Some(r), n0: Ok(n0), reference }),
                    Err(e @ (Error::CapExceeded { .. } | Error::MultiplicityOverflow(_))) => {
                        worst = worst.max(EXIT_CAP);
                        table.push(Row { label, r: None, n0: Err(e.to_string()), reference });
                    }
                    Err(e) => return Err(e),
                }
            }
            match format {
                Format::Text => write!(out, "{}", render_table(&table))?,
                Format::Json => {
                    let rows: Vec<Value> = table
                        .iter()
                        .map(|row| {
                            json!({
                                "profile": row.label,
                                "r": row.r.map(|r| r.to_string()),
                                "n0": row.n0.as_ref().ok().map(BigInt::to_string),
                                "error": row.n0.as_ref().err(),
                                "reference": row.reference,
                            })
                        })
                        .collect();
                    let args = json!({ "degrees": degrees, "preset": preset.map(|_| "paper") });
                    let mut env = envelope("table", args, None, json!(rows));
                    if bounds.has_cache() {
                        env["cache"] = json!(bounds.stats());
                    }
                    print_json(out, &timed(env))?;
                }
            }
            Ok(worst)
        }
    }
}

struct Row {
    label: String,
    r: Option<i128>,
    n0: std::result::Result<BigInt, String>,
    reference: Option<&'static str>,
}

fn render_table(rows: &[Row]) -> String {
    let cells: Vec<[String; 4]> = rows
        .iter()
        .map(|row| {
            [
                row.label.clone(),
                row.r.map(|r| r.to_string()).unwrap_or_else(|| "-".into()),
                match &row.n0 {
                    Ok(n) => n.to_string(),
                    Err(e) => format!("error: {e}"),
                },
                row.reference.unwrap_or("-").to_string(),
            ]
        })
        .collect();
    let header = ["a", "r", "n0", "classical n0'"];
    let mut widths = header.map(|h| h.chars().count());
    for row in &cells {
        for (w, c) in widths.iter_mut().zip(row) {
            *w = (*w).max(c.chars().count());
        }
    }
    let line = |cols: [&str; 4]| {
        let mut s = String::new();
        for (i, c) in cols.iter().enumerate() {
            if i > 0 {
                s.push_str("  ");
            }
            let pad = widths[i] - c.chars().count();
            if i == 0 {
                s.push_str(c);
                s.push_str(&" ".repeat(pad));
            } else {
                s.push_str(&" ".repeat(pad));
                s.push_str(c);
            }
        }
        s.trim_end().to_string() + "\n"
    };
    let mut out = line(header);
    for row in &cells {
        out.push_str(&line([&row[0], &row[1], &row[2], &row[3]]));
    }
    out
}

fn parse_range(text: &str) -> Result<(u32, u32)> {
    let bad = || Error::InvalidArgument(format!("expected LO..HI, got {text:?}"));
    let (lo, hi) = text.split_once("..").ok_or_else(bad)?;
    let hi = hi.strip_prefix('=').unwrap_or(hi);
    let lo: u32 = lo.trim().parse().map_err(|_| bad())?;
    let hi: u32 = hi.trim().parse().map_err(|_| bad())?;
    if lo < 2 || hi < lo {
        return Err(Error::InvalidArgument(format!("need 2 <= LO <= HI, got {lo}..{hi}")));
    }
    Ok((lo, hi))
}

fn relation_name(r: RelationArg) -> &'static str {
    match r {
        RelationArg::Prec => "prec",
        RelationArg::Contain => "contain",
        RelationArg::Squig => "squig",
    }
}

fn leaf_name(l: LeafArg) -> &'static str {
    match l {
        LeafArg::NodeCount => "node-count",
        LeafArg::Zero => "zero",
    }
}
