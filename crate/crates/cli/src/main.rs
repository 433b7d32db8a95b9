use std::collections::HashMap;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde_json::{json, Value};

use polyfus::codec;
use polyfus::field::Field;
use polyfus::fusion::system::describe_system;
use polyfus::report::{CheckReport, Status};
use polyfus::sgroup::PGroup;
use polyfus::structure::series::{central_series, Mode, SeriesKind};
use polyfus::structure::{exponent, shape_set, standard_subgroups, Shape};
use polyfus::verify::{self, RunConfig, Selection, Tier};

/// Largest group whose multiplication table `export --table` will write.
const TABLE_CAP: u128 = 100_000;

#[derive(Parser)]
#[command(name = "polyfus", version, about = "Build and check the groups S_n(q), S_Lambda(q) and their fusion data")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct FieldArgs {
    /// characteristic
    #[arg(short)]
    p: u32,
    /// degree of GF(q) over GF(p)
    #[arg(short, default_value_t = 1)]
    m: u32,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print a structural report for `Sn:<n>` or `SLambda`.
    Construct {
        #[command(flatten)]
        field: FieldArgs,
        target: String,
        #[arg(long)]
        json: bool,
    },
    /// Run a verification suite, `all`, or `list` the registered suites.
    Verify {
        suite: String,
        #[arg(short)]
        p: Option<u32>,
        #[arg(short)]
        m: Option<u32>,
        #[arg(short)]
        n: Option<usize>,
        #[arg(long)]
        system: Option<String>,
        #[arg(long)]
        json: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// exhaustive or sampled
        #[arg(long, value_parser = parse_tier)]
        tier: Option<Tier>,
    },
    /// Write a series or the full multiplication table as JSON.
    Export {
        #[command(flatten)]
        field: FieldArgs,
        target: String,
        /// upper, lower, weight or chain
        #[arg(long, conflicts_with = "table")]
        series: Option<String>,
        #[arg(long)]
        table: bool,
        /// brute, structural or linear
        #[arg(long, default_value = "linear")]
        mode: String,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Describe a named fusion system such as `F*(n,q,R)` or `F*_Lambda(9)`.
    Describe {
        system: String,
        #[arg(short)]
        p: Option<u32>,
        #[arg(short)]
        m: Option<u32>,
        #[arg(short)]
        n: Option<usize>,
        #[arg(long)]
        json: bool,
    },
}

fn parse_tier(s: &str) -> Result<Tier, String> {
    Tier::parse(s).ok_or_else(|| format!("unknown tier {s:?} (expected exhaustive or sampled)"))
}

enum Failure {
    Usage(String),
    Checks,
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.cmd {
        Cmd::Construct { field, target, json } => construct(&field, &target, json),
        Cmd::Verify { suite, p, m, n, system, json, seed, jobs, tier } => {
            run_verify(&suite, Selection { p, m, n, system }, RunConfig { seed, tier }, json, jobs)
        }
        Cmd::Export { field, target, series, table, mode, out } => {
            export(&field, &target, series.as_deref(), table, &mode, out)
        }
        Cmd::Describe { system, p, m, n, json } => describe(&system, p, m, n, json),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Checks) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("polyfus: {msg}");
            ExitCode::from(2)
        }
    }
}

fn group(field: &FieldArgs, target: &str) -> Result<PGroup, Failure> {
    if field.p == 2 {
        return Err(Failure::Usage("p must be an odd prime; characteristic 2 is not supported".into()));
    }
    let kind = codec::parse_target(target)?;
    let f = Field::new(field.p, field.m)?;
    Ok(PGroup::new(f, kind)?)
}

/// Orders beyond `u64` are written as decimal strings.
fn num(x: u128) -> Value {
    match u64::try_from(x) {
        Ok(v) => json!(v),
        Err(_) => json!(x.to_string()),
    }
}

fn series_orders(g: &PGroup, kind: SeriesKind) -> Value {
    match central_series(g, kind, Mode::Linear) {
        Ok(r) => Value::Array(r.orders.into_iter().map(num).collect()),
        Err(_) => Value::Null,
    }
}

fn construct(field: &FieldArgs, target: &str, as_json: bool) -> Result<(), Failure> {
    let g = group(field, target)?;
    let subs = standard_subgroups(&g)?;
    let order_of = |name: &str| subs.get(name).and_then(|h| h.order().ok()).map(num).unwrap_or(Value::Null);
    let vs = subs.get("[V,S]").and_then(|h| h.order().ok());
    let exp = if g.is_enumerable() { json!(exponent(&g, &shape_set(&g, &Shape::Whole)?)) } else { Value::Null };
    let report = json!({
        "group": g.kind().name(),
        "target": verify::target_name(Some(g.kind())),
        "p": field.p,
        "m": field.m,
        "q": g.field().q(),
        "order": num(g.order()),
        "upper_central": series_orders(&g, SeriesKind::UpperCentral),
        "lower_central": series_orders(&g, SeriesKind::LowerCentral),
        "center_order": order_of("Z(S)"),
        "v_mod_vs_order": vs.map(|o| num(g.v_order() / o)).unwrap_or(Value::Null),
        "exponent": exp,
        "r_order": order_of("R"),
        "q_order": order_of("Q"),
    });
    let mut out = io::stdout().lock();
    if as_json {
        writeln!(out, "{report}")?;
    } else {
        writeln!(out, "{}({})", g.kind().name(), g.field().q())?;
        for key in [
            "order",
            "upper_central",
            "lower_central",
            "center_order",
            "v_mod_vs_order",
            "exponent",
            "r_order",
            "q_order",
        ] {
            let v = &report[key];
            let shown = if v.is_null() { "n/a".to_string() } else { v.to_string() };
            writeln!(out, "  {key:<15} {shown}")?;
        }
    }
    Ok(())
}

fn params_text(r: &CheckReport) -> String {
    r.params.iter().map(|(k, v)| format!("{k}={}", v.as_str().map(str::to_string).unwrap_or(v.to_string()))).collect::<Vec<_>>().join(" ")
}

fn run_verify(suite: &str, sel: Selection, cfg: RunConfig, as_json: bool, jobs: usize) -> Result<(), Failure> {
    let mut out = io::stdout().lock();
    if suite == "list" {
        for s in verify::SUITES {
            writeln!(out, "{:<22} {}", s.id, s.summary)?;
        }
        return Ok(());
    }
    let plan = verify::plan(suite, &sel, &cfg)?;
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build()?;
    let reports: Vec<CheckReport> = pool.install(|| plan.par_iter().flat_map_iter(verify::run_job).collect());
    let mut tally = [0usize; 3];
    for r in &reports {
        tally[r.status as usize] += 1;
        if as_json {
            writeln!(out, "{}", r.to_json_line())?;
        } else {
            let status = match r.status {
                Status::Verified => "ok",
                Status::Failed => "FAILED",
                Status::Skipped => "skipped",
            };
            write!(out, "{status:<8} {:<34} {}", r.check, params_text(r))?;
            if let Some(w) = &r.witness {
                write!(out, "  {w}")?;
            }
            writeln!(out)?;
            if !r.counts.is_empty() {
                let counts: Vec<String> = r.counts.iter().map(|(k, v)| format!("{k}={v}")).collect();
                writeln!(out, "         {}", counts.join(" "))?;
            }
        }
    }
    let summary = format!("{} checks: {} verified, {} failed, {} skipped", reports.len(), tally[0], tally[1], tally[2]);
    if as_json {
        eprintln!("{summary}");
    } else {
        writeln!(out, "{summary}")?;
    }
    if tally[Status::Failed as usize] > 0 {
        return Err(Failure::Checks);
    }
    Ok(())
}

fn export(
    field: &FieldArgs,
    target: &str,
    series: Option<&str>,
    table: bool,
    mode: &str,
    out: Option<PathBuf>,
) -> Result<(), Failure> {
    let g = group(field, target)?;
    let header = |v: &mut Value| {
        v["target"] = json!(verify::target_name(Some(g.kind())));
        v["p"] = json!(field.p);
        v["m"] = json!(field.m);
        v["order"] = num(g.order());
    };
    let mut doc = if table {
        multiplication_table(&g)?
    } else {
        let name = series.unwrap_or("upper");
        let kind = SeriesKind::parse(name).ok_or_else(|| Failure::Usage(format!("unknown series {name:?}")))?;
        let mode = match mode {
            "brute" => Mode::Brute,
            "structural" => Mode::Structural,
            "linear" => Mode::Linear,
            other => return Err(Failure::Usage(format!("unknown mode {other:?}"))),
        };
        serde_json::to_value(central_series(&g, kind, mode)?)?
    };
    header(&mut doc);
    let text = serde_json::to_string(&doc)? + "\n";
    match out {
        Some(path) => fs::write(&path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?,
        None => io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

/// Rows `[i, j, k]` with `e_i e_j = e_k`, elements sorted by coefficient tuple.
fn multiplication_table(g: &PGroup) -> Result<Value, Failure> {
    if g.order() > TABLE_CAP {
        return Err(Failure::Usage(format!(
            "|S| = {} exceeds the table export cap {TABLE_CAP}",
            g.order()
        )));
    }
    let f = g.field();
    let n = g.order() as u64;
    let key = |idx: u64| {
        let x = g.decode(idx);
        std::iter::once(x.c).chain(x.v).flat_map(|a| f.coeffs(a)).collect::<Vec<u32>>()
    };
    let mut order: Vec<(Vec<u32>, u64)> = (0..n).map(|i| (key(i), i)).collect();
    order.sort_unstable();
    let pos: HashMap<u64, usize> = order.iter().enumerate().map(|(k, (_, i))| (*i, k)).collect();
    let elems: Vec<_> = order.iter().map(|(_, i)| g.decode(*i)).collect();
    let mut rows = Vec::with_capacity(elems.len() * elems.len());
    let mut closed = true;
    for (i, a) in elems.iter().enumerate() {
        for (j, b) in elems.iter().enumerate() {
            match pos.get(&g.encode(&g.mul(a, b))) {
                Some(&k) => rows.push([i, j, k]),
                None => closed = false,
            }
        }
    }
    Ok(json!({
        "elements": elems.iter().map(|e| codec::s_element_to_json(g, e)).collect::<Vec<_>>(),
        "closed": closed,
        "table": rows,
    }))
}

fn describe(system: &str, p: Option<u32>, m: Option<u32>, n: Option<usize>, as_json: bool) -> Result<(), Failure> {
    let d = describe_system(system, p, m, n)?;
    let text = if as_json { serde_json::to_string(&d)? } else { serde_json::to_string_pretty(&d)? };
    writeln!(io::stdout().lock(), "{text}")?;
    Ok(())
}
