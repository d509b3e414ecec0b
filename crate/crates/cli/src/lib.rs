//! `polytile` command-line interface.

pub mod args;
pub mod cache;
pub mod report;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use polytile_core::condition_e::EOptions;
use polytile_core::families::{search_case2_at, Case2Record};
use polytile_core::lemmas::{lemma_l7, scan_range};
use polytile_core::{
    check_e_with, check_k, classify, lemma_l1_part_i, lemma_l1_part_ii, lemma_l2_count, AngleTriple,
    EReport, EquationSolution, Error,
};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::args::{parse_l2, parse_l7, parse_triple, parse_vertex, L2Args};
use crate::cache::{Case2Cache, CorruptCache};
use crate::report::{render, run_report};

/// Relative `--out` paths are resolved against this directory when set.
pub const OUTPUT_DIR_ENV: &str = "POLYTILE_OUTPUT_DIR";

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAIL: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_UNKNOWN: u8 = 3;
pub const EXIT_INTERNAL: u8 = 4;

#[derive(Debug, Parser)]
#[command(name = "polytile", version, about = "Exact K/E screening of triangles for regular-polygon tilings")]
pub struct Cli {
    /// Worker threads; output does not depend on it.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Condition (K) for a triple and vertex equations.
    CheckK(CheckKArgs),
    /// Condition (E) for a triple.
    CheckE(CheckEArgs),
    /// Range search over Case II candidates.
    Search(SearchArgs),
    /// Witness tables for the residue lemmas.
    Lemmas(LemmaArgs),
    /// Survivors of (K) and (E) at one N, labelled by family.
    Classify(ClassifyArgs),
}

#[derive(Debug, Args)]
pub struct CheckKArgs {
    #[arg(long, value_parser = parse_triple, value_name = "A,B,C,N")]
    pub triple: AngleTriple,
    #[arg(long, value_name = "N")]
    pub ngon: u64,
    #[arg(long, value_parser = parse_vertex, value_name = "P,Q,R", required = true)]
    pub vertex: Vec<EquationSolution>,
}

#[derive(Debug, Args)]
pub struct CheckEArgs {
    #[arg(long, value_parser = parse_triple, value_name = "A,B,C,N")]
    pub triple: AngleTriple,
    #[arg(long, value_name = "N")]
    pub ngon: u64,
    /// Cap on interior equations in a witness (default 4·N·n).
    #[arg(long)]
    pub bound: Option<u64>,
    /// Restrict vertex equations (repeatable).
    #[arg(long, value_parser = parse_vertex, value_name = "P,Q,R")]
    pub vertex: Vec<EquationSolution>,
    /// Skip the balance-functional refutation.
    #[arg(long)]
    pub no_refute: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    #[arg(long, required = true)]
    pub case2: bool,
    #[arg(long)]
    pub from: u64,
    #[arg(long)]
    pub to: u64,
    #[arg(long)]
    pub with_e: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// NDJSON cache; completed N are read back and skipped.
    #[arg(long, value_name = "CACHE")]
    pub resume: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[group(skip)]
#[command(group(ArgGroup::new("lemma").required(true).multiple(false).args(["l1_i", "l1_ii", "l7", "l2"])))]
pub struct LemmaArgs {
    #[arg(long = "l1-i", requires_all = ["from", "to"])]
    pub l1_i: bool,
    #[arg(long = "l1-ii", requires_all = ["from", "to"])]
    pub l1_ii: bool,
    #[arg(long, value_parser = parse_l7, value_name = "A,n,N,N'")]
    pub l7: Option<[u64; 4]>,
    #[arg(long, value_parser = parse_l2, value_name = "a,c,N,m,u")]
    pub l2: Option<L2Args>,
    #[arg(long)]
    pub from: Option<u64>,
    #[arg(long)]
    pub to: Option<u64>,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    #[arg(long, value_name = "N")]
    pub ngon: u64,
    /// Free-angle denominator bound (default 10·N).
    #[arg(long)]
    pub max_denom: Option<u64>,
}

/// Parses `argv`, runs the command and returns the process exit code.
pub fn main_with_args<I, T>(argv: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match run(cli, &mut std::io::stdout()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            exit_code_for(&e)
        }
    }
}

fn exit_code_for(e: &anyhow::Error) -> u8 {
    if e.downcast_ref::<CorruptCache>().is_some() {
        return EXIT_USAGE;
    }
    match e.downcast_ref::<Error>() {
        Some(Error::Internal(_)) | Some(Error::Overflow(_)) => EXIT_INTERNAL,
        Some(_) => EXIT_USAGE,
        None => EXIT_INTERNAL,
    }
}

pub fn run<W: Write + Send>(cli: Cli, out: &mut W) -> Result<u8> {
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            return Err(Error::InvalidInput("--jobs must be positive".into()).into());
        }
        let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs).build()?;
        return pool.install(|| dispatch(cli.command, out));
    }
    dispatch(cli.command, out)
}

fn dispatch(command: Command, out: &mut impl Write) -> Result<u8> {
    match command {
        Command::CheckK(a) => cmd_check_k(a, out),
        Command::CheckE(a) => cmd_check_e(a, out),
        Command::Search(a) => cmd_search(a, out),
        Command::Lemmas(a) => cmd_lemmas(a, out),
        Command::Classify(a) => cmd_classify(a, out),
    }
}

fn emit(out: &mut impl Write, report: &Value) -> Result<()> {
    out.write_all(render(report).as_bytes())?;
    Ok(())
}

fn vertex_list(eqs: &[EquationSolution]) -> Value {
    eqs.iter().map(|e| json!([e.p, e.q, e.r])).collect()
}

fn cmd_check_k(a: CheckKArgs, out: &mut impl Write) -> Result<u8> {
    let start = Instant::now();
    let report = check_k(&a.triple, a.ngon, &a.vertex)?;
    let code = if report.passed() { EXIT_OK } else { EXIT_FAIL };
    let inputs = json!({
        "triple": a.triple.to_string(),
        "ngon": a.ngon,
        "vertex": vertex_list(&a.vertex),
    });
    emit(out, &run_report("check-k", inputs, &report, start.elapsed())?)?;
    Ok(code)
}

fn cmd_check_e(a: CheckEArgs, out: &mut impl Write) -> Result<u8> {
    let start = Instant::now();
    let options = EOptions {
        bound: a.bound,
        refute: !a.no_refute,
        vertex_equations: (!a.vertex.is_empty()).then(|| a.vertex.clone()),
        ..EOptions::default()
    };
    let bound = a.bound.unwrap_or(4u64.saturating_mul(a.ngon).saturating_mul(a.triple.n()));
    let report = check_e_with(&a.triple, a.ngon, &options)?;
    let code = match report {
        EReport::Feasible { .. } => EXIT_OK,
        EReport::Infeasible { .. } => EXIT_FAIL,
        EReport::Unknown { .. } => EXIT_UNKNOWN,
    };
    let inputs = json!({
        "triple": a.triple.to_string(),
        "ngon": a.ngon,
        "bound": bound,
        "vertex": if a.vertex.is_empty() { Value::Null } else { vertex_list(&a.vertex) },
        "refute": !a.no_refute,
    });
    emit(out, &run_report("check-e", inputs, &report, start.elapsed())?)?;
    Ok(code)
}

fn resolve_output(path: &Path) -> PathBuf {
    match std::env::var_os(OUTPUT_DIR_ENV) {
        Some(dir) if path.is_relative() => Path::new(&dir).join(path),
        _ => path.to_owned(),
    }
}

/// Records for `from..=to`, reusing and extending the cache when given.
pub fn case2_records(from: u64, to: u64, with_e: bool, cache: Option<&Path>) -> Result<Vec<Case2Record>> {
    if from < 3 || from > to {
        return Err(Error::InvalidInput(format!("need 3 <= from <= to, got {from}..{to}")).into());
    }
    let cache = cache.map(|p| Case2Cache::open(p, with_e)).transpose()?;
    let missing: Vec<u64> = (from..=to)
        .filter(|n| cache.as_ref().is_none_or(|c| c.get(*n).is_none()))
        .collect();
    let computed: Vec<Case2Record> = missing
        .par_iter()
        .map(|&n| {
            let record = search_case2_at(n, with_e)?;
            if let Some(c) = &cache {
                c.append(&record)?;
            }
            Ok(record)
        })
        .collect::<Result<_>>()?;
    let mut computed = computed.into_iter().peekable();
    let mut records = Vec::new();
    for n in from..=to {
        match cache.as_ref().and_then(|c| c.get(n)) {
            Some(r) => records.push(r.clone()),
            None => records.push(computed.next().expect("one computed record per missing N")),
        }
    }
    Ok(records)
}

fn survivors_csv(records: &[Case2Record]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["N", "u", "s", "t", "a", "b", "c", "n", "k_verdict", "e_verdict"])?;
    for r in records {
        for s in &r.survivors {
            let [a, b, c] = s.triple.coefficients();
            w.write_record([
                r.sides.to_string(),
                s.params.u.to_string(),
                s.params.s.to_string(),
                s.params.t.to_string(),
                a.to_string(),
                b.to_string(),
                c.to_string(),
                s.triple.n().to_string(),
                "pass".to_string(),
                s.e.as_ref().map_or("", |e| e.label()).to_string(),
            ])?;
        }
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

fn cmd_search(a: SearchArgs, out: &mut impl Write) -> Result<u8> {
    let start = Instant::now();
    let records = case2_records(a.from, a.to, a.with_e, a.resume.as_deref())?;
    let text = match a.format {
        Format::Csv => survivors_csv(&records)?,
        Format::Json => {
            let inputs = json!({
                "mode": "case2",
                "from": a.from,
                "to": a.to,
                "with_e": a.with_e,
                "format": "json",
            });
            let with_survivors: Vec<u64> =
                records.iter().filter(|r| !r.survivors.is_empty()).map(|r| r.sides).collect();
            let results = json!({
                "survivor_ngons": with_survivors,
                "max_candidates": records.iter().map(|r| r.candidates).max(),
                "records": records,
            });
            render(&run_report("search", inputs, results, start.elapsed())?)
        }
    };
    match a.out {
        Some(path) => {
            let path = resolve_output(&path);
            std::fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
        }
        None => out.write_all(text.as_bytes())?,
    }
    Ok(EXIT_OK)
}

fn range(a: &LemmaArgs) -> Result<(u64, u64)> {
    match (a.from, a.to) {
        (Some(from), Some(to)) if from <= to => Ok((from, to)),
        (Some(from), Some(to)) => bail!(Error::InvalidInput(format!("--from {from} > --to {to}"))),
        _ => bail!(Error::InvalidInput("--from and --to are required".into())),
    }
}

fn cmd_lemmas(a: LemmaArgs, out: &mut impl Write) -> Result<u8> {
    let start = Instant::now();
    let (inputs, results, code) = if a.l1_i || a.l1_ii {
        let (from, to) = range(&a)?;
        let (name, min) = if a.l1_i { ("l1-i", 26) } else { ("l1-ii", 43) };
        if from < min {
            bail!(Error::InvalidInput(format!("{name} needs --from >= {min}")));
        }
        let rows: Vec<Value> = if a.l1_i {
            scan_range(from, to, lemma_l1_part_i)
                .into_iter()
                .filter(|(n, _)| n % 2 == 0)
                .map(|(n, r)| match r {
                    Ok((k, k2)) => json!({"ngon": n, "k": k, "k_prime": k2}),
                    Err(e) => json!({"ngon": n, "error": e.to_string()}),
                })
                .collect()
        } else {
            scan_range(from, to, lemma_l1_part_ii)
                .into_iter()
                .map(|(n, r)| match r {
                    Ok(k) => json!({"ngon": n, "k": k}),
                    Err(e) => json!({"ngon": n, "error": e.to_string()}),
                })
                .collect()
        };
        let failures = rows.iter().filter(|r| r.get("error").is_some()).count();
        let code = if failures == 0 { EXIT_OK } else { EXIT_FAIL };
        (
            json!({"lemma": name, "from": from, "to": to}),
            json!({"rows": rows, "failures": failures}),
            code,
        )
    } else if let Some([x, n, sides, shift]) = a.l7 {
        let inputs = json!({"lemma": "l7", "a": x, "n": n, "ngon": sides, "shift": shift});
        match lemma_l7(x, n, sides, shift) {
            Ok(outcome) => (inputs, serde_json::to_value(outcome)?, EXIT_OK),
            Err(Error::Internal(msg)) => (inputs, json!({"error": msg}), EXIT_FAIL),
            Err(e) => return Err(e.into()),
        }
    } else if let Some(l2) = a.l2 {
        let r = lemma_l2_count(&l2.start, &l2.length_factor, l2.sides, l2.modulus, l2.residue)?;
        let inputs = json!({
            "lemma": "l2",
            "a": l2.start.to_string(),
            "c": l2.length_factor.to_string(),
            "ngon": l2.sides,
            "m": l2.modulus,
            "u": l2.residue,
        });
        (inputs, serde_json::to_value(r)?, EXIT_OK)
    } else {
        unreachable!("clap requires one lemma flag")
    };
    emit(out, &run_report("lemmas", inputs, results, start.elapsed())?)?;
    Ok(code)
}

fn cmd_classify(a: ClassifyArgs, out: &mut impl Write) -> Result<u8> {
    let start = Instant::now();
    let max_denom = a.max_denom.unwrap_or(10 * a.ngon);
    let c = classify(a.ngon, max_denom)?;
    let inputs = json!({"ngon": a.ngon, "max_denom": max_denom});
    emit(out, &run_report("classify", inputs, &c, start.elapsed())?)?;
    Ok(EXIT_OK)
}
