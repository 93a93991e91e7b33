//! Command-line front end.
//!
//! Exit codes: 0 success, 1 rule violation or untypable input, 2 usage or
//! input error, 3 fuel exhausted.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use stratlam::derivation::json::{load_str, to_json_string};
use stratlam::derivation::{check, degree, rank, weight_at, Derivation};
use stratlam::inference::{infer_sn, DEFAULT_INFER_FUEL};
use stratlam::inter::to_inter;
use stratlam::numerals::{
    bound_harness, encode_num, iter_succ_derivation, iter_term, numeral_derivation, succ_derivation, succ_term, Bit,
    Report,
};
use stratlam::sta::{self, sta_degree, sta_rank, sta_weight_at};
use stratlam::term::{
    enumerate_closed_terms, is_sn, parse_term, prettify, reduce_to_nf, SnVerdict, Term, DEFAULT_REDUCE_FUEL,
    DEFAULT_SN_FUEL, MAX_ENUM_SIZE,
};
use stratlam::transform::{normalize_typed_with, Strategy};
use stratlam::types::{parse_type, TyvarNamer};
use stratlam::Error;

#[derive(Parser)]
#[command(name = "stratlam", version, about = "Stratified type assignment for the pure lambda calculus")]
struct Cli {
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check a derivation file (system STR or STA).
    Check { file: PathBuf },
    /// Infer a typing of a strongly normalizing term.
    Infer {
        term: String,
        #[arg(long, default_value_t = DEFAULT_INFER_FUEL)]
        fuel: u64,
        #[arg(long)]
        emit_derivation: Option<PathBuf>,
    },
    /// Normalize a term, through its typing when it has one.
    Reduce {
        term: String,
        #[arg(long, default_value_t = DEFAULT_REDUCE_FUEL)]
        fuel: u64,
        /// Print every step.
        #[arg(long)]
        trace: bool,
        /// Include weights at the rank in the trace.
        #[arg(long)]
        trace_weights: bool,
    },
    /// Size, rank, degree and weights of a derivation file.
    Measure {
        file: PathBuf,
        #[arg(long, value_delimiter = ',', default_values_t = vec![1u64, 2, 3])]
        r: Vec<u64>,
    },
    /// Decide strong normalization within a budget.
    Sn {
        term: String,
        #[arg(long, default_value_t = DEFAULT_SN_FUEL)]
        fuel: u64,
    },
    /// Translate a modal derivation or a stratified type.
    Translate(TranslateArgs),
    /// Numeral demonstrations with the step-bound check.
    Demo {
        #[command(subcommand)]
        which: Demo,
    },
    /// Compare the normalization oracle with inference on all closed terms.
    Sweep {
        #[arg(long)]
        max_size: u64,
        #[arg(long, default_value_t = DEFAULT_INFER_FUEL)]
        fuel: u64,
        /// Write the CSV here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
#[command(group(clap::ArgGroup::new("mode").required(true).args(["from", "to"])))]
struct TranslateArgs {
    /// Source system of a derivation file.
    #[arg(long, value_name = "SYSTEM")]
    from: Option<Source>,
    /// Target syntax for a type.
    #[arg(long, value_name = "SYNTAX")]
    to: Option<Target>,
    /// Derivation file, or the type text with `--to`.
    #[arg(value_name = "INPUT", required = true)]
    file: Option<String>,
    /// Write the translated derivation here.
    #[arg(long)]
    emit_derivation: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Source {
    Sta,
}

#[derive(Clone, Copy, ValueEnum)]
enum Target {
    Inter,
}

#[derive(Subcommand)]
enum Demo {
    /// `ITER_k succ_b` applied to a numeral.
    Iter {
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long, default_value_t = 0, value_parser = clap::value_parser!(u8).range(0..=1))]
        succ: u8,
        #[arg(long)]
        input: u64,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// A successor applied to a numeral.
    Succ {
        #[arg(long, default_value_t = 0, value_parser = clap::value_parser!(u8).range(0..=1))]
        bit: u8,
        #[arg(long)]
        input: u64,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// A numeral typing at a word type.
    Numeral {
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 1)]
        h: usize,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long)]
        emit_derivation: Option<PathBuf>,
    },
}

enum Failure {
    Violation(String),
    Usage(String),
    Fuel(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Violation(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Fuel(_) => 3,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Violation(m) | Failure::Usage(m) | Failure::Fuel(m) => f.write_str(m),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Fuel => Failure::Fuel(e.to_string()),
            Error::Parse(_) | Error::Json(_) => Failure::Usage(e.to_string()),
            _ => Failure::Violation(e.to_string()),
        }
    }
}

type CmdResult = Result<(), Failure>;

struct Out {
    json: bool,
}

impl Out {
    fn emit(&self, human: impl FnOnce() -> String, machine: impl FnOnce() -> Value) {
        if self.json {
            println!("{}", machine());
        } else {
            println!("{}", human());
        }
    }
}

fn parse(text: &str) -> Result<Term, Failure> {
    parse_term(text).map_err(|e| Failure::Usage(format!("term: {e}")))
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> CmdResult {
    fs::write(path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn system_of(text: &str) -> Result<String, Failure> {
    let v: Value = serde_json::from_str(text).map_err(|e| Failure::Usage(format!("json: {e}")))?;
    Ok(v.get("system").and_then(Value::as_str).unwrap_or("STR").to_string())
}

fn pretty_judgment(d: &Derivation) -> (String, String) {
    let mut namer = TyvarNamer::default();
    let ctx: Vec<String> = d.ctx().iter().map(|(x, t)| format!("{x}: {}", namer.rename(t))).collect();
    (ctx.join(", "), namer.rename(d.ty()).to_string())
}

fn cmd_check(out: &Out, file: &Path) -> CmdResult {
    let text = read(file)?;
    let system = system_of(&text)?;
    let loaded = if system == sta::json::SYSTEM {
        sta::json::load_str(&text).map(|_| ())
    } else {
        load_str(&text).map(|_| ())
    };
    match loaded {
        Ok(()) => {
            out.emit(|| "ok".into(), || json!({"ok": true, "system": system}));
            Ok(())
        }
        Err(Error::Violation(v)) => {
            out.emit(
                || format!("violation: {v}"),
                || json!({"ok": false, "reason": v.reason, "rule": v.rule.tag(), "path": v.path, "detail": v.detail}),
            );
            Err(Failure::Violation(v.reason.into()))
        }
        Err(Error::StaViolation(v)) => {
            out.emit(
                || format!("violation: {v}"),
                || json!({"ok": false, "reason": v.reason, "rule": v.rule.tag(), "path": v.path, "detail": v.detail}),
            );
            Err(Failure::Violation(v.reason.into()))
        }
        Err(e) => Err(e.into()),
    }
}

fn cmd_infer(out: &Out, term: &str, fuel: u64, emit: Option<&Path>) -> CmdResult {
    let m = parse(term)?;
    let d = infer_sn(&m, fuel)?;
    if let Some(p) = emit {
        write(p, &to_json_string(&d))?;
    }
    let (ctx, ty) = pretty_judgment(&d);
    out.emit(
        || {
            let mut s = ty.clone();
            if !ctx.is_empty() {
                s = format!("{ctx} |- {s}");
            }
            format!("{s}\ndegree: {}  rank: {}  size: {}", degree(&d), rank(&d), m.size())
        },
        || json!({"type": ty, "context": ctx, "degree": degree(&d), "rank": rank(&d), "size": m.size()}),
    );
    Ok(())
}

fn cmd_reduce(out: &Out, term: &str, fuel: u64, trace: bool, trace_weights: bool) -> CmdResult {
    let m = parse(term)?;
    match infer_sn(&m, DEFAULT_INFER_FUEL) {
        Ok(d) => {
            let r = rank(&d);
            let deg = degree(&d);
            let n = normalize_typed_with(&d, Strategy::LeftmostOutermost, &[r], fuel)?;
            let bound = (m.size() as u128).checked_pow(deg as u32 + 1).unwrap_or(u128::MAX);
            let nf = prettify(n.deriv.subject());
            out.emit(
                || {
                    let mut s = String::new();
                    if trace {
                        if trace_weights {
                            s += &format!("0  size {}  weight {}\n", m.size(), n.initial[0]);
                        }
                        for row in &n.trace {
                            s += &format!("{}  {}  size {}", row.step, row.position, row.subject_size);
                            if trace_weights {
                                s += &format!("  weight {}", row.weights[0]);
                            }
                            s.push('\n');
                        }
                    }
                    s + &format!("{nf}\nsteps: {}  bound: {bound}  typed: yes", n.steps)
                },
                || {
                    let mut v = json!({"normal_form": nf.to_string(), "steps": n.steps, "bound": bound.to_string(),
                        "degree": deg, "rank": r, "typed": true});
                    if trace {
                        let rows: Vec<Value> = n
                            .trace
                            .iter()
                            .map(|row| {
                                let mut o = json!({"step": row.step, "position": row.position, "size": row.subject_size});
                                if trace_weights {
                                    o["weight"] = json!(row.weights[0].to_string());
                                }
                                o
                            })
                            .collect();
                        v["trace"] = Value::Array(rows);
                    }
                    v
                },
            );
            Ok(())
        }
        Err(Error::Fuel) | Err(Error::Divergent) | Err(Error::Decomposition(_)) => {
            let (nf, steps) = reduce_to_nf(&m, fuel).map_err(|e| Failure::Fuel(e.to_string()))?;
            let nf = prettify(&nf);
            out.emit(
                || format!("{nf}\nsteps: {steps}  typed: no"),
                || json!({"normal_form": nf.to_string(), "steps": steps, "typed": false}),
            );
            Ok(())
        }
        Err(e) => Err(e.into()),
    }
}

fn cmd_measure(out: &Out, file: &Path, rs: &[u64]) -> CmdResult {
    let text = read(file)?;
    let (size, rk, deg, weights) = if system_of(&text)? == sta::json::SYSTEM {
        let d = sta::json::load_str(&text)?;
        let ws: Vec<String> = rs.iter().map(|&r| sta_weight_at(&d, r).to_string()).collect();
        (d.subject.size(), sta_rank(&d), sta_degree(&d), ws)
    } else {
        let d = load_str(&text)?;
        let ws: Vec<String> = rs.iter().map(|&r| weight_at(&d, r).to_string()).collect();
        (d.subject().size(), rank(&d), degree(&d), ws)
    };
    out.emit(
        || {
            let mut s = format!("size: {size}\nrank: {rk}\ndegree: {deg}");
            for (r, w) in rs.iter().zip(&weights) {
                s += &format!("\nweight at {r}: {w}");
            }
            s
        },
        || {
            let ws: serde_json::Map<String, Value> =
                rs.iter().zip(&weights).map(|(r, w)| (r.to_string(), json!(w))).collect();
            json!({"size": size, "rank": rk, "degree": deg, "weights": ws})
        },
    );
    Ok(())
}

fn cmd_sn(out: &Out, term: &str, fuel: u64) -> CmdResult {
    let m = parse(term)?;
    let v = is_sn(&m, fuel);
    let word = match v {
        SnVerdict::Yes => "yes",
        SnVerdict::No => "no",
        SnVerdict::Unknown => "unknown",
    };
    out.emit(|| word.into(), || json!({"sn": word}));
    if v == SnVerdict::Unknown {
        return Err(Failure::Fuel("fuel exhausted".into()));
    }
    Ok(())
}

fn cmd_translate(out: &Out, a: &TranslateArgs) -> CmdResult {
    let input = a.file.as_deref().ok_or_else(|| Failure::Usage("missing input".into()))?;
    if a.to.is_some() {
        let t = parse_type(input).map_err(|e| Failure::Usage(format!("type: {e}")))?;
        let i = to_inter(&t);
        out.emit(|| i.to_string(), || json!({"inter": i.to_string()}));
        return Ok(());
    }
    let d = sta::json::load_str(&read(Path::new(input))?)?;
    let t = sta::translate_derivation(&d)?;
    check(&t).map_err(|v| Failure::Violation(v.to_string()))?;
    let doc = to_json_string(&t);
    match &a.emit_derivation {
        Some(p) => {
            write(p, &doc)?;
            out.emit(
                || format!("{}\ndegree: {} (was {})", t.ty(), degree(&t), sta_degree(&d)),
                || json!({"type": t.ty().to_string(), "degree": degree(&t), "source_degree": sta_degree(&d)}),
            );
        }
        None => println!("{doc}"),
    }
    Ok(())
}

fn report_out(out: &Out, r: &Report, path: Option<&Path>) -> CmdResult {
    let v = json!({"output": r.output, "steps": r.steps, "size": r.size, "degree": r.degree,
        "bound": r.bound.to_string(), "max_size": r.max_size, "pass": r.pass});
    if let Some(p) = path {
        write(p, &serde_json::to_string_pretty(&v).expect("report serializes"))?;
    }
    out.emit(
        || {
            format!(
                "output: {}\nsteps: {}  max size: {}  bound: {}^{} = {}\n{}",
                r.output,
                r.steps,
                r.max_size,
                r.size,
                r.degree + 1,
                r.bound,
                if r.pass { "pass" } else { "fail" }
            )
        },
        || v.clone(),
    );
    if r.pass {
        Ok(())
    } else {
        Err(Failure::Violation("step bound exceeded".into()))
    }
}

fn bit(b: u8) -> Bit {
    if b == 0 {
        Bit::Zero
    } else {
        Bit::One
    }
}

fn cmd_demo(out: &Out, which: &Demo) -> CmdResult {
    match which {
        Demo::Iter { k, succ, input, report } => {
            if *k == 0 {
                return Err(Failure::Usage("--k must be at least 1".into()));
            }
            let d = iter_succ_derivation(bit(*succ), *k, 1, 1)?;
            let prog = Term::app(iter_term(*k), succ_term(bit(*succ)));
            report_out(out, &bound_harness(&prog, &d, &[*input])?, report.as_deref())
        }
        Demo::Succ { bit: b, input, report } => {
            let d = succ_derivation(bit(*b), 1, 1)?;
            report_out(out, &bound_harness(&succ_term(bit(*b)), &d, &[*input])?, report.as_deref())
        }
        Demo::Numeral { n, h, k, emit_derivation } => {
            if *h == 0 || *k == 0 {
                return Err(Failure::Usage("--h and --k must be at least 1".into()));
            }
            let t = numeral_derivation(*n, *h, *k)?;
            if let Some(p) = emit_derivation {
                write(p, &to_json_string(&t.derivation))?;
            }
            let d = &t.derivation;
            out.emit(
                || format!("{}\n: {}\ndegree: {}", encode_num(*n), d.ty(), degree(d)),
                || json!({"term": encode_num(*n).to_string(), "type": d.ty().to_string(), "degree": degree(d)}),
            );
            Ok(())
        }
    }
}

fn cmd_sweep(out: &Out, max_size: u64, fuel: u64, path: Option<&Path>) -> CmdResult {
    if max_size > MAX_ENUM_SIZE {
        return Err(Failure::Usage(format!("--max-size is limited to {MAX_ENUM_SIZE}")));
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["term", "size", "is_sn", "infer_ok", "degree", "steps", "bound", "bound_ok"])
        .expect("in-memory write");
    let (mut total, mut mismatches, mut over) = (0u64, 0u64, 0u64);
    for m in enumerate_closed_terms(max_size) {
        total += 1;
        let sn = is_sn(&m, DEFAULT_SN_FUEL);
        let inferred = infer_sn(&m, fuel).ok();
        let mut row = vec![
            m.to_string(),
            m.size().to_string(),
            format!("{sn:?}").to_lowercase(),
            inferred.is_some().to_string(),
        ];
        if (sn == SnVerdict::Yes) != inferred.is_some() {
            mismatches += 1;
        }
        match inferred {
            Some(d) => {
                let deg = degree(&d);
                let bound = (m.size() as u128).checked_pow(deg as u32 + 1).unwrap_or(u128::MAX);
                let n = normalize_typed_with(&d, Strategy::LeftmostOutermost, &[], DEFAULT_REDUCE_FUEL)?;
                let ok = u128::from(n.steps) <= bound && u128::from(n.max_size) <= bound;
                over += u64::from(!ok);
                row.extend([deg.to_string(), n.steps.to_string(), bound.to_string(), ok.to_string()]);
            }
            None => row.extend([String::new(), String::new(), String::new(), String::new()]),
        }
        w.write_record(&row).expect("in-memory write");
    }
    let csv = String::from_utf8(w.into_inner().expect("flush")).expect("utf-8");
    match path {
        Some(p) => write(p, &csv)?,
        None if !out.json => print!("{csv}"),
        None => {}
    }
    if out.json || path.is_some() {
        out.emit(
            || format!("terms: {total}  mismatches: {mismatches}  bound failures: {over}"),
            || json!({"terms": total, "mismatches": mismatches, "bound_failures": over}),
        );
    } else {
        eprintln!("terms: {total}  mismatches: {mismatches}  bound failures: {over}");
    }
    if mismatches + over > 0 {
        return Err(Failure::Violation(format!("{mismatches} mismatches, {over} bound failures")));
    }
    Ok(())
}

fn run(cli: Cli) -> CmdResult {
    let out = Out { json: cli.json };
    match &cli.cmd {
        Cmd::Check { file } => cmd_check(&out, file),
        Cmd::Infer { term, fuel, emit_derivation } => cmd_infer(&out, term, *fuel, emit_derivation.as_deref()),
        Cmd::Reduce { term, fuel, trace, trace_weights } => cmd_reduce(&out, term, *fuel, *trace || *trace_weights, *trace_weights),
        Cmd::Measure { file, r } => cmd_measure(&out, file, r),
        Cmd::Sn { term, fuel } => cmd_sn(&out, term, *fuel),
        Cmd::Translate(a) => cmd_translate(&out, a),
        Cmd::Demo { which } => cmd_demo(&out, which),
        Cmd::Sweep { max_size, fuel, out: path } => cmd_sweep(&out, *max_size, *fuel, path.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    // inference and reduction recurse on term and derivation depth
    let handle = std::thread::Builder::new()
        .stack_size(512 << 20)
        .spawn(move || run(cli))
        .expect("spawn worker");
    match handle.join() {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(f)) => {
            eprintln!("error: {f}");
            ExitCode::from(f.code())
        }
        Err(_) => ExitCode::from(101),
    }
}
