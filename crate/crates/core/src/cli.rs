//! Argument parsing and JSON reports for the `linmono` binary.
//!
//! Every invocation produces one compact JSON document on standard output
//! (one per input line with `--batch`) and a short summary on standard
//! error. Exit codes: 0 for a decided verdict or a passing check, 2 for an
//! inconclusive verdict, 3 for a failing check, 1 for errors.

use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::arith;
use crate::engine::{self, AlphaPoint, AnalyzeOptions, GroupVerdict};
use crate::error::{Error, Result};
use crate::ff::{FieldCtx, CARDINALITY_CAP};
use crate::group::{self, SingerModel};
use crate::linpoly::LinPoly;

/// JSON schema shared by every report.
pub const REPORT_SCHEMA: &str = include_str!("../schema/report.schema.json");

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;
pub const EXIT_FAILED_CHECK: i32 = 3;

const MAX_BUDGET: usize = 1_000_000;

#[derive(Parser, Debug)]
#[command(
    name = "linmono",
    version,
    about = "Galois groups of L(x) + tx over F_q(t) for q-linearized L",
    subcommand_required = false,
    arg_required_else_help = true
)]
struct Cli {
    /// Print the JSON schema of every report and exit
    #[arg(long)]
    json_schema: bool,
    #[command(subcommand)]
    command: Option<Cmd>,
}

#[derive(Args, Debug, Clone)]
struct FieldArgs {
    /// Field size: a prime power such as 9 or 3^2, or a tower such as 3^2+3
    #[arg(long)]
    q: Option<String>,
    /// Characteristic, as an alternative to --q
    #[arg(long)]
    p: Option<u64>,
    /// Degree over F_p, used with --p
    #[arg(long)]
    m: Option<usize>,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Seed for tower moduli of sampling fields and for random sampling
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the JSON report to this file instead of standard output
    #[arg(long)]
    output: Option<PathBuf>,
    /// Run once per line of this file, appending the line's arguments
    #[arg(long)]
    batch: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
struct LinArgs {
    #[command(flatten)]
    field: FieldArgs,
    /// Coefficients a_0,a_1,...,a_n of L; nested [..] lists for extension fields
    #[arg(long)]
    lin: Option<String>,
    /// Expected q-degree of L
    #[arg(long)]
    n: Option<usize>,
    /// Largest k for the sampling fields F_{q^k} (default n + 3)
    #[arg(long)]
    kmax: Option<usize>,
    /// Random points per field once q^k exceeds the exhaustive limit
    #[arg(long, default_value_t = engine::DEFAULT_BUDGET)]
    budget: usize,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug, Clone)]
struct GroupArgs {
    #[command(flatten)]
    field: FieldArgs,
    /// Dimension n
    #[arg(long)]
    n: usize,
    #[command(flatten)]
    common: Common,
}

#[derive(Subcommand, Debug, Clone)]
enum Cmd {
    /// Identify the Galois group of L(x) + tx and attach evidence
    Analyze(LinArgs),
    /// List Frobenius cycle types of specializations
    Sample(LinArgs),
    /// Cycle-type census of GL(n,q) or of the Singer normalizer
    Census {
        #[command(flatten)]
        args: GroupArgs,
        /// Only the normalizer N(C) = <S, F> of a Singer cycle
        #[arg(long)]
        normalizer_only: bool,
    },
    /// Singer cycle and Frobenius matrices from one primitive model
    Singer(GroupArgs),
    /// Exhaustive checks of the finite statements
    Verify {
        #[command(subcommand)]
        check: Check,
    },
}

#[derive(Subcommand, Debug, Clone)]
enum Check {
    /// Maps on F_q with L(x)/x always a square or zero
    Gmg {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Discriminant square class of L(x)/x against the closed form
    Disc(GroupArgs),
    /// Factorization of x^{q^n} - x and the forcing step
    Identity(GroupArgs),
    /// Even permutation action of GL(n,q) in characteristic 2
    Alt2(GroupArgs),
    /// Structure of the Singer normalizer
    Normalizer(GroupArgs),
}

/// `F_{p^m}`, optionally followed by one more tower step of degree `step`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FieldSpec {
    pub p: u64,
    pub m: usize,
    pub step: Option<usize>,
}

impl FieldSpec {
    /// The base field uses seed 0 so coefficient encodings do not depend on `--seed`.
    pub fn build(&self) -> Result<FieldCtx> {
        let f = FieldCtx::make(self.p, self.m, 0)?;
        match self.step {
            Some(k) => f.extend(k, 0),
            None => Ok(f),
        }
    }

    pub fn parse(s: &str) -> Result<FieldSpec> {
        let bad = || Error::Parse(format!("--q: cannot read field size {s:?}"));
        let (head, step) = match s.split_once('+') {
            Some((h, k)) => (h, Some(k.trim().parse::<usize>().map_err(|_| bad())?)),
            None => (s, None),
        };
        let (p, m) = match head.split_once('^') {
            Some((p, m)) => (p.trim().parse::<u64>().map_err(|_| bad())?, m.trim().parse::<usize>().map_err(|_| bad())?),
            None => {
                let q = head.trim().parse::<u64>().map_err(|_| bad())?;
                let (p, m) = arith::prime_power(q).ok_or_else(|| Error::Parse(format!("--q: {q} is not a prime power")))?;
                (p, m as usize)
            }
        };
        if !arith::is_prime(p) {
            return Err(Error::Parse(format!("--q: {p} is not prime")));
        }
        if m == 0 || step == Some(0) {
            return Err(Error::Parse("--q: degrees must be at least 1".into()));
        }
        Ok(FieldSpec { p, m, step })
    }
}

#[derive(Clone, Debug)]
pub enum Task {
    Schema,
    Analyze { lin: LinPoly, n: Option<usize>, kmax: usize, budget: usize },
    Sample { lin: LinPoly, kmax: usize, budget: usize },
    Census { field: FieldCtx, n: usize, normalizer_only: bool },
    Singer { field: FieldCtx, n: usize },
    VerifyGmg { field: FieldCtx },
    VerifyDisc { field: FieldCtx, n: usize },
    VerifyIdentity { field: FieldCtx, n: usize },
    VerifyAlt2 { field: FieldCtx, n: usize },
    VerifyNormalizer { field: FieldCtx, n: usize },
    /// Rerun `base` once per line of `path`, appending that line's arguments.
    Batch { path: PathBuf, base: Vec<String> },
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub task: Task,
    pub seed: u64,
    pub output: Option<PathBuf>,
}

#[derive(Debug)]
pub enum ArgsError {
    /// `--help` or `--version` output.
    Display(String),
    Usage(String),
}

impl std::fmt::Display for ArgsError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ArgsError::Display(s) | ArgsError::Usage(s) => f.write_str(s.trim_end()),
        }
    }
}

fn usage(e: Error) -> ArgsError {
    ArgsError::Usage(e.to_string())
}

fn field_of(args: &FieldArgs) -> Result<FieldCtx> {
    let spec = match (&args.q, args.p) {
        (Some(_), Some(_)) => return Err(Error::Parse("use either --q or --p/--m".into())),
        (Some(q), None) => {
            if args.m.is_some() {
                return Err(Error::Parse("--m goes with --p, not --q".into()));
            }
            FieldSpec::parse(q)?
        }
        (None, Some(p)) => {
            if !arith::is_prime(p) {
                return Err(Error::Parse(format!("--p: {p} is not prime")));
            }
            let m = args.m.unwrap_or(1);
            if m == 0 {
                return Err(Error::Parse("--m: must be at least 1".into()));
            }
            FieldSpec { p, m, step: None }
        }
        (None, None) => return Err(Error::Parse("missing --q (or --p)".into())),
    };
    spec.build().map_err(|e| Error::Parse(format!("--q: {e}")))
}

fn check_kmax(field: &FieldCtx, kmax: usize) -> Result<()> {
    let fits = arith::checked_pow(field.order(), kmax as u32).is_some_and(|v| v <= CARDINALITY_CAP);
    if kmax == 0 || !fits {
        return Err(Error::Parse(format!("--kmax: {kmax} outside 1..=log_q(2^40)")));
    }
    Ok(())
}

fn lin_task(args: &LinArgs, analyze: bool) -> Result<Task> {
    let field = field_of(&args.field)?;
    let text = args.lin.as_deref().ok_or_else(|| Error::Parse("missing --lin".into()))?;
    let lin = LinPoly::parse(&field, text).map_err(|e| Error::Parse(format!("--lin: {e}")))?;
    if let Some(n) = args.n {
        if n != lin.q_degree() {
            return Err(Error::Parse(format!("--n: declared {n} but --lin has q-degree {}", lin.q_degree())));
        }
    }
    if !lin.is_monic() {
        return Err(Error::Parse("--lin: L must be monic".into()));
    }
    let kmax = args.kmax.unwrap_or_else(|| engine::default_kmax(lin.q_degree()));
    check_kmax(&field, kmax)?;
    if args.budget == 0 || args.budget > MAX_BUDGET {
        return Err(Error::Parse(format!("--budget: {} outside 1..={MAX_BUDGET}", args.budget)));
    }
    Ok(if analyze {
        Task::Analyze { lin, n: args.n, kmax, budget: args.budget }
    } else {
        Task::Sample { lin, kmax, budget: args.budget }
    })
}

fn group_field(args: &GroupArgs) -> Result<FieldCtx> {
    if args.n == 0 {
        return Err(Error::Parse("--n: must be at least 1".into()));
    }
    field_of(&args.field)
}

/// Parses `argv` (including the program name) into a validated [`RunConfig`].
pub fn parse_args<I, T>(argv: I) -> std::result::Result<RunConfig, ArgsError>
where
    I: IntoIterator<Item = T>,
    T: Into<String>,
{
    let argv: Vec<String> = argv.into_iter().map(Into::into).collect();
    let cli = Cli::try_parse_from(&argv).map_err(|e| match e.kind() {
        clap::error::ErrorKind::DisplayHelp
        | clap::error::ErrorKind::DisplayVersion
        | clap::error::ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => ArgsError::Display(e.to_string()),
        _ => ArgsError::Usage(e.to_string()),
    })?;
    if cli.json_schema {
        return Ok(RunConfig { task: Task::Schema, seed: 0, output: None });
    }
    let cmd = cli.command.ok_or_else(|| ArgsError::Usage("missing subcommand".into()))?;
    let common = match &cmd {
        Cmd::Analyze(a) | Cmd::Sample(a) => &a.common,
        Cmd::Census { args, .. } | Cmd::Singer(args) => &args.common,
        Cmd::Verify { check } => match check {
            Check::Gmg { common, .. } => common,
            Check::Disc(a) | Check::Identity(a) | Check::Alt2(a) | Check::Normalizer(a) => &a.common,
        },
    }
    .clone();
    if let Some(path) = common.batch {
        let base = strip_batch(&argv);
        return Ok(RunConfig { task: Task::Batch { path, base }, seed: common.seed, output: common.output });
    }
    let task = match &cmd {
        Cmd::Analyze(a) => lin_task(a, true),
        Cmd::Sample(a) => lin_task(a, false),
        Cmd::Census { args, normalizer_only } => {
            group_field(args).map(|field| Task::Census { field, n: args.n, normalizer_only: *normalizer_only })
        }
        Cmd::Singer(args) => group_field(args).map(|field| Task::Singer { field, n: args.n }),
        Cmd::Verify { check } => match check {
            Check::Gmg { field, .. } => field_of(field).map(|field| Task::VerifyGmg { field }),
            Check::Disc(a) => group_field(a).map(|field| Task::VerifyDisc { field, n: a.n }),
            Check::Identity(a) => group_field(a).map(|field| Task::VerifyIdentity { field, n: a.n }),
            Check::Alt2(a) => group_field(a).map(|field| Task::VerifyAlt2 { field, n: a.n }),
            Check::Normalizer(a) => group_field(a).map(|field| Task::VerifyNormalizer { field, n: a.n }),
        },
    }
    .map_err(usage)?;
    Ok(RunConfig { task, seed: common.seed, output: common.output })
}

fn strip_batch(argv: &[String]) -> Vec<String> {
    let mut out = Vec::new();
    let mut it = argv.iter();
    while let Some(a) = it.next() {
        if a == "--batch" {
            it.next();
        } else if !a.starts_with("--batch=") {
            out.push(a.clone());
        }
    }
    out
}

/// Result of [`run`]: the exit code, the JSON text for standard output
/// (one document per line) and a human summary for standard error.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub code: i32,
    pub json: String,
    pub summary: String,
}

fn field_json(f: &FieldCtx) -> Value {
    json!({
        "name": f.to_string(),
        "p": f.characteristic(),
        "q": f.order(),
        "degree": f.absolute_degree(),
        "modulus": f.modulus(),
    })
}

fn object(command: &str, body: impl Serialize) -> Result<Map<String, Value>> {
    let mut map = match serde_json::to_value(body).map_err(|e| Error::InvalidArgument(e.to_string()))? {
        Value::Object(m) => m,
        other => {
            let mut m = Map::new();
            m.insert("result".into(), other);
            m
        }
    };
    map.insert("command".into(), Value::String(command.into()));
    Ok(map)
}

fn check_outcome(command: &str, field: &FieldCtx, body: impl Serialize, pass: bool) -> Result<(i32, Value, String)> {
    let mut map = object(command, body)?;
    map.insert("field".into(), field_json(field));
    let code = if pass { EXIT_OK } else { EXIT_FAILED_CHECK };
    let summary = format!("{command} over {field}: {}", if pass { "pass" } else { "FAIL" });
    Ok((code, Value::Object(map), summary))
}

fn run_task(task: &Task, seed: u64) -> Result<(i32, Value, String)> {
    match task {
        Task::Schema => {
            let v: Value = serde_json::from_str(REPORT_SCHEMA).map_err(|e| Error::Parse(e.to_string()))?;
            Ok((EXIT_OK, v, "report schema".into()))
        }
        Task::Analyze { lin, n, kmax, budget } => {
            let v = engine::verdict(lin, *n, AnalyzeOptions { kmax: Some(*kmax), budget: *budget, seed })?;
            let code = if v.verdict == GroupVerdict::Inconclusive { EXIT_INCONCLUSIVE } else { EXIT_OK };
            let summary = format!(
                "L = {lin} over {}: {} ({:?}), {} evidence item(s)",
                lin.base(),
                v.group,
                v.basis,
                v.evidence.len()
            );
            let mut map = object("analyze", &v)?;
            map.insert("field".into(), field_json(lin.base()));
            map.insert("lin".into(), json!(lin.to_string()));
            map.insert("coefficients".into(), json!(lin.coeffs()));
            map.insert("n".into(), json!(lin.q_degree()));
            map.insert("kmax".into(), json!(kmax));
            map.insert("budget".into(), json!(budget));
            map.insert("seed".into(), json!(seed));
            Ok((code, Value::Object(map), summary))
        }
        Task::Sample { lin, kmax, budget } => {
            let ks: Vec<usize> = (1..=*kmax).collect();
            let set = engine::sample_cycle_types(lin, &ks, *budget, seed)?;
            let samples = set
                .samples
                .iter()
                .map(|s| {
                    Ok(json!({
                        "k": s.k,
                        "alpha": AlphaPoint::new(lin.base(), s.k, &s.alpha)?,
                        "cycle_type": s.cycle_type,
                    }))
                })
                .collect::<Result<Vec<Value>>>()?;
            let lcm = engine::order_lcm_evidence(&set.samples);
            let summary = format!("L = {lin}: {} samples, lcm {lcm}, {} skipped", samples.len(), set.skipped);
            let body = json!({
                "field": field_json(lin.base()),
                "lin": lin.to_string(),
                "coefficients": lin.coeffs(),
                "n": lin.q_degree(),
                "kmax": kmax,
                "budget": budget,
                "seed": seed,
                "samples": samples,
                "skipped_alphas": set.skipped,
                "order_lcm": lcm,
            });
            Ok((EXIT_OK, Value::Object(object("sample", body)?), summary))
        }
        Task::Census { field, n, normalizer_only } => {
            let (name, elements) = if *normalizer_only {
                let size = arith::checked_pow(field.order(), *n as u32).ok_or(Error::CardinalityOverflow)? as u128;
                let order = *n as u128 * (size - 1);
                if order.saturating_mul(size - 1) > engine::PERMUTATION_WORK_CAP {
                    return Err(Error::CapExceeded(format!("|N(C)| (q^n - 1) above {}", engine::PERMUTATION_WORK_CAP)));
                }
                ("N(C)".to_string(), SingerModel::new(field, *n, seed)?.normalizer(order as usize + 1)?)
            } else {
                (format!("GL({n},{})", field.order()), group::enumerate_gl(*n, field)?)
            };
            let census = group::census(&elements);
            let summary = format!("census of {name}: {} elements, {} cycle types", census.order(), census.counts().len());
            let body = json!({ "field": field_json(field), "n": n, "group": name, "census": census });
            Ok((EXIT_OK, Value::Object(object("census", body)?), summary))
        }
        Task::Singer { field, n } => {
            let model = SingerModel::new(field, *n, seed)?;
            let (s, f) = (model.singer(), model.frobenius());
            let q = field.order();
            let size = arith::checked_pow(q, *n as u32).ok_or(Error::CardinalityOverflow)? as u128;
            let singer_order = s.order();
            let relation = f.mul(&s).mul(&f.inverse()) == s.pow(q as u128);
            let mut body = json!({
                "field": field_json(field),
                "n": n,
                "modulus": model.modulus(),
                "singer": s,
                "frobenius": f,
                "singer_order": singer_order,
                "singer_is_primitive": singer_order == size - 1,
                "frobenius_order": f.order(),
                "relation_holds": relation,
            });
            if size <= 1 << 16 {
                body["singer_cycle_type"] = json!(s.cycle_type());
                body["frobenius_cycle_type"] = json!(f.cycle_type());
            }
            let summary = format!("Singer cycle of order {singer_order} in GL({n},{q}); F S F^-1 = S^q: {relation}");
            Ok((EXIT_OK, Value::Object(object("singer", body)?), summary))
        }
        Task::VerifyGmg { field } => {
            let r = engine::verify_gmg(field, engine::GMG_MAP_CAP)?;
            check_outcome("verify gmg", field, &r, r.pass)
        }
        Task::VerifyDisc { field, n } => {
            let r = engine::verify_disc_lemma(field, *n)?;
            check_outcome("verify disc", field, &r, r.pass)
        }
        Task::VerifyIdentity { field, n } => {
            let r = engine::verify_factor_identity(field, *n)?;
            check_outcome("verify identity", field, &r, r.pass)
        }
        Task::VerifyAlt2 { field, n } => {
            let r = engine::verify_alternating_char2(field, *n)?;
            check_outcome("verify alt2", field, &r, r.pass)
        }
        Task::VerifyNormalizer { field, n } => {
            let r = engine::verify_normalizer(field, *n, seed)?;
            check_outcome("verify normalizer", field, &r, r.pass)
        }
        Task::Batch { .. } => Err(Error::InvalidArgument("nested --batch".into())),
    }
}

fn error_document(message: &str) -> String {
    json!({ "error": message }).to_string()
}

fn single(task: &Task, seed: u64) -> Outcome {
    match run_task(task, seed) {
        Ok((code, value, summary)) => Outcome { code, json: value.to_string(), summary },
        Err(e) => Outcome { code: EXIT_ERROR, json: error_document(&e.to_string()), summary: format!("error: {e}") },
    }
}

fn severity(code: i32) -> i32 {
    match code {
        EXIT_ERROR => 3,
        EXIT_FAILED_CHECK => 2,
        EXIT_INCONCLUSIVE => 1,
        _ => 0,
    }
}

/// Executes a parsed configuration. Nothing is printed here.
pub fn run(config: &RunConfig) -> Outcome {
    let Task::Batch { path, base } = &config.task else {
        return single(&config.task, config.seed);
    };
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            let msg = format!("--batch: cannot read {}: {e}", path.display());
            return Outcome { code: EXIT_ERROR, json: error_document(&msg), summary: msg };
        }
    };
    let mut docs = Vec::new();
    let mut summaries = Vec::new();
    let mut code = EXIT_OK;
    for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
        let argv: Vec<String> = base.iter().cloned().chain(line.split_whitespace().map(String::from)).collect();
        let out = match parse_args(argv) {
            Ok(cfg) if matches!(cfg.task, Task::Batch { .. }) => Outcome {
                code: EXIT_ERROR,
                json: error_document("nested --batch"),
                summary: "error: nested --batch".into(),
            },
            Ok(cfg) => single(&cfg.task, cfg.seed),
            Err(e) => Outcome { code: EXIT_ERROR, json: error_document(&e.to_string()), summary: format!("error: {e}") },
        };
        if severity(out.code) > severity(code) {
            code = out.code;
        }
        docs.push(out.json);
        summaries.push(out.summary);
    }
    Outcome { code, json: docs.join("\n"), summary: summaries.join("\n") }
}

/// Entry point used by the binary; returns the process exit code.
pub fn main_with_args(argv: Vec<String>) -> i32 {
    let config = match parse_args(argv) {
        Ok(c) => c,
        Err(ArgsError::Display(s)) => {
            print!("{s}");
            return EXIT_OK;
        }
        Err(ArgsError::Usage(s)) => {
            eprintln!("{}", s.trim_end());
            println!("{}", error_document(s.lines().next().unwrap_or("usage error").trim()));
            return EXIT_ERROR;
        }
    };
    let out = run(&config);
    eprintln!("{}", out.summary);
    match &config.output {
        Some(path) => {
            if let Err(e) = fs::write(path, format!("{}\n", out.json)) {
                eprintln!("error: cannot write {}: {e}", path.display());
                println!("{}", error_document(&format!("--output: {e}")));
                return EXIT_ERROR;
            }
        }
        None => println!("{}", out.json),
    }
    out.code
}
