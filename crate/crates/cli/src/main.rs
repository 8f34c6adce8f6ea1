use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use fermat_jacobi::cache::{Cache, CacheRecord, RecordKind, SCHEMA_VERSION};
use fermat_jacobi::config::{RunConfig, CACHE_ENV};
use fermat_jacobi::criteria::{run_scan, ScanJob, ScanLimits, ScanResult, ScanStatus};
use fermat_jacobi::curve::{jacobian_structure, l1_valuation_from_counts, JacobianReport};
use fermat_jacobi::cyc::{CycInt, PadicCyc, PiValuation, Zpm};
use fermat_jacobi::jacobi::{jacobi_sum, Fingerprint, PrimeSetup};
use fermat_jacobi::verify::{run_suite, Check, Suite};
use fermat_jacobi::{Error, Result};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

/// Jacobi sums, Stickelberger checks and Jacobian structure of Fermat quotient curves.
#[derive(Parser, Debug)]
#[command(name = "fjac", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    global: GlobalArgs,
}

#[derive(Args, Debug)]
struct GlobalArgs {
    /// p-adic precision M.
    #[arg(long, global = true, default_value_t = 8)]
    precision: u32,
    /// l-adic precision M' (default p + 2).
    #[arg(long, global = true)]
    ell_precision: Option<u32>,
    /// Largest finite field size to build.
    #[arg(long, global = true, default_value_t = 10_000_000)]
    q_limit: u64,
    /// Worker threads (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    /// JSON-lines result cache.
    #[arg(long, global = true, env = CACHE_ENV)]
    cache: Option<PathBuf>,
    /// Seed for randomized spot checks.
    #[arg(long, global = true, default_value_t = 0x5eed)]
    seed: u64,
    /// Emit JSON (default).
    #[arg(long, global = true, conflicts_with = "table")]
    json: bool,
    /// Emit a plain text table.
    #[arg(long, global = true)]
    table: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute j_{a,b}(P).
    Jacobi {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        ell: u64,
        #[arg(long, allow_hyphen_values = true)]
        a: i64,
        #[arg(long, allow_hyphen_values = true)]
        b: i64,
    },
    /// Run a named suite of identity checks.
    Verify {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        ell: Option<u64>,
        /// identities, stickelberger, lpoly, uehara, congruences or index.
        #[arg(long)]
        suite: String,
    },
    /// Structure of the p-part of the Jacobian of the quotient curve.
    Structure {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        ell: u64,
        #[arg(long, default_value_t = 1)]
        a: u64,
    },
    /// Search for primes with a prescribed Jacobian structure.
    Scan {
        #[arg(long, conflicts_with = "fix_ell", required_unless_present = "fix_ell")]
        fix_p: Option<u64>,
        #[arg(long)]
        fix_ell: Option<u64>,
        #[arg(long)]
        n: Option<u64>,
        #[arg(long, default_value_t = 1)]
        a: u64,
        #[arg(long, default_value_t = 2000)]
        max_ell: u64,
        #[arg(long, default_value_t = 500)]
        max_p: u64,
        #[arg(long)]
        stop_at_first: bool,
        /// Skip the point-count spot checks in --fix-ell mode.
        #[arg(long)]
        no_spot_check: bool,
    },
}

#[derive(Serialize, Deserialize)]
struct JacobiPayload {
    a: u64,
    b: u64,
    value: CycInt,
    norm: String,
    /// `v_π(j - 1)` at the run precision.
    pi_valuation: PiValuation,
}

#[derive(Serialize, Deserialize)]
struct StructurePayload {
    #[serde(flatten)]
    report: JacobianReport,
    /// `v_p(L(1))` from point counts equals `t`; absent when the counts exceed the q-limit.
    counts_agree: Option<bool>,
}

#[derive(Serialize, Deserialize)]
struct VerifyReport {
    schema_version: u32,
    suite: Suite,
    p: u64,
    ell: Option<u64>,
    passed: bool,
    checks: Vec<Check>,
}

enum Output {
    Record(String),
    Verify(VerifyReport),
}

struct Outcome {
    output: Output,
    passed: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let table = cli.global.table;
    match run(cli) {
        Ok(outcome) => {
            match (&outcome.output, table) {
                (Output::Record(line), false) => println!("{line}"),
                (Output::Record(line), true) => print_record_table(line),
                (Output::Verify(r), false) => println!("{}", serde_json::to_string(r).expect("report serializes")),
                (Output::Verify(r), true) => print_verify_table(r),
            }
            if outcome.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            let doc = json!({
                "schema_version": SCHEMA_VERSION,
                "error": { "kind": e.kind(), "message": e.to_string() },
            });
            println!("{doc}");
            match e {
                Error::IdentityViolation(_) => ExitCode::from(1),
                _ => ExitCode::from(2),
            }
        }
    }
}

fn run(cli: Cli) -> Result<Outcome> {
    let g = cli.global;
    let config = RunConfig {
        precision: g.precision,
        ell_precision: g.ell_precision,
        q_limit: g.q_limit,
        jobs: g.jobs,
        cache: g.cache,
        seed: g.seed,
    };
    config.validate()?;
    if config.jobs > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(config.jobs)
            .build_global()
            .map_err(|e| Error::InvalidArgument(e.to_string()))?;
    }
    let cache = config.cache.as_ref().map(Cache::open).transpose()?;

    match cli.command {
        Command::Jacobi { p, ell, a, b } => {
            let setup = PrimeSetup::new(p, ell, config.q_limit)?;
            let params = json!({ "a": a.rem_euclid(p as i64), "b": b.rem_euclid(p as i64), "precision": config.precision });
            let line = cached(cache.as_ref(), RecordKind::Jacobi, Some(setup.fingerprint()), params, || {
                jacobi_payload(&setup, a, b, config.precision)
            })?;
            let record = parse_record(&line)?;
            let payload: JacobiPayload = serde_json::from_value(record.payload)?;
            let pi = p as i64;
            let generic = [payload.a as i64, payload.b as i64, (payload.a + payload.b) as i64].iter().all(|x| x % pi != 0);
            let expected = BigInt::from(setup.q()).pow(((p - 1) / 2) as u32).to_string();
            let passed = !generic || payload.norm == expected;
            Ok(Outcome { output: Output::Record(line), passed })
        }
        Command::Verify { p, ell, suite } => {
            let suite: Suite = suite.parse()?;
            let checks = run_suite(suite, p, ell, &config)?;
            let passed = checks.iter().all(|c| c.passed);
            let report = VerifyReport { schema_version: SCHEMA_VERSION, suite, p, ell, passed, checks };
            Ok(Outcome { output: Output::Verify(report), passed })
        }
        Command::Structure { p, ell, a } => {
            let setup = PrimeSetup::new(p, ell, config.q_limit)?;
            let params = json!({ "a": a, "precision": config.precision, "q_limit": config.q_limit });
            let line = cached(cache.as_ref(), RecordKind::Structure, Some(setup.fingerprint()), params, || {
                let report = structure_with_retry(&setup, a, config.precision)?;
                let counts_agree = match l1_valuation_from_counts(p, ell, setup.f(), a, config.q_limit) {
                    Ok(v) => Some(u64::from(v) == report.t),
                    Err(e) if e.is_resource_limit() => None,
                    Err(e) => return Err(e),
                };
                Ok(serde_json::to_value(StructurePayload { report, counts_agree })?)
            })?;
            let payload: StructurePayload = serde_json::from_value(parse_record(&line)?.payload)?;
            let passed = payload.counts_agree != Some(false);
            Ok(Outcome { output: Output::Record(line), passed })
        }
        Command::Scan { fix_p, fix_ell, n, a, max_ell, max_p, stop_at_first, no_spot_check } => {
            let job = match (fix_p, fix_ell) {
                (Some(p), _) => ScanJob::FixP {
                    p,
                    n: n.ok_or_else(|| Error::InvalidArgument("--fix-p needs --n".into()))?,
                    a,
                    max_ell,
                    stop_at_first,
                },
                (None, Some(ell)) => ScanJob::FixEll {
                    ell,
                    n,
                    max_p,
                    spot_check_seed: (!no_spot_check).then_some(config.seed),
                },
                (None, None) => return Err(Error::InvalidArgument("one of --fix-p or --fix-ell is required".into())),
            };
            let limits = ScanLimits { precision: config.precision, q_limit: config.q_limit };
            let params = json!({ "job": job, "precision": config.precision, "q_limit": config.q_limit });
            let line = cached(cache.as_ref(), RecordKind::Scan, None, params, || Ok(serde_json::to_value(run_scan(&job, limits)?)?))?;
            let result: ScanResult = serde_json::from_value(parse_record(&line)?.payload)?;
            let passed = result.stats.spot_check_failures == 0 && result.entries.iter().all(|e| e.counts_agree != Some(false));
            Ok(Outcome { output: Output::Record(line), passed })
        }
    }
}

fn cached(
    cache: Option<&Cache>,
    kind: RecordKind,
    fingerprint: Option<Fingerprint>,
    params: Value,
    compute: impl FnOnce() -> Result<Value>,
) -> Result<String> {
    match cache {
        Some(c) => Ok(c.get_or_insert_with(kind, fingerprint, params, compute)?.0),
        None => Ok(serde_json::to_string(&CacheRecord::new(kind, fingerprint, params, compute()?))?),
    }
}

fn parse_record(line: &str) -> Result<CacheRecord> {
    Ok(serde_json::from_str(line)?)
}

fn jacobi_payload(setup: &PrimeSetup, a: i64, b: i64, precision: u32) -> Result<Value> {
    let p = setup.p();
    let j = jacobi_sum(setup, a, b);
    let ring = Zpm::new(p, precision.min(Zpm::max_precision(p)))?;
    let pi_valuation = j.to_padic(ring)?.sub(&PadicCyc::one(ring))?.pi_valuation();
    let payload = JacobiPayload {
        a: a.rem_euclid(p as i64) as u64,
        b: b.rem_euclid(p as i64) as u64,
        norm: j.norm().to_string(),
        value: j,
        pi_valuation,
    };
    Ok(serde_json::to_value(payload)?)
}

/// Raises the precision two digits at a time until the structure is decided.
fn structure_with_retry(setup: &PrimeSetup, a: u64, precision: u32) -> Result<JacobianReport> {
    let cap = Zpm::max_precision(setup.p()) - 1;
    let mut m = precision.min(cap);
    loop {
        match jacobian_structure(setup, a, m) {
            Err(Error::PrecisionExhausted { .. }) if m < cap => m = (m + 2).min(cap),
            Err(Error::PrecisionExhausted { what, .. }) => {
                return Err(Error::PrecisionExhausted { precision: m, what: format!("undecided at precision M = {m}: {what}") })
            }
            other => return other,
        }
    }
}

fn print_record_table(line: &str) {
    let Ok(record) = parse_record(line) else {
        println!("{line}");
        return;
    };
    if let Some(fp) = &record.fingerprint {
        println!("p = {}  ell = {}  f = {}", fp.p, fp.ell, fp.f);
    }
    match record.kind {
        RecordKind::Jacobi => {
            if let Ok(j) = serde_json::from_value::<JacobiPayload>(record.payload) {
                println!("j_{{{},{}}} = {}", j.a, j.b, format_cyc(&j.value));
                println!("norm      = {}", j.norm);
                println!("v_pi(j-1) = {}", format_valuation(&j.pi_valuation));
            }
        }
        RecordKind::Structure => {
            if let Ok(s) = serde_json::from_value::<StructurePayload>(record.payload) {
                let r = &s.report;
                println!("a = {}  M = {}  t = {}  n* = {}", r.a, r.precision, r.t, opt(r.n_star));
                println!("structure    = {}", format_structure(&r.structure));
                println!("case         = {:?}", r.case);
                println!("wieferich    = {}", r.wieferich);
                println!("counts agree = {}", opt(s.counts_agree));
            }
        }
        RecordKind::Scan => {
            if let Ok(s) = serde_json::from_value::<ScanResult>(record.payload) {
                println!("{:>7} {:>9} {:>3} {:>10} {:>5} {:>5} {:>7}  structure", "p", "ell", "f", "status", "t", "n*", "counts");
                for e in &s.entries {
                    let status = match &e.status {
                        ScanStatus::Hit => "hit",
                        ScanStatus::Miss => "miss",
                        ScanStatus::Filtered { .. } => "filtered",
                        ScanStatus::Undecided { .. } => "undecided",
                    };
                    let structure = e.structure.as_deref().map(format_structure).unwrap_or_default();
                    let counts = match e.counts_agree {
                        Some(true) => "agree",
                        Some(false) => "DIFFER",
                        None => "-",
                    };
                    println!(
                        "{:>7} {:>9} {:>3} {:>10} {:>5} {:>5} {:>7}  {}",
                        e.p,
                        e.ell,
                        e.f,
                        status,
                        opt(e.t),
                        opt(e.n_star),
                        counts,
                        structure
                    );
                }
                let st = &s.stats;
                println!(
                    "candidates {}  tested {}  filtered {} ({})  undecided {}  hits {}  spot checks {} ({} failed)",
                    st.candidates, st.tested, st.filtered, st.filtered_ratio, st.undecided, st.hits, st.spot_checked, st.spot_check_failures
                );
            }
        }
        _ => println!("{}", record.payload),
    }
}

fn print_verify_table(r: &VerifyReport) {
    for c in &r.checks {
        let mark = if c.passed { "PASS" } else { "FAIL" };
        if c.detail.is_empty() {
            println!("{mark}  {:<28} {}", c.name, c.reference);
        } else {
            println!("{mark}  {:<28} {}  [{}]", c.name, c.reference, c.detail);
        }
    }
    println!("{}: {}", r.suite.name(), if r.passed { "all checks passed" } else { "FAILED" });
}

fn opt<T: ToString>(x: Option<T>) -> String {
    x.map(|v| v.to_string()).unwrap_or_else(|| "-".into())
}

fn format_valuation(v: &PiValuation) -> String {
    match v {
        PiValuation::Exact(n) => n.to_string(),
        PiValuation::AtLeast(n) => format!(">= {n}"),
    }
}

fn format_structure(s: &[u32]) -> String {
    if s.is_empty() {
        return "trivial".into();
    }
    let mut parts = Vec::new();
    let mut i = 0;
    while i < s.len() {
        let run = s[i..].iter().take_while(|&&e| e == s[i]).count();
        let factor = if s[i] == 1 { "Z/p".to_string() } else { format!("Z/p^{}", s[i]) };
        parts.push(if run == 1 { factor } else { format!("({factor})^{run}") });
        i += run;
    }
    parts.join(" x ")
}

fn format_cyc(x: &CycInt) -> String {
    let terms: Vec<String> = x
        .to_strings()
        .into_iter()
        .enumerate()
        .filter(|(_, c)| c != "0")
        .map(|(i, c)| match i {
            0 => c,
            1 => format!("{c}·ζ"),
            _ => format!("{c}·ζ^{i}"),
        })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}
