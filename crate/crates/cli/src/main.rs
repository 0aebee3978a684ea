//! `monodromy`: command-line front end for the V-function criteria.
//!
//! Every command prints JSON: one `RunReport` object, or one per row for
//! sweeps. Exit status 0 means the command ran (a violation is a result),
//! 1 means a built-in suite found a mismatch, 2 means bad input.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use monodromy_core::catalog::{
    classify_pair, enumerate_members, export_json_lines, families_for, fm_pair_scan,
    quotient_lemma_discrepancies, quotient_lemma_oracle, Theorem, EXPORT_BOUND, EXPORT_PRIMES,
};
use monodromy_core::charsums::{
    gauss_modulus_deviation, mellin_identity_rows, switchsum_exhaustive, FieldPresentation,
    MELLIN_LIMIT,
};
use monodromy_core::criteria::{
    belyi_point, belyi_search, binomial_search, ExponentPair, SearchOutcome,
};
use monodromy_core::fm::{classify_fm_exponent, numeric_monomial_check};
use monodromy_core::level::{default_max_r, grid_cap};
use monodromy_core::witnesses::{builtin_rows, check_table, parse_table};
use monodromy_core::{kubert_v, Prime, QzClass, Rational, VERSION};

#[derive(Parser)]
#[command(name = "monodromy", version = VERSION, about = "Kubert V-function criteria for finite monodromy")]
struct Cli {
    /// Pretty-print each JSON object.
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// V_p(x) for a fraction `num/den`.
    Vp {
        p: u64,
        #[arg(allow_hyphen_values = true)]
        x: String,
    },
    /// W_p(d,e,x,y) and its verdict against 3/2.
    W {
        p: u64,
        d: u64,
        e: u64,
        #[arg(allow_hyphen_values = true)]
        x: String,
        #[arg(allow_hyphen_values = true)]
        y: String,
    },
    /// Bounded search of the Belyi-type criterion for x^d (x-1)^e.
    Belyi(SearchArgs),
    /// Bounded search of the binomial criterion for x^d + lambda x^e.
    Binomial(SearchArgs),
    /// FM-exponent classification, with an optional numeric check.
    Fm {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        d: u64,
        #[arg(long)]
        max_r: Option<u32>,
    },
    /// Evaluate the built-in witness table (or one read from a file).
    VerifyWitnesses {
        #[arg(long)]
        table: Option<PathBuf>,
    },
    /// Enumerate list items at a prime.
    Catalog {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        max: u64,
        /// candidates, final or binomial.
        #[arg(long, default_value = "final")]
        theorem: String,
    },
    /// Memberships of one pair.
    Classify {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        d: u64,
        #[arg(long)]
        e: u64,
        #[arg(long, default_value = "final")]
        theorem: String,
    },
    /// Split the FM pairs up to `max` into final-list members and others, and
    /// search every pair for a violation.
    Crosscheck {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        max: u64,
        #[arg(long)]
        max_r: Option<u32>,
    },
    /// Brute-force solutions of the quotient lemma.
    Quotient {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 8)]
        max_exp: u32,
    },
    /// Field presentation used by the character sums.
    Field {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        r: u32,
    },
    /// Gauss modulus, Mellin identity and switchsum suites.
    Charsums {
        #[arg(long, default_value_t = 64)]
        max_q: u64,
    },
    /// Write the catalog file (JSON lines).
    ExportCatalog {
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(clap::Args, Serialize)]
struct SearchArgs {
    #[arg(long)]
    p: u64,
    #[arg(long)]
    d: u64,
    #[arg(long)]
    e: u64,
    /// Defaults to the largest level whose grid fits the cap.
    #[arg(long)]
    max_r: Option<u32>,
    /// Count every violation instead of stopping at the first.
    #[arg(long)]
    no_early_stop: bool,
}

#[derive(Serialize)]
struct RunReport<'a> {
    command: &'a str,
    inputs: &'a Value,
    result: Value,
    timing_ms: u128,
    version: &'static str,
}

struct Out {
    command: &'static str,
    inputs: Value,
    start: Instant,
    pretty: bool,
}

impl Out {
    fn emit(&self, result: impl Serialize) -> Result<()> {
        let report = RunReport {
            command: self.command,
            inputs: &self.inputs,
            result: serde_json::to_value(result)?,
            timing_ms: self.start.elapsed().as_millis(),
            version: VERSION,
        };
        let text = if self.pretty {
            serde_json::to_string_pretty(&report)?
        } else {
            serde_json::to_string(&report)?
        };
        let mut stdout = std::io::stdout().lock();
        writeln!(stdout, "{text}")?;
        Ok(())
    }
}

fn prime(p: u64) -> Result<Prime> {
    Ok(Prime::new(p)?)
}

fn fraction(s: &str) -> Result<QzClass> {
    s.parse::<QzClass>()
        .with_context(|| format!("cannot read fraction {s:?}"))
}

fn ratio_json(v: Rational) -> Value {
    json!({
        "exact": format!("{}/{}", v.numer(), v.denom()),
        "decimal": *v.numer() as f64 / *v.denom() as f64,
    })
}

fn max_r_or_default(p: Prime, max_r: Option<u32>) -> u32 {
    max_r.unwrap_or_else(|| default_max_r(p, grid_cap()))
}

fn search_json(out: &SearchOutcome, max_r: u32) -> Result<Value> {
    let mut v = serde_json::to_value(out)?;
    v["level_bound"] = json!(max_r);
    Ok(v)
}

fn run(cli: Cli) -> Result<ExitCode> {
    let start = Instant::now();
    let pretty = cli.pretty;
    let out = |command: &'static str, inputs: Value| Out {
        command,
        inputs,
        start,
        pretty,
    };
    match cli.command {
        Command::Vp { p, x } => {
            let o = out("vp", json!({"p": p, "x": x}));
            let p = prime(p)?;
            let x = fraction(&x)?;
            o.emit(json!({"x": x, "v": ratio_json(kubert_v(p, &x)?)}))?;
        }
        Command::W { p, d, e, x, y } => {
            let o = out("w", json!({"p": p, "d": d, "e": e, "x": x, "y": y}));
            let report = belyi_point(
                prime(p)?,
                ExponentPair::new(d, e)?,
                &fraction(&x)?,
                &fraction(&y)?,
            )?;
            let mut v = serde_json::to_value(&report)?;
            v["decimal"] = json!(*report.w_value.numer() as f64 / *report.w_value.denom() as f64);
            o.emit(v)?;
        }
        Command::Belyi(args) => {
            let o = out("belyi", serde_json::to_value(&args)?);
            let p = prime(args.p)?;
            let max_r = max_r_or_default(p, args.max_r);
            let res = belyi_search(
                p,
                ExponentPair::new(args.d, args.e)?,
                max_r,
                !args.no_early_stop,
            )?;
            o.emit(search_json(&res, max_r)?)?;
        }
        Command::Binomial(args) => {
            let o = out("binomial", serde_json::to_value(&args)?);
            let p = prime(args.p)?;
            let max_r = max_r_or_default(p, args.max_r);
            let res = binomial_search(
                p,
                ExponentPair::new(args.d, args.e)?,
                max_r,
                !args.no_early_stop,
            )?;
            o.emit(search_json(&res, max_r)?)?;
        }
        Command::Fm { p, d, max_r } => {
            let o = out("fm", json!({"p": p, "d": d, "max_r": max_r}));
            let pp = prime(p)?;
            if d == 0 {
                bail!("d must be positive");
            }
            let mut v = serde_json::to_value(classify_fm_exponent(pp, d))?;
            if let Some(r) = max_r {
                v["numeric"] = serde_json::to_value(numeric_monomial_check(pp, d, r)?)?;
            }
            o.emit(v)?;
        }
        Command::VerifyWitnesses { table } => {
            let o = out("verify-witnesses", json!({"table": table}));
            let rows = match &table {
                Some(path) => {
                    let text = std::fs::read_to_string(path)
                        .with_context(|| format!("cannot read {}", path.display()))?;
                    parse_table(&text)?
                }
                None => builtin_rows(),
            };
            let checks = check_table(&rows)?;
            for c in &checks {
                o.emit(c)?;
            }
            let mismatches = checks.iter().filter(|c| !c.matches).count();
            o.emit(json!({"summary": {"rows": checks.len(), "mismatches": mismatches}}))?;
            if mismatches > 0 {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Catalog { p, max, theorem } => {
            let o = out("catalog", json!({"p": p, "max": max, "theorem": theorem}));
            let pp = prime(p)?;
            let theorem: Theorem = theorem.parse()?;
            for f in families_for(theorem, pp) {
                for m in enumerate_members(f, pp, max)? {
                    o.emit(json!({
                        "theorem": theorem.name(),
                        "item": f.index,
                        "A": m.pair.d,
                        "B": m.pair.e,
                        "params": m.params,
                    }))?;
                }
            }
        }
        Command::Classify { p, d, e, theorem } => {
            let o = out(
                "classify",
                json!({"p": p, "d": d, "e": e, "theorem": theorem}),
            );
            let c = classify_pair(prime(p)?, ExponentPair::new(d, e)?, theorem.parse()?)?;
            o.emit(c)?;
        }
        Command::Crosscheck { p, max, max_r } => {
            let o = out("crosscheck", json!({"p": p, "max": max, "max_r": max_r}));
            let pp = prime(p)?;
            let max_r = max_r_or_default(pp, max_r);
            let mut counts = std::collections::BTreeMap::new();
            for pair in fm_pair_scan(pp, max) {
                let member = classify_pair(pp, pair, Theorem::BelyiFinal)?;
                let res = belyi_search(pp, pair, max_r, true)?;
                let status = match (member.is_member(), res.verdict.is_violation()) {
                    (true, false) => "consistent",
                    (true, true) => "ANOMALY",
                    (false, true) => "violated",
                    (false, false) => "UNRESOLVED",
                };
                *counts.entry(status).or_insert(0u64) += 1;
                o.emit(json!({
                    "pair": pair,
                    "final_memberships": member.memberships,
                    "status": status,
                    "search": search_json(&res, max_r)?,
                }))?;
            }
            o.emit(json!({"summary": counts}))?;
            if counts.contains_key("ANOMALY") {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Quotient { p, max_exp } => {
            let o = out("quotient", json!({"p": p, "max_exp": max_exp}));
            let mut bad = 0;
            for report in quotient_lemma_oracle(prime(p)?, max_exp) {
                let (extras, missing) = quotient_lemma_discrepancies(&report);
                bad += extras.len() + missing.len();
                o.emit(json!({
                    "case": report.case as u32,
                    "solutions": report.solutions,
                    "outside_statement": extras,
                    "stated_but_absent": missing,
                }))?;
            }
            if bad > 0 {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Field { p, r } => {
            let o = out("field", json!({"p": p, "r": r}));
            o.emit(FieldPresentation::new(prime(p)?, r)?)?;
        }
        Command::Charsums { max_q } => {
            let o = out("charsums", json!({"max_q": max_q}));
            let mut failures = 0;
            let fields = [
                (2u64, 2u32),
                (2, 3),
                (3, 2),
                (2, 4),
                (5, 2),
                (3, 3),
                (2, 5),
                (7, 2),
                (2, 6),
            ];
            for (p, r) in fields {
                let q = p.pow(r);
                if q > max_q.min(MELLIN_LIMIT) {
                    continue;
                }
                let f = FieldPresentation::new(prime(p)?, r)?;
                let dev = gauss_modulus_deviation(&f);
                let ok = dev < 1e-9;
                failures += usize::from(!ok);
                o.emit(json!({"suite": "gauss_modulus", "q": q, "max_relative_deviation": dev, "ok": ok}))?;
                for (d, e) in [(2u64, 2u64), (3, 2), (5, 3), (4, 3)] {
                    let rows = mellin_identity_rows(&f, ExponentPair::new(d, e)?)?;
                    let bad: Vec<_> = rows.iter().filter(|r| !r.ok).collect();
                    failures += bad.len();
                    o.emit(json!({
                        "suite": "mellin",
                        "q": q,
                        "pair": [d, e],
                        "rows": rows.len(),
                        "failures": bad,
                        "ok": bad.is_empty(),
                    }))?;
                }
            }
            for r in 1..=8 {
                let (n, bad) = switchsum_exhaustive(r)?;
                failures += bad.len();
                o.emit(json!({"suite": "switchsum", "r": r, "pairs": n, "failures": bad, "ok": bad.is_empty()}))?;
            }
            o.emit(json!({"summary": {"failures": failures}}))?;
            if failures > 0 {
                return Ok(ExitCode::from(1));
            }
        }
        Command::ExportCatalog { out: path } => {
            let text = export_json_lines(&EXPORT_PRIMES, EXPORT_BOUND)?;
            match path {
                Some(path) => std::fs::write(&path, text)
                    .with_context(|| format!("cannot write {}", path.display()))?,
                None => std::io::stdout().lock().write_all(text.as_bytes())?,
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) if is_broken_pipe(&err) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn is_broken_pipe(err: &anyhow::Error) -> bool {
    err.chain()
        .filter_map(|e| e.downcast_ref::<std::io::Error>())
        .any(|e| e.kind() == std::io::ErrorKind::BrokenPipe)
}
