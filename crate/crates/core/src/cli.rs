//! Command-line front end.
//!
//! Every flag can also be set through an environment variable (`TWOPRIM_*`); a flag on
//! the command line wins over the environment, which wins over the default.
//!
//! Exit codes: 0 existence established (or check passed), 1 non-existence established
//! (or mismatch), 2 undetermined (cap), 64 usage error, 66 fixture unavailable.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::charsum::{verify_identities, CharacterTables, DEFAULT_CHAR_CAP};
use crate::error::Error;
use crate::ffield::{ExtensionField, PrimePower};
use crate::search::{
    find_2primitive_knormal, reproduce_table, trace_coverage, CoverageOutcome, Fixtures,
    SearchConfig, SearchOutcome, TableId, TableReport,
};
use crate::sieve::{
    base_inequality_with, odd_prime_powers, run_sieve_with, sweep, SieveMode, SieveReport,
};
use crate::structure::DEFAULT_EXHAUSTIVE_CAP;

pub const EXIT_EXISTS: i32 = 0;
pub const EXIT_NONEXISTENCE: i32 = 1;
pub const EXIT_UNDETERMINED: i32 = 2;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_NO_INPUT: i32 = 66;

#[derive(Debug, Parser)]
#[command(
    name = "twoprim",
    version,
    about = "2-primitive k-normal elements of finite fields"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

/// Settings shared by every command.
#[derive(Debug, Clone, Args, Serialize)]
pub struct GlobalArgs {
    /// Most exponents examined by a search before reporting a cap.
    #[arg(long, global = true, env = "TWOPRIM_MAX_EXHAUSTIVE", default_value_t = DEFAULT_EXHAUSTIVE_CAP)]
    pub max_exhaustive: u64,
    /// Factorization cap in bits.
    #[arg(
        long,
        global = true,
        env = "TWOPRIM_MAX_FACTOR_BITS",
        default_value_t = 128
    )]
    pub max_factor_bits: u32,
    /// Worker threads for searches (0: all cores).
    #[arg(long, global = true, env = "TWOPRIM_WORKERS", default_value_t = 0)]
    pub workers: usize,
    #[arg(long, global = true, env = "TWOPRIM_FORMAT", value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Directory with s0.json, table1.json and table2.json (default: built-in copies).
    #[arg(long, global = true, env = "TWOPRIM_FIXTURES")]
    pub fixtures: Option<PathBuf>,
    /// Seed for randomized factorization steps; results do not depend on it.
    #[arg(long, global = true, env = "TWOPRIM_SEED", default_value_t = 0)]
    pub seed: u64,
}

impl GlobalArgs {
    fn search_config(&self) -> SearchConfig {
        SearchConfig {
            max_exhaustive: self.max_exhaustive,
            workers: self.workers,
            max_factor_bits: self.max_factor_bits,
            seed: self.seed,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    #[value(name = "normal0")]
    Normal0,
    #[value(name = "one-normal")]
    OneNormal,
    #[value(name = "cubic-one-normal")]
    CubicOneNormal,
    #[value(name = "trace-coverage")]
    TraceCoverage,
}

impl From<ModeArg> for SieveMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Normal0 => SieveMode::Normal0,
            ModeArg::OneNormal => SieveMode::OneNormal,
            ModeArg::CubicOneNormal => SieveMode::CubicOneNormal,
            ModeArg::TraceCoverage => SieveMode::TraceCoverage,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableArg {
    #[value(name = "S0")]
    S0,
    #[value(name = "Table1")]
    Table1,
    #[value(name = "Table2")]
    Table2,
    #[value(name = "N2")]
    N2,
}

impl From<TableArg> for TableId {
    fn from(t: TableArg) -> Self {
        match t {
            TableArg::S0 => TableId::S0,
            TableArg::Table1 => TableId::Table1,
            TableArg::Table2 => TableId::Table2,
            TableArg::N2 => TableId::N2,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct PairArgs {
    #[arg(long, env = "TWOPRIM_Q")]
    pub q: u64,
    #[arg(long, env = "TWOPRIM_N")]
    pub n: u64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sieve, then search: does F_{q^n} contain a 2-primitive k-normal element?
    CheckPair {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, env = "TWOPRIM_K", default_value_t = 0)]
        k: usize,
        /// Sieve with this inequality only (default: chosen from k).
        #[arg(long, env = "TWOPRIM_MODE", value_enum)]
        mode: Option<ModeArg>,
    },
    /// Evaluate one inequality, with or without sieving.
    Sieve {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, env = "TWOPRIM_MODE", value_enum, default_value = "normal0")]
        mode: ModeArg,
        /// Only the inequality with no sieving primes.
        #[arg(long)]
        base: bool,
    },
    /// Smallest exponent i with g^i 2-primitive and k-normal.
    Search {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, env = "TWOPRIM_K", default_value_t = 0)]
        k: usize,
    },
    /// Do the 2-primitive elements reach every trace in F_q?
    TraceCoverage {
        #[command(flatten)]
        pair: PairArgs,
    },
    /// Recompute a reference table and compare with the fixtures.
    Reproduce {
        #[arg(long, env = "TWOPRIM_TABLE", value_enum, ignore_case = true)]
        table: TableArg,
    },
    /// Sieve every odd prime power q and every n in the given ranges.
    Sweep {
        /// `A..B` (inclusive) or a single value.
        #[arg(long, env = "TWOPRIM_Q_RANGE")]
        q_range: String,
        #[arg(long, env = "TWOPRIM_N_RANGE")]
        n_range: String,
        #[arg(long, env = "TWOPRIM_MODE", value_enum, default_value = "normal0")]
        mode: ModeArg,
    },
    /// Numerical checks of the character-sum identities on F_{q^n}.
    VerifyIdentities {
        #[command(flatten)]
        pair: PairArgs,
    },
}

/// Failure that ends a command with a given exit code.
#[derive(Debug)]
struct Exit {
    code: i32,
    message: String,
}

impl From<Error> for Exit {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::CapExceeded(_) => EXIT_UNDETERMINED,
            Error::Fixture(_) => EXIT_NO_INPUT,
            Error::MixedClassification { .. } => EXIT_NONEXISTENCE,
            _ => EXIT_USAGE,
        };
        Exit {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Exit {
    Exit {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

/// Rendered output plus exit code.
struct Output {
    json: Value,
    csv: Vec<String>,
    code: i32,
}

/// Parses `args` (program name first), runs the command, writes the report to `out` and
/// diagnostics to `err`, and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => EXIT_USAGE,
            };
            let _ = if code == 0 {
                write!(out, "{e}")
            } else {
                write!(err, "{e}")
            };
            return code;
        }
    };
    match execute(&cli) {
        Ok(output) => {
            let text = match cli.global.format {
                Format::Json => {
                    let envelope = json!({
                        "command": command_name(&cli.command),
                        "config": &cli.global,
                        "result": output.json,
                    });
                    serde_json::to_string_pretty(&envelope).expect("serializable") + "\n"
                }
                Format::Csv => output.csv.join("\n") + "\n",
            };
            let _ = out.write_all(text.as_bytes());
            output.code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message);
            e.code
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::CheckPair { .. } => "check-pair",
        Command::Sieve { .. } => "sieve",
        Command::Search { .. } => "search",
        Command::TraceCoverage { .. } => "trace-coverage",
        Command::Reproduce { .. } => "reproduce",
        Command::Sweep { .. } => "sweep",
        Command::VerifyIdentities { .. } => "verify-identities",
    }
}

fn prime_power(q: u64) -> Result<PrimePower, Exit> {
    let pp = PrimePower::from_q(q).map_err(|_| usage(format!("q = {q} is not a prime power")))?;
    if !pp.is_odd() {
        return Err(usage(format!("q = {q} must be odd")));
    }
    Ok(pp)
}

fn to_json<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn execute(cli: &Cli) -> Result<Output, Exit> {
    let g = &cli.global;
    match &cli.command {
        Command::CheckPair { pair, k, mode } => check_pair(g, pair, *k, *mode),
        Command::Sieve { pair, mode, base } => {
            let q = prime_power(pair.q)?;
            let f = g.search_config().factorizer();
            let report = if *base {
                base_inequality_with(&q, pair.n, (*mode).into(), &f)?
            } else {
                run_sieve_with(&q, pair.n, (*mode).into(), &f)?
            };
            Ok(Output {
                csv: vec![SieveReport::CSV_HEADER.into(), report.csv_row()],
                code: if report.is_success() {
                    EXIT_EXISTS
                } else {
                    EXIT_UNDETERMINED
                },
                json: to_json(&report),
            })
        }
        Command::Search { pair, k } => {
            check_k(*k)?;
            let q = prime_power(pair.q)?;
            let outcome = find_2primitive_knormal(&q, pair.n, *k, &g.search_config())?;
            Ok(Output {
                csv: vec![
                    "q,n,k,outcome,exponent".into(),
                    search_csv(pair.q, pair.n, *k, &outcome),
                ],
                code: search_code(&outcome),
                json: to_json(&outcome),
            })
        }
        Command::TraceCoverage { pair } => {
            let q = prime_power(pair.q)?;
            let r = trace_coverage(&q, pair.n, &g.search_config())?;
            let missing: Vec<String> = r.missing.iter().map(|m| m.to_string()).collect();
            Ok(Output {
                csv: vec![
                    "q,n,outcome,covered,missing".into(),
                    format!(
                        "{},{},{:?},{},{}",
                        r.q,
                        r.n,
                        r.outcome,
                        r.covered,
                        missing.join(" ")
                    ),
                ],
                code: match r.outcome {
                    CoverageOutcome::Success => EXIT_EXISTS,
                    CoverageOutcome::Fail => EXIT_NONEXISTENCE,
                    CoverageOutcome::CapReached => EXIT_UNDETERMINED,
                },
                json: to_json(&r),
            })
        }
        Command::Reproduce { table } => {
            let fixtures = match &g.fixtures {
                Some(dir) => Fixtures::from_dir(dir)?,
                None => Fixtures::embedded(),
            };
            let report = reproduce_table((*table).into(), &fixtures, &g.search_config())?;
            Ok(Output {
                csv: table_csv(&report),
                code: if report.passed() {
                    EXIT_EXISTS
                } else {
                    EXIT_NONEXISTENCE
                },
                json: to_json(&report),
            })
        }
        Command::Sweep {
            q_range,
            n_range,
            mode,
        } => {
            let (q_lo, q_hi) = parse_range(q_range)?;
            let (n_lo, n_hi) = parse_range(n_range)?;
            let qs = odd_prime_powers(q_lo, q_hi);
            let ns: Vec<u64> = (n_lo.max(1)..=n_hi).collect();
            let rows = sweep(&qs, &ns, (*mode).into(), &g.search_config().factorizer());
            let mut csv = vec![SieveReport::CSV_HEADER.to_string()];
            let mut json_rows = Vec::new();
            for (q, n, r) in rows {
                match r {
                    Ok(r) => {
                        csv.push(r.csv_row());
                        json_rows.push(to_json(&r));
                    }
                    Err(e) => {
                        csv.push(format!("{q},{n},{},error,,,,,", SieveMode::from(*mode)));
                        json_rows.push(json!({"q": q, "n": n, "error": e.to_string()}));
                    }
                }
            }
            Ok(Output {
                json: Value::Array(json_rows),
                csv,
                code: EXIT_EXISTS,
            })
        }
        Command::VerifyIdentities { pair } => {
            let q = prime_power(pair.q)?;
            let n = usize::try_from(pair.n).map_err(|_| usage("n too large"))?;
            let field = ExtensionField::with_factorizer(&q, n, g.search_config().factorizer())?;
            let tables = CharacterTables::new(&field, DEFAULT_CHAR_CAP)?;
            let report = verify_identities(&tables)?;
            let mut csv = vec!["check,cases,max_error,passed".to_string()];
            csv.extend(
                report
                    .checks
                    .iter()
                    .map(|c| format!("{},{},{:e},{}", c.name, c.cases, c.max_error, c.passed)),
            );
            Ok(Output {
                csv,
                code: if report.passed {
                    EXIT_EXISTS
                } else {
                    EXIT_NONEXISTENCE
                },
                json: to_json(&report),
            })
        }
    }
}

fn check_k(k: usize) -> Result<(), Exit> {
    if k > 1 {
        return Err(usage(format!("k = {k}: only k = 0 and k = 1 are searched")));
    }
    Ok(())
}

fn search_code(outcome: &SearchOutcome) -> i32 {
    match outcome {
        SearchOutcome::WitnessFound { .. } => EXIT_EXISTS,
        SearchOutcome::ExhaustedNoWitness { .. } => EXIT_NONEXISTENCE,
        SearchOutcome::CapReached { .. } => EXIT_UNDETERMINED,
    }
}

fn search_csv(q: u64, n: u64, k: usize, outcome: &SearchOutcome) -> String {
    match outcome {
        SearchOutcome::WitnessFound { witness } => {
            format!("{q},{n},{k},WitnessFound,{}", witness.exponent)
        }
        SearchOutcome::ExhaustedNoWitness { .. } => format!("{q},{n},{k},ExhaustedNoWitness,"),
        SearchOutcome::CapReached { .. } => format!("{q},{n},{k},CapReached,"),
    }
}

fn table_csv(report: &TableReport) -> Vec<String> {
    let mut rows = vec!["q,n,expected,observed,status".to_string()];
    rows.extend(report.entries.iter().map(|e| {
        format!(
            "{},{},{},{},{:?}",
            e.q,
            e.n,
            e.expected,
            e.observed.replace(',', ";"),
            e.status
        )
    }));
    rows
}

fn check_pair(
    g: &GlobalArgs,
    pair: &PairArgs,
    k: usize,
    mode: Option<ModeArg>,
) -> Result<Output, Exit> {
    check_k(k)?;
    let q = prime_power(pair.q)?;
    let modes: Vec<SieveMode> = match (mode, k) {
        (Some(m @ ModeArg::Normal0), 0)
        | (Some(m @ (ModeArg::OneNormal | ModeArg::CubicOneNormal)), 1) => vec![m.into()],
        (Some(m), _) => {
            return Err(usage(format!(
                "mode {} does not certify {k}-normal elements",
                SieveMode::from(m)
            )))
        }
        (None, 0) => vec![SieveMode::Normal0],
        (None, _) if pair.n == 3 => vec![SieveMode::OneNormal, SieveMode::CubicOneNormal],
        (None, _) => vec![SieveMode::OneNormal],
    };
    let cfg = g.search_config();
    let factorizer = cfg.factorizer();
    let mut sieves = Vec::new();
    let mut sieved = false;
    for m in modes {
        match run_sieve_with(&q, pair.n, m, &factorizer) {
            Ok(r) => {
                sieved |= r.is_success();
                sieves.push(to_json(&r));
            }
            Err(e) => sieves.push(json!({"mode": m, "error": e.to_string()})),
        }
        if sieved {
            break;
        }
    }
    let (search, code, conclusion, exponent) = if sieved {
        (Value::Null, EXIT_EXISTS, "exists (sieve)", None)
    } else {
        match find_2primitive_knormal(&q, pair.n, k, &cfg) {
            Ok(outcome) => {
                let code = search_code(&outcome);
                let conclusion = match code {
                    EXIT_EXISTS => "exists (witness)",
                    EXIT_NONEXISTENCE => "does not exist (exhaustive search)",
                    _ => "undetermined (search cap)",
                };
                let exponent = outcome.witness().map(|w| w.exponent);
                (to_json(&outcome), code, conclusion, exponent)
            }
            Err(Error::CapExceeded(msg)) => (
                json!({"error": msg}),
                EXIT_UNDETERMINED,
                "undetermined (field or factorization cap)",
                None,
            ),
            Err(e) => return Err(e.into()),
        }
    };
    let sieve_outcome = sieves
        .last()
        .and_then(|s| s.get("outcome"))
        .and_then(Value::as_str)
        .unwrap_or("error")
        .to_string();
    Ok(Output {
        csv: vec![
            "q,n,k,conclusion,sieve_outcome,exponent".into(),
            format!(
                "{},{},{k},{conclusion},{sieve_outcome},{}",
                pair.q,
                pair.n,
                exponent.map(|e| e.to_string()).unwrap_or_default()
            ),
        ],
        json: json!({
            "q": pair.q,
            "n": pair.n,
            "k": k,
            "conclusion": conclusion,
            "sieve": sieves,
            "search": search,
        }),
        code,
    })
}

/// `A..B`, `A..=B` (both inclusive) or `A`.
fn parse_range(s: &str) -> Result<(u64, u64), Exit> {
    let bad = || usage(format!("bad range {s:?}; expected A..B or A"));
    let parse = |t: &str| t.trim().parse::<u64>().map_err(|_| bad());
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (parse(a)?, parse(b.trim_start_matches('='))?),
        None => {
            let v = parse(s)?;
            (v, v)
        }
    };
    if lo > hi {
        return Err(bad());
    }
    Ok((lo, hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut full = vec!["twoprim"];
        full.extend_from_slice(args);
        let code = run(full, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap())
    }

    #[test]
    fn ranges() {
        assert_eq!(parse_range("3..10").unwrap(), (3, 10));
        assert_eq!(parse_range("3..=10").unwrap(), (3, 10));
        assert_eq!(parse_range("7").unwrap(), (7, 7));
        assert!(parse_range("9..3").is_err());
        assert!(parse_range("x").is_err());
    }

    #[test]
    fn usage_errors_exit_64() {
        assert_eq!(
            run_args(&["check-pair", "--q", "6", "--n", "3"]).0,
            EXIT_USAGE
        );
        assert_eq!(
            run_args(&["check-pair", "--q", "8", "--n", "3"]).0,
            EXIT_USAGE
        );
        assert_eq!(run_args(&["check-pair", "--n", "3"]).0, EXIT_USAGE);
        assert_eq!(
            run_args(&["check-pair", "--q", "5", "--n", "3", "--k", "2"]).0,
            EXIT_USAGE
        );
        assert_eq!(run_args(&["frobnicate"]).0, EXIT_USAGE);
    }

    #[test]
    fn missing_fixtures_exit_66() {
        let (code, _) = run_args(&[
            "reproduce",
            "--table",
            "S0",
            "--fixtures",
            "/nonexistent/dir",
        ]);
        assert_eq!(code, EXIT_NO_INPUT);
    }

    #[test]
    fn check_pair_exit_codes() {
        assert_eq!(
            run_args(&["check-pair", "--q", "3", "--n", "4", "--k", "0"]).0,
            1
        );
        assert_eq!(
            run_args(&["check-pair", "--q", "5", "--n", "5", "--k", "1"]).0,
            0
        );
        let (code, out) = run_args(&["check-pair", "--q", "337", "--n", "3", "--k", "0"]);
        assert_eq!(code, 0);
        assert!(out.contains("exists (sieve)"));
    }

    #[test]
    fn output_is_reproducible() {
        let a = run_args(&["search", "--q", "7", "--n", "4", "--k", "1"]);
        let b = run_args(&[
            "search",
            "--q",
            "7",
            "--n",
            "4",
            "--k",
            "1",
            "--workers",
            "0",
        ]);
        assert_eq!(a, b);
        let (code, csv) = run_args(&[
            "--format",
            "csv",
            "sieve",
            "--q",
            "5",
            "--n",
            "15",
            "--mode",
            "one-normal",
        ]);
        assert_eq!(code, 0);
        assert!(csv.starts_with(SieveReport::CSV_HEADER));
    }
}
