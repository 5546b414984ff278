//! Batch command-line front end.
//!
//! Exit codes: 0 when every requested check passed, 1 when at least one
//! failed, 2 on usage or I/O errors, 3 on precondition errors (not prime,
//! prime below 5, ill-posed congruence). Data goes to standard output (or
//! `--output FILE`); diagnostics go to standard error.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::checks::{
    self, CheckError, CheckId, CheckResult, IdentityId, PrimeContext, SweepOptions, SweepReport,
};
use crate::sequences;

pub use crate::padic::primes_in;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_PRECONDITION: i32 = 3;

/// Default upper prime for sweeps that include a mod-`p^3` check.
pub const DEFAULT_PMAX_CUBIC: u64 = 500;
/// Default upper prime for sweeps made only of mod-`p` checks.
pub const DEFAULT_PMAX_LINEAR: u64 = 2000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Table,
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "azcong", version, about = "Verify Almkvist-Zudilin supercongruences over ranges of primes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    /// Write data here instead of standard output.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print a sequence, one value per line.
    Compute {
        #[command(subcommand)]
        what: ComputeCmd,
        #[arg(long, short, global = true)]
        output: Option<PathBuf>,
    },
    /// Run one congruence check at one prime.
    Check {
        /// A1, A2, A4, A5, NEW1, B2, B3, B4, B5 or C3.
        id: CheckId,
        #[arg(long)]
        prime: u64,
        /// Cross-validate against the exact-rational path.
        #[arg(long)]
        exact: bool,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Verify the exact identities IB1 / IC1 over a range of n.
    Identity {
        /// IB1, IC1 or all.
        ids: String,
        #[arg(long)]
        nmin: Option<u64>,
        #[arg(long, default_value_t = 300)]
        nmax: u64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Run checks at every prime in a range.
    Sweep {
        #[arg(long, default_value_t = 5)]
        pmin: u64,
        /// Defaults to 2000 when only mod-p checks are selected, else 500.
        #[arg(long)]
        pmax: Option<u64>,
        /// Comma-separated ids, or one of all, modp, p3.
        #[arg(long, default_value = "all")]
        checks: String,
        /// Worker threads; defaults to the available parallelism.
        #[arg(long)]
        workers: Option<usize>,
        /// Cross-validate every cell against the exact-rational path.
        #[arg(long)]
        exact: bool,
        /// Leave elapsed_ms out of JSON output.
        #[arg(long)]
        omit_timing: bool,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Check that the two proof compositions agree modulo p^3.
    Consistency {
        #[arg(long, default_value_t = 5)]
        pmin: u64,
        #[arg(long, default_value_t = DEFAULT_PMAX_CUBIC)]
        pmax: u64,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Debug, Subcommand)]
pub enum ComputeCmd {
    /// G_0..G_N.
    G {
        #[arg(long)]
        nmax: u64,
    },
    /// E_0..E_N, exactly or reduced mod a prime.
    Euler {
        #[arg(long)]
        nmax: u64,
        #[arg(long = "mod")]
        modulus: Option<u64>,
    },
    /// H_0..H_N as num/den.
    Harmonic {
        #[arg(long)]
        nmax: u64,
    },
    /// The Fermat quotient q_p(2).
    Qp2 {
        #[arg(long)]
        prime: u64,
    },
}

/// Parses a check selector: `all`, `modp`, `p3` or a comma-separated list.
pub fn parse_check_set(s: &str) -> Result<Vec<CheckId>, String> {
    let mut ids = match s.trim().to_ascii_lowercase().as_str() {
        "all" => CheckId::ALL.to_vec(),
        "modp" => CheckId::LINEAR.to_vec(),
        "p3" | "modp3" => CheckId::CUBIC.to_vec(),
        _ => s
            .split(',')
            .filter(|t| !t.trim().is_empty())
            .map(str::parse)
            .collect::<Result<Vec<CheckId>, _>>()?,
    };
    if ids.is_empty() {
        return Err("no checks selected".into());
    }
    ids.sort();
    ids.dedup();
    Ok(ids)
}

fn parse_identity_set(s: &str) -> Result<Vec<IdentityId>, String> {
    if s.trim().eq_ignore_ascii_case("all") {
        return Ok(IdentityId::ALL.to_vec());
    }
    let mut ids = s
        .split(',')
        .map(str::parse)
        .collect::<Result<Vec<IdentityId>, _>>()?;
    ids.sort();
    ids.dedup();
    Ok(ids)
}

/// Columns of a CSV row, also used for JSON results.
#[derive(Debug, Serialize)]
struct ResultRow<'a> {
    check_id: &'a str,
    p: u64,
    m: u32,
    modulus: String,
    lhs: String,
    rhs: String,
    passed: bool,
    detail: &'a str,
}

impl<'a> From<&'a CheckResult> for ResultRow<'a> {
    fn from(r: &'a CheckResult) -> Self {
        Self {
            check_id: r.check.as_str(),
            p: r.p,
            m: r.m,
            modulus: r.lhs.modulus().to_string(),
            lhs: r.lhs.value().to_string(),
            rhs: r.rhs.value().to_string(),
            passed: r.passed,
            detail: r.detail.as_deref().unwrap_or(""),
        }
    }
}

#[derive(Debug, Serialize)]
struct Summary {
    total: usize,
    passed: usize,
    failed: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    elapsed_ms: Option<u128>,
}

#[derive(Debug, Serialize)]
struct JsonReport<'a> {
    pmin: u64,
    pmax: u64,
    checks: Vec<&'static str>,
    results: Vec<ResultRow<'a>>,
    summary: Summary,
}

pub const CSV_HEADER: [&str; 7] = ["check_id", "p", "m", "lhs", "rhs", "passed", "detail"];

/// CSV with header `check_id,p,m,lhs,rhs,passed,detail`, LF line endings.
pub fn write_csv(report: &SweepReport, w: &mut dyn Write) -> io::Result<()> {
    let mut wtr = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(w);
    wtr.write_record(CSV_HEADER)?;
    for r in &report.results {
        wtr.write_record([
            r.check.as_str(),
            &r.p.to_string(),
            &r.m.to_string(),
            &r.lhs.value().to_string(),
            &r.rhs.value().to_string(),
            if r.passed { "true" } else { "false" },
            r.detail.as_deref().unwrap_or(""),
        ])?;
    }
    wtr.flush()
}

pub fn write_json(report: &SweepReport, w: &mut dyn Write, timing: bool) -> io::Result<()> {
    let doc = JsonReport {
        pmin: report.pmin,
        pmax: report.pmax,
        checks: report.checks.iter().map(|c| c.as_str()).collect(),
        results: report.results.iter().map(ResultRow::from).collect(),
        summary: Summary {
            total: report.total(),
            passed: report.passed(),
            failed: report.failures.len(),
            elapsed_ms: timing.then_some(report.elapsed.as_millis()),
        },
    };
    serde_json::to_writer_pretty(&mut *w, &doc)?;
    writeln!(w)
}

pub fn write_table(report: &SweepReport, w: &mut dyn Write) -> io::Result<()> {
    let rows: Vec<ResultRow> = report.results.iter().map(ResultRow::from).collect();
    let lw = rows.iter().map(|r| r.lhs.len()).max().unwrap_or(0).max(3);
    let rw = rows.iter().map(|r| r.rhs.len()).max().unwrap_or(0).max(3);
    writeln!(
        w,
        "{:<5} {:>6} {:<8} {:>lw$} {:>rw$}  {:<6} detail",
        "check", "p", "mod", "lhs", "rhs", "result"
    )?;
    for r in &rows {
        writeln!(
            w,
            "{:<5} {:>6} {:<8} {:>lw$} {:>rw$}  {:<6} {}",
            r.check_id,
            r.p,
            r.modulus,
            r.lhs,
            r.rhs,
            if r.passed { "pass" } else { "FAIL" },
            r.detail
        )?;
    }
    writeln!(
        w,
        "{} checks, {} passed, {} failed",
        report.total(),
        report.passed(),
        report.failures.len()
    )
}

fn emit_report(
    report: &SweepReport,
    format: Format,
    timing: bool,
    out: &mut dyn Write,
) -> io::Result<()> {
    match format {
        Format::Table => write_table(report, out),
        Format::Csv => write_csv(report, out),
        Format::Json => write_json(report, out, timing),
    }
}

/// Simple tabular rows (identity and consistency output).
fn emit_rows(
    header: &[&str],
    rows: &[Vec<String>],
    format: Format,
    out: &mut dyn Write,
) -> io::Result<()> {
    match format {
        Format::Csv => {
            let mut wtr = csv::WriterBuilder::new()
                .terminator(csv::Terminator::Any(b'\n'))
                .from_writer(out);
            wtr.write_record(header)?;
            for row in rows {
                wtr.write_record(row)?;
            }
            wtr.flush()
        }
        Format::Json => {
            let objs: Vec<serde_json::Map<String, serde_json::Value>> = rows
                .iter()
                .map(|row| {
                    header
                        .iter()
                        .zip(row)
                        .map(|(h, v)| {
                            let value = match v.as_str() {
                                "true" => serde_json::Value::Bool(true),
                                "false" => serde_json::Value::Bool(false),
                                _ => v
                                    .parse::<u64>()
                                    .map(serde_json::Value::from)
                                    .unwrap_or_else(|_| serde_json::Value::String(v.clone())),
                            };
                            (h.to_string(), value)
                        })
                        .collect()
                })
                .collect();
            serde_json::to_writer_pretty(&mut *out, &objs)?;
            writeln!(out)
        }
        Format::Table => {
            writeln!(out, "{}", header.join("\t"))?;
            for row in rows {
                writeln!(out, "{}", row.join("\t"))?;
            }
            Ok(())
        }
    }
}

enum Failure {
    Usage(String),
    Precondition(String),
    Io(io::Error),
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<CheckError> for Failure {
    fn from(e: CheckError) -> Self {
        match e {
            CheckError::InvalidRange { .. } | CheckError::NoChecks | CheckError::Workers(_) => {
                Failure::Usage(e.to_string())
            }
            other => Failure::Precondition(other.to_string()),
        }
    }
}

fn open_output<'a>(
    path: &Option<PathBuf>,
    stdout: &'a mut dyn Write,
) -> Result<Box<dyn Write + 'a>, Failure> {
    match path {
        Some(p) => {
            let f = File::create(p).map_err(|e| {
                Failure::Usage(format!("cannot create output file {}: {e}", p.display()))
            })?;
            Ok(Box::new(BufWriter::new(f)))
        }
        None => Ok(Box::new(stdout)),
    }
}

fn single_report(result: CheckResult) -> SweepReport {
    let failures = if result.passed { vec![] } else { vec![result.clone()] };
    SweepReport {
        pmin: result.p,
        pmax: result.p,
        checks: vec![result.check],
        results: vec![result],
        failures,
        elapsed: Default::default(),
    }
}

fn execute(cli: Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32, Failure> {
    match cli.command {
        Command::Compute { what, output } => {
            let mut out = open_output(&output, stdout)?;
            match what {
                ComputeCmd::G { nmax } => {
                    for g in sequences::az_g_table(nmax) {
                        writeln!(out, "{g}")?;
                    }
                }
                ComputeCmd::Euler { nmax, modulus: None } => {
                    for e in sequences::euler_exact_table(nmax) {
                        writeln!(out, "{e}")?;
                    }
                }
                ComputeCmd::Euler {
                    nmax,
                    modulus: Some(p),
                } => {
                    if !crate::padic::is_prime(p) {
                        return Err(Failure::Precondition(format!("{p} is not prime")));
                    }
                    for e in sequences::euler_mod_table(nmax, p) {
                        writeln!(out, "{e}")?;
                    }
                }
                ComputeCmd::Harmonic { nmax } => {
                    for h in sequences::harmonic_table(nmax) {
                        writeln!(out, "{}/{}", h.numer(), h.denom())?;
                    }
                }
                ComputeCmd::Qp2 { prime } => {
                    if !crate::padic::is_prime(prime) {
                        return Err(Failure::Precondition(format!("{prime} is not prime")));
                    }
                    let q = sequences::fermat_quotient2(prime)
                        .map_err(|e| Failure::Precondition(e.to_string()))?;
                    writeln!(out, "{q}")?;
                }
            }
            out.flush()?;
            Ok(EXIT_OK)
        }
        Command::Check {
            id,
            prime,
            exact,
            out,
        } => {
            let ctx = PrimeContext::new(prime)?;
            let result = if exact {
                ctx.run_cross_validated(id)?
            } else {
                ctx.run(id, checks::EvalPath::Residue)?
            };
            let report = single_report(result);
            let mut w = open_output(&out.output, stdout)?;
            emit_report(&report, out.format, false, &mut *w)?;
            w.flush()?;
            Ok(if report.all_passed() { EXIT_OK } else { EXIT_FAILED })
        }
        Command::Identity {
            ids,
            nmin,
            nmax,
            out,
        } => {
            let ids = parse_identity_set(&ids).map_err(Failure::Usage)?;
            let mut rows = Vec::new();
            let mut all = true;
            for id in ids {
                let lo = nmin.unwrap_or(id.min_n());
                if lo < id.min_n() {
                    return Err(CheckError::Indeterminate { id, n: lo }.into());
                }
                for n in lo..=nmax {
                    let holds = checks::run_identity(id, n)?;
                    all &= holds;
                    rows.push(vec![id.to_string(), n.to_string(), holds.to_string()]);
                }
            }
            let mut w = open_output(&out.output, stdout)?;
            emit_rows(&["identity", "n", "holds"], &rows, out.format, &mut *w)?;
            w.flush()?;
            Ok(if all { EXIT_OK } else { EXIT_FAILED })
        }
        Command::Sweep {
            pmin,
            pmax,
            checks: selector,
            workers,
            exact,
            omit_timing,
            out,
        } => {
            let ids = parse_check_set(&selector).map_err(Failure::Usage)?;
            let pmax = pmax.unwrap_or(if ids.iter().all(|id| id.exponent() == 1) {
                DEFAULT_PMAX_LINEAR
            } else {
                DEFAULT_PMAX_CUBIC
            });
            if workers == Some(0) {
                return Err(Failure::Usage("--workers must be at least 1".into()));
            }
            let options = SweepOptions {
                workers: workers.unwrap_or(SweepOptions::default().workers),
                exact,
            };
            let report = checks::sweep(pmin, pmax, &ids, options)?;
            let mut w = open_output(&out.output, stdout)?;
            emit_report(&report, out.format, !omit_timing, &mut *w)?;
            w.flush()?;
            writeln!(
                stderr,
                "{} cells, {} failed, {} ms",
                report.total(),
                report.failures.len(),
                report.elapsed.as_millis()
            )?;
            Ok(if report.all_passed() { EXIT_OK } else { EXIT_FAILED })
        }
        Command::Consistency { pmin, pmax, out } => {
            if pmin < 5 || pmin > pmax {
                return Err(CheckError::InvalidRange { pmin, pmax }.into());
            }
            let mut rows = Vec::new();
            let mut all = true;
            for p in primes_in(pmin, pmax) {
                let (a, b) = PrimeContext::new(p)?.consistency()?;
                all &= a && b;
                rows.push(vec![
                    p.to_string(),
                    a.to_string(),
                    b.to_string(),
                    (a && b).to_string(),
                ]);
            }
            let mut w = open_output(&out.output, stdout)?;
            emit_rows(&["p", "a1_vs_a4", "a2_vs_a5", "passed"], &rows, out.format, &mut *w)?;
            w.flush()?;
            Ok(if all { EXIT_OK } else { EXIT_FAILED })
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{text}");
                EXIT_USAGE
            } else {
                let _ = write!(stdout, "{text}");
                EXIT_OK
            };
        }
    };
    match execute(cli, stdout, stderr) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Precondition(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_PRECONDITION
        }
        Err(Failure::Io(e)) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_USAGE
        }
    }
}
