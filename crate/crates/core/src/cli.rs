//! Command-line front end.
//!
//! ```text
//! chowkit [--format text|json] [--timings] verify [--all | --case NAME]
//! chowkit [--format text|json] compute {deg|fixed-locus|psi-h|dims|strata|det-degrees} --r R
//! ```

use std::io::Write;
use std::ops::RangeInclusive;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::report::{all_cases, render_json, render_text, run_cases, Case, CaseKind, CaseReport};

const USAGE_ERROR: i32 = 2;
const CHECK_FAILED: i32 = 1;

#[derive(Parser, Debug)]
#[command(name = "chowkit", version, about = "Exact Chow-ring computations and their verification suite")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Record wall-clock time per case (JSON `millis` is 0 otherwise).
    #[arg(long, global = true)]
    timings: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run verification cases against their expected values.
    Verify(VerifyArgs),
    /// Run a single computation.
    Compute {
        #[command(subcommand)]
        what: ComputeCommand,
    },
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Run every case (the default).
    #[arg(long, conflicts_with = "case")]
    all: bool,
    /// Run one case by name, e.g. `fixed-locus-r2`.
    #[arg(long, value_name = "NAME")]
    case: Option<String>,
}

#[derive(Args, Debug)]
struct RArg {
    #[arg(long)]
    r: u64,
}

#[derive(Subcommand, Debug)]
enum ComputeCommand {
    /// Degree of the self-map by the series and Segre routes.
    Deg(RArg),
    /// Fixed-locus class in the Chern classes of E*.
    FixedLocus(RArg),
    /// Multiplier of Psi*h.
    PsiH(RArg),
    /// Dimension bookkeeping.
    Dims(RArg),
    /// Codimensions of rank strata of symmetric forms.
    Strata {
        /// Rank of the form.
        #[arg(long, default_value_t = 5)]
        m: u64,
        /// Accepted for uniformity; unused.
        #[arg(long)]
        r: Option<u64>,
    },
    /// Degrees of the two determinantal hypersurfaces.
    DetDegrees {
        /// Accepted for uniformity; unused.
        #[arg(long)]
        r: Option<u64>,
    },
}

const DEG_RANGE: RangeInclusive<u64> = 0..=12;
const FIXED_LOCUS_RANGE: RangeInclusive<u64> = 1..=3;
const PSI_RANGE: RangeInclusive<u64> = 1..=30;
const DIMS_RANGE: RangeInclusive<u64> = 0..=30;
const STRATA_RANGE: RangeInclusive<u64> = 2..=64;

fn checked(kind: CaseKind, value: u64, range: RangeInclusive<u64>, flag: &str) -> Result<Case, String> {
    if range.contains(&value) {
        Ok(Case::new(kind, Some(value)))
    } else {
        Err(format!(
            "--{flag} {value} is outside the supported range {}..={}",
            range.start(),
            range.end()
        ))
    }
}

fn compute_case(what: &ComputeCommand) -> Result<Case, String> {
    match what {
        ComputeCommand::Deg(a) => checked(CaseKind::Degree, a.r, DEG_RANGE, "r"),
        ComputeCommand::FixedLocus(a) => checked(CaseKind::FixedLocus, a.r, FIXED_LOCUS_RANGE, "r"),
        ComputeCommand::PsiH(a) => checked(CaseKind::PsiH, a.r, PSI_RANGE, "r"),
        ComputeCommand::Dims(a) => checked(CaseKind::Dims, a.r, DIMS_RANGE, "r"),
        ComputeCommand::Strata { m, .. } => checked(CaseKind::Strata, *m, STRATA_RANGE, "m"),
        ComputeCommand::DetDegrees { .. } => Ok(Case::new(CaseKind::DetDegrees, None)),
    }
}

fn thread_cap() -> Result<Option<usize>, String> {
    match std::env::var("CHOWKIT_THREADS") {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(format!("CHOWKIT_THREADS must be a positive integer, got {v:?}")),
        },
    }
}

fn execute(cases: &[Case], timings: bool) -> Result<Vec<CaseReport>, String> {
    match thread_cap()? {
        None => Ok(run_cases(cases, timings)),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| format!("cannot start thread pool: {e}"))?;
            Ok(pool.install(|| run_cases(cases, timings)))
        }
    }
}

/// Parses `argv` (including the program name), runs, and returns the exit code.
pub fn run(argv: &[String]) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { USAGE_ERROR } else { 0 };
        }
    };
    let cases = match &cli.command {
        Command::Verify(v) => match &v.case {
            None => all_cases(),
            Some(name) => match Case::parse(name) {
                Some(c) => vec![c],
                None => {
                    eprintln!("error: unknown case {name:?}");
                    return USAGE_ERROR;
                }
            },
        },
        Command::Compute { what } => match compute_case(what) {
            Ok(c) => vec![c],
            Err(msg) => {
                eprintln!("error: {msg}");
                return USAGE_ERROR;
            }
        },
    };
    let reports = match execute(&cases, cli.timings) {
        Ok(r) => r,
        Err(msg) => {
            eprintln!("error: {msg}");
            return USAGE_ERROR;
        }
    };
    let out = match (cli.format, &cli.command) {
        (Format::Json, Command::Compute { .. }) => {
            let mut s = serde_json::to_string_pretty(&reports[0].to_json())
                .expect("JSON values always serialise");
            s.push('\n');
            s
        }
        (Format::Json, Command::Verify(_)) => render_json(&reports),
        (Format::Text, Command::Compute { .. }) => format!("{}\n", reports[0].to_text()),
        (Format::Text, Command::Verify(_)) => render_text(&reports),
    };
    let mut stdout = std::io::stdout().lock();
    let _ = stdout.write_all(out.as_bytes());
    let _ = stdout.flush();

    let failed: Vec<&CaseReport> = reports.iter().filter(|r| !r.pass).collect();
    if failed.is_empty() {
        return 0;
    }
    for r in failed {
        match &r.error {
            Some(e) => eprintln!("failing case {}: {e}", r.name()),
            None => eprintln!("failing case {}: result differs from expected", r.name()),
        }
    }
    CHECK_FAILED
}
