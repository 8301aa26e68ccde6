//! The `ratlattice` command line: `count`, `ehrhart`, `sigma`, `verify`.

pub mod verify;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::dedekind;
use crate::error::Error;
use crate::exact::{format_rational, parse_integer, parse_rational, Integer};
use crate::lattice::CountMode;
use crate::polygon::{self, CountingPlan, RationalPolygon};

pub use verify::{Suite, VerifySuiteConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_INVALID_POLYGON: i32 = 3;
pub const EXIT_INVALID_ARGUMENT: i32 = 4;
pub const EXIT_NOT_COPRIME: i32 = 5;

#[derive(Debug, Parser)]
#[command(name = "ratlattice", version, about = "Exact lattice point counts in dilated rational polygons")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Count lattice points in the t-th dilate of a polygon.
    Count(CountArgs),
    /// Print the Ehrhart quasipolynomial of a polygon.
    Ehrhart(EhrhartArgs),
    /// Evaluate the Dedekind-Rademacher sum sigma(a, b, t).
    #[command(allow_negative_numbers = true)]
    Sigma(SigmaArgs),
    /// Run a randomized verification suite.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
struct CountArgs {
    /// Polygon file, one `<x> <y>` vertex per line.
    file: PathBuf,
    /// Dilation factor, a positive integer.
    #[arg(allow_hyphen_values = true)]
    t: String,
    #[arg(long, group = "mode")]
    closure: bool,
    #[arg(long, group = "mode")]
    interior: bool,
    #[arg(long, group = "mode")]
    boundary: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct EhrhartArgs {
    file: PathBuf,
    #[arg(long, conflicts_with = "json")]
    text: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct SigmaArgs {
    #[arg(allow_hyphen_values = true)]
    a: String,
    b: String,
    /// Rational shift, e.g. `7/3`.
    #[arg(allow_hyphen_values = true)]
    t: String,
    /// Sum term by term instead of using reciprocity.
    #[arg(long)]
    naive: bool,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long, value_enum)]
    suite: Suite,
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long = "max-size", default_value_t = 12, value_parser = clap::value_parser!(u64).range(1..))]
    max_size: u64,
}

/// Runs the CLI on `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if code == EXIT_OK {
                write!(out, "{rendered}")
            } else {
                write!(err, "{rendered}")
            };
            return code;
        }
    };
    let result = match cli.command {
        Command::Count(a) => cmd_count(&a, out),
        Command::Ehrhart(a) => cmd_ehrhart(&a, out),
        Command::Sigma(a) => cmd_sigma(&a, out),
        Command::Verify(a) => {
            let config = VerifySuiteConfig {
                suite: a.suite,
                trials: a.trials,
                seed: a.seed,
                max_size: a.max_size,
            };
            let report = verify::run_suite(&config);
            let _ = write!(out, "{}", report.render(&config));
            return if report.all_passed() { EXIT_OK } else { EXIT_FAILURE };
        }
    };
    match result {
        Ok(()) => EXIT_OK,
        Err((code, msg)) => {
            let _ = writeln!(err, "error: {msg}");
            code
        }
    }
}

type CmdResult = std::result::Result<(), (i32, String)>;

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_) => EXIT_PARSE,
        e if e.is_invalid_polygon() => EXIT_INVALID_POLYGON,
        Error::OutOfRange { .. } | Error::InvalidModulus(_) => EXIT_INVALID_ARGUMENT,
        Error::NotCoprime { .. } => EXIT_NOT_COPRIME,
        _ => EXIT_FAILURE,
    }
}

fn fail(e: Error) -> (i32, String) {
    (exit_code(&e), e.to_string())
}

fn load_polygon(path: &Path) -> std::result::Result<RationalPolygon, (i32, String)> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| (EXIT_PARSE, format!("cannot read {}: {e}", path.display())))?;
    let vertices = polygon::parse_polygon(&text).map_err(fail)?;
    polygon::validate(&vertices).map_err(fail)
}

fn parse_dilation(s: &str) -> std::result::Result<Integer, (i32, String)> {
    let t = parse_integer(s).map_err(|_| (EXIT_INVALID_ARGUMENT, format!("t must be a positive integer, got {s:?}")))?;
    if t < Integer::from(1) {
        return Err((EXIT_INVALID_ARGUMENT, format!("t must be a positive integer, got {t}")));
    }
    Ok(t)
}

fn cmd_count(a: &CountArgs, out: &mut dyn Write) -> CmdResult {
    let poly = load_polygon(&a.file)?;
    let t = parse_dilation(&a.t)?;
    let mode = if a.interior {
        CountMode::Interior
    } else if a.boundary {
        CountMode::Boundary
    } else {
        CountMode::Closure
    };
    let report = CountingPlan::new(&poly).count(&t, mode).map_err(fail)?;
    let line = if a.json {
        json!({
            "count": report.count.to_string(),
            "mode": mode.as_str(),
            "path": report.path.as_str(),
        })
        .to_string()
    } else {
        report.count.to_string()
    };
    writeln!(out, "{line}").map_err(|e| (EXIT_FAILURE, e.to_string()))
}

fn cmd_ehrhart(a: &EhrhartArgs, out: &mut dyn Write) -> CmdResult {
    let poly = load_polygon(&a.file)?;
    let q = polygon::ehrhart(&poly).map_err(fail)?;
    let text = if a.json {
        let strings = |v: &[crate::Rational]| v.iter().map(format_rational).collect::<Vec<_>>();
        format!(
            "{}\n",
            json!({
                "period": q.period.to_string(),
                "c2": format_rational(&q.c2),
                "c1": strings(&q.c1),
                "c0": strings(&q.c0),
            })
        )
    } else {
        let mut s = format!("period: {}\nc2: {}\n", q.period, format_rational(&q.c2));
        for (r, (c1, c0)) in q.c1.iter().zip(&q.c0).enumerate() {
            s.push_str(&format!("r={r}: c1={} c0={}\n", format_rational(c1), format_rational(c0)));
        }
        s
    };
    write!(out, "{text}").map_err(|e| (EXIT_FAILURE, e.to_string()))
}

fn cmd_sigma(a: &SigmaArgs, out: &mut dyn Write) -> CmdResult {
    let ai = parse_integer(&a.a).map_err(fail)?;
    let bi = parse_integer(&a.b).map_err(fail)?;
    let t = parse_rational(&a.t).map_err(fail)?;
    let value = if a.naive {
        dedekind::sigma_naive(&ai, &bi, &t)
    } else {
        dedekind::sigma_fast(&ai, &bi, &t)
    };
    let value = value.map_err(|e| match e {
        Error::NotCoprime { .. } => (EXIT_NOT_COPRIME, format!("{e}; use --naive for non-coprime arguments")),
        other => fail(other),
    })?;
    writeln!(out, "{}", format_rational(&value)).map_err(|e| (EXIT_FAILURE, e.to_string()))
}

/// Entry point for the binary.
pub fn main() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    let mut out = stdout.lock();
    let mut err = stderr.lock();
    run(std::env::args_os(), &mut out, &mut err)
}
