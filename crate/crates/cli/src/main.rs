//! Batch front end: parse a problem document, run the requested pipeline,
//! emit a report. Exit code 0 means all checks passed, 1 means some exact
//! identity failed, 2 means the input was invalid.

use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use bispectral::report::{emit_report, parse_problem, run_pipeline, Format, Mode};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    /// Build kbar, flat kbar, tau and q.
    Construct,
    /// Add the stabilizer basis and the conjugated ring generators.
    Ring,
    /// Add the spectral involution and its identity checks.
    Involute,
    /// Run every invariant suite, including the series oracle.
    VerifyAll,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    /// Human-readable operators in mathematical notation.
    Text,
    /// Loss-free JSON that parses back to the same report.
    Structured,
}

/// Exact Darboux transformations of generalized Airy operators.
#[derive(Parser)]
#[command(name = "bispectral", version, about)]
struct Cli {
    /// Pipeline stage to run.
    #[arg(value_enum)]
    mode: ModeArg,
    /// Problem file; reads standard input when omitted or "-".
    input: Option<PathBuf>,
    /// Stabilizer degree bound (default 2n+2).
    #[arg(long)]
    degree_bound: Option<usize>,
    /// Series oracle truncation order (default rn+10).
    #[arg(long)]
    series_truncation: Option<usize>,
    /// Output format.
    #[arg(long, value_enum, default_value = "text")]
    format: FormatArg,
}

fn read_input(path: &Option<PathBuf>) -> std::io::Result<String> {
    match path {
        Some(p) if p.as_os_str() != "-" => std::fs::read_to_string(p),
        _ => {
            let mut buf = String::new();
            std::io::stdin().read_to_string(&mut buf)?;
            Ok(buf)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let text = match read_input(&cli.input) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read input: {e}");
            return ExitCode::from(2);
        }
    };
    let mut problem = match parse_problem(&text) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    if let Some(d) = cli.degree_bound {
        problem.degree_bound = d;
    }
    if let Some(m) = cli.series_truncation {
        problem.series_truncation = m;
    }

    let mode = match cli.mode {
        ModeArg::Construct => Mode::Construct,
        ModeArg::Ring => Mode::Ring,
        ModeArg::Involute => Mode::Involute,
        ModeArg::VerifyAll => Mode::VerifyAll,
    };
    let report = run_pipeline(&problem, mode);
    let format = match cli.format {
        FormatArg::Text => Format::Text,
        FormatArg::Structured => Format::Structured,
    };
    print!("{}", emit_report(&report, format));
    if report.all_pass() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
