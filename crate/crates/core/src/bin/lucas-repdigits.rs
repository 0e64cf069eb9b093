use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};

use lucas_repdigits::arith::DEFAULT_PRECISION;
use lucas_repdigits::bounds::Mode;
use lucas_repdigits::pipeline::{self, Format, SolveConfig, SolveReport};
use lucas_repdigits::report::emit_report;
use lucas_repdigits::Error;

/// Repdigits as differences of two terms of U(n+2) = r U(n+1) + s U(n).
#[derive(Parser)]
#[command(version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full pipeline: bounds, reduction and exhaustive search.
    Solve(Common),
    /// Explicit bounds from linear forms in logarithms.
    Bound(Common),
    /// Bounds followed by both Baker-Davenport reductions.
    Reduce(Common),
    /// Exhaustive search up to a given index.
    Search {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        n_max: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Paper,
    Rigorous,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Json,
}

#[derive(Args)]
struct Common {
    /// Recurrence U(n+2) = r U(n+1) + s U(n)
    #[arg(long, allow_hyphen_values = true)]
    r: i64,
    /// Must be 1 or -1
    #[arg(long, allow_hyphen_values = true)]
    s: i64,
    /// Repdigit base, at least 2
    #[arg(long)]
    base: u64,
    /// Smallest repdigit length to report
    #[arg(long, default_value_t = 1)]
    min_k: u64,
    /// Also report U_n itself (m = 0)
    #[arg(long)]
    allow_m_zero: bool,
    #[arg(long, value_enum, default_value = "paper")]
    mode: ModeArg,
    /// Starting working precision in bits.
    #[arg(long, default_value_t = DEFAULT_PRECISION)]
    precision: u32,
    #[arg(long, value_enum, default_value = "text")]
    format: FormatArg,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Common {
    fn config(&self) -> SolveConfig {
        SolveConfig {
            r: self.r,
            s: self.s,
            base: self.base,
            min_k: self.min_k,
            allow_m_zero: self.allow_m_zero,
            mode: match self.mode {
                ModeArg::Paper => Mode::Paper,
                ModeArg::Rigorous => Mode::Rigorous,
            },
            precision: self.precision,
            format: match self.format {
                FormatArg::Text => Format::Text,
                FormatArg::Json => Format::Json,
            },
        }
    }
}

fn write(common: &Common, report: &SolveReport) -> anyhow::Result<()> {
    let text = emit_report(report, report.config.format);
    match &common.out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (common, result) = match &cli.command {
        Command::Solve(c) => (c, pipeline::solve(&c.config())),
        Command::Bound(c) => (c, pipeline::bound_only(&c.config())),
        Command::Reduce(c) => (c, pipeline::reduce_only(&c.config())),
        Command::Search { common, n_max } => (common, pipeline::search_only(&common.config(), *n_max)),
    };
    match result {
        Ok(report) => match write(common, &report) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: {e:#}");
                ExitCode::FAILURE
            }
        },
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    e.exit_code() as u8
}
