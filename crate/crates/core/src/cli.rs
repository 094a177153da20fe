//! Command-line front end. Each subcommand is a thin wrapper over the
//! library call of the same name.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::bench::{self, aggregate, run_experiment_suite, Solver, SuiteConfig};
use crate::error::Result;
use crate::io;
use crate::layering::depth_lower_bound;
use crate::phasepoly::{equal_up_to_global_phase, max_phase_deviation, simulate_diagonal, DEFAULT_TOL};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_MISMATCH: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "mczr", version, about = "Synthesize and depth-optimize MCZR circuits")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Output {
    /// Write here instead of stdout.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Phase vector in, depth-optimized gate-count-optimal circuit out.
    Synth {
        input: PathBuf,
        #[arg(long, default_value_t = 1)]
        iter: usize,
        /// Möbius-transform angle solve (default).
        #[arg(long, conflicts_with = "naive")]
        fast: bool,
        /// Term-by-term angle solve, n <= 16.
        #[arg(long)]
        naive: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Circuit in, layered circuit of equal or smaller depth out.
    Optimize {
        input: PathBuf,
        #[arg(long, default_value_t = 1)]
        iter: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Exit 0 if both inputs implement the same diagonal up to global phase, 2 if not.
    Verify {
        left: PathBuf,
        right: PathBuf,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Print the depth lower bound of a circuit.
    Lb { input: PathBuf },
    /// Circuit in, phase vector out.
    Simulate {
        input: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Hermitian-diagonal benchmark: config in, CSV out.
    BenchHermitian {
        config: PathBuf,
        #[command(flatten)]
        out: Output,
        /// Print per-(n, strategy) means to stderr.
        #[arg(long)]
        summary: bool,
    },
    /// QAOA phase-separation benchmark: config in, CSV out.
    BenchQaoa {
        config: PathBuf,
        #[command(flatten)]
        out: Output,
        #[arg(long)]
        summary: bool,
    },
}

fn emit(out: &Output, text: &str, stdout: &mut dyn Write) -> Result<()> {
    match &out.output {
        Some(path) => fs::write(path, text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn bench(
    config: SuiteConfig,
    out: &Output,
    summary: bool,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<i32> {
    let records = run_experiment_suite(&config)?;
    emit(out, &io::records_to_csv(&records)?, stdout)?;
    if summary {
        writeln!(stderr, "n,strategy,instances,mean_depth_before,mean_depth_after,mean_reduction_pct,mean_wall_time")?;
        for s in aggregate(&records) {
            writeln!(
                stderr,
                "{},{},{},{:.4},{:.4},{:.2},{:.6}",
                s.n,
                s.strategy,
                s.instances,
                s.mean_depth_before,
                s.mean_depth_after,
                s.mean_reduction_pct,
                s.mean_wall_time
            )?;
        }
    }
    Ok(EXIT_OK)
}

fn execute(cli: Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    match cli.command {
        Command::Synth {
            input,
            iter,
            naive,
            out,
            ..
        } => {
            let alpha = io::read_phase_vector(&input)?;
            let solver = if naive { Solver::Naive } else { Solver::Fast };
            let (layering, _) = bench::workflow1_with(&alpha, iter, solver)?;
            emit(&out, &io::layering_to_string(&layering), stdout)?;
        }
        Command::Optimize { input, iter, out } => {
            let (seq, _) = io::read_circuit(&input)?;
            let report = bench::workflow2(&seq, iter)?;
            emit(&out, &io::layering_to_string(&report.layering), stdout)?;
        }
        Command::Verify { left, right, tol } => {
            let a = io::read_diagonal(&left)?;
            let b = io::read_diagonal(&right)?;
            if equal_up_to_global_phase(&a, &b, tol)? {
                writeln!(stdout, "equal")?;
            } else {
                let dev = max_phase_deviation(&a, &b)?;
                writeln!(stdout, "mismatch: max deviation {dev:e} rad exceeds {tol:e}")?;
                return Ok(EXIT_MISMATCH);
            }
        }
        Command::Lb { input } => {
            let (seq, _) = io::read_circuit(&input)?;
            writeln!(stdout, "{}", depth_lower_bound(&seq))?;
        }
        Command::Simulate { input, out } => {
            let (seq, _) = io::read_circuit(&input)?;
            emit(&out, &io::phase_vector_to_string(&simulate_diagonal(&seq)?), stdout)?;
        }
        Command::BenchHermitian {
            config,
            out,
            summary,
        } => {
            let cfg = io::read_hermitian_config(&config)?;
            return bench(SuiteConfig::Hermitian(cfg), &out, summary, stdout, stderr);
        }
        Command::BenchQaoa {
            config,
            out,
            summary,
        } => {
            let cfg = io::read_qaoa_config(&config)?;
            return bench(SuiteConfig::Qaoa(cfg), &out, summary, stdout, stderr);
        }
    }
    Ok(EXIT_OK)
}

/// Parses `argv` (program name first) and runs the command, returning the
/// process exit code.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let _ = write!(stderr, "{e}");
            return code;
        }
    };
    match execute(cli, stdout, stderr) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_ERROR
        }
    }
}
