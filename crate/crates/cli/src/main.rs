//! `xiflow`: command-line front end for the ξ-flow laboratory.

mod commands;
mod literal;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::builder::PossibleValuesParser;
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;

use xiflow_core::dynamics::FlowRegistry;
use xiflow_core::{ErrorKind, TruncationConfig};

use crate::literal::parse_complex;
use crate::output::Format;

const COMPLEX_HELP: &str = "\
Complex literals:
  complex = real [ sign [ ureal ] \"i\" ] | [ sign ] [ ureal ] \"i\"
  real    = [ sign ] ureal
  ureal   = digits [ \".\" digits ] [ (\"e\" | \"E\") [ sign ] digits ]
  e.g. 0.5+14.1347i, 2, -1e-3-2i, 3i

Exit codes: 0 ok, 1 i/o error or failed verification, 2 usage, 3 domain, 4 convergence.";

#[derive(Debug, Parser)]
#[command(name = "xiflow", version, about = "Numerical laboratory for the Riemann xi-flow", after_help = COMPLEX_HELP)]
struct Cli {
    /// Worker threads for grid and multi-orbit commands (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate a special function at one point.
    Eval(EvalArgs),
    /// Locate critical-line zeros and write a catalogue.
    Zeros(ZerosArgs),
    /// Integrate one of the registered flows.
    Flow(FlowArgs),
    /// Closed-form and numeric closed-orbit periods around the first zeros.
    Periods(PeriodsArgs),
    /// Quantised energies E(k) = k h / t* for one zero.
    Spectrum(SpectrumArgs),
    /// Sample xi on a rectangular grid.
    Portrait(PortraitArgs),
    /// Run identity suites and report measured residuals.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Args, Serialize)]
struct OutputArgs {
    /// Output file (stdout when absent).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Metadata file (default: <out>.meta.json; stderr when there is no output file).
    #[arg(long)]
    meta: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Debug, Clone, Args, Serialize)]
struct CatalogueArgs {
    /// Zero catalogue to load instead of locating zeros afresh.
    #[arg(long, env = "XIFLOW_CATALOGUE")]
    catalogue: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Function {
    Zeta,
    Gamma,
    Digamma,
    Xi,
    Xi1,
    Xi2,
}

#[derive(Debug, Clone, Args, Serialize)]
struct EvalArgs {
    #[arg(long = "fn", value_enum)]
    function: Function,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    s: Complex64,
    /// Direct terms of the digamma series.
    #[arg(long, default_value_t = TruncationConfig::default().nmax)]
    nmax: usize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
struct ZerosArgs {
    #[arg(long)]
    tau_max: f64,
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
struct FlowArgs {
    #[arg(long, value_parser = PossibleValuesParser::new(FlowRegistry::builtin().names().collect::<Vec<_>>()))]
    kind: String,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    q0: Complex64,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true, default_value = "1")]
    p0: Complex64,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true, default_value = "1")]
    dq0: Complex64,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true, default_value = "0")]
    dp0: Complex64,
    /// Final real flow time (all kinds except newton).
    #[arg(long = "t")]
    t_end: Option<f64>,
    /// Final complex time of a newton run (straight segment from 0).
    #[arg(long = "T", value_parser = parse_complex, allow_hyphen_values = true)]
    big_t: Option<Complex64>,
    /// Comma-separated complex-time waypoints of a newton run.
    #[arg(long, value_parser = parse_complex, value_delimiter = ',', allow_hyphen_values = true, conflicts_with = "big_t")]
    path: Vec<Complex64>,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// Compare the variational solution with the closed-form flow-map differential.
    #[arg(long = "check-M")]
    check_m: bool,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
struct PeriodsArgs {
    /// Number of zeros, counted from the lowest.
    #[arg(long)]
    n: usize,
    /// Distance of the starting point from each zero.
    #[arg(long, default_value_t = 0.01)]
    radius: f64,
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    #[command(flatten)]
    catalogue: CatalogueArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
struct SpectrumArgs {
    /// 1-based zero index.
    #[arg(long)]
    n: usize,
    /// Largest quantum number; rows run over k = 1..=K.
    #[arg(long)]
    k: i64,
    #[arg(long, default_value_t = 1.0)]
    h: f64,
    /// Use the numerically detected return time instead of 2 pi / |xi'(rho)|.
    #[arg(long)]
    numeric: bool,
    #[command(flatten)]
    catalogue: CatalogueArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
struct PortraitArgs {
    /// re_min,re_max,im_min,im_max
    #[arg(long, value_parser = parse_window, allow_hyphen_values = true, default_value = "-2,3,-30,30")]
    window: [f64; 4],
    /// NXxNY grid nodes, or a single N for a square grid.
    #[arg(long, value_parser = parse_resolution, default_value = "101x101")]
    resolution: (usize, usize),
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
struct VerifyArgs {
    #[arg(long, default_value = "all")]
    suite: String,
    #[command(flatten)]
    catalogue: CatalogueArgs,
    #[command(flatten)]
    output: OutputArgs,
}

fn parse_window(text: &str) -> Result<[f64; 4], String> {
    let parts: Vec<f64> = text
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|e| format!("bad window value '{p}': {e}")))
        .collect::<Result<_, _>>()?;
    match parts.as_slice() {
        &[a, b, c, d] if a < b && c < d && parts.iter().all(|v| v.is_finite()) => Ok([a, b, c, d]),
        _ => Err("window must be re_min,re_max,im_min,im_max with min < max".into()),
    }
}

fn parse_resolution(text: &str) -> Result<(usize, usize), String> {
    let parse = |p: &str| p.trim().parse::<usize>().map_err(|e| format!("bad resolution '{text}': {e}"));
    match text.split_once(['x', 'X']) {
        Some((a, b)) => Ok((parse(a)?, parse(b)?)),
        None => {
            let n = parse(text)?;
            Ok((n, n))
        }
    }
}

/// Failure of a command, mapped onto the exit-code contract.
#[derive(Debug)]
enum CliError {
    Usage(String),
    Core(xiflow_core::Error),
    Io(std::io::Error),
    /// A verification ran to completion and found failing checks.
    Failed(String),
}

impl From<xiflow_core::Error> for CliError {
    fn from(e: xiflow_core::Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(e) => match e.kind() {
                ErrorKind::Usage => 2,
                ErrorKind::Domain => 3,
                ErrorKind::Convergence => 4,
                ErrorKind::Io => 1,
            },
            CliError::Io(_) | CliError::Failed(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Failed(m) => f.write_str(m),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.jobs > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.jobs).build_global() {
            eprintln!("error: cannot size worker pool: {e}");
            return ExitCode::from(2);
        }
    }
    let result = match &cli.command {
        Command::Eval(a) => commands::eval(a),
        Command::Zeros(a) => commands::zeros(a),
        Command::Flow(a) => commands::flow(a),
        Command::Periods(a) => commands::periods(a),
        Command::Spectrum(a) => commands::spectrum(a),
        Command::Portrait(a) => commands::portrait(a, cli.jobs),
        Command::Verify(a) => commands::verify(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
