//! `gme` command-line front end: JSON state documents in, reports and CSV out.

pub mod commands;
pub mod error;
pub mod input;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use gme_core::bounds::{DEFAULT_GRID, DEFAULT_REFINE};
use gme_core::tensor::DIM_CAP_ENV;

use crate::commands::Example;
pub use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "gme",
    version,
    about = "Certify genuine multipartite entanglement from cut bounds"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Per-cut bounds, aggregated lower bound and GME verdict for one state.
    Detect { file: PathBuf },
    /// Sweep the mixing parameter of a white-noise family and locate the detection threshold.
    Scan {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_GRID, value_parser = parse_grid)]
        grid: usize,
        #[arg(long, default_value_t = DEFAULT_REFINE, value_parser = parse_refine)]
        refine: f64,
        /// Write the samples as CSV (x,lc_n,threshold,margin,verdict).
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Recompute the worked examples and compare with their published values.
    Reproduce {
        which: Selector,
        /// Write the fig1 curve table here instead of stdout.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Print the GME threshold on the multipartite concurrence.
    Threshold {
        #[arg(long, value_parser = clap::value_parser!(u64).range(3..=60))]
        n: u64,
        #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
        d: u64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Selector {
    Gghz,
    Ghz,
    Dct,
    Fig1,
    All,
}

impl From<Selector> for Example {
    fn from(s: Selector) -> Self {
        match s {
            Selector::Gghz => Example::Gghz,
            Selector::Ghz => Example::Ghz,
            Selector::Dct => Example::Dct,
            Selector::Fig1 => Example::Fig1,
            Selector::All => Example::All,
        }
    }
}

fn parse_grid(s: &str) -> Result<usize, String> {
    let g: usize = s.parse().map_err(|e| format!("{e}"))?;
    if g < 2 {
        return Err(format!("grid needs at least 2 points, got {g}"));
    }
    Ok(g)
}

fn parse_refine(s: &str) -> Result<f64, String> {
    let r: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if !(r.is_finite() && r > 0.0) {
        return Err(format!("refine must be a positive tolerance, got {s}"));
    }
    Ok(r)
}

/// Rejects a set but unusable dimension cap instead of silently using the default.
fn check_dim_cap_env() -> Result<(), CliError> {
    match std::env::var(DIM_CAP_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(cap) if cap > 0 => Ok(()),
            _ => Err(CliError::Usage(format!(
                "{DIM_CAP_ENV} must be a positive integer, got {v:?}"
            ))),
        },
        Err(std::env::VarError::NotPresent) => Ok(()),
        Err(e) => Err(CliError::Usage(format!("{DIM_CAP_ENV}: {e}"))),
    }
}

pub fn execute(cli: Cli, out: &mut dyn Write) -> Result<(), CliError> {
    check_dim_cap_env()?;
    match cli.command {
        Command::Detect { file } => commands::detect(&file, out),
        Command::Scan {
            file,
            grid,
            refine,
            csv,
        } => commands::scan(&file, grid, refine, csv.as_deref(), out),
        Command::Reproduce { which, csv } => commands::reproduce(which.into(), csv.as_deref(), out),
        Command::Threshold { n, d } => commands::threshold(n as usize, d as usize, out),
    }
}

/// Parses `args`, runs the command against stdout and maps failures to exit codes.
pub fn run<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests are successful exits; clap uses 2 for usage errors.
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match execute(cli, &mut out).and_then(|()| {
        out.flush()
            .map_err(|e| CliError::Input(format!("cannot write output: {e}")))
    }) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
