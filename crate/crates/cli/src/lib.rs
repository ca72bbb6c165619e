// Copyright 2026 msprep Contributors
// SPDX-License-Identifier: Apache-2.0

//! The `msprep` command line: problem checking, synthesis, verification,
//! benchmarking and application demos.
//!
//! Exit codes are stable: 0 success, 1 verification failed, 2 input error,
//! 3 unsolvable, 4 search exhausted.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

pub mod bench;
mod commands;
pub mod problem;

pub use commands::SynthRecord;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_UNSOLVABLE: i32 = 3;
pub const EXIT_EXHAUSTED: i32 = 4;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("input error: {0}")]
    Input(String),
    #[error("unsolvable: {0}")]
    Unsolvable(String),
    #[error("search exhausted: {0}")]
    Exhausted(String),
    #[error("{0}")]
    Failed(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) | CliError::Io(_) => EXIT_INPUT,
            CliError::Unsolvable(_) => EXIT_UNSOLVABLE,
            CliError::Exhausted(_) => EXIT_EXHAUSTED,
            CliError::Failed(_) => EXIT_FAILED,
        }
    }
}

impl From<msprep_core::Error> for CliError {
    fn from(e: msprep_core::Error) -> Self {
        use msprep_core::Error as E;
        match e {
            E::Unsolvable(r) => CliError::Unsolvable(format!("Gram mismatch {:.6e}", r.max_abs_mismatch)),
            E::SynthesisFailed(msg) => CliError::Exhausted(msg),
            E::Qasm { .. } | E::BadLength(_) | E::NotNormalized(_) | E::NonFinite | E::InvalidGate(_) => {
                CliError::Input(e.to_string())
            }
            other => CliError::Input(other.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "msprep", version, about = "Multi-state preparation circuit synthesis")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Report whether a problem file admits an exact solution.
    Check(CheckArgs),
    /// Search for a circuit with few CNOTs solving a problem file.
    Synth(SynthArgs),
    /// Simulate a QASM circuit against a problem file.
    Verify(VerifyArgs),
    /// Haar-random benchmark over m = 1..2^n; writes CSV.
    Bench(BenchArgs),
    /// Application demos.
    #[command(subcommand)]
    Demo(Demo),
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    pub problem: PathBuf,
    /// Largest accepted Gram-matrix entry mismatch.
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
}

#[derive(Debug, Clone, Args)]
pub struct SearchArgs {
    /// Cost at or below which a template counts as solved.
    #[arg(long, default_value_t = 1e-8)]
    pub threshold: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Do not expand templates past this many CNOTs (default 3·4^n).
    #[arg(long)]
    pub max_cnots: Option<usize>,
    /// Random restarts per template.
    #[arg(long, default_value_t = 8)]
    pub starts: usize,
    /// Frontier capacity, 0 for unbounded.
    #[arg(long, default_value_t = 32)]
    pub frontier_width: usize,
    #[arg(long)]
    pub timeout: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    pub problem: PathBuf,
    #[command(flatten)]
    pub search: SearchArgs,
    /// Allowed CNOT pairs, e.g. `0-1,1-2`; overrides the problem file.
    #[arg(long)]
    pub coupling: Option<String>,
    #[arg(long)]
    pub qasm_out: Option<PathBuf>,
    /// Write the JSON result record here instead of stdout.
    #[arg(long)]
    pub result_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    pub problem: PathBuf,
    pub qasm: PathBuf,
    #[arg(long, default_value_t = 1e-3)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 1)]
    pub shots: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// CSV destination; stdout when absent.
    #[arg(long)]
    pub csv_out: Option<PathBuf>,
    #[arg(long, default_value_t = 1e-8)]
    pub threshold: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CatPreset {
    /// Blocks `(|00⟩, (|01⟩ − |10⟩)/√2)`.
    Singlet,
}

#[derive(Debug, Subcommand)]
pub enum Demo {
    /// Cat state `(⊗φ₁ + ⊗φ₂)/√2` on a GHZ backbone.
    Cat(CatArgs),
    /// Two-spin Heisenberg evolution on the `{|01⟩, |10⟩}` block.
    Heisenberg(HeisenbergArgs),
}

#[derive(Debug, Args)]
pub struct CatArgs {
    #[arg(long, value_enum, conflicts_with = "blocks_file")]
    pub preset: Option<CatPreset>,
    /// Number of preset blocks.
    #[arg(long, default_value_t = 2)]
    pub blocks: usize,
    /// JSON `{"blocks": [{"phi1": [[re,im],...], "phi2": [...]}, ...]}`.
    #[arg(long)]
    pub blocks_file: Option<PathBuf>,
    #[command(flatten)]
    pub search: SearchArgs,
    #[arg(long)]
    pub qasm_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct HeisenbergArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub t: f64,
    /// Random span vectors checked against the matrix exponential.
    #[arg(long, default_value_t = 20)]
    pub samples: usize,
    /// Also synthesize the full 4×4 evolution and compare CNOT counts.
    #[arg(long)]
    pub compare_full: bool,
    #[arg(long, default_value_t = 1e-3)]
    pub tol: f64,
    #[command(flatten)]
    pub search: SearchArgs,
    #[arg(long)]
    pub qasm_out: Option<PathBuf>,
}

/// Execute a parsed command, writing human-readable output to `out` and
/// diagnostics to `err`. Returns the process exit code.
pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = match &cli.command {
        Command::Check(a) => commands::check(a, out),
        Command::Synth(a) => commands::synth(a, out),
        Command::Verify(a) => commands::verify(a, out),
        Command::Bench(a) => commands::bench(a, out),
        Command::Demo(Demo::Cat(a)) => commands::demo_cat(a, out),
        Command::Demo(Demo::Heisenberg(a)) => commands::demo_heisenberg(a, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "msprep: {e}");
            e.exit_code()
        }
    }
}

/// Parse `args` (including the program name) and run. Argument errors map to
/// exit code 2.
pub fn run_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli, out, err),
        Err(e) => {
            let _ = write!(err, "{e}");
            if e.use_stderr() {
                EXIT_INPUT
            } else {
                EXIT_OK
            }
        }
    }
}

/// Worker count from `MSPREP_THREADS`; `0`, unset or unparsable means auto.
pub fn threads_from_env() -> usize {
    std::env::var("MSPREP_THREADS").ok().and_then(|v| v.trim().parse().ok()).unwrap_or(0)
}

pub(crate) fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}
