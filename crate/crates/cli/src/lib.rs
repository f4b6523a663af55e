//! Command logic for the `primeframe` binary. Every command renders into a
//! string and an exit code so the binary stays a thin shell.

mod commands;
mod input;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use input::{load_window, parse_y_hat};

pub const EXIT_OK: i32 = 0;
/// A `--verify` cross-check disagreed with the main result.
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NEGATIVE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "primeframe", version, about = "Finite wavelet frames over Z_p")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Smallest primitive root, factorization of p-1 and its divisors.
    Generator {
        /// The prime (same as --p).
        #[arg(value_name = "P")]
        prime: Option<u64>,
        #[command(flatten)]
        common: Common,
    },
    /// Decide whether W(y, M x Z_p) is a frame.
    FrameCheck {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        window: WindowArgs,
        /// Also compute the optimal frame bounds from the frame operator.
        #[arg(long)]
        spectral: bool,
    },
    /// Build the equal-norm Parseval window for M.
    Enpf {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        window: WindowArgs,
        /// Check S = I and the energy identity on random signals.
        #[arg(long)]
        verify: bool,
    },
    /// List every subgroup of U_p that yields a frame for the window.
    Characterize {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        window: WindowArgs,
        /// Cross-check each subgroup directly, and spectrally for p <= 31.
        #[arg(long)]
        verify: bool,
    },
}

#[derive(Debug, Args)]
pub struct Common {
    #[arg(long)]
    pub p: Option<u64>,
    /// Zero threshold, relative to max(1, max|x|).
    #[arg(long = "tol", default_value_t = primeframe::DEFAULT_TAU)]
    pub tol: f64,
    /// Eigenvalue threshold for the spectral frame test.
    #[arg(long = "frame-tol", default_value_t = primeframe::DEFAULT_FRAME_TOL)]
    pub frame_tol: f64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Seed for randomized self-checks.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Write the report here instead of stdout.
    #[arg(long, value_name = "FILE")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct WindowArgs {
    /// Subgroup order M, a divisor of p-1.
    #[arg(long)]
    pub order: Option<u64>,
    /// Signal file (`p=<p> domain=<time|freq>` header, then `k re im` lines).
    #[arg(long, value_name = "FILE")]
    pub window: Option<PathBuf>,
    /// Inline spectrum, e.g. "0:1, 2:1, 3:1"; missing indices are zero.
    #[arg(long = "y-hat", value_name = "SPEC")]
    pub y_hat: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

/// What a command produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Outcome {
    pub(crate) fn ok(stdout: String, code: i32) -> Self {
        Outcome { stdout, stderr: String::new(), code }
    }

    pub(crate) fn fail(code: i32, message: impl Into<String>) -> Self {
        let mut stderr = message.into();
        stderr.insert_str(0, "error: ");
        stderr.push('\n');
        Outcome { stdout: String::new(), stderr, code }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(cli),
        Err(e) => {
            let text = e.render().to_string();
            if e.use_stderr() {
                Outcome { stdout: String::new(), stderr: text, code: EXIT_INPUT }
            } else {
                Outcome::ok(text, EXIT_OK)
            }
        }
    }
}

pub fn execute(cli: Cli) -> Outcome {
    let common = match &cli.command {
        Command::Generator { common, .. }
        | Command::FrameCheck { common, .. }
        | Command::Enpf { common, .. }
        | Command::Characterize { common, .. } => common,
    };
    for (name, v) in [("--tol", common.tol), ("--frame-tol", common.frame_tol)] {
        if !(v.is_finite() && v > 0.0) {
            return Outcome::fail(EXIT_INPUT, format!("{name} must be positive, got {v}"));
        }
    }
    let outcome = match &cli.command {
        Command::Generator { prime, common } => commands::generator(*prime, common),
        Command::FrameCheck { common, window, spectral } => commands::frame_check(common, window, *spectral),
        Command::Enpf { common, window, verify } => commands::enpf(common, window, *verify),
        Command::Characterize { common, window, verify } => commands::characterize(common, window, *verify),
    };
    match &common.output {
        Some(path) if !outcome.stdout.is_empty() => match std::fs::write(path, &outcome.stdout) {
            Ok(()) => Outcome { stdout: String::new(), ..outcome },
            Err(e) => Outcome::fail(EXIT_INPUT, format!("cannot write {}: {e}", path.display())),
        },
        _ => outcome,
    }
}
