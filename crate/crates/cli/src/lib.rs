//! Argument parsing, dispatch and exit codes for the `hassett` binary.

mod commands;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hassett_core::Error;

pub use commands::Output;

/// Exit status for a run whose output reports a failed verification.
pub const EXIT_FAILED: i32 = 1;
/// Malformed arguments, unparsable input, or a violated precondition.
pub const EXIT_USAGE: i32 = 2;
/// A size limit was hit or the target's descendant table lacks an entry.
pub const EXIT_CAPACITY: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "hassett", version, about = "Weighted descendant invariants and Hassett wall-crossing")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalOpts {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Value substituted for every `e` entry of a weight list.
    #[arg(long, global = true, value_name = "P/Q")]
    pub epsilon: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Maximal faces of the complex of a weight vector.
    Complex {
        #[arg(long)]
        weights: String,
        #[arg(long, default_value_t = 0)]
        genus: u32,
        #[arg(long, default_value_t = 0)]
        beta: u32,
    },
    /// Weights realizing a complex, or "infeasible".
    Realize {
        /// Maximal faces, e.g. `12,34` or `[1,2],[10,11]`.
        #[arg(long)]
        faces: String,
        /// Vertex count, when larger than the biggest label.
        #[arg(long)]
        n: Option<usize>,
        /// Also require the witness to lie in the domain for `g,b`.
        #[arg(long, value_name = "G,B")]
        domain: Option<String>,
    },
    /// One weighted descendant invariant.
    Descendant {
        #[arg(long)]
        genus: u32,
        #[arg(long)]
        weights: String,
        #[arg(long, allow_hyphen_values = true)]
        ks: String,
        #[command(flatten)]
        target: TargetOpts,
        /// Print every admissible partition with its contribution.
        #[arg(long)]
        trace: bool,
    },
    /// Generating polynomial of a weight vector.
    Genpoly {
        #[arg(long)]
        genus: u32,
        #[arg(long)]
        weights: String,
        /// Divide each coefficient by `k_1! ⋯ k_n!`.
        #[arg(long)]
        exponential: bool,
        #[command(flatten)]
        target: TargetOpts,
    },
    /// Kappa number `⟨κ_{k_1-1} ⋯ κ_{k_n-1}⟩_g`.
    Kappa {
        #[arg(long)]
        genus: u32,
        #[arg(long)]
        ks: String,
    },
    /// Unweighted descendant invariant from the oracle.
    Unweighted {
        #[arg(long)]
        genus: u32,
        #[arg(long, allow_hyphen_values = true)]
        ks: String,
        #[command(flatten)]
        target: TargetOpts,
    },
    /// Walls crossed on the straight segment between two weight vectors.
    Path {
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        #[arg(long, default_value_t = 0)]
        genus: u32,
        #[arg(long, default_value_t = 0)]
        beta: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run a randomized or exhaustive identity check.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        /// Comma-separated `key=value` settings; see the README for each suite.
        #[arg(long, default_value = "")]
        params: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Realizable complexes on `n <= 5` points, one per chamber.
    Chambers {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "fine")]
        decomposition: String,
        #[arg(long, default_value_t = 0)]
        genus: u32,
        #[arg(long, default_value_t = 0)]
        beta: u32,
    },
}

#[derive(Debug, Args)]
pub struct TargetOpts {
    /// Target document; the point when omitted.
    #[arg(long, value_name = "FILE")]
    pub target: Option<std::path::PathBuf>,
    /// Class ids or names, one per marked point; the unit class when omitted.
    #[arg(long, value_name = "IDS")]
    pub classes: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Wallcross,
    Path,
    Genpoly,
    Dilaton,
    String,
    Divisor,
    Oracle,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Engine(#[from] Error),
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Engine(Error::Capacity(_) | Error::OracleIncomplete(_)) => EXIT_CAPACITY,
            _ => EXIT_USAGE,
        }
    }
}

/// Parses `argv` (including the program name) and runs the command.
pub fn run<I, T>(argv: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let text = e.render().to_string();
            return if code == 0 { Output::ok(text) } else { Output::error(code, text) };
        }
    };
    match commands::dispatch(&cli) {
        Ok(out) => out,
        Err(e) => Output::error(e.exit_code(), format!("error: {e}\n")),
    }
}
