//! `pairedk`: kernels, factorizations, operator actions and property verification from the shell.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "pairedk", version, about = "Kernels of paired and transposed paired operators with rational symbols")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// JSON config file; falls back to $PAIREDK_CONFIG.
    #[arg(long, global = true, env = "PAIREDK_CONFIG")]
    config: Option<PathBuf>,
    /// Write the JSON result here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Also print a readable summary on standard error.
    #[arg(long, global = true)]
    human: bool,
    /// Suppress progress messages.
    #[arg(long, global = true)]
    quiet: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Kernel basis of an operator, with its membership checks.
    Kernel {
        #[command(flatten)]
        op: OperatorArgs,
        #[command(flatten)]
        numeric: NumericArgs,
    },
    /// Applies an operator to a function exactly.
    Apply {
        #[command(flatten)]
        op: OperatorArgs,
        /// The function, as symbol JSON or a path to it.
        #[arg(long)]
        f: String,
    },
    /// Wiener–Hopf or inner–outer factorization of a symbol.
    Factor {
        /// Wiener–Hopf factorization (the default).
        #[arg(long, conflicts_with = "io")]
        wh: bool,
        /// Inner–outer factorization.
        #[arg(long)]
        io: bool,
        /// Hardy space for the inner–outer factorization.
        #[arg(long, value_enum, default_value = "plus")]
        side: SideArg,
        #[arg(long)]
        g: String,
    },
    /// Lower bound for the operator norm from a truncation.
    Norm {
        #[command(flatten)]
        op: OperatorArgs,
        #[command(flatten)]
        numeric: NumericArgs,
    },
    /// Commutator of an operator with multiplication by `--g`: numerical rank and optional action on `--f`.
    Commutator {
        #[command(flatten)]
        op: OperatorArgs,
        #[command(flatten)]
        numeric: NumericArgs,
        /// Function to apply the commutator to.
        #[arg(long)]
        f: Option<String>,
    },
    /// Runs registered properties on seeded random symbols.
    Verify {
        /// Every registered property.
        #[arg(long, conflicts_with = "property")]
        all: bool,
        /// Property identifier; repeatable.
        #[arg(long)]
        property: Vec<String>,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        numeric: NumericArgs,
    },
    /// Re-renders a stored report without recomputing it.
    Report {
        /// Report file written by `verify`.
        path: PathBuf,
    },
}

#[derive(Args, Clone)]
struct OperatorArgs {
    #[arg(long = "type", value_enum, default_value = "paired")]
    kind: OperatorKind,
    /// Symbol multiplying P⁺ (paired) or inside P⁺ (transposed).
    #[arg(long)]
    a: Option<String>,
    /// Symbol multiplying P⁻ (paired) or inside P⁻ (transposed).
    #[arg(long)]
    b: Option<String>,
    /// Symbol of a Toeplitz or Hankel operator; the multiplier for `commutator`.
    #[arg(long)]
    g: Option<String>,
}

#[derive(Args, Clone, Default)]
struct NumericArgs {
    /// Truncation size.
    #[arg(long = "N")]
    n: Option<usize>,
    /// Relative rank tolerance.
    #[arg(long, allow_negative_numbers = true)]
    tol: Option<f64>,
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq, Debug)]
enum OperatorKind {
    Paired,
    Transposed,
    Toeplitz,
    Hankel,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum SideArg {
    Plus,
    Minus,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(&cli) {
        Ok(status) => ExitCode::from(status),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
