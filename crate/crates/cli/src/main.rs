//! `ttensor`: inspect, decompose and transform third-order tensor files.
//!
//! Exit codes: 0 success, 1 check failed, 2 usage, 3 numerical failure,
//! 4 I/O or file format.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "ttensor", version, about = "Third-order tensor algebra under the T-product")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print dimensions, norms, tubal rank and face ranks.
    Info { path: PathBuf },
    /// Write the T-SVD factors U, S, V.
    Decompose {
        path: PathBuf,
        /// Keep only the tubal-rank window.
        #[arg(long)]
        compact: bool,
        /// Factors go to PREFIX_U, PREFIX_S, PREFIX_V.
        #[arg(long)]
        out_prefix: String,
        /// Write text files instead of TT3A.
        #[arg(long)]
        text: bool,
    },
    /// Apply a scalar function to a tensor.
    Apply(ApplyArgs),
    /// Moore-Penrose pseudoinverse.
    Pinv {
        path: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve A * X * B = D in the least-squares sense.
    Solve {
        #[arg(long = "A", alias = "a")]
        a: PathBuf,
        #[arg(long = "B", alias = "b")]
        b: PathBuf,
        #[arg(long = "D", alias = "d")]
        d: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Minimum-norm least-squares solution of A * X = B.
    Lstsq {
        #[arg(long = "A", alias = "a")]
        a: PathBuf,
        #[arg(long = "B", alias = "b")]
        b: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check class membership of a file, or structure preservation on
    /// generated members when no file is given.
    Check(CheckArgs),
    /// Write a random tensor, optionally a member of a structure class.
    Generate {
        #[arg(long, default_value = "4,4,3")]
        dims: String,
        #[arg(long)]
        class: Option<String>,
        #[arg(long)]
        complex: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Time the Fourier face path against the dense block-circulant path.
    Bench {
        #[arg(long, default_value_t = 8)]
        m: usize,
        #[arg(long, default_value_t = 8)]
        n: usize,
        #[arg(long, default_value_t = 256)]
        p: usize,
        #[arg(long, default_value_t = 5)]
        reps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Print CSV instead of a table.
        #[arg(long)]
        csv: bool,
    },
}

#[derive(Args)]
struct ApplyArgs {
    path: PathBuf,
    /// Named function: exp, sin, cos, sinh, cosh, ln1p, sqrt, sign, id,
    /// square, cube, power:K, inverse_shift:S.
    #[arg(long = "fn", conflicts_with = "poly", required_unless_present = "poly")]
    func: Option<String>,
    /// Polynomial coefficients "c0,c1,...".
    #[arg(long, allow_hyphen_values = true)]
    poly: Option<String>,
    /// Standard T-function (acts on eigenvalues of the Fourier faces).
    #[arg(long, conflicts_with = "generalized")]
    standard: bool,
    /// Generalized function (acts on singular values); the default.
    #[arg(long)]
    generalized: bool,
    #[arg(long, value_enum, default_value_t = Method::Spectral)]
    method: Method,
    /// Quadrature nodes per circle for the contour method.
    #[arg(long, default_value_t = 128)]
    nodes: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Spectral,
    Series,
    Contour,
}

#[derive(Args)]
struct CheckArgs {
    path: Option<PathBuf>,
    #[arg(long)]
    class: String,
    #[arg(long = "fn")]
    func: Option<String>,
    #[arg(long, default_value_t = 5)]
    trials: usize,
    /// Dimensions of generated members when no file is given.
    #[arg(long, default_value = "4,4,3")]
    dims: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
