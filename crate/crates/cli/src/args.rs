use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "qsympoly",
    version,
    about = "Evaluate, tabulate, verify and export symmetric q-orthogonal polynomials",
    after_help = "QSYMPOLY_PRECISION=f64|double-double selects the working precision (default f64)."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate phi_n by recurrence, explicit sum and 2phi1 at the given points.
    Eval {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(short = 'n', long = "degree")]
        n: usize,
        #[command(flatten)]
        points: PointArgs,
        /// Agreement tolerance between the three forms.
        #[arg(long)]
        tol: Option<f64>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Per-degree table of lambda, delta, C, norms and the classification.
    Table {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, default_value_t = 10)]
        n_max: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run verification suites; exit status 0 only when every check passes.
    Check {
        #[arg(value_enum)]
        suite: Suite,
        #[command(flatten)]
        family: FamilyArgs,
        /// Single degree for the ode suite.
        #[arg(short = 'n', long = "degree")]
        n: Option<usize>,
        #[arg(long)]
        n_max: Option<usize>,
        /// Overrides the default tolerance of every selected check.
        #[arg(long)]
        tol: Option<f64>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Write weight or polynomial grids for plotting.
    Export {
        #[arg(value_enum)]
        what: ExportKind,
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(short = 'n', long = "degree")]
        n: Option<usize>,
        #[arg(long)]
        n_max: Option<usize>,
        #[command(flatten)]
        points: PointArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyName {
    Ultraspherical,
    Chebyshev5,
    Chebyshev6,
    Hermite,
}

#[derive(Debug, Clone, Args)]
pub struct FamilyArgs {
    #[arg(long, value_enum, conflicts_with = "custom")]
    pub family: Option<FamilyName>,
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub beta: Option<f64>,
    #[arg(short = 'p', allow_negative_numbers = true)]
    pub p: Option<f64>,
    /// Explicit characteristic vector `a,b,c,d`.
    #[arg(long, allow_hyphen_values = true)]
    pub custom: Option<String>,
    #[arg(short = 'q', default_value_t = 0.5, allow_negative_numbers = true)]
    pub q: f64,
}

#[derive(Debug, Clone, Args)]
pub struct PointArgs {
    /// Evaluation points, repeated or comma separated.
    #[arg(short = 'x', value_delimiter = ',', allow_negative_numbers = true)]
    pub x: Vec<f64>,
    /// Uniform grid `start:stop:count`, both ends included.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "x")]
    pub grid: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    #[arg(short = 'o', long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Ode,
    Ortho,
    Norm,
    Pearson,
    Limit,
    Boundary,
    All,
}

impl Suite {
    pub fn expand(self) -> Vec<Suite> {
        match self {
            Suite::All => vec![
                Suite::Ode,
                Suite::Ortho,
                Suite::Norm,
                Suite::Pearson,
                Suite::Limit,
                Suite::Boundary,
            ],
            s => vec![s],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Suite::Ode => "ode",
            Suite::Ortho => "ortho",
            Suite::Norm => "norm",
            Suite::Pearson => "pearson",
            Suite::Limit => "limit",
            Suite::Boundary => "boundary",
            Suite::All => "all",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExportKind {
    Weight,
    Poly,
}
