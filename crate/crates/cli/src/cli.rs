use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "lexcut",
    version,
    about = "Lexicographic cutting planes for integer optimization"
)]
pub struct Cli {
    /// Iteration cap for both algorithms.
    #[arg(long, global = true, env = "LEXCUT_ITER_LIMIT")]
    pub iter_limit: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve an instance with the cutting-plane method or lex-enumeration.
    Solve(SolveArgs),
    /// Print lex-cuts of an integer point, or the full description of Q(x̄).
    Cuts(CutsArgs),
    /// Brute-force check of the description of Q(x̄) on a box.
    HullCheck(HullArgs),
    /// Test a cut against split disjunctions.
    SplitCheck(SplitArgs),
    /// Run both algorithms and report their effort side by side.
    Compare(CompareArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Algorithm {
    Cut,
    Enum,
}

#[derive(Debug, Args)]
pub struct Tolerances {
    /// Ball violation accepted by the numeric oracle.
    #[arg(long)]
    pub eps: Option<String>,
    /// Distance below which a value counts as an integer (numeric sets only).
    #[arg(long)]
    pub snap: Option<String>,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    pub instance: PathBuf,
    #[arg(long, value_enum, default_value_t = Algorithm::Cut)]
    pub algorithm: Algorithm,
    #[command(flatten)]
    pub tol: Tolerances,
    /// Recompute the lower bounds after every cut.
    #[arg(long)]
    pub refresh_bounds: bool,
    /// Advance the last alpha entry one past the rounded point.
    #[arg(long)]
    pub strengthen_alpha: bool,
    /// Write the trace as JSON to this file.
    #[arg(long, value_name = "OUT", conflicts_with = "no_trace")]
    pub trace: Option<PathBuf>,
    /// Do not keep the iteration trace in memory.
    #[arg(long)]
    pub no_trace: bool,
}

#[derive(Debug, Args)]
pub struct CutsArgs {
    /// Instance whose basis to use.
    pub instance: Option<PathBuf>,
    /// Integer point, comma separated.
    #[arg(long, allow_hyphen_values = true)]
    pub xbar: String,
    /// `identity` or rows like `1,1;0,1`.
    #[arg(long, conflicts_with = "instance")]
    pub basis: Option<String>,
    #[arg(long, conflicts_with = "all", required_unless_present = "all")]
    pub k: Option<usize>,
    /// The n lex-cuts followed by the n cone inequalities.
    #[arg(long)]
    pub all: bool,
}

#[derive(Debug, Args)]
pub struct HullArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub xbar: String,
    #[arg(long, default_value = "identity")]
    pub basis: String,
    /// Enumerate points with 0 <= c^i x <= M.
    #[arg(long = "box", value_name = "M", default_value_t = 8)]
    pub box_size: i64,
    #[arg(long, hide = true, allow_hyphen_values = true)]
    pub perturb_rhs: Option<String>,
}

#[derive(Debug, Args)]
pub struct SplitArgs {
    pub instance: PathBuf,
    /// Inequality over x1..xn, e.g. `2x1+x2>=2`.
    #[arg(long, allow_hyphen_values = true)]
    pub cut: String,
    #[arg(
        long,
        allow_hyphen_values = true,
        requires = "pi0",
        required_unless_present = "enumerate"
    )]
    pub pi: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub pi0: Option<i64>,
    /// List every validating split with |pi|_inf up to this bound.
    #[arg(long, value_name = "N", conflicts_with_all = ["pi", "pi0"])]
    pub enumerate: Option<u32>,
    #[command(flatten)]
    pub tol: Tolerances,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    pub instance: PathBuf,
    #[command(flatten)]
    pub tol: Tolerances,
}
