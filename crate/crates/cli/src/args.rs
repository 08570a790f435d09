use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Clone, Parser)]
#[command(
    name = "gcirc",
    version,
    about = "Spectra and nonnegative realizations of g-circulant matrices"
)]
pub struct Cli {
    /// Matching tolerance for oracle comparisons.
    #[arg(long, global = true, env = "GCIRC_TOL", default_value_t = 1e-6)]
    pub tol: f64,

    /// Also write the JSON result to this file.
    #[arg(long, global = true, value_name = "PATH")]
    pub json_out: Option<PathBuf>,

    /// Seed for randomized suites.
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// List the cyclic generators of U(Z/pZ) with their certificates.
    Generators { p: u64 },

    /// Closed-form spectrum of a circulant, g-circulant or block matrix.
    Eig(EigArgs),

    /// Build the g-circulant realizing beta1, beta2*phi^j (j = 0..p-2).
    Realize {
        #[arg(allow_negative_numbers = true)]
        beta1: f64,
        #[arg(allow_negative_numbers = true)]
        beta2: f64,
        p: u64,
        #[arg(allow_negative_numbers = true)]
        g: i64,
    },

    /// Recover a g-circulant from its diagonal.
    Reconstruct(ReconstructArgs),

    /// Build a block g-circulant from per-block spectral targets.
    BlockRealize(BlockRealizeArgs),

    /// Replay the worked examples or the randomized invariant suite.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Args)]
#[command(group = clap::ArgGroup::new("kind").required(true).args(["circ", "gcirc", "block"]))]
pub struct EigArgs {
    /// Circulant given by --row.
    #[arg(long)]
    pub circ: bool,

    /// g-circulant given by --row and --g.
    #[arg(long)]
    pub gcirc: bool,

    /// Block g-circulant JSON file {p, g, n, blocks}.
    #[arg(long, value_name = "FILE")]
    pub block: Option<PathBuf>,

    /// Comma-separated first row.
    #[arg(long, allow_hyphen_values = true)]
    pub row: Option<String>,

    #[arg(long, allow_negative_numbers = true)]
    pub g: Option<i64>,

    /// Also compute the dense oracle spectrum and the matching residual.
    #[arg(long)]
    pub oracle: bool,
}

#[derive(Debug, Clone, Args)]
pub struct ReconstructArgs {
    /// JSON file {n, g, diagonal, beta1?}; `null` marks the unknown entry.
    #[arg(conflicts_with_all = ["n", "g", "diagonal"])]
    pub file: Option<PathBuf>,

    #[arg(long)]
    pub n: Option<usize>,

    #[arg(long, allow_negative_numbers = true)]
    pub g: Option<i64>,

    /// Comma-separated diagonal; `?` marks the unknown entry.
    #[arg(long, allow_hyphen_values = true)]
    pub diagonal: Option<String>,

    /// Trace used to fill the unknown entry.
    #[arg(long, allow_negative_numbers = true)]
    pub beta1: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct BlockRealizeArgs {
    /// JSON file {p, g, beta1, beta2}.
    #[arg(conflicts_with_all = ["p", "g", "beta1", "beta2"])]
    pub file: Option<PathBuf>,

    #[arg(long)]
    pub p: Option<u64>,

    #[arg(long, allow_negative_numbers = true)]
    pub g: Option<i64>,

    #[arg(long, allow_hyphen_values = true)]
    pub beta1: Option<String>,

    #[arg(long, allow_hyphen_values = true)]
    pub beta2: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Golden,
    Property,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    pub suite: Suite,

    /// Replay this golden file instead of the built-in one.
    #[arg(long, value_name = "FILE")]
    pub golden_file: Option<PathBuf>,
}
