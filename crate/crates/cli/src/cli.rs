//! Command-line surface.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "lerw-lab", version, about = "Run intersection and loop-erasure experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Monte Carlo P[X ∩ Y ≠ ∅], P[LE(X) ∩ Y ≠ ∅] and their ratio, as CSV.
    Intersect(IntersectArgs),
    /// Exact oracle quantities and inequality verdicts for a finite chain, as JSON.
    Exact(ExactArgs),
    /// Uniform spanning trees by Wilson's algorithm, as JSON.
    Wilson(WilsonArgs),
    /// Run a named preset: `lerw-lab <preset> --config file.json [--seed N] [--out dir]`.
    #[command(external_subcommand)]
    Preset(Vec<String>),
}

#[derive(Debug, Clone, Args)]
pub struct IntersectArgs {
    /// Chain specification (JSON).
    #[arg(long)]
    pub spec: PathBuf,
    #[arg(long, allow_hyphen_values = true)]
    pub start_x: String,
    #[arg(long, allow_hyphen_values = true)]
    pub start_y: String,
    /// Extra killing probability applied before every move.
    #[arg(long, default_value_t = 0.0)]
    pub kill: f64,
    #[arg(long, default_value_t = 100_000)]
    pub horizon: usize,
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// CSV output path; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ExactArgs {
    /// Finite chain specification (JSON).
    #[arg(long)]
    pub spec: PathBuf,
    #[arg(long, allow_hyphen_values = true)]
    pub start_x: String,
    #[arg(long, allow_hyphen_values = true)]
    pub start_y: String,
    #[arg(long, default_value_t = 0.0)]
    pub kill: f64,
    #[arg(long)]
    pub horizon: usize,
    /// Restrict the target set to times `m ≤ M, n ≤ N`, given as `M,N`.
    #[arg(long)]
    pub window: Option<String>,
    /// States prepended to X before loop-erasure, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub prefix: Vec<String>,
    #[arg(long, default_value_t = lerw_core::oracle::DEFAULT_PATH_BUDGET)]
    pub budget: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct WilsonArgs {
    /// Graph as JSON adjacency with multiplicities or as an edge list.
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub root: usize,
    #[arg(long, default_value_t = 1)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Parser)]
#[command(no_binary_name = true)]
pub struct PresetArgs {
    #[arg(long)]
    pub config: PathBuf,
    /// Overrides the seed in the config file.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output directory; defaults to `results/<preset>`.
    #[arg(long)]
    pub out: Option<PathBuf>,
}
