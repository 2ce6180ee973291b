use std::path::PathBuf;

use ceos_core::harness::VectorFormat;
use ceos_core::indexes::Algorithm;
use ceos_core::RotationKind;
use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(
    name = "ceos",
    version,
    about = "Maximum inner product search with CEOs indexes"
)]
pub struct Cli {
    /// Cap on worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build an index and write it with a `.meta.json` sidecar.
    Build(BuildArgs),
    /// Answer queries from a built index.
    Query(QueryArgs),
    /// Benchmark algorithms against brute force.
    Bench(BenchArgs),
    /// Exact top-k ids of every query, written as ivecs.
    Groundtruth(GroundtruthArgs),
    /// Generate a synthetic clustered data set with queries.
    Synth(SynthArgs),
}

#[derive(Debug, Args)]
pub struct BuildArgs {
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long, default_value = "fvecs")]
    pub format: VectorFormat,
    #[arg(long)]
    pub algo: Algorithm,
    /// Output index file.
    #[arg(long)]
    pub index: PathBuf,
    /// Projected dimension (rounded up to a power of two for spinners).
    #[arg(long = "D")]
    pub dims: Option<usize>,
    #[arg(long, default_value_t = 5)]
    pub s0: usize,
    #[arg(long, default_value_t = 100)]
    pub b: usize,
    #[arg(long, default_value_t = 100)]
    pub m: usize,
    #[arg(long, default_value = "spinner")]
    pub rotation: RotationKind,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Cap on the number of full sCEOs lists.
    #[arg(long, default_value_t = 1_000_000)]
    pub list_limit: u128,
}

#[derive(Debug, Args)]
pub struct QueryArgs {
    #[arg(long)]
    pub index: PathBuf,
    /// The data file the index was built from; used for reranking.
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long)]
    pub queries: PathBuf,
    #[arg(long, default_value = "fvecs")]
    pub format: VectorFormat,
    #[arg(long, default_value_t = 10)]
    pub k: usize,
    /// Candidates reranked (defaults to the build value).
    #[arg(long)]
    pub b: Option<usize>,
    /// Extreme dims per side (defaults to the build value).
    #[arg(long)]
    pub s0: Option<usize>,
    #[arg(long, default_value_t = 20)]
    pub sprime: usize,
    /// coCEOs scan budget (default: max(n/100, s')).
    #[arg(long = "B")]
    pub budget: Option<usize>,
    /// Results file; `.json` selects JSON, anything else CSV.
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub normalize_queries: bool,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// TOML benchmark config; other flags override its fields.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub data: Option<PathBuf>,
    #[arg(long)]
    pub queries: Option<PathBuf>,
    #[arg(long)]
    pub format: Option<VectorFormat>,
    /// Comma-separated algorithm names, e.g. `1ceos,sceos-ta,simhash`.
    #[arg(long, value_delimiter = ',')]
    pub algo: Vec<String>,
    #[arg(long = "D")]
    pub dims: Option<usize>,
    #[arg(long)]
    pub s0: Option<usize>,
    #[arg(long)]
    pub sprime: Option<usize>,
    #[arg(long = "B")]
    pub budget: Option<usize>,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub b: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    /// SimHash / SimpleLSH code length.
    #[arg(long)]
    pub l: Option<usize>,
    #[arg(long)]
    pub rotation: Option<RotationKind>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub repeats: Option<usize>,
    /// Report path; JSON is written there and CSV next to it.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Ground-truth cache file.
    #[arg(long)]
    pub gt: Option<PathBuf>,
    #[arg(long)]
    pub normalize_queries: bool,
}

#[derive(Debug, Args)]
pub struct GroundtruthArgs {
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long)]
    pub queries: PathBuf,
    #[arg(long, default_value = "fvecs")]
    pub format: VectorFormat,
    #[arg(long, default_value_t = 10)]
    pub k: usize,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub normalize_queries: bool,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[arg(long, default_value_t = 10_000)]
    pub n: usize,
    #[arg(long, default_value_t = 64)]
    pub d: usize,
    /// Number of queries.
    #[arg(long, default_value_t = 100)]
    pub nq: usize,
    #[arg(long, default_value_t = 16)]
    pub clusters: usize,
    /// Planted inner-product gap above the best background point.
    #[arg(long)]
    pub gap: Option<f64>,
    /// Log-normal sigma of point norms (default: uniform norms in [0.5, 1]).
    #[arg(long)]
    pub norm_sigma: Option<f64>,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Output directory; receives `data.f32` and `queries.f32`.
    #[arg(long)]
    pub out: PathBuf,
}
