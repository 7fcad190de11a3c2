use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "sskh", version, about = "Channel regression, LWLR, star-specific PRFs, set families and mutual information")]
pub struct Cli {
    /// Master seed; every random stream is derived from it.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Directory for output files (created if missing).
    #[arg(long, global = true, default_value = ".")]
    pub out_dir: PathBuf,
    /// Format of tabular outputs.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// JSON object of flags, e.g. {"sigma": 30, "xs": [0, 1, 2]}. Flags on the command line win.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one star's message exchange and write the hub dataset.
    Simulate(SimulateArgs),
    /// Grid search plus refinement on a dataset.
    Fit(FitArgs),
    /// Build the error oracle and its statistics.
    Errors(ErrorsArgs),
    #[command(subcommand)]
    Lwlr(LwlrCommand),
    #[command(subcommand)]
    Prf(PrfCommand),
    #[command(subcommand)]
    Setfam(SetfamCommand),
    /// Mutual information between two regressions on overlapping designs.
    Mutinfo(MutinfoArgs),
    /// Rerun one reference experiment (fig2, fig3, fig4, fig6 or fig7).
    Repro(ReproArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FuncArg {
    Linear,
    Sqrt,
    Square,
    Cbrt,
    Log1p,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CoverageArg {
    Complete,
    Random,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long, value_enum, default_value_t = FuncArg::Linear)]
    pub func: FuncArg,
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    pub beta0: i64,
    #[arg(long)]
    pub beta1: i64,
    #[arg(long)]
    pub modulus: u64,
    #[arg(long, default_value_t = 30.0)]
    pub sigma: f64,
    #[arg(long, default_value_t = 1 << 16)]
    pub ell: usize,
    #[arg(long, value_enum, default_value_t = CoverageArg::Random)]
    pub coverage: CoverageArg,
    /// Parties in the star.
    #[arg(long, default_value_t = 3)]
    pub parties: usize,
    /// Base name of the output files.
    #[arg(long, default_value = "dataset")]
    pub name: String,
}

#[derive(Debug, Args)]
pub struct DatasetInput {
    /// Dataset CSV with columns x,y.
    #[arg(long)]
    pub dataset: PathBuf,
    /// Defaults to the modulus in the dataset's .meta.json sidecar.
    #[arg(long)]
    pub modulus: Option<u64>,
    /// Map applied to x before fitting; defaults to the sidecar's function.
    #[arg(long, value_enum)]
    pub transform: Option<TransformArg>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TransformArg {
    Identity,
    Sqrt,
    Square,
    Cbrt,
    Log1p,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    #[command(flatten)]
    pub input: DatasetInput,
}

#[derive(Debug, Args)]
pub struct ErrorsArgs {
    #[command(flatten)]
    pub input: DatasetInput,
    /// Hypothesis JSON; fitted from the dataset when absent.
    #[arg(long)]
    pub hypothesis: Option<PathBuf>,
    /// Channel standard deviation; defaults to the sidecar's.
    #[arg(long)]
    pub sigma: Option<f64>,
}

/// Where the error oracle comes from: a stored dataset, or a fresh linear
/// exchange with complete coverage.
#[derive(Debug, Args)]
pub struct OracleArgs {
    #[arg(long)]
    pub dataset: Option<PathBuf>,
    #[arg(long, requires = "dataset")]
    pub hypothesis: Option<PathBuf>,
    #[arg(long, default_value_t = 12289)]
    pub modulus: u64,
    #[arg(long, default_value_t = 30.0)]
    pub sigma: f64,
    #[arg(long, default_value_t = 97)]
    pub beta1: i64,
    #[arg(long, default_value_t = 1 << 16)]
    pub ell: usize,
    #[arg(long, default_value_t = 3)]
    pub parties: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SecretArg {
    Uniform,
    Binary,
}

#[derive(Debug, Subcommand)]
pub enum LwlrCommand {
    /// Draw LWLR samples for a random secret.
    Sample(LwlrSampleArgs),
    /// Oracle errors next to LWR rounding losses.
    Compare(LwlrCompareArgs),
}

#[derive(Debug, Args)]
pub struct LwlrSampleArgs {
    #[command(flatten)]
    pub oracle: OracleArgs,
    #[arg(long, default_value_t = 4)]
    pub w: usize,
    #[arg(long, default_value_t = 100)]
    pub count: usize,
    #[arg(long, value_enum, default_value_t = SecretArg::Uniform)]
    pub secret: SecretArg,
}

#[derive(Debug, Args)]
pub struct LwlrCompareArgs {
    #[command(flatten)]
    pub oracle: OracleArgs,
    #[arg(long, default_value_t = 4)]
    pub w: usize,
    /// LWR modulus; defaults to the oracle modulus.
    #[arg(long)]
    pub q: Option<u64>,
    #[arg(long, default_value_t = 256)]
    pub p: u64,
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TreeArg {
    Balanced,
    LeftSpine,
    RightSpine,
}

#[derive(Debug, Args)]
pub struct PrfSetup {
    #[command(flatten)]
    pub oracle: OracleArgs,
    #[arg(long, default_value_t = 4)]
    pub w: usize,
    #[arg(long, default_value_t = 8)]
    pub leaves: usize,
    #[arg(long, value_enum, default_value_t = TreeArg::Balanced)]
    pub tree: TreeArg,
    /// Key entries; random when absent.
    #[arg(long, value_delimiter = ',')]
    pub key: Option<Vec<u64>>,
}

#[derive(Debug, Subcommand)]
pub enum PrfCommand {
    /// Evaluate the PRF on given or random inputs.
    Eval(PrfEvalArgs),
    /// Measure the homomorphism gap over random key pairs.
    Homtest(PrfHomtestArgs),
    /// Collision rate between two stars under the same key.
    Startest(PrfStartestArgs),
}

#[derive(Debug, Args)]
pub struct PrfEvalArgs {
    #[command(flatten)]
    pub setup: PrfSetup,
    /// Input bit strings such as 01101001; random inputs when absent.
    #[arg(long = "input", value_delimiter = ',')]
    pub inputs: Vec<String>,
    #[arg(long, default_value_t = 10)]
    pub count: usize,
}

#[derive(Debug, Args)]
pub struct PrfHomtestArgs {
    #[command(flatten)]
    pub setup: PrfSetup,
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
}

#[derive(Debug, Args)]
pub struct PrfStartestArgs {
    #[command(flatten)]
    pub setup: PrfSetup,
    #[arg(long, default_value_t = 200)]
    pub trials: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyKind {
    Fano,
    SmallN,
    ExactT,
    Double,
    Distinguished,
}

#[derive(Debug, Subcommand)]
pub enum SetfamCommand {
    /// Build a family.
    Construct(ConstructArgs),
    /// Check a family against the (k, t) predicates.
    Verify(VerifyArgs),
    /// Evaluate the size bounds.
    Bounds(BoundsArgs),
    /// Exhaustive maximum for small parameters.
    Brute(BruteArgs),
}

#[derive(Debug, Args)]
pub struct ConstructArgs {
    #[arg(long, value_enum)]
    pub kind: FamilyKind,
    /// Number of sets for small-n.
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub t: Option<usize>,
    /// Universe size for distinguished.
    #[arg(long)]
    pub n: Option<usize>,
    /// Source family JSON for double and distinguished.
    #[arg(long)]
    pub input: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub t: usize,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub t: usize,
    /// Family size for the feasibility check.
    #[arg(long)]
    pub m: Option<usize>,
    /// Constant of the semi-honest lower bound.
    #[arg(long, default_value_t = 0.5)]
    pub c: f64,
}

#[derive(Debug, Args)]
pub struct BruteArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub t: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum C3Arg {
    Shared,
    Full,
}

#[derive(Debug, Args)]
pub struct MutinfoArgs {
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true, required = true)]
    pub xs: Vec<f64>,
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true, required = true)]
    pub ws: Vec<f64>,
    /// Shared leading points.
    #[arg(long)]
    pub a: usize,
    #[arg(long, default_value_t = 1.0)]
    pub sigma: f64,
    #[arg(long, value_enum, default_value_t = C3Arg::Shared)]
    pub c3: C3Arg,
    /// Monte Carlo trials; 0 skips the estimate.
    #[arg(long, default_value_t = 0)]
    pub trials: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FigureArg {
    Fig2,
    Fig3,
    Fig4,
    Fig6,
    Fig7,
}

#[derive(Debug, Args)]
pub struct ReproArgs {
    #[arg(value_enum)]
    pub figure: FigureArg,
    #[arg(long, default_value_t = sskh_core::experiment::FIGURE_SIGMA)]
    pub sigma: f64,
}
