use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "ordeval", version, about = "Evaluate ordinal survey attributes against an ordinal response")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Rank, evaluate, classify and render every attribute of a CSV file.
    Analyze(AnalyzeArgs),
    /// ReliefF scores only.
    Rank(RankArgs),
    /// Classify previously computed reinforcement profiles.
    Classify(ClassifyArgs),
    /// Generate a synthetic population from a JSON spec.
    Simulate(SimulateArgs),
    /// Draw SVG charts from previously computed profiles and scores.
    Render(RenderArgs),
    /// Generate, analyze and compare against the known categories.
    Verify(VerifyArgs),
}

#[derive(Args, Debug, Clone)]
pub struct InputArgs {
    /// CSV file with one header row.
    #[arg(long)]
    pub input: PathBuf,
    /// Header of the response column.
    #[arg(long)]
    pub response: String,
    /// Scale size, `7` for every column or `column=5` for one column. Repeatable.
    #[arg(long = "scale", value_name = "[COLUMN=]MAX")]
    pub scales: Vec<String>,
    /// Extra tokens read as missing (the empty field always is).
    #[arg(long = "missing", value_name = "TOKEN", default_value = "NA")]
    pub missing: Vec<String>,
    /// Columns to drop before parsing.
    #[arg(long = "ignore", value_name = "COLUMN")]
    pub ignore: Vec<String>,
}

#[derive(Args, Debug, Clone)]
pub struct SeedArg {
    /// Master seed; falls back to ORDEVAL_SEED, then 0.
    #[arg(long, env = "ORDEVAL_SEED", default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args, Debug, Clone)]
pub struct EvalArgs {
    /// ReliefF neighbors per class.
    #[arg(long, default_value_t = 10)]
    pub k: usize,
    /// Rows in each local context (default min(n - 1, 30)).
    #[arg(long)]
    pub context: Option<usize>,
    /// Permutation replicates for the null distribution; 0 disables significance.
    #[arg(long, default_value_t = 200)]
    pub bootstrap: usize,
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    /// Events a cell needs before its factor is defined.
    #[arg(long = "min-support", default_value_t = 5)]
    pub min_support: usize,
    /// Keep the evaluated attribute in the context distance.
    #[arg(long)]
    pub include_evaluated: bool,
    /// Single-threaded evaluation (same results).
    #[arg(long)]
    pub serial: bool,
    #[command(flatten)]
    pub seed: SeedArg,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Format {
    Json,
    Csv,
    Svg,
    Text,
}

#[derive(Args, Debug)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub eval: EvalArgs,
    /// Output directory, created if needed.
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, value_delimiter = ',', default_value = "json,csv,svg,text")]
    pub formats: Vec<Format>,
}

#[derive(Args, Debug)]
pub struct RankArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, default_value_t = 10)]
    pub k: usize,
    /// Evaluate a random sample of this many pivots instead of every row.
    #[arg(long)]
    pub pivots: Option<usize>,
    #[command(flatten)]
    pub seed: SeedArg,
    /// JSON destination; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also draw the ranking chart here.
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ClassifyArgs {
    /// profiles.json from `analyze`.
    #[arg(long)]
    pub profiles: PathBuf,
    /// Classification rules as JSON; defaults otherwise.
    #[arg(long)]
    pub rules: Option<PathBuf>,
    /// JSON destination; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    /// Population spec (JSON).
    #[arg(long)]
    pub spec: PathBuf,
    /// CSV destination; the ground truth goes next to it as `<stem>.truth.json`.
    #[arg(long)]
    pub out: PathBuf,
    /// Overrides the seed in the population file.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Args, Debug)]
pub struct RenderArgs {
    #[arg(long)]
    pub profiles: PathBuf,
    /// scores.json; adds the ranking chart.
    #[arg(long)]
    pub scores: Option<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long)]
    pub spec: PathBuf,
    /// Expected categories; the population file's own ground truth when absent.
    #[arg(long)]
    pub truth: Option<PathBuf>,
    #[command(flatten)]
    pub eval: EvalArgs,
    /// Directory for recovery.json.
    #[arg(long)]
    pub out: PathBuf,
}
