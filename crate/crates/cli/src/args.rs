use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rss_entropy::{DistributionSpec, EstimatorKind, SamplingMode, TestKind};

#[derive(Debug, Parser)]
#[command(name = "rss-entropy", version, about = "Entropy estimators and entropy-based normality tests")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Estimate entropy of a data file
    Estimate(EstimateArgs),
    /// Monte Carlo critical values of a test statistic
    CriticalValues(CriticalArgs),
    /// Monte Carlo power against an alternative
    Power(PowerArgs),
    /// Bias, SD and RMSE of an estimator
    RmseTable(RmseArgs),
    /// MSE scaled by n^b over several sample sizes
    MseTrend(TrendArgs),
    /// Test a data file for normality
    NormalityTest(NormalityArgs),
    /// Analysis of the embedded repair-times data
    RealData(RealDataArgs),
    /// Raw and smoothed order statistics of a normal sample
    SmoothDemo(SmoothArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Full,
    Bootstrap,
}

impl From<ModeArg> for SamplingMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Full => SamplingMode::FullGrid,
            ModeArg::Bootstrap => SamplingMode::Bootstrap,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value = "csv")]
    pub output: OutputFormat,
    /// Write to this file instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct McArgs {
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    #[arg(long, default_value_t = 10_000)]
    pub reps: usize,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Moving-average width for the RSS statistics
    #[arg(long, default_value_t = 3)]
    pub w: usize,
    #[arg(long, value_enum, default_value = "full")]
    pub mode: ModeArg,
}

fn parse_estimator(s: &str) -> Result<EstimatorKind, String> {
    s.parse().map_err(|e: rss_entropy::EntropyError| e.to_string())
}

fn parse_stat(s: &str) -> Result<TestKind, String> {
    s.parse().map_err(|e: rss_entropy::EntropyError| e.to_string())
}

fn parse_dist(s: &str) -> Result<DistributionSpec, String> {
    s.parse().map_err(|e: rss_entropy::EntropyError| e.to_string())
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    /// Data file, one value per line (`-` for stdin)
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_parser = parse_estimator)]
    pub estimator: EstimatorKind,
    /// Expected sample size; checked against the data
    #[arg(long, conflicts_with = "n_from_data")]
    pub n: Option<usize>,
    /// Take the sample size from the data
    #[arg(long)]
    pub n_from_data: bool,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long, default_value_t = 3)]
    pub w: usize,
    #[arg(long, value_enum, default_value = "bootstrap")]
    pub mode: ModeArg,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Add uniform noise of size 1e-9 times the data range before estimating
    #[arg(long)]
    pub jitter: bool,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct CriticalArgs {
    #[arg(long, value_parser = parse_stat)]
    pub stat: TestKind,
    #[arg(long, value_delimiter = ',', required = true)]
    pub n: Vec<usize>,
    /// Window sizes; defaults to the recommended testing window per n
    #[arg(long, value_delimiter = ',')]
    pub m: Vec<usize>,
    #[command(flatten)]
    pub mc: McArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct PowerArgs {
    #[arg(long, value_parser = parse_stat)]
    pub stat: TestKind,
    #[arg(long, value_parser = parse_dist)]
    pub alt: DistributionSpec,
    #[arg(long, value_delimiter = ',', required = true)]
    pub n: Vec<usize>,
    /// Window size; defaults to the recommended testing window per n
    #[arg(long)]
    pub m: Option<usize>,
    #[command(flatten)]
    pub mc: McArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct RmseArgs {
    #[arg(long, value_delimiter = ',', value_parser = parse_estimator, required = true)]
    pub estimator: Vec<EstimatorKind>,
    /// Sampling distribution with a known entropy (exp, normal or unif)
    #[arg(long, alias = "dist", value_parser = parse_dist)]
    pub alt: DistributionSpec,
    #[arg(long, value_delimiter = ',', required = true)]
    pub n: Vec<usize>,
    /// Window size; defaults to floor(sqrt(n) + 0.5)
    #[arg(long)]
    pub m: Option<usize>,
    #[command(flatten)]
    pub mc: McArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct TrendArgs {
    #[arg(long, value_parser = parse_estimator)]
    pub estimator: EstimatorKind,
    #[arg(long, alias = "dist", value_parser = parse_dist)]
    pub alt: DistributionSpec,
    #[arg(long, value_delimiter = ',', required = true)]
    pub n: Vec<usize>,
    /// Exponent of the n^b scaling
    #[arg(long)]
    pub b: f64,
    /// Fixed window size; defaults to floor(sqrt(n) + 0.5) per n
    #[arg(long)]
    pub m: Option<usize>,
    #[command(flatten)]
    pub mc: McArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct NormalityArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_parser = parse_stat)]
    pub stat: TestKind,
    /// Window size; defaults to the recommended testing window
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    #[arg(long, default_value_t = 10_000)]
    pub reps: usize,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value_t = 3)]
    pub w: usize,
    #[arg(long, value_enum, default_value = "bootstrap")]
    pub mode: ModeArg,
    #[arg(long)]
    pub jitter: bool,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct RealDataArgs {
    /// Statistic to analyse; all four of tv, tve, tc and tw_r by default
    #[arg(long, value_parser = parse_stat)]
    pub stat: Option<TestKind>,
    #[arg(long, default_value_t = 4)]
    pub m: usize,
    #[arg(long, default_value_t = 3)]
    pub w: usize,
    #[arg(long, default_value_t = 10_000)]
    pub reps: usize,
    /// Defaults to a fixed documented seed so the analysis is reproducible
    #[arg(long, default_value_t = crate::commands::REAL_DATA_SEED)]
    pub seed: u64,
    /// Sample sizes for the simulated powers; defaults to 15 and 45
    #[arg(long, value_delimiter = ',')]
    pub n: Vec<usize>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SmoothArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 3)]
    pub w: usize,
    #[arg(long)]
    pub seed: Option<u64>,
    #[command(flatten)]
    pub out: OutputArgs,
}
