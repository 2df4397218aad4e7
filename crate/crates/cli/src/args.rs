use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "discovery", version, about = "Discovery probabilities for species sampling data")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Empirical-Bayes fit of (σ, θ).
    Fit(FitArgs),
    /// Point estimates of discovery probabilities.
    Estimate(EstimateArgs),
    /// Point estimates with credible intervals.
    Interval(IntervalArgs),
    /// Zeta simulation study comparing estimators.
    Simulate(SimulateArgs),
    /// Credible intervals of the new-species probability over a (σ, θ) grid.
    Sensitivity(SensitivityArgs),
    /// Posterior of (σ, θ) on a grid, for contour plots.
    PosteriorGrid(PosteriorArgs),
}

#[derive(Debug, Clone, Args)]
#[command(group(ArgGroup::new("input").required(true).args(["spectrum", "tokens", "library"])))]
pub struct InputArgs {
    /// Frequency spectrum CSV with header `l,count`.
    #[arg(long, value_name = "PATH")]
    pub spectrum: Option<PathBuf>,
    /// Newline-delimited species labels.
    #[arg(long, value_name = "PATH")]
    pub tokens: Option<PathBuf>,
    /// Built-in library: `aerobic` or `anaerobic`.
    #[arg(long, value_name = "NAME")]
    pub library: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct ParamArgs {
    #[arg(long, requires = "theta", conflicts_with = "fit")]
    pub sigma: Option<f64>,
    #[arg(long, requires = "sigma", conflicts_with = "fit")]
    pub theta: Option<f64>,
    /// Use the empirical-Bayes estimate of (σ, θ).
    #[arg(long)]
    pub fit: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// Write to this file instead of stdout.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScalingArg {
    Naive,
    Rstar,
}

#[derive(Debug, Clone, Args)]
pub struct MonteCarloArgs {
    #[arg(long, default_value_t = 0.95)]
    pub level: f64,
    /// Draws of the limit variable.
    #[arg(long, default_value_t = 100_000)]
    pub draws: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "rstar")]
    pub scaling: ScalingArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EstimatorArg {
    Bnp,
    Gt,
    Gtoulmin,
    Sgt,
    PoissonSmooth,
    PdSmooth,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SmootherArg {
    Pd,
    Poisson,
    Sgt,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct TargetArgs {
    /// Extrapolation sizes; integers or multiples of the sample size (`n`, `10n`).
    #[arg(long, value_delimiter = ',', default_value = "0")]
    pub m: Vec<String>,
    /// Frequencies `l`, one estimate each.
    #[arg(long, value_delimiter = ',')]
    pub l: Vec<u64>,
    /// A frequency set, estimated jointly.
    #[arg(long, value_delimiter = ',')]
    pub cumulative: Vec<u64>,
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub params: ParamArgs,
    #[command(flatten)]
    pub targets: TargetArgs,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "bnp")]
    pub estimator: Vec<EstimatorArg>,
    /// Adds the smoothed Good–Turing estimator with this rule.
    #[arg(long, value_enum)]
    pub smoother: Option<SmootherArg>,
    /// Clamp Good–Toulmin values to [0, 1].
    #[arg(long)]
    pub clamp: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct IntervalArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub params: ParamArgs,
    #[command(flatten)]
    pub targets: TargetArgs,
    #[command(flatten)]
    pub mc: MonteCarloArgs,
    /// Exact intervals from the law of the number of new species (l = 0).
    #[arg(long)]
    pub exact: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long, default_value_t = 500)]
    pub replicates: usize,
    #[arg(long, default_value_t = 1000)]
    pub n: u64,
    /// Zeta exponent.
    #[arg(long, default_value_t = 1.5)]
    pub s: f64,
    #[arg(long, default_value_t = 5)]
    pub groups: usize,
    #[arg(long, value_delimiter = ',', default_value = "0,1,5,10,20,30")]
    pub l: Vec<u64>,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SensitivityArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Optional extra row at these parameters (or at the fit).
    #[command(flatten)]
    pub params: ParamArgs,
    #[arg(long, value_delimiter = ',', default_value = "n,10n,100n")]
    pub m: Vec<String>,
    #[arg(long, value_delimiter = ',', default_value = "0.2,0.4,0.6,0.8")]
    pub grid_sigma: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "0.1,1,10,100,1000")]
    pub grid_theta: Vec<f64>,
    #[command(flatten)]
    pub mc: MonteCarloArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct PosteriorArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, default_value_t = 99)]
    pub sigma_points: usize,
    #[arg(long, default_value_t = 1.0)]
    pub theta_min: f64,
    #[arg(long, default_value_t = 400.0)]
    pub theta_max: f64,
    #[arg(long, default_value_t = 200)]
    pub theta_points: usize,
    #[arg(long, default_value_t = 1.0)]
    pub prior_shape: f64,
    /// Scale (not rate) of the Gamma prior on θ.
    #[arg(long, default_value_t = 100.0)]
    pub prior_scale: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}
