//! Command-line front end. The `neo` binary only parses arguments and maps errors to exit codes.

pub mod commands;
pub mod config;
pub mod ingest;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use commands::{
    cmd_adjust, cmd_assess, cmd_distance, cmd_infer, cmd_proxy_curves, cmd_tables, conversion_tables, AssessReport,
    InferReport, LawSpec, ProxyCurves,
};
pub use config::{Approximation, GridSpec, OutputFormat, RunConfig};

use crate::error::{Error, Result};

pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_INGESTION: i32 = 3;
pub const EXIT_DEGENERATE: i32 = 4;

/// Stable process exit code for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Ingestion(_) | Error::Io(_) => EXIT_INGESTION,
        Error::DegenerateInput(_)
        | Error::DegenerateSample
        | Error::DegenerateCriterion(_)
        | Error::DegenerateObjective(_)
        | Error::Objective(_) => EXIT_DEGENERATE,
        Error::Domain(_)
        | Error::InvalidParameter(_)
        | Error::Grid(_)
        | Error::Covariance(_)
        | Error::Alignment(_)
        | Error::Constant(_)
        | Error::Empty(_)
        | Error::Config(_)
        | Error::UnknownName(_) => EXIT_CONFIG,
    }
}

#[derive(Debug, Parser)]
#[command(name = "neo", version, about = "Highest-density inference on approximated proxy laws")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Estimate, HPD regions and tests from a data column.
    Infer(InferArgs),
    /// Monte-Carlo assessment of the Gaussian approximation.
    Assess(AssessArgs),
    /// Level and critical-value conversion tables, plus the level curve.
    Tables(TablesArgs),
    /// Apply the √2 adjustment to one standard error, p-value or critical value.
    Adjust(AdjustArgs),
    /// Distances between a Gaussian and a reference law.
    Distance(DistanceArgs),
    /// True and fitted proxy densities for plotting.
    ProxyCurves(ProxyCurvesArgs),
}

#[derive(Debug, Clone, Args)]
pub struct InferArgs {
    /// CSV file with the observations.
    pub data: PathBuf,
    /// JSON run configuration; flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// The first CSV row is a header.
    #[arg(long)]
    pub header: bool,
    /// Column index or header name.
    #[arg(long)]
    pub column: Option<String>,
    #[arg(long, value_enum)]
    pub approx: Option<Approximation>,
    /// `lo:hi:points`.
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Option<GridSpec>,
    /// Comma-separated test sizes.
    #[arg(long, value_delimiter = ',')]
    pub alpha: Vec<f64>,
    /// Comma-separated values to test.
    #[arg(long = "test", value_delimiter = ',', allow_hyphen_values = true)]
    pub test_values: Vec<f64>,
    /// Calibrated parameter value.
    #[arg(long, allow_hyphen_values = true)]
    pub theta_star: Option<f64>,
    /// Known standard deviation of one observation.
    #[arg(long)]
    pub sigma: Option<f64>,
    #[arg(long, value_enum)]
    pub format: Option<OutputFormat>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl InferArgs {
    pub fn new(data: impl Into<PathBuf>) -> Self {
        Self {
            data: data.into(),
            config: None,
            header: false,
            column: None,
            approx: None,
            grid: None,
            alpha: Vec::new(),
            test_values: Vec::new(),
            theta_star: None,
            sigma: None,
            format: None,
            out: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Profile {
    /// `M = 10⁴`.
    Paper,
    /// `M = 2000`.
    Ci,
}

#[derive(Debug, Clone, Args, Default)]
pub struct AssessArgs {
    /// JSON assessment configuration. Without it, `--profile` picks the defaults.
    pub config: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub profile: Option<Profile>,
    #[arg(long, env = "NEO_SEED")]
    pub seed: Option<u64>,
    #[arg(long)]
    pub replications: Option<usize>,
    /// Worker threads; defaults to one per core. Output does not depend on it.
    #[arg(long)]
    pub threads: Option<usize>,
    /// Defaults to CSV.
    #[arg(long, value_enum)]
    pub format: Option<OutputFormat>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct TablesArgs {
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
    #[arg(long, default_value_t = 512)]
    pub curve_points: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AdjustKind {
    /// `√2 · se`.
    Se,
    /// Nominal size to adjusted rejection rate.
    Pvalue,
    /// `√2 · c`.
    Tstat,
}

#[derive(Debug, Clone, Args)]
pub struct AdjustArgs {
    #[arg(value_enum)]
    pub kind: AdjustKind,
    #[arg(allow_hyphen_values = true)]
    pub value: f64,
}

#[derive(Debug, Clone, Args)]
pub struct DistanceArgs {
    /// `normal:mean:sd` or `data:path`.
    #[arg(long, allow_hyphen_values = true)]
    pub fitted: LawSpec,
    /// `normal:mean:sd`, `gaussian-mean:theta0:s:T` or `binomial-mean:T:p`.
    #[arg(long, allow_hyphen_values = true)]
    pub truth: LawSpec,
    /// The data file has a header row.
    #[arg(long)]
    pub header: bool,
    /// Quadrature points for numeric distances.
    #[arg(long, default_value_t = 20_001)]
    pub grid_points: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ProxyCurvesArgs {
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub theta0: f64,
    #[arg(long, default_value_t = 0.4)]
    pub s: f64,
    #[arg(long, default_value_t = 20)]
    pub t: u32,
    /// Number of fitted curves.
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    #[arg(long, env = "NEO_SEED", default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Option<GridSpec>,
    #[arg(long, default_value = "proxy_curves.csv")]
    pub out: PathBuf,
}

/// Dispatches one parsed command line.
pub fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Infer(a) => cmd_infer(a).map(drop),
        Command::Assess(a) => cmd_assess(a).map(drop),
        Command::Tables(a) => cmd_tables(a).map(drop),
        Command::Adjust(a) => commands::run_adjust(a).map(drop),
        Command::Distance(a) => cmd_distance(a).map(drop),
        Command::ProxyCurves(a) => cmd_proxy_curves(a).map(drop),
    }
}
