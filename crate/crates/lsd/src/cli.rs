use crate::sweep::Family;
use clap::{Args, Parser, Subcommand, ValueEnum};
use lsd_core::Settings;
use std::path::PathBuf;

/// Information and transport functionals against the standard Gaussian, and
/// certified lower bounds on the log-Sobolev deficit.
#[derive(Debug, Parser)]
#[command(name = "lsd", version)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalArgs {
    /// Quadrature nodes per axis for one-dimensional densities.
    #[arg(long, global = true, env = "LSD_GRID_POINTS", default_value_t = Settings::DEFAULT_GRID_POINTS)]
    pub grid_points: usize,
    /// Support half-width in standard deviations.
    #[arg(long, global = true, default_value_t = Settings::DEFAULT_SUPPORT_RADIUS)]
    pub support_radius: f64,
    /// Nodes per axis for two-dimensional densities.
    #[arg(long, global = true, default_value_t = Settings::DEFAULT_PLANE_POINTS)]
    pub plane_points: usize,
    /// A certificate passes when `lhs - rhs >= -tol`.
    #[arg(long, global = true, default_value_t = 1e-6)]
    pub tol: f64,
}

impl GlobalArgs {
    pub fn settings(&self) -> Settings {
        Settings { grid_points: self.grid_points, support_radius: self.support_radius, plane_points: self.plane_points }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print one functional of a density against a reference.
    Distance {
        #[arg(long)]
        dist: PathBuf,
        #[arg(long, value_enum)]
        metric: Metric,
        /// `gaussian` for the standard Gaussian of matching dimension, or a
        /// density-spec file.
        #[arg(long = "ref", default_value = "gaussian")]
        reference: String,
    },
    /// Evaluate deficit bounds on a density.
    Certify {
        #[arg(long)]
        dist: PathBuf,
        #[command(flatten)]
        bounds: BoundArgs,
    },
    /// Tabulate functionals and certificate slacks over a one-parameter family.
    Sweep {
        #[arg(long, value_enum)]
        family: Family,
        /// `lo:hi:step`.
        #[arg(long, allow_hyphen_values = true)]
        range: String,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[command(flatten)]
        bounds: BoundArgs,
    },
    /// Certify every bound on a suite of densities and summarise.
    Report {
        /// `default` for the built-in battery, or a directory of
        /// density-spec files.
        #[arg(long, default_value = "default")]
        suite: String,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        bounds: BoundArgs,
    },
}

#[derive(Debug, Clone, Args)]
pub struct BoundArgs {
    /// Comma-separated bound ids, or `all`.
    #[arg(long, default_value = "all", value_delimiter = ',')]
    pub bounds: Vec<String>,
    /// Smoothing time for the bounds on `X + sqrt(t) Z`.
    #[arg(long, default_value_t = 1.0)]
    pub t: f64,
    /// One-dimensional law of `Y` for the bounds on `X + Y`.
    #[arg(long)]
    pub partner: Option<PathBuf>,
    /// Refined transport bound with the `Δ(|x - z|/sqrt(2π))` cost.
    #[arg(long)]
    pub thm41_scaled: bool,
    /// Median-zero form of the refined transport bound.
    #[arg(long)]
    pub median_variant: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Metric {
    /// Relative entropy.
    Kl,
    /// Relative Fisher information.
    Fisher,
    W2,
    W1,
    /// Transport cost with `Δ(|x - z|)`.
    Tdelta,
    /// `∫|p - q|`.
    Tv,
    /// `I/2 - D` against the standard Gaussian.
    Deficit,
}

impl Metric {
    pub fn id(self) -> &'static str {
        match self {
            Metric::Kl => "kl",
            Metric::Fisher => "fisher",
            Metric::W2 => "w2",
            Metric::W1 => "w1",
            Metric::Tdelta => "tdelta",
            Metric::Tv => "tv",
            Metric::Deficit => "deficit",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}
