use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::config::CONFIG_ENV;

#[derive(Debug, Parser)]
#[command(name = "relpoly", version, about = "Adaptive estimation of network reliability polynomials")]
pub struct Cli {
    /// Flat `key = value` defaults for any long flag.
    #[arg(long, global = true, env = CONFIG_ENV)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Monomial coefficients to Bernstein coefficients, or back with --inverse.
    Convert {
        input: PathBuf,
        #[arg(long)]
        inverse: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sample a beta file (full, or partial and interpolated) on a grid.
    Eval {
        input: PathBuf,
        #[arg(long)]
        grid: Option<usize>,
    },
    /// L2 distance on [0, 1] between two beta files.
    Norm { a: PathBuf, b: PathBuf },
    /// Monotone envelopes of a partial beta file.
    Bounds {
        input: PathBuf,
        /// Widen every known value other than 0 and 1 by this much.
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long)]
        grid: Option<usize>,
    },
    /// Measure β_k on a graph.
    Oracle {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        sampling: SamplingArgs,
        #[arg(long, conflicts_with = "all")]
        k: Option<usize>,
        #[arg(long)]
        all: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Locate k_min and k_max.
    Anchors {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        sampling: SamplingArgs,
    },
    /// Run the sequential design loop and write its trace, curves and manifest.
    Design(DesignArgs),
    /// Re-run a design from its manifest and check every output digest.
    Replay {
        manifest: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RuleKind {
    /// Terminal reachability.
    St,
    /// Fraction of vertices in components of at least --threshold vertices.
    Component,
    /// Some component has at least --threshold vertices.
    Largest,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    BoundGap,
    OracleInformed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CriterionArg {
    Aic,
    Bic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SigmaArg {
    Pooled,
    PerCoefficient,
}

#[derive(Debug, Clone, Args)]
pub struct GraphArgs {
    /// Edge list, one `u v` pair per line.
    #[arg(long)]
    pub graph: Option<PathBuf>,
    #[arg(long)]
    pub directed: bool,
    #[arg(long, value_enum)]
    pub rule: Option<RuleKind>,
    #[arg(long)]
    pub source: Option<usize>,
    #[arg(long)]
    pub target: Option<usize>,
    #[arg(long)]
    pub threshold: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct SamplingArgs {
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub workers: Option<usize>,
    /// Enumerate every edge subset instead of sampling.
    #[arg(long)]
    pub exact: bool,
}

#[derive(Debug, Clone, Args)]
pub struct DesignArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[command(flatten)]
    pub sampling: SamplingArgs,
    #[arg(long)]
    pub kmin: Option<usize>,
    #[arg(long)]
    pub beta_kmin: Option<f64>,
    #[arg(long)]
    pub kmax: Option<usize>,
    #[arg(long)]
    pub beta_kmax: Option<f64>,
    #[arg(long, value_enum)]
    pub mode: Option<ModeArg>,
    /// Reference beta file; enables L2-to-truth reporting.
    #[arg(long)]
    pub truth: Option<PathBuf>,
    #[arg(long)]
    pub gap_tol: Option<f64>,
    /// Smallest criterion improvement worth another measurement.
    #[arg(long)]
    pub cost_bits: Option<f64>,
    #[arg(long, value_enum)]
    pub criterion: Option<CriterionArg>,
    #[arg(long)]
    pub max_measurements: Option<usize>,
    #[arg(long)]
    pub likelihood_samples: Option<usize>,
    #[arg(long, value_enum)]
    pub sigma: Option<SigmaArg>,
    /// Curve samples are taken at `grid + 1` evenly spaced points.
    #[arg(long)]
    pub grid: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}
