//! Flags and config merged into fully resolved settings.

use std::path::PathBuf;

use anyhow::{anyhow, bail, Result};
use relpoly::design::{Criterion, ScoreMode, SigmaMode, DEFAULT_LIKELIHOOD_SAMPLES};
use relpoly::oracle::{McConfig, PropertyRule, DEFAULT_SAMPLES, DEFAULT_WORKERS};
use serde::{Deserialize, Serialize};

use crate::args::{CriterionArg, DesignArgs, GraphArgs, ModeArg, RuleKind, SamplingArgs, SigmaArg};
use crate::config::Config;

pub const DEFAULT_SEED: u64 = 1;
pub const DEFAULT_GRID: usize = 200;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphSettings {
    pub graph: PathBuf,
    pub directed: bool,
    pub rule: PropertyRule,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SamplingSettings {
    pub samples: usize,
    pub seed: u64,
    pub workers: usize,
    pub exact: bool,
}

impl SamplingSettings {
    pub fn mc(&self) -> McConfig {
        McConfig { samples: self.samples, seed: self.seed, workers: self.workers }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesignSettings {
    pub graph: GraphSettings,
    pub sampling: SamplingSettings,
    pub kmin: Option<usize>,
    pub beta_kmin: Option<f64>,
    pub kmax: Option<usize>,
    pub beta_kmax: Option<f64>,
    pub mode: ScoreMode,
    pub truth: Option<PathBuf>,
    pub gap_tol: f64,
    pub cost_bits: Option<f64>,
    pub criterion: Criterion,
    pub max_measurements: Option<usize>,
    pub likelihood_samples: usize,
    pub sigma: SigmaMode,
    pub grid: usize,
}

pub fn resolve_graph(a: &GraphArgs, c: &Config) -> Result<GraphSettings> {
    let graph: PathBuf = c.pick(a.graph.clone(), "graph")?.ok_or_else(|| anyhow!("--graph is required"))?;
    let directed = c.flag(a.directed, "directed")?;
    let kind = c.pick_enum(a.rule, "rule")?.unwrap_or(RuleKind::St);
    let rule = match kind {
        RuleKind::St => {
            let source = c.pick(a.source, "source")?;
            let target = c.pick(a.target, "target")?;
            match (source, target) {
                (Some(source), Some(target)) => PropertyRule::StConnectivity { source, target },
                _ => bail!("--rule st needs --source and --target"),
            }
        }
        RuleKind::Component | RuleKind::Largest => {
            let min_size: usize =
                c.pick(a.threshold, "threshold")?.ok_or_else(|| anyhow!("component rules need --threshold"))?;
            if kind == RuleKind::Component {
                PropertyRule::ComponentThreshold { min_size }
            } else {
                PropertyRule::LargestComponent { min_size }
            }
        }
    };
    Ok(GraphSettings { graph, directed, rule })
}

pub fn resolve_sampling(a: &SamplingArgs, c: &Config) -> Result<SamplingSettings> {
    let s = SamplingSettings {
        samples: c.pick(a.samples, "samples")?.unwrap_or(DEFAULT_SAMPLES),
        seed: c.pick(a.seed, "seed")?.unwrap_or(DEFAULT_SEED),
        workers: c.pick(a.workers, "workers")?.unwrap_or(DEFAULT_WORKERS),
        exact: c.flag(a.exact, "exact")?,
    };
    if s.samples == 0 || s.workers == 0 {
        bail!("--samples and --workers must be positive");
    }
    Ok(s)
}

pub fn resolve_design(a: &DesignArgs, c: &Config) -> Result<(DesignSettings, PathBuf)> {
    let out: PathBuf = c.pick(a.out.clone(), "out")?.ok_or_else(|| anyhow!("--out is required"))?;
    let beta_kmin = c.pick(a.beta_kmin, "beta_kmin")?;
    let beta_kmax = c.pick(a.beta_kmax, "beta_kmax")?;
    let kmin = c.pick(a.kmin, "kmin")?;
    let kmax = c.pick(a.kmax, "kmax")?;
    if (beta_kmin.is_some() && kmin.is_none()) || (beta_kmax.is_some() && kmax.is_none()) {
        bail!("--beta-kmin/--beta-kmax need the matching --kmin/--kmax");
    }
    let mode = match c.pick_enum(a.mode, "mode")?.unwrap_or(ModeArg::BoundGap) {
        ModeArg::BoundGap => ScoreMode::BoundGap,
        ModeArg::OracleInformed => ScoreMode::OracleInformed,
    };
    let criterion = match c.pick_enum(a.criterion, "criterion")?.unwrap_or(CriterionArg::Aic) {
        CriterionArg::Aic => Criterion::Aic,
        CriterionArg::Bic => Criterion::Bic,
    };
    let sigma = match c.pick_enum(a.sigma, "sigma")?.unwrap_or(SigmaArg::Pooled) {
        SigmaArg::Pooled => SigmaMode::Pooled,
        SigmaArg::PerCoefficient => SigmaMode::PerCoefficient,
    };
    let settings = DesignSettings {
        graph: resolve_graph(&a.graph, c)?,
        sampling: resolve_sampling(&a.sampling, c)?,
        kmin,
        beta_kmin,
        kmax,
        beta_kmax,
        mode,
        truth: c.pick(a.truth.clone(), "truth")?,
        gap_tol: c.pick(a.gap_tol, "gap_tol")?.unwrap_or(0.0),
        cost_bits: c.pick(a.cost_bits, "cost_bits")?,
        criterion,
        max_measurements: c.pick(a.max_measurements, "max_measurements")?,
        likelihood_samples: c.pick(a.likelihood_samples, "likelihood_samples")?.unwrap_or(DEFAULT_LIKELIHOOD_SAMPLES),
        sigma,
        grid: c.pick(a.grid, "grid")?.unwrap_or(DEFAULT_GRID),
    };
    if settings.grid == 0 {
        bail!("--grid must be positive");
    }
    Ok((settings, out))
}
