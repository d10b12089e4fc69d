//! The measurement source: graphs, acceptance rules, and exact or
//! Monte Carlo values of `β_k`.

mod anchors;
mod exact;
mod graph;
mod mc;
mod rule;

pub use anchors::{find_anchors, AnchorMethod, Anchors};
pub use exact::{exact_beta, exact_counts, ExactCounts, DEFAULT_EXHAUSTIVE_LIMIT};
pub use graph::Graph;
pub use mc::{mc_beta, mc_beta_with, BetaMeasurement, McConfig, SubsetSampler, DEFAULT_SAMPLES, DEFAULT_WORKERS};
pub use rule::{acceptance_weight, Evaluator, PropertyRule};

use crate::bernstein::BernsteinPoly;
use crate::error::{Error, Result};

/// Anything that can be asked for `β_k`.
pub trait Oracle {
    fn measure(&mut self, k: usize) -> Result<BetaMeasurement>;
}

impl<F> Oracle for F
where
    F: FnMut(usize) -> Result<BetaMeasurement>,
{
    fn measure(&mut self, k: usize) -> Result<BetaMeasurement> {
        self(k)
    }
}

/// Serves precomputed values, e.g. an exact enumeration or a beta file.
#[derive(Debug, Clone)]
pub struct TableOracle {
    values: Vec<Option<(f64, f64)>>,
}

impl TableOracle {
    pub fn new(values: Vec<Option<(f64, f64)>>) -> Self {
        Self { values }
    }

    pub fn exact(beta: &BernsteinPoly) -> Self {
        Self { values: beta.coefficients().iter().map(|&b| Some((b, 0.0))).collect() }
    }
}

impl Oracle for TableOracle {
    fn measure(&mut self, k: usize) -> Result<BetaMeasurement> {
        match self.values.get(k).copied().flatten() {
            Some((beta, stderr)) => Ok(BetaMeasurement { k, beta, stderr, samples: 0, seed: 0 }),
            None => Err(Error::Oracle { k, message: "no value available".into() }),
        }
    }
}

/// Fresh Monte Carlo estimate per request.
#[derive(Debug, Clone)]
pub struct McOracle {
    graph: Graph,
    rule: PropertyRule,
    config: McConfig,
}

impl McOracle {
    pub fn new(graph: Graph, rule: PropertyRule, config: McConfig) -> Result<Self> {
        rule.validate(&graph)?;
        Ok(Self { graph, rule, config })
    }
}

impl Oracle for McOracle {
    fn measure(&mut self, k: usize) -> Result<BetaMeasurement> {
        mc_beta_with(&self.graph, self.rule, k, &self.config)
    }
}
