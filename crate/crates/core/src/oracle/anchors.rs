use serde::{Deserialize, Serialize};

use super::exact::exact_beta;
use super::graph::Graph;
use super::mc::{mc_beta_with, McConfig};
use super::rule::PropertyRule;
use crate::error::{Error, Result};
use crate::estimator::{Knot, PartialCoefficients};

/// `(k_min, β_kmin)` and `(k_max, β_kmax)` with their standard errors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Anchors {
    pub lower: Knot,
    pub upper: Knot,
}

impl Anchors {
    pub fn to_partial(&self, degree: usize) -> Result<PartialCoefficients> {
        PartialCoefficients::new(degree, self.lower, self.upper)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AnchorMethod {
    Exact { limit: usize },
    /// β_k is declared 0 (resp. 1) when no (resp. every) sample accepts.
    McScan(McConfig),
}

fn from_values(values: impl Fn(usize) -> Result<(f64, f64)>, n: usize) -> Result<Anchors> {
    let mut lower = None;
    for k in 0..=n {
        let (b, s) = values(k)?;
        if b > 0.0 {
            lower = Some(Knot::new(k, b, s));
            break;
        }
    }
    let Some(lower) = lower else {
        return Err(Error::DegenerateAnchors("no k has β_k > 0; k_min is undefined".into()));
    };
    let mut upper = None;
    for k in (0..=n).rev() {
        let (b, s) = values(k)?;
        if b < 1.0 {
            upper = Some(Knot::new(k, b, s));
            break;
        }
    }
    let Some(upper) = upper else {
        return Err(Error::DegenerateAnchors("no k has β_k < 1; k_max is undefined".into()));
    };
    if lower.k >= upper.k {
        return Err(Error::DegenerateAnchors(format!(
            "k_min = {} is not below k_max = {}; nothing is left to estimate",
            lower.k, upper.k
        )));
    }
    Ok(Anchors { lower, upper })
}

pub fn find_anchors(graph: &Graph, rule: PropertyRule, method: AnchorMethod) -> Result<Anchors> {
    let n = graph.edge_count();
    match method {
        AnchorMethod::Exact { limit } => {
            let beta = exact_beta(graph, rule, limit)?;
            from_values(|k| Ok((beta.coefficients()[k], 0.0)), n)
        }
        AnchorMethod::McScan(cfg) => from_values(
            |k| mc_beta_with(graph, rule, k, &cfg).map(|m| (m.beta, m.stderr)),
            n,
        ),
    }
}
