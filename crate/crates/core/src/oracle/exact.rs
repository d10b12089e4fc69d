//! Brute-force `β_k` by enumerating every edge subset.

use rayon::prelude::*;

use super::graph::Graph;
use super::rule::{Evaluator, PropertyRule};
use crate::bernstein::binomial::binomial_u64;
use crate::bernstein::BernsteinPoly;
use crate::error::{Error, Result};

/// 2^25 subsets takes a few seconds; beyond that use Monte Carlo.
pub const DEFAULT_EXHAUSTIVE_LIMIT: usize = 25;

/// Exact acceptance sums: `β_k = numerators[k] / (denominator · C(N, k))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactCounts {
    pub numerators: Vec<u64>,
    pub denominator: u64,
}

impl ExactCounts {
    pub fn degree(&self) -> usize {
        self.numerators.len() - 1
    }

    pub fn subsets(&self, k: usize) -> u64 {
        binomial_u64(self.degree(), k).expect("degree is within the exhaustive limit")
    }

    pub fn beta(&self, k: usize) -> f64 {
        self.numerators[k] as f64 / (self.denominator * self.subsets(k)) as f64
    }

    pub fn to_poly(&self) -> BernsteinPoly {
        let beta = (0..=self.degree()).map(|k| self.beta(k)).collect();
        BernsteinPoly::probability(beta).expect("acceptance weights are probabilities")
    }
}

pub fn exact_counts(graph: &Graph, rule: PropertyRule, limit: usize) -> Result<ExactCounts> {
    let n = graph.edge_count();
    if n > limit || n >= 63 {
        return Err(Error::ExhaustiveLimit { edges: n, limit });
    }
    let denominator = Evaluator::new(graph, rule)?.denominator();
    let total: u64 = 1 << n;
    let chunk = 1u64 << n.saturating_sub(6).min(16);
    let chunks = total.div_ceil(chunk);
    let numerators = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut eval = Evaluator::new(graph, rule).expect("rule validated above");
            let mut acc = vec![0u64; n + 1];
            let mut subset = Vec::with_capacity(n);
            for mask in c * chunk..((c + 1) * chunk).min(total) {
                subset.clear();
                subset.extend((0..n).filter(|&e| mask >> e & 1 == 1));
                acc[subset.len()] += eval.numerator(&subset);
            }
            acc
        })
        .reduce(
            || vec![0u64; n + 1],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    Ok(ExactCounts { numerators, denominator })
}

/// `β_k` = mean acceptance weight over all `C(N, k)` subsets of size `k`.
pub fn exact_beta(graph: &Graph, rule: PropertyRule, limit: usize) -> Result<BernsteinPoly> {
    Ok(exact_counts(graph, rule, limit)?.to_poly())
}
