//! Seeded Monte Carlo estimates of `β_k`.
//!
//! Samples are split across a fixed number of workers. Worker `w`
//! drawing for size `k` owns the ChaCha stream `(k << 32) | w` under the
//! caller's seed, and integer acceptance counts are summed, so the
//! estimate depends only on `(seed, k, samples, workers)`, never on the
//! thread pool.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::graph::Graph;
use super::rule::{Evaluator, PropertyRule};
use crate::error::{Error, Result};

pub const DEFAULT_WORKERS: usize = 8;

/// Roughly a 0.005 standard error at β = 1/2 needs 10^4 draws; 4·10^4 gives 0.0025.
pub const DEFAULT_SAMPLES: usize = 40_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McConfig {
    pub samples: usize,
    pub seed: u64,
    pub workers: usize,
}

impl McConfig {
    pub fn new(samples: usize, seed: u64) -> Self {
        Self { samples, seed, workers: DEFAULT_WORKERS }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BetaMeasurement {
    pub k: usize,
    pub beta: f64,
    pub stderr: f64,
    /// 0 for exact values.
    pub samples: usize,
    pub seed: u64,
}

impl BetaMeasurement {
    pub fn exact(k: usize, beta: f64) -> Self {
        Self { k, beta, stderr: 0.0, samples: 0, seed: 0 }
    }
}

/// Uniform `k`-subsets of `0..n` from one seeded stream.
#[derive(Debug, Clone)]
pub struct SubsetSampler {
    rng: ChaCha8Rng,
    perm: Vec<usize>,
    k: usize,
}

impl SubsetSampler {
    /// Stream `(k << 32) | worker` under `seed`.
    pub fn new(n: usize, k: usize, seed: u64, worker: usize) -> Self {
        assert!(k <= n, "subset size {k} exceeds {n}");
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(((k as u64) << 32) | worker as u64);
        Self { rng, perm: (0..n).collect(), k }
    }

    /// The next subset, in no particular order.
    pub fn draw(&mut self) -> &[usize] {
        // partial Fisher–Yates: perm[..k] becomes a uniform k-subset
        let n = self.perm.len();
        for i in 0..self.k {
            let j = self.rng.random_range(i..n);
            self.perm.swap(i, j);
        }
        &self.perm[..self.k]
    }
}

/// Averages the acceptance weight over `samples` uniform `k`-subsets.
pub fn mc_beta(graph: &Graph, rule: PropertyRule, k: usize, samples: usize, seed: u64) -> Result<BetaMeasurement> {
    mc_beta_with(graph, rule, k, &McConfig::new(samples, seed))
}

pub fn mc_beta_with(graph: &Graph, rule: PropertyRule, k: usize, cfg: &McConfig) -> Result<BetaMeasurement> {
    let n = graph.edge_count();
    if k > n {
        return Err(Error::Domain(format!("k = {k} exceeds edge count {n}")));
    }
    if cfg.samples == 0 || cfg.workers == 0 {
        return Err(Error::Config("samples and workers must be positive".into()));
    }
    let denominator = Evaluator::new(graph, rule)?.denominator();
    let per = cfg.samples / cfg.workers;
    let extra = cfg.samples % cfg.workers;
    let total: u64 = (0..cfg.workers)
        .into_par_iter()
        .map(|w| {
            let draws = per + usize::from(w < extra);
            let mut sampler = SubsetSampler::new(n, k, cfg.seed, w);
            let mut eval = Evaluator::new(graph, rule).expect("rule validated above");
            (0..draws).map(|_| eval.numerator(sampler.draw())).sum::<u64>()
        })
        .collect::<Vec<_>>()
        .into_iter()
        .sum();
    let beta = total as f64 / (denominator as f64 * cfg.samples as f64);
    let stderr = (beta * (1.0 - beta) / cfg.samples as f64).max(0.0).sqrt();
    Ok(BetaMeasurement { k, beta, stderr, samples: cfg.samples, seed: cfg.seed })
}
