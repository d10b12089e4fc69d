//! Likelihood of an interpolated estimator given noisy coefficient data.
//!
//! A handful of coefficient vectors is drawn from the binomial sampling
//! distribution of the data. Their mean `β̃` and spread `σ` give
//! `−ln L = ½ ‖Σ (β̂_k − β̃_k) B(N,k,·)‖₂² / σ²` with `β̂` the estimator.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use crate::bernstein::{gram_matrix, BernsteinPoly};
use crate::error::{Error, Result};
use crate::estimator::{interpolate, PartialCoefficients};

pub const DEFAULT_LIKELIHOOD_SAMPLES: usize = 10;

/// A full coefficient vector with per-coefficient standard errors: the
/// data an estimator is judged against.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceBetas {
    beta: Vec<f64>,
    stderr: Vec<f64>,
}

impl ReferenceBetas {
    pub fn new(beta: Vec<f64>, stderr: Vec<f64>) -> Result<Self> {
        if beta.is_empty() || beta.len() != stderr.len() {
            return Err(Error::Domain(format!(
                "need matching non-empty coefficient and stderr vectors ({} vs {})",
                beta.len(),
                stderr.len()
            )));
        }
        if beta.iter().any(|b| !(0.0..=1.0).contains(b)) {
            return Err(Error::Domain("reference coefficients must be probabilities".into()));
        }
        if stderr.iter().any(|s| !s.is_finite() || *s < 0.0) {
            return Err(Error::Domain("standard errors must be finite and ≥ 0".into()));
        }
        Ok(Self { beta, stderr })
    }

    pub fn exact(poly: &BernsteinPoly) -> Result<Self> {
        Self::new(poly.coefficients().to_vec(), vec![0.0; poly.degree() + 1])
    }

    /// Known coefficients keep their errors; unknown ones take the
    /// interpolated value with no spread.
    pub fn from_partial(pc: &PartialCoefficients) -> Self {
        let beta = interpolate(pc).into_coefficients();
        let mut stderr = vec![0.0; beta.len()];
        for knot in pc.knots() {
            stderr[knot.k] = knot.stderr;
        }
        Self { beta, stderr }
    }

    pub fn degree(&self) -> usize {
        self.beta.len() - 1
    }

    pub fn beta(&self) -> &[f64] {
        &self.beta
    }

    pub fn stderr(&self) -> &[f64] {
        &self.stderr
    }

    pub fn poly(&self) -> BernsteinPoly {
        BernsteinPoly::new(self.beta.clone()).expect("validated on construction")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SigmaMode {
    /// One standard deviation pooled over every resampled coefficient.
    Pooled,
    /// Each coefficient scaled by its own sample standard deviation.
    PerCoefficient,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LikelihoodConfig {
    pub n_samples: usize,
    pub seed: u64,
    pub sigma: SigmaMode,
}

impl LikelihoodConfig {
    pub fn new(seed: u64) -> Self {
        Self { n_samples: DEFAULT_LIKELIHOOD_SAMPLES, seed, sigma: SigmaMode::Pooled }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Likelihood {
    pub ln_l: f64,
    pub sigma: f64,
    /// No coefficient has spread, so `σ = 0` and `ln L` is reported as 0.
    pub degenerate: bool,
}

/// Binomial trial count whose proportion has standard error `stderr` at `beta`.
pub fn inferred_trials(beta: f64, stderr: f64) -> u64 {
    ((beta * (1.0 - beta) / (stderr * stderr)).round() as u64).max(1)
}

/// Likelihood of `interpolate(pc)` against the coefficients already known in `pc`.
pub fn log_likelihood(pc: &PartialCoefficients, n_samples: usize, seed: u64) -> Result<Likelihood> {
    let cfg = LikelihoodConfig { n_samples, ..LikelihoodConfig::new(seed) };
    log_likelihood_against(pc, &ReferenceBetas::from_partial(pc), &cfg)
}

pub fn log_likelihood_against(
    pc: &PartialCoefficients,
    data: &ReferenceBetas,
    cfg: &LikelihoodConfig,
) -> Result<Likelihood> {
    if cfg.n_samples < 2 {
        return Err(Error::Config(format!("likelihood needs at least 2 samples, got {}", cfg.n_samples)));
    }
    if data.degree() != pc.degree() {
        return Err(Error::DegreeMismatch { left: pc.degree(), right: data.degree() });
    }
    let size = data.beta.len();
    let resampled: Vec<usize> = (0..size)
        .filter(|&k| data.stderr[k] > 0.0 && data.beta[k] > 0.0 && data.beta[k] < 1.0)
        .collect();
    if resampled.is_empty() {
        return Ok(Likelihood { ln_l: 0.0, sigma: 0.0, degenerate: true });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let n = cfg.n_samples as f64;
    let mut sum = data.beta.iter().map(|b| b * n).collect::<Vec<f64>>();
    let mut draws = vec![vec![0.0; cfg.n_samples]; resampled.len()];
    for (slot, &k) in resampled.iter().enumerate() {
        let (beta, err) = (data.beta[k], data.stderr[k]);
        let trials = inferred_trials(beta, err);
        let dist = Binomial::new(trials, beta).map_err(|e| Error::Domain(e.to_string()))?;
        let (lo, hi) = ((beta - err).max(0.0), (beta + err).min(1.0));
        for d in draws[slot].iter_mut() {
            *d = (dist.sample(&mut rng) as f64 / trials as f64).clamp(lo, hi);
        }
        sum[k] = draws[slot].iter().sum();
    }
    let mean: Vec<f64> = sum.iter().map(|s| s / n).collect();

    let per_coeff: Vec<f64> = resampled
        .iter()
        .zip(&draws)
        .map(|(&k, d)| d.iter().map(|v| (v - mean[k]).powi(2)).sum::<f64>())
        .collect();
    let dof = (resampled.len() * (cfg.n_samples - 1)) as f64;
    let sigma = (per_coeff.iter().sum::<f64>() / dof).sqrt();
    if sigma == 0.0 {
        return Ok(Likelihood { ln_l: 0.0, sigma: 0.0, degenerate: true });
    }

    let hat = interpolate(pc);
    let mut delta: Vec<f64> = hat.coefficients().iter().zip(&mean).map(|(h, m)| h - m).collect();
    let scaled = match cfg.sigma {
        SigmaMode::Pooled => gram_matrix(pc.degree()).quadratic_form(&delta) / (sigma * sigma),
        SigmaMode::PerCoefficient => {
            let mut scale = vec![sigma; size];
            for (&k, ss) in resampled.iter().zip(&per_coeff) {
                let s = (ss / (n - 1.0)).sqrt();
                if s > 0.0 {
                    scale[k] = s;
                }
            }
            delta.iter_mut().zip(&scale).for_each(|(d, s)| *d /= s);
            gram_matrix(pc.degree()).quadratic_form(&delta)
        }
    };
    Ok(Likelihood { ln_l: -0.5 * scaled, sigma, degenerate: false })
}
