//! Information criteria for ranking the sequence of estimators.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Criterion {
    Aic,
    Bic,
}

/// `2p − 2 ln L`, with `p` the number of coefficients still estimated.
pub fn aic(p_unknown: usize, ln_l: f64) -> f64 {
    2.0 * p_unknown as f64 - 2.0 * ln_l
}

/// `ln(N) p − 2 ln L`, with `N` the polynomial degree.
pub fn bic(p_unknown: usize, ln_l: f64, n_points: usize) -> Result<f64> {
    if n_points == 0 {
        return Err(Error::Domain("BIC needs at least one point".into()));
    }
    Ok((n_points as f64).ln() * p_unknown as f64 - 2.0 * ln_l)
}

impl Criterion {
    pub fn pick(self, aic: f64, bic: f64) -> f64 {
        match self {
            Criterion::Aic => aic,
            Criterion::Bic => bic,
        }
    }
}
