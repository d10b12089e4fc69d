//! Polynomials of fixed degree in the Bernstein basis.
//!
//! A degree-`N` polynomial is stored as its Bézier control values
//! `β_0..β_N`, so that `f(x) = Σ β_k B(N, k, x)` with
//! `B(N, k, x) = C(N, k) x^k (1 - x)^(N - k)`. Evaluation goes through
//! de Casteljau's recurrence; the direct basis sum is kept as an
//! independent cross-check.

pub mod binomial;
mod convert;
mod gram;

pub use convert::{
    bernstein_to_monomial, bernstein_to_monomial_exact, monomial_to_bernstein,
    monomial_to_bernstein_exact,
};
pub use gram::{gram_matrix, l2_norm_diff, GramMatrix};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

fn check_unit(x: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(Error::Domain(format!("x = {x} is outside [0, 1]")))
    }
}

/// `B(N, k, x) = C(N, k) x^k (1 - x)^(N - k)`, evaluated in log space.
pub fn basis_value(degree: usize, k: usize, x: f64) -> Result<f64> {
    if k > degree {
        return Err(Error::Domain(format!("k = {k} exceeds degree {degree}")));
    }
    check_unit(x)?;
    if x == 0.0 {
        return Ok(if k == 0 { 1.0 } else { 0.0 });
    }
    if x == 1.0 {
        return Ok(if k == degree { 1.0 } else { 0.0 });
    }
    let log = binomial::ln_binomial(degree, k)
        + k as f64 * x.ln()
        + (degree - k) as f64 * (-x).ln_1p();
    Ok(log.exp())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BernsteinPoly {
    coefficients: Vec<f64>,
    #[serde(default)]
    probability: bool,
}

impl BernsteinPoly {
    pub fn new(coefficients: Vec<f64>) -> Result<Self> {
        if coefficients.is_empty() {
            return Err(Error::Domain("a Bernstein polynomial needs at least one coefficient".into()));
        }
        if let Some(bad) = coefficients.iter().find(|c| !c.is_finite()) {
            return Err(Error::Domain(format!("non-finite coefficient {bad}")));
        }
        Ok(Self { coefficients, probability: false })
    }

    /// A curve whose coefficients are probabilities; every value must lie in `[0, 1]`.
    pub fn probability(coefficients: Vec<f64>) -> Result<Self> {
        let mut poly = Self::new(coefficients)?;
        if let Some((k, c)) = poly
            .coefficients
            .iter()
            .enumerate()
            .find(|(_, c)| !(0.0..=1.0).contains(*c))
        {
            return Err(Error::Domain(format!("coefficient β_{k} = {c} is not a probability")));
        }
        poly.probability = true;
        Ok(poly)
    }

    pub fn constant(degree: usize, value: f64) -> Result<Self> {
        Self::new(vec![value; degree + 1])
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn into_coefficients(self) -> Vec<f64> {
        self.coefficients
    }

    pub fn is_probability(&self) -> bool {
        self.probability
    }

    /// De Casteljau evaluation: `N` rounds of convex combination of neighbours.
    pub fn eval(&self, x: f64) -> Result<f64> {
        check_unit(x)?;
        let mut work = self.coefficients.clone();
        let t = 1.0 - x;
        for round in 1..work.len() {
            for i in 0..work.len() - round {
                work[i] = t * work[i] + x * work[i + 1];
            }
        }
        Ok(work[0])
    }

    /// `Σ β_k B(N, k, x)` summed term by term.
    pub fn eval_basis_sum(&self, x: f64) -> Result<f64> {
        check_unit(x)?;
        let n = self.degree();
        let mut sum = 0.0;
        for (k, beta) in self.coefficients.iter().enumerate() {
            sum += beta * basis_value(n, k, x)?;
        }
        Ok(sum)
    }

    /// Evaluates on the uniform grid `x_i = i / (grid_size - 1)`.
    pub fn sample(&self, grid_size: usize) -> Result<Vec<(f64, f64)>> {
        if grid_size < 2 {
            return Err(Error::Domain(format!("grid size {grid_size} is below 2")));
        }
        let last = (grid_size - 1) as f64;
        (0..grid_size)
            .map(|i| {
                let x = i as f64 / last;
                self.eval(x).map(|y| (x, y))
            })
            .collect()
    }
}

/// Power-basis polynomial `a_0 + a_1 x + a_2 x^2 + ...`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonomialPoly {
    coefficients: Vec<f64>,
}

impl MonomialPoly {
    pub fn new(coefficients: Vec<f64>) -> Result<Self> {
        if coefficients.is_empty() {
            return Err(Error::Domain("a polynomial needs at least one coefficient".into()));
        }
        if let Some(bad) = coefficients.iter().find(|c| !c.is_finite()) {
            return Err(Error::Domain(format!("non-finite coefficient {bad}")));
        }
        Ok(Self { coefficients })
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    /// Horner evaluation.
    pub fn eval(&self, x: f64) -> f64 {
        self.coefficients.iter().rev().fold(0.0, |acc, a| acc * x + a)
    }
}
