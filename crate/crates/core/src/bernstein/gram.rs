use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use super::binomial::ln_binomial;
use super::BernsteinPoly;
use crate::error::{Error, Result};

/// Inner products of the degree-`N` Bernstein basis on `[0, 1]`:
/// `G_ij = ∫ B(N,i,x) B(N,j,x) dx = C(N,i) C(N,j) / ((2N+1) C(2N,i+j))`.
#[derive(Debug, Clone)]
pub struct GramMatrix {
    degree: usize,
    entries: Vec<f64>,
}

impl GramMatrix {
    pub fn new(degree: usize) -> Self {
        let size = degree + 1;
        let scale = 1.0 / (2 * degree + 1) as f64;
        let mut entries = vec![0.0; size * size];
        for i in 0..size {
            for j in i..size {
                let log = ln_binomial(degree, i) + ln_binomial(degree, j)
                    - ln_binomial(2 * degree, i + j);
                let g = scale * log.exp();
                entries[i * size + j] = g;
                entries[j * size + i] = g;
            }
        }
        Self { degree, entries }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * (self.degree + 1) + j]
    }

    /// `vᵀ G v`, clamped at zero.
    pub fn quadratic_form(&self, v: &[f64]) -> f64 {
        debug_assert_eq!(v.len(), self.degree + 1);
        let size = self.degree + 1;
        let mut acc = 0.0;
        for (i, vi) in v.iter().enumerate() {
            if *vi == 0.0 {
                continue;
            }
            let row = &self.entries[i * size..(i + 1) * size];
            let dot: f64 = row.iter().zip(v).map(|(g, vj)| g * vj).sum();
            acc += vi * dot;
        }
        acc.max(0.0)
    }

    /// `‖Σ v_k B(N,k,·)‖₂` on `[0, 1]`.
    pub fn norm(&self, v: &[f64]) -> f64 {
        self.quadratic_form(v).sqrt()
    }
}

/// Shared per-degree cache. Matrices are immutable once built.
pub fn gram_matrix(degree: usize) -> Arc<GramMatrix> {
    static CACHE: OnceLock<RwLock<HashMap<usize, Arc<GramMatrix>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| RwLock::new(HashMap::new()));
    if let Some(g) = cache.read().expect("gram cache poisoned").get(&degree) {
        return Arc::clone(g);
    }
    let built = Arc::new(GramMatrix::new(degree));
    let mut guard = cache.write().expect("gram cache poisoned");
    Arc::clone(guard.entry(degree).or_insert(built))
}

/// `‖a − b‖₂` over `[0, 1]` for two polynomials of equal degree.
pub fn l2_norm_diff(a: &BernsteinPoly, b: &BernsteinPoly) -> Result<f64> {
    if a.degree() != b.degree() {
        return Err(Error::DegreeMismatch { left: a.degree(), right: b.degree() });
    }
    let delta: Vec<f64> = a
        .coefficients()
        .iter()
        .zip(b.coefficients())
        .map(|(x, y)| x - y)
        .collect();
    Ok(gram_matrix(a.degree()).norm(&delta))
}
