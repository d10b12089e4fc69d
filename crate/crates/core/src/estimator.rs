//! Partially known coefficient vectors, the piecewise-linear estimator,
//! and provable envelopes for monotone coefficient sequences.
//!
//! Coefficients below `k_min` are exactly 0 and above `k_max` exactly 1.
//! The anchors and any measured interior values are the interpolation
//! knots; everything else is unknown.

#![allow(clippy::needless_range_loop)]

use serde::{Deserialize, Serialize};

use crate::bernstein::{gram_matrix, BernsteinPoly};
use crate::error::{Error, Result};

/// A known coefficient value with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Knot {
    pub k: usize,
    pub beta: f64,
    pub stderr: f64,
}

impl Knot {
    pub fn exact(k: usize, beta: f64) -> Self {
        Self { k, beta, stderr: 0.0 }
    }

    pub fn new(k: usize, beta: f64, stderr: f64) -> Self {
        Self { k, beta, stderr }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartialCoefficients {
    degree: usize,
    lower_anchor: Knot,
    upper_anchor: Knot,
    /// Sorted by `k`, unique, strictly inside `(k_min, k_max)`.
    measured: Vec<Knot>,
    monotone: bool,
}

fn check_stderr(knot: &Knot) -> Result<()> {
    if knot.stderr.is_finite() && knot.stderr >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidPartial(format!("stderr {} at k = {} must be finite and ≥ 0", knot.stderr, knot.k)))
    }
}

impl PartialCoefficients {
    /// Anchors only, with the monotone-coefficient flag set.
    pub fn new(degree: usize, lower_anchor: Knot, upper_anchor: Knot) -> Result<Self> {
        Self::with_flag(degree, lower_anchor, upper_anchor, true)
    }

    pub fn with_flag(degree: usize, lower_anchor: Knot, upper_anchor: Knot, monotone: bool) -> Result<Self> {
        let (k_min, k_max) = (lower_anchor.k, upper_anchor.k);
        if k_min >= k_max {
            return Err(Error::InvalidPartial(format!("k_min = {k_min} must be below k_max = {k_max}")));
        }
        if k_max > degree {
            return Err(Error::InvalidPartial(format!("k_max = {k_max} exceeds degree {degree}")));
        }
        if !(lower_anchor.beta > 0.0 && lower_anchor.beta <= 1.0) {
            return Err(Error::InvalidPartial(format!("β_kmin = {} must lie in (0, 1]", lower_anchor.beta)));
        }
        if !(0.0..1.0).contains(&upper_anchor.beta) {
            return Err(Error::InvalidPartial(format!("β_kmax = {} must lie in [0, 1)", upper_anchor.beta)));
        }
        check_stderr(&lower_anchor)?;
        check_stderr(&upper_anchor)?;
        if monotone && lower_anchor.beta > upper_anchor.beta {
            return Err(Error::InvalidPartial(format!(
                "monotone coefficients require β_kmin = {} ≤ β_kmax = {}",
                lower_anchor.beta, upper_anchor.beta
            )));
        }
        Ok(Self { degree, lower_anchor, upper_anchor, measured: Vec::new(), monotone })
    }

    /// Every coefficient of `truth` is treated as known, with zero error.
    /// Fails when `truth` has no interior band (no k with 0 < β_k < 1 at both ends).
    pub fn fully_known(truth: &BernsteinPoly) -> Result<Self> {
        let c = truth.coefficients();
        let k_min = c.iter().position(|&b| b > 0.0);
        let k_max = c.iter().rposition(|&b| b < 1.0);
        let (Some(k_min), Some(k_max)) = (k_min, k_max) else {
            return Err(Error::DegenerateAnchors("coefficients never leave 0 or never reach 1".into()));
        };
        let mut pc = Self::new(truth.degree(), Knot::exact(k_min, c[k_min]), Knot::exact(k_max, c[k_max]))?;
        for k in k_min + 1..k_max {
            pc.add_measurement(Knot::exact(k, c[k]))?;
        }
        Ok(pc)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn k_min(&self) -> usize {
        self.lower_anchor.k
    }

    pub fn k_max(&self) -> usize {
        self.upper_anchor.k
    }

    pub fn lower_anchor(&self) -> Knot {
        self.lower_anchor
    }

    pub fn upper_anchor(&self) -> Knot {
        self.upper_anchor
    }

    pub fn measured(&self) -> &[Knot] {
        &self.measured
    }

    pub fn is_monotone(&self) -> bool {
        self.monotone
    }

    pub fn set_monotone(&mut self, monotone: bool) -> Result<()> {
        if monotone {
            let knots = self.knots();
            if let Some(w) = knots.windows(2).find(|w| w[0].beta > w[1].beta) {
                return Err(Error::InvalidPartial(format!(
                    "β_{} = {} > β_{} = {} breaks monotonicity",
                    w[0].k, w[0].beta, w[1].k, w[1].beta
                )));
            }
        }
        self.monotone = monotone;
        Ok(())
    }

    /// Interior coefficient count, `k_max − k_min − 1`.
    pub fn interior_count(&self) -> usize {
        self.k_max() - self.k_min() - 1
    }

    pub fn unknown_count(&self) -> usize {
        self.interior_count() - self.measured.len()
    }

    pub fn unknown_ks(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.unknown_count());
        let mut it = self.measured.iter().peekable();
        for k in self.k_min() + 1..self.k_max() {
            if it.peek().is_some_and(|m| m.k == k) {
                it.next();
            } else {
                out.push(k);
            }
        }
        out
    }

    pub fn is_fully_known(&self) -> bool {
        self.unknown_count() == 0
    }

    /// Anchors and measured points in increasing `k`.
    pub fn knots(&self) -> Vec<Knot> {
        let mut out = Vec::with_capacity(self.measured.len() + 2);
        out.push(self.lower_anchor);
        out.extend_from_slice(&self.measured);
        out.push(self.upper_anchor);
        out
    }

    /// The known value of `β_k`, including the implied zeros and ones.
    pub fn known(&self, k: usize) -> Option<f64> {
        if k > self.degree {
            return None;
        }
        if k < self.k_min() {
            return Some(0.0);
        }
        if k > self.k_max() {
            return Some(1.0);
        }
        self.knots().iter().find(|n| n.k == k).map(|n| n.beta)
    }

    pub fn add_measurement(&mut self, knot: Knot) -> Result<()> {
        if knot.k <= self.k_min() || knot.k >= self.k_max() {
            return Err(Error::InvalidPartial(format!(
                "measured k = {} must lie strictly between k_min = {} and k_max = {}",
                knot.k,
                self.k_min(),
                self.k_max()
            )));
        }
        if !(0.0..=1.0).contains(&knot.beta) {
            return Err(Error::InvalidPartial(format!("β_{} = {} is not a probability", knot.k, knot.beta)));
        }
        check_stderr(&knot)?;
        let pos = match self.measured.binary_search_by_key(&knot.k, |m| m.k) {
            Ok(_) => return Err(Error::InvalidPartial(format!("k = {} is already measured", knot.k))),
            Err(pos) => pos,
        };
        if self.monotone {
            let (lo, hi) = self.interval(knot.k);
            if knot.beta < lo || knot.beta > hi {
                return Err(Error::InvalidPartial(format!(
                    "β_{} = {} lies outside its monotone interval [{lo}, {hi}]",
                    knot.k, knot.beta
                )));
            }
        }
        self.measured.insert(pos, knot);
        Ok(())
    }

    pub fn with_measurement(&self, knot: Knot) -> Result<Self> {
        let mut next = self.clone();
        next.add_measurement(knot)?;
        Ok(next)
    }

    /// The interval of values `β_k` can take given the known coefficients
    /// and monotonicity: `[max known β_j (j ≤ k), min known β_j (j ≥ k)]`.
    pub fn interval(&self, k: usize) -> (f64, f64) {
        if let Some(v) = self.known(k) {
            return (v, v);
        }
        let knots = self.knots();
        let lo = knots.iter().filter(|n| n.k <= k).map(|n| n.beta).fold(0.0, f64::max);
        let hi = knots.iter().filter(|n| n.k >= k).map(|n| n.beta).fold(1.0, f64::min);
        (lo, hi)
    }

    fn require_monotone(&self) -> Result<()> {
        if self.monotone {
            Ok(())
        } else {
            Err(Error::Unsupported("bounds require the monotone-coefficient flag".into()))
        }
    }
}

/// Lower and upper coefficient envelopes.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundsPair {
    pub lower: BernsteinPoly,
    pub upper: BernsteinPoly,
}

impl BoundsPair {
    /// `‖upper − lower‖₂`.
    pub fn gap(&self) -> f64 {
        let delta: Vec<f64> = self
            .upper
            .coefficients()
            .iter()
            .zip(self.lower.coefficients())
            .map(|(u, l)| u - l)
            .collect();
        gram_matrix(self.lower.degree()).norm(&delta)
    }
}

/// Piecewise-linear interpolation in `k` between consecutive knots.
pub fn interpolate(pc: &PartialCoefficients) -> BernsteinPoly {
    let mut beta = vec![0.0; pc.degree() + 1];
    for b in beta.iter_mut().skip(pc.k_max() + 1) {
        *b = 1.0;
    }
    let knots = pc.knots();
    for pair in knots.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        beta[a.k] = a.beta;
        let span = (b.k - a.k) as f64;
        for k in a.k + 1..b.k {
            let t = (k - a.k) as f64 / span;
            beta[k] = a.beta + t * (b.beta - a.beta);
        }
    }
    beta[pc.k_max()] = pc.upper_anchor().beta;
    BernsteinPoly::probability(beta).expect("interpolated values are convex combinations of probabilities")
}

fn envelopes(pc: &PartialCoefficients, lows: &[(usize, f64)], highs: &[(usize, f64)]) -> BoundsPair {
    let n = pc.degree();
    let mut lower = vec![0.0; n + 1];
    let mut upper = vec![0.0; n + 1];
    let mut running = 0.0_f64;
    let mut li = lows.iter().peekable();
    for k in 0..=n {
        if k > pc.k_max() {
            running = 1.0;
        }
        while let Some(&&(j, v)) = li.peek() {
            if j > k {
                break;
            }
            running = running.max(v);
            li.next();
        }
        lower[k] = running;
    }
    let mut running = 1.0_f64;
    let mut hi = highs.iter().rev().peekable();
    for k in (0..=n).rev() {
        if k < pc.k_min() {
            running = 0.0;
        }
        while let Some(&&(j, v)) = hi.peek() {
            if j < k {
                break;
            }
            running = running.min(v);
            hi.next();
        }
        upper[k] = running;
    }
    BoundsPair {
        lower: BernsteinPoly::probability(lower).expect("envelope values are probabilities"),
        upper: BernsteinPoly::probability(upper).expect("envelope values are probabilities"),
    }
}

/// Extremal monotone completions of the unknown coefficients.
pub fn bounds(pc: &PartialCoefficients) -> Result<BoundsPair> {
    pc.require_monotone()?;
    let pts: Vec<(usize, f64)> = pc.knots().iter().map(|n| (n.k, n.beta)).collect();
    Ok(envelopes(pc, &pts, &pts))
}

pub fn bound_gap(pc: &PartialCoefficients) -> Result<f64> {
    Ok(bounds(pc)?.gap())
}

/// Envelopes when every known value that is neither 0 nor 1 may be off by up to `eps`.
pub fn widen_by_error(pc: &PartialCoefficients, eps: f64) -> Result<BoundsPair> {
    pc.require_monotone()?;
    if !(eps.is_finite() && eps >= 0.0) {
        return Err(Error::Domain(format!("error width {eps} must be finite and ≥ 0")));
    }
    let knots = pc.knots();
    let widen = |b: f64, d: f64| if b == 0.0 || b == 1.0 { b } else { (b + d).clamp(0.0, 1.0) };
    let lows: Vec<(usize, f64)> = knots.iter().map(|n| (n.k, widen(n.beta, -eps))).collect();
    let highs: Vec<(usize, f64)> = knots.iter().map(|n| (n.k, widen(n.beta, eps))).collect();
    Ok(envelopes(pc, &lows, &highs))
}
