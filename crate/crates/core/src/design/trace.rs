//! Record of a design run and its serialised forms.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::estimator::{Knot, PartialCoefficients};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    BudgetExhausted,
    AllMeasured,
    InfoBelowCost,
    GapBelowTol,
}

impl StopReason {
    pub fn as_str(self) -> &'static str {
        match self {
            StopReason::BudgetExhausted => "budget_exhausted",
            StopReason::AllMeasured => "all_measured",
            StopReason::InfoBelowCost => "info_below_cost",
            StopReason::GapBelowTol => "gap_below_tol",
        }
    }
}

/// State of the estimator after `m` measurements. The baseline has `m = 0`
/// and no measurement fields.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Step {
    pub m: usize,
    pub measured_k: Option<usize>,
    /// Value entered into the estimator, after clamping to the monotone interval.
    pub beta: Option<f64>,
    pub stderr: Option<f64>,
    /// Raw oracle reading.
    pub oracle_beta: Option<f64>,
    pub l2_vs_truth: Option<f64>,
    pub bound_gap: f64,
    pub log_likelihood: f64,
    pub sigma: f64,
    pub degenerate: bool,
    pub p_unknown: usize,
    pub aic: f64,
    pub bic: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesignTrace {
    pub initial: PartialCoefficients,
    pub baseline: Step,
    pub steps: Vec<Step>,
    pub stop_reason: Option<StopReason>,
}

const FIELDS: [&str; 13] = [
    "m",
    "measured_k",
    "beta",
    "stderr",
    "oracle_beta",
    "l2_vs_truth",
    "bound_gap",
    "log_likelihood",
    "sigma",
    "degenerate",
    "p_unknown",
    "aic",
    "bic",
];

fn na<T: ToString>(v: Option<T>) -> String {
    v.map_or_else(|| "NA".to_string(), |v| v.to_string())
}

impl DesignTrace {
    /// Baseline followed by every step.
    pub fn rows(&self) -> impl Iterator<Item = &Step> {
        std::iter::once(&self.baseline).chain(&self.steps)
    }

    pub fn last(&self) -> &Step {
        self.steps.last().unwrap_or(&self.baseline)
    }

    /// Estimator state after each row, baseline first.
    pub fn partials(&self) -> Result<Vec<PartialCoefficients>> {
        let mut out = vec![self.initial.clone()];
        for s in &self.steps {
            let (Some(k), Some(beta), Some(stderr)) = (s.measured_k, s.beta, s.stderr) else {
                continue;
            };
            let next = out.last().expect("seeded with the initial state").with_measurement(Knot::new(k, beta, stderr))?;
            out.push(next);
        }
        Ok(out)
    }

    /// Whitespace-separated table, one row per state, `NA` for absent values.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let pc = &self.initial;
        let _ = writeln!(
            s,
            "# degree {} kmin {} {} kmax {} {}",
            pc.degree(),
            pc.k_min(),
            pc.lower_anchor().beta,
            pc.k_max(),
            pc.upper_anchor().beta
        );
        let _ = writeln!(s, "# {}", FIELDS.join(" "));
        for r in self.rows() {
            let cols = [
                r.m.to_string(),
                na(r.measured_k),
                na(r.beta),
                na(r.stderr),
                na(r.oracle_beta),
                na(r.l2_vs_truth),
                r.bound_gap.to_string(),
                r.log_likelihood.to_string(),
                r.sigma.to_string(),
                u8::from(r.degenerate).to_string(),
                r.p_unknown.to_string(),
                r.aic.to_string(),
                r.bic.to_string(),
            ];
            let _ = writeln!(s, "{}", cols.join(" "));
        }
        let _ = writeln!(s, "# stop_reason {}", self.stop_reason.map_or("NA", StopReason::as_str));
        s
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("trace fields are plain data")
    }
}
