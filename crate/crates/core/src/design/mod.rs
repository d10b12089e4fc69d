//! Sequential choice of which coefficient to measure next.

mod criteria;
mod likelihood;
mod trace;

pub use criteria::{aic, bic, Criterion};
pub use likelihood::{
    inferred_trials, log_likelihood, log_likelihood_against, Likelihood, LikelihoodConfig, ReferenceBetas,
    SigmaMode, DEFAULT_LIKELIHOOD_SAMPLES,
};
pub use trace::{DesignTrace, Step, StopReason};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bernstein::{l2_norm_diff, BernsteinPoly};
use crate::error::{Error, Result};
use crate::estimator::{bound_gap, interpolate, Knot, PartialCoefficients};
use crate::oracle::Oracle;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScoreMode {
    /// Uses only what is provable from the known coefficients.
    BoundGap,
    /// Scores each candidate by its true value; needs a reference truth.
    OracleInformed,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CandidateScore {
    pub k: usize,
    pub expected_gap_after: f64,
    pub rank: usize,
}

fn gap_after_reveals(pc: &PartialCoefficients, k: usize) -> Result<f64> {
    let (lo, hi) = pc.interval(k);
    let mut sq = 0.0;
    for v in [lo, 0.5 * (lo + hi), hi] {
        sq += bound_gap(&pc.with_measurement(Knot::exact(k, v))?)?.powi(2);
    }
    // Mean of squared gaps: a plain mean of the gaps favours the candidates
    // next to the anchors, since the gap is a concave function of the reveal.
    Ok((sq / 3.0).sqrt())
}

fn l2_after_truth(pc: &PartialCoefficients, k: usize, truth: &BernsteinPoly) -> Result<f64> {
    let mut next = pc.clone();
    next.set_monotone(false)?;
    next.add_measurement(Knot::exact(k, truth.coefficients()[k]))?;
    l2_norm_diff(truth, &interpolate(&next))
}

/// Scores every unknown interior coefficient; lower is better. Ranks start
/// at 1 and ties go to the smaller `k`.
pub fn score_candidates(
    pc: &PartialCoefficients,
    mode: ScoreMode,
    truth: Option<&BernsteinPoly>,
) -> Result<Vec<CandidateScore>> {
    let ks = pc.unknown_ks();
    let scores: Vec<f64> = match mode {
        ScoreMode::BoundGap => ks.par_iter().map(|&k| gap_after_reveals(pc, k)).collect::<Result<_>>()?,
        ScoreMode::OracleInformed => {
            let truth = truth.ok_or_else(|| Error::Config("oracle-informed scoring needs a truth".into()))?;
            if truth.degree() != pc.degree() {
                return Err(Error::DegreeMismatch { left: pc.degree(), right: truth.degree() });
            }
            ks.par_iter().map(|&k| l2_after_truth(pc, k, truth)).collect::<Result<_>>()?
        }
    };
    let mut out: Vec<CandidateScore> = ks
        .into_iter()
        .zip(scores)
        .map(|(k, s)| CandidateScore { k, expected_gap_after: s, rank: 0 })
        .collect();
    out.sort_by(|a, b| a.expected_gap_after.total_cmp(&b.expected_gap_after).then(a.k.cmp(&b.k)));
    for (i, c) in out.iter_mut().enumerate() {
        c.rank = i + 1;
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StoppingConfig {
    /// Smallest criterion improvement worth one more oracle call. `None`
    /// never stops on information.
    pub cost_bits: Option<f64>,
    pub gap_tol: f64,
    pub max_measurements: Option<usize>,
    pub criterion: Criterion,
}

impl Default for StoppingConfig {
    fn default() -> Self {
        Self { cost_bits: None, gap_tol: 0.0, max_measurements: None, criterion: Criterion::Aic }
    }
}

impl StoppingConfig {
    pub fn validate(&self) -> Result<()> {
        if let Some(c) = self.cost_bits {
            if !(c.is_finite() && c >= 0.0) {
                return Err(Error::Config(format!("cost_bits {c} must be finite and ≥ 0")));
            }
        }
        if !(self.gap_tol.is_finite() && self.gap_tol >= 0.0) {
            return Err(Error::Config(format!("gap_tol {} must be finite and ≥ 0", self.gap_tol)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DesignConfig {
    pub stopping: StoppingConfig,
    pub mode: ScoreMode,
    pub likelihood: LikelihoodConfig,
}

/// An oracle or scoring failure, with everything recorded before it.
#[derive(Debug)]
pub struct LoopFailure {
    pub trace: DesignTrace,
    pub error: Error,
}

impl std::fmt::Display for LoopFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "design loop stopped after {} steps: {}", self.trace.steps.len(), self.error)
    }
}

impl std::error::Error for LoopFailure {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        Some(&self.error)
    }
}

fn snapshot(
    pc: &PartialCoefficients,
    m: usize,
    cfg: &DesignConfig,
    truth: Option<&ReferenceBetas>,
) -> Result<Step> {
    let est = interpolate(pc);
    let l2_vs_truth = truth.map(|t| l2_norm_diff(&t.poly(), &est)).transpose()?;
    let like = match truth {
        Some(t) => log_likelihood_against(pc, t, &cfg.likelihood)?,
        None => log_likelihood_against(pc, &ReferenceBetas::from_partial(pc), &cfg.likelihood)?,
    };
    let p_unknown = pc.unknown_count();
    Ok(Step {
        m,
        measured_k: None,
        beta: None,
        stderr: None,
        oracle_beta: None,
        l2_vs_truth,
        bound_gap: bound_gap(pc)?,
        log_likelihood: like.ln_l,
        sigma: like.sigma,
        degenerate: like.degenerate,
        p_unknown,
        aic: aic(p_unknown, like.ln_l),
        bic: bic(p_unknown, like.ln_l, pc.degree())?,
    })
}

/// Measures one coefficient at a time until a stopping rule fires.
///
/// With a `truth`, steps report the L2 distance to it and the likelihood is
/// taken against its coefficients; otherwise against the known coefficients.
pub fn run_design_loop(
    pc: PartialCoefficients,
    oracle: &mut dyn Oracle,
    cfg: &DesignConfig,
    truth: Option<&ReferenceBetas>,
) -> std::result::Result<DesignTrace, Box<LoopFailure>> {
    let setup = (|| {
        cfg.stopping.validate()?;
        if !pc.is_monotone() {
            return Err(Error::Unsupported("the design loop needs the monotone-coefficient flag".into()));
        }
        if cfg.mode == ScoreMode::OracleInformed && truth.is_none() {
            return Err(Error::Config("oracle-informed scoring needs a truth".into()));
        }
        snapshot(&pc, 0, cfg, truth)
    })();
    let baseline = match setup {
        Ok(b) => b,
        Err(error) => {
            let baseline = Step {
                m: 0,
                measured_k: None,
                beta: None,
                stderr: None,
                oracle_beta: None,
                l2_vs_truth: None,
                bound_gap: f64::NAN,
                log_likelihood: f64::NAN,
                sigma: f64::NAN,
                degenerate: true,
                p_unknown: pc.unknown_count(),
                aic: f64::NAN,
                bic: f64::NAN,
            };
            let trace = DesignTrace { initial: pc, baseline, steps: Vec::new(), stop_reason: None };
            return Err(Box::new(LoopFailure { trace, error }));
        }
    };
    let mut trace = DesignTrace { initial: pc.clone(), baseline, steps: Vec::new(), stop_reason: None };
    let mut pc = pc;
    let truth_poly = truth.map(ReferenceBetas::poly);
    let stop = &cfg.stopping;

    loop {
        let last = *trace.last();
        if pc.unknown_count() == 0 {
            trace.stop_reason = Some(StopReason::AllMeasured);
            break;
        }
        if last.bound_gap < stop.gap_tol {
            trace.stop_reason = Some(StopReason::GapBelowTol);
            break;
        }
        if stop.max_measurements.is_some_and(|max| trace.steps.len() >= max) {
            trace.stop_reason = Some(StopReason::BudgetExhausted);
            break;
        }

        let step = (|| {
            let best = score_candidates(&pc, cfg.mode, truth_poly.as_ref())?[0];
            let reading = oracle.measure(best.k)?;
            if reading.k != best.k {
                return Err(Error::Oracle { k: best.k, message: format!("answered for k = {}", reading.k) });
            }
            let (lo, hi) = pc.interval(best.k);
            let beta = reading.beta.clamp(lo, hi);
            let next = pc.with_measurement(Knot::new(best.k, beta, reading.stderr))?;
            let mut row = snapshot(&next, trace.steps.len() + 1, cfg, truth)?;
            row.measured_k = Some(best.k);
            row.beta = Some(beta);
            row.stderr = Some(reading.stderr);
            row.oracle_beta = Some(reading.beta);
            Ok((next, row))
        })();
        let (next, row) = match step {
            Ok(v) => v,
            Err(error) => return Err(Box::new(LoopFailure { trace, error })),
        };
        pc = next;
        trace.steps.push(row);

        if let Some(cost) = stop.cost_bits {
            if !last.degenerate && !row.degenerate {
                let gain = stop.criterion.pick(last.aic, last.bic) - stop.criterion.pick(row.aic, row.bic);
                if gain < cost {
                    trace.stop_reason = Some(StopReason::InfoBelowCost);
                    break;
                }
            }
        }
    }
    Ok(trace)
}
