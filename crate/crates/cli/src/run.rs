//! Design runs, their output files and run manifests.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use relpoly::bernstein::BernsteinPoly;
use relpoly::design::{run_design_loop, DesignConfig, DesignTrace, LikelihoodConfig, ReferenceBetas, StopReason, StoppingConfig};
use relpoly::estimator::{bounds, interpolate, Knot, PartialCoefficients};
use relpoly::format::BetaFile;
use relpoly::oracle::{exact_beta, find_anchors, AnchorMethod, Graph, McOracle, Oracle, TableOracle, DEFAULT_EXHAUSTIVE_LIMIT};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::settings::DesignSettings;

pub const MANIFEST: &str = "manifest.json";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Seeds {
    pub oracle: u64,
    pub likelihood: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub argv: Vec<String>,
    pub settings: DesignSettings,
    pub seeds: Seeds,
    /// Input path to SHA-256 of its contents.
    pub inputs: BTreeMap<String, String>,
    /// Output file name to SHA-256 of its contents; excludes the manifest.
    pub outputs: BTreeMap<String, String>,
    pub started: String,
    pub finished: String,
    pub stop_reason: Option<StopReason>,
    pub error: Option<String>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

struct Execution {
    trace: Option<DesignTrace>,
    truth: Option<BernsteinPoly>,
    error: Option<anyhow::Error>,
}

fn read_input(path: &Path, inputs: &mut BTreeMap<String, String>) -> Result<String> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    inputs.insert(path.display().to_string(), sha256_hex(text.as_bytes()));
    Ok(text)
}

fn anchor_knot(k: usize, beta: Option<f64>, oracle: &mut dyn Oracle) -> Result<Knot> {
    match beta {
        Some(b) => Ok(Knot::exact(k, b)),
        None => {
            let m = oracle.measure(k)?;
            Ok(Knot::new(k, m.beta, m.stderr))
        }
    }
}

fn execute(s: &DesignSettings, inputs: &mut BTreeMap<String, String>) -> Execution {
    let mut truth_poly = None;
    let outcome = (|| -> Result<DesignTrace> {
        let graph = Graph::parse(&read_input(&s.graph.graph, inputs)?, s.graph.directed)
            .with_context(|| format!("in graph {}", s.graph.graph.display()))?;
        let rule = s.graph.rule;
        rule.validate(&graph)?;
        let n = graph.edge_count();

        let mut exact = None;
        let mut oracle: Box<dyn Oracle> = if s.sampling.exact {
            let beta = exact_beta(&graph, rule, DEFAULT_EXHAUSTIVE_LIMIT)?;
            exact = Some(beta.clone());
            Box::new(TableOracle::exact(&beta))
        } else {
            Box::new(McOracle::new(graph.clone(), rule, s.sampling.mc())?)
        };

        let truth = match (&s.truth, exact) {
            (Some(path), _) => {
                let file = BetaFile::parse(&read_input(path, inputs)?)
                    .with_context(|| format!("in truth file {}", path.display()))?;
                let (poly, stderr) = file.to_full()?;
                Some(ReferenceBetas::new(poly.coefficients().to_vec(), stderr)?)
            }
            (None, Some(beta)) => Some(ReferenceBetas::exact(&beta)?),
            (None, None) => None,
        };
        truth_poly = truth.as_ref().map(ReferenceBetas::poly);

        let scanned = match (s.kmin, s.kmax) {
            (Some(_), Some(_)) => None,
            _ => {
                let method = if s.sampling.exact {
                    AnchorMethod::Exact { limit: DEFAULT_EXHAUSTIVE_LIMIT }
                } else {
                    AnchorMethod::McScan(s.sampling.mc())
                };
                Some(find_anchors(&graph, rule, method)?)
            }
        };
        let lower = match s.kmin {
            Some(k) => anchor_knot(k, s.beta_kmin, oracle.as_mut())?,
            None => scanned.expect("scanned when k_min is absent").lower,
        };
        let upper = match s.kmax {
            Some(k) => anchor_knot(k, s.beta_kmax, oracle.as_mut())?,
            None => scanned.expect("scanned when k_max is absent").upper,
        };
        let pc = PartialCoefficients::new(n, lower, upper)?;

        let cfg = DesignConfig {
            stopping: StoppingConfig {
                cost_bits: s.cost_bits,
                gap_tol: s.gap_tol,
                max_measurements: s.max_measurements,
                criterion: s.criterion,
            },
            mode: s.mode,
            likelihood: LikelihoodConfig { n_samples: s.likelihood_samples, seed: s.sampling.seed, sigma: s.sigma },
        };
        run_design_loop(pc, oracle.as_mut(), &cfg, truth.as_ref()).map_err(|f| PartialRun(*f).into())
    })();
    match outcome {
        Ok(trace) => Execution { trace: Some(trace), truth: truth_poly, error: None },
        Err(e) => match e.downcast::<PartialRun>() {
            Ok(PartialRun(f)) => {
                Execution { trace: Some(f.trace), truth: truth_poly, error: Some(anyhow!(f.error)) }
            }
            Err(e) => Execution { trace: None, truth: truth_poly, error: Some(e) },
        },
    }
}

#[derive(Debug)]
struct PartialRun(relpoly::design::LoopFailure);

impl std::fmt::Display for PartialRun {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

impl std::error::Error for PartialRun {}

/// `x,lower,estimate,upper,truth` on `grid + 1` evenly spaced points; the
/// truth column is empty when no truth is known.
pub fn curves_csv(pc: &PartialCoefficients, truth: Option<&BernsteinPoly>, grid: usize) -> Result<String> {
    let env = bounds(pc)?;
    let est = interpolate(pc);
    let mut out = String::from("x,lower,estimate,upper,truth\n");
    for i in 0..=grid {
        let x = i as f64 / grid as f64;
        let t = truth.map(|t| t.eval(x)).transpose()?.map_or_else(String::new, |v| v.to_string());
        let _ = writeln!(out, "{x},{},{},{},{t}", env.lower.eval(x)?, est.eval(x)?, env.upper.eval(x)?);
    }
    Ok(out)
}

fn write_outputs(
    dir: &Path,
    trace: &DesignTrace,
    truth: Option<&BernsteinPoly>,
    grid: usize,
    outputs: &mut BTreeMap<String, String>,
) -> Result<()> {
    let mut put = |name: String, body: String| -> Result<()> {
        fs::write(dir.join(&name), &body).with_context(|| format!("writing {name}"))?;
        outputs.insert(name, sha256_hex(body.as_bytes()));
        Ok(())
    };
    put("trace.txt".into(), trace.to_text())?;
    put("trace.json".into(), trace.to_json())?;
    for (m, pc) in trace.partials()?.iter().enumerate() {
        put(format!("curves_m{m}.csv"), curves_csv(pc, truth, grid)?)?;
    }
    Ok(())
}

/// Runs a design and writes trace, curves and manifest into `dir`. The
/// manifest is written even when the run fails, together with whatever
/// part of the trace exists.
pub fn run_design(settings: &DesignSettings, dir: &Path, argv: Vec<String>) -> Result<(Manifest, Option<DesignTrace>)> {
    let started = chrono::Utc::now().to_rfc3339();
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let mut inputs = BTreeMap::new();
    let mut outputs = BTreeMap::new();
    let mut exec = execute(settings, &mut inputs);
    if let Some(trace) = &exec.trace {
        if let Err(e) = write_outputs(dir, trace, exec.truth.as_ref(), settings.grid, &mut outputs) {
            exec.error.get_or_insert(e);
        }
    }
    let manifest = Manifest {
        tool: "relpoly".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        argv,
        settings: settings.clone(),
        seeds: Seeds { oracle: settings.sampling.seed, likelihood: settings.sampling.seed },
        inputs,
        outputs,
        started,
        finished: chrono::Utc::now().to_rfc3339(),
        stop_reason: exec.trace.as_ref().and_then(|t| t.stop_reason),
        error: exec.error.as_ref().map(|e| format!("{e:#}")),
    };
    let body = serde_json::to_string_pretty(&manifest)?;
    fs::write(dir.join(MANIFEST), body).context("writing manifest")?;
    match exec.error {
        Some(e) => Err(e),
        None => Ok((manifest, exec.trace)),
    }
}

/// Re-runs the manifest's settings into `dir` and checks every output digest.
pub fn replay(manifest_path: &Path, dir: &Path, argv: Vec<String>) -> Result<Manifest> {
    let text = fs::read_to_string(manifest_path).with_context(|| format!("reading {}", manifest_path.display()))?;
    let old: Manifest = serde_json::from_str(&text).context("parsing manifest")?;
    for (path, digest) in &old.inputs {
        let now = sha256_hex(&fs::read(PathBuf::from(path)).with_context(|| format!("reading input {path}"))?);
        if &now != digest {
            bail!("input {path} changed since the recorded run");
        }
    }
    let (new, _) = run_design(&old.settings, dir, argv)?;
    let mismatched: Vec<&String> = old
        .outputs
        .iter()
        .filter(|(name, digest)| new.outputs.get(*name) != Some(*digest))
        .map(|(name, _)| name)
        .collect();
    if !mismatched.is_empty() || new.outputs.len() != old.outputs.len() {
        bail!("replay differs from the recorded run in {mismatched:?}");
    }
    Ok(new)
}
