//! The `relpoly` command line.

pub mod args;
pub mod config;
pub mod run;
pub mod settings;

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use clap::Parser;
use relpoly::bernstein::{bernstein_to_monomial, l2_norm_diff, monomial_to_bernstein, BernsteinPoly};
use relpoly::estimator::{interpolate, widen_by_error, PartialCoefficients};
use relpoly::format::{parse_monomial, write_measurements, write_monomial, write_partial, write_poly, BetaFile};
use relpoly::oracle::{
    exact_beta, find_anchors, mc_beta_with, AnchorMethod, BetaMeasurement, Graph, DEFAULT_EXHAUSTIVE_LIMIT,
};

use args::{Cli, Command};
use config::Config;
use run::curves_csv;
use settings::{resolve_design, resolve_graph, resolve_sampling, DEFAULT_GRID};

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn emit(out: Option<&Path>, body: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, body).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

/// A beta file as a polynomial: full files directly, partial ones
/// (with `kmin`/`kmax` lines) through interpolation.
fn load_estimate(path: &Path) -> Result<BernsteinPoly> {
    let file = BetaFile::parse(&read(path)?).with_context(|| format!("in {}", path.display()))?;
    if file.kmin.is_some() || file.kmax.is_some() {
        Ok(interpolate(&file.to_partial(true)?))
    } else {
        Ok(file.to_poly()?)
    }
}

fn load_partial(path: &Path) -> Result<PartialCoefficients> {
    let file = BetaFile::parse(&read(path)?).with_context(|| format!("in {}", path.display()))?;
    Ok(file.to_partial(true)?)
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn cmd_convert(input: &Path, inverse: bool, out: Option<&Path>) -> Result<()> {
    let text = read(input)?;
    let (body, err) = if inverse {
        let file = BetaFile::parse(&text).with_context(|| format!("in {}", input.display()))?;
        let poly = file.to_poly()?;
        let mono = bernstein_to_monomial(&poly);
        let back = monomial_to_bernstein(&mono);
        (write_monomial(&mono), max_abs_diff(back.coefficients(), poly.coefficients()))
    } else {
        let mono = parse_monomial(&text).with_context(|| format!("in {}", input.display()))?;
        let beta = monomial_to_bernstein(&mono);
        let back = bernstein_to_monomial(&beta);
        (write_poly(&beta, None), max_abs_diff(back.coefficients(), mono.coefficients()))
    };
    emit(out, &body)?;
    eprintln!("max round-trip error {err}");
    Ok(())
}

fn cmd_eval(input: &Path, grid: usize) -> Result<()> {
    let poly = load_estimate(input)?;
    let mut out = String::from("x,value\n");
    for i in 0..=grid {
        let x = i as f64 / grid as f64;
        let _ = writeln!(out, "{x},{}", poly.eval(x)?);
    }
    emit(None, &out)
}

fn cmd_norm(a: &Path, b: &Path) -> Result<()> {
    let d = l2_norm_diff(&load_estimate(a)?, &load_estimate(b)?)?;
    println!("{d:.6}");
    Ok(())
}

fn cmd_bounds(input: &Path, eps: Option<f64>, grid: usize) -> Result<()> {
    let pc = load_partial(input)?;
    let mut out = String::new();
    match eps {
        None => {
            let body = curves_csv(&pc, None, grid)?;
            let _ = writeln!(out, "# gap {}", relpoly::estimator::bound_gap(&pc)?);
            out.push_str(&body);
        }
        Some(eps) => {
            let env = widen_by_error(&pc, eps)?;
            let est = interpolate(&pc);
            let _ = writeln!(out, "# gap {} eps {eps}", env.gap());
            out.push_str("x,lower,estimate,upper,truth\n");
            for i in 0..=grid {
                let x = i as f64 / grid as f64;
                let _ = writeln!(out, "{x},{},{},{},", env.lower.eval(x)?, est.eval(x)?, env.upper.eval(x)?);
            }
        }
    }
    emit(None, &out)
}

fn load_graph(g: &settings::GraphSettings) -> Result<Graph> {
    let graph = Graph::parse(&read(&g.graph)?, g.directed).with_context(|| format!("in {}", g.graph.display()))?;
    g.rule.validate(&graph)?;
    Ok(graph)
}

fn cmd_oracle(
    c: &Config,
    g: &args::GraphArgs,
    s: &args::SamplingArgs,
    k: Option<usize>,
    all: bool,
    out: Option<&Path>,
) -> Result<()> {
    let gs = resolve_graph(g, c)?;
    let ss = resolve_sampling(s, c)?;
    let graph = load_graph(&gs)?;
    let n = graph.edge_count();
    let ks: Vec<usize> = match (k, all) {
        (Some(k), false) if k <= n => vec![k],
        (Some(k), false) => bail!("k = {k} exceeds the edge count {n}"),
        (None, true) => (0..=n).collect(),
        _ => bail!("give either --k or --all"),
    };
    let measurements: Vec<BetaMeasurement> = if ss.exact {
        let beta = exact_beta(&graph, gs.rule, DEFAULT_EXHAUSTIVE_LIMIT)?;
        ks.iter().map(|&k| BetaMeasurement::exact(k, beta.coefficients()[k])).collect()
    } else {
        let cfg = ss.mc();
        ks.iter().map(|&k| mc_beta_with(&graph, gs.rule, k, &cfg)).collect::<relpoly::Result<_>>()?
    };
    emit(out, &write_measurements(n, &measurements))
}

fn cmd_anchors(c: &Config, g: &args::GraphArgs, s: &args::SamplingArgs) -> Result<()> {
    let gs = resolve_graph(g, c)?;
    let ss = resolve_sampling(s, c)?;
    let graph = load_graph(&gs)?;
    let method =
        if ss.exact { AnchorMethod::Exact { limit: DEFAULT_EXHAUSTIVE_LIMIT } } else { AnchorMethod::McScan(ss.mc()) };
    let anchors = find_anchors(&graph, gs.rule, method)?;
    emit(None, &write_partial(&anchors.to_partial(graph.edge_count())?))
}

fn cmd_design(c: &Config, a: &args::DesignArgs, argv: Vec<String>) -> Result<()> {
    let (settings, out) = resolve_design(a, c)?;
    let (_, trace) = run::run_design(&settings, &out, argv)?;
    if let Some(trace) = trace {
        print!("{}", trace.to_text());
    }
    eprintln!("wrote {}", out.display());
    Ok(())
}

/// Parses `argv` and runs one command.
pub fn run(argv: Vec<String>) -> Result<()> {
    let cli = Cli::try_parse_from(&argv).map_err(|e| {
        let _ = e.print();
        anyhow::anyhow!("invalid arguments")
    })?;
    if let Command::Replay { manifest, out } = &cli.command {
        let m = run::replay(manifest, out, argv.clone())?;
        println!("reproduced {} files", m.outputs.len());
        return Ok(());
    }
    let config = match &cli.config {
        Some(p) => Config::load(p)?,
        None => Config::default(),
    };
    let grid = |g: Option<usize>| -> Result<usize> { Ok(config.pick(g, "grid")?.unwrap_or(DEFAULT_GRID).max(1)) };
    match &cli.command {
        Command::Convert { input, inverse, out } => cmd_convert(input, *inverse, out.as_deref()),
        Command::Eval { input, grid: g } => cmd_eval(input, grid(*g)?),
        Command::Norm { a, b } => cmd_norm(a, b),
        Command::Bounds { input, eps, grid: g } => cmd_bounds(input, *eps, grid(*g)?),
        Command::Oracle { graph, sampling, k, all, out } => cmd_oracle(&config, graph, sampling, *k, *all, out.as_deref()),
        Command::Anchors { graph, sampling } => cmd_anchors(&config, graph, sampling),
        Command::Design(a) => cmd_design(&config, a, argv),
        Command::Replay { .. } => unreachable!("handled above"),
    }
}
