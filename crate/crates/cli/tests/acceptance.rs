//! Exit criteria. Prints one PASS/FAIL line per criterion and exits
//! nonzero when any fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use relpoly::bernstein::{
    basis_value, bernstein_to_monomial_exact, gram_matrix, l2_norm_diff, monomial_to_bernstein,
    monomial_to_bernstein_exact, BernsteinPoly, MonomialPoly,
};
use relpoly::design::{
    run_design_loop, score_candidates, DesignConfig, LikelihoodConfig, ReferenceBetas, ScoreMode, StoppingConfig,
};
use relpoly::estimator::{bound_gap, bounds, interpolate, Knot, PartialCoefficients};
use relpoly::oracle::{
    exact_beta, exact_counts, mc_beta, Graph, McConfig, McOracle, PropertyRule, SubsetSampler,
    DEFAULT_EXHAUSTIVE_LIMIT,
};
use statrs::distribution::{ChiSquared, ContinuousCDF};

type Outcome = Result<String, String>;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn toy_beta_exact() -> Vec<BigRational> {
    vec![ratio(0, 1), ratio(0, 1), ratio(1, 21), ratio(1, 5), ratio(18, 35), ratio(19, 21), ratio(1, 1), ratio(1, 1)]
}

const TOY_MONOMIAL: [i64; 8] = [0, 0, 1, 2, 0, -3, 0, 1];
const TOY_ST: PropertyRule = PropertyRule::StConnectivity { source: 0, target: 5 };

fn toy_graph() -> Graph {
    Graph::load(data("toy.edges"), true).expect("toy graph")
}

fn toy_truth() -> BernsteinPoly {
    BernsteinPoly::new(toy_beta_exact().iter().map(|r| r.to_f64().unwrap()).collect()).unwrap()
}

fn toy_anchors_only() -> PartialCoefficients {
    PartialCoefficients::new(7, Knot::exact(2, 1.0 / 21.0), Knot::exact(5, 19.0 / 21.0)).unwrap()
}

fn criterion_1() -> Outcome {
    let mono: Vec<BigRational> = TOY_MONOMIAL.iter().map(|&c| ratio(c, 1)).collect();
    let exact = monomial_to_bernstein_exact(&mono);
    if exact != toy_beta_exact() {
        return Err(format!("rational conversion gave {exact:?}"));
    }
    let float = monomial_to_bernstein(&MonomialPoly::new(TOY_MONOMIAL.iter().map(|&c| c as f64).collect()).unwrap());
    let err = float
        .coefficients()
        .iter()
        .zip(toy_beta_exact())
        .map(|(a, b)| (a - b.to_f64().unwrap()).abs())
        .fold(0.0, f64::max);
    if err > 1e-12 {
        return Err(format!("float conversion off by {err:e}"));
    }
    Ok(format!("rational exact, float max error {err:e}"))
}

fn criterion_2() -> Outcome {
    let truth = toy_truth();
    let pc = toy_anchors_only();
    let n0 = l2_norm_diff(&truth, &interpolate(&pc)).map_err(|e| e.to_string())?;
    let n1 = l2_norm_diff(&truth, &interpolate(&pc.with_measurement(Knot::exact(3, 0.2)).unwrap()))
        .map_err(|e| e.to_string())?;
    let detail = format!("anchors only {n0:.6} (want 0.0365), with β_3 {n1:.6} (want 0.0047), tolerance 5e-4");
    if (n0 - 0.0365).abs() <= 5e-4 && (n1 - 0.0047).abs() <= 5e-4 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn criterion_3() -> Outcome {
    let counts = exact_counts(&toy_graph(), TOY_ST, DEFAULT_EXHAUSTIVE_LIMIT).map_err(|e| e.to_string())?;
    let total: u64 = (0..=7).map(|k| counts.subsets(k)).sum();
    let beta: Vec<BigRational> = (0..=7)
        .map(|k| {
            BigRational::new(
                BigInt::from(counts.numerators[k]),
                BigInt::from(counts.denominator * counts.subsets(k)),
            )
        })
        .collect();
    if beta != toy_beta_exact() || total != 128 {
        return Err(format!("enumeration over {total} subsets gave {beta:?}"));
    }
    Ok(format!("{total} subsets, accepting counts {:?}", counts.numerators))
}

/// Gauss–Legendre nodes and weights on [0, 1].
fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    (1..=n)
        .map(|i| {
            let mut x = (std::f64::consts::PI * (i as f64 - 0.25) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for j in 2..=n {
                    let p2 = ((2 * j - 1) as f64 * x * p1 - (j - 1) as f64 * p0) / j as f64;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let step = p1 / dp;
                x -= step;
                if step.abs() < 1e-16 {
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            (0.5 * (x + 1.0), 0.5 * w)
        })
        .collect()
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst = [0.0f64; 5];

    for n in 0..=100 {
        for i in 0..=200 {
            let x = i as f64 / 200.0;
            let s: f64 = (0..=n).map(|k| basis_value(n, k, x).unwrap()).sum();
            worst[0] = worst[0].max((s - 1.0).abs());
        }
    }

    let nodes = gauss_legendre(20);
    for n in 0..=15 {
        let g = gram_matrix(n);
        for i in 0..=n {
            for j in 0..=n {
                let q: f64 = nodes
                    .iter()
                    .map(|&(x, w)| w * basis_value(n, i, x).unwrap() * basis_value(n, j, x).unwrap())
                    .sum();
                worst[1] = worst[1].max((q - g.get(i, j)).abs());
            }
        }
    }

    for _ in 0..200 {
        let n = rng.random_range(0..=60);
        let poly = BernsteinPoly::new((0..=n).map(|_| rng.random_range(-2.0..2.0)).collect()).unwrap();
        for i in 0..=100 {
            let x = i as f64 / 100.0;
            worst[2] = worst[2].max((poly.eval(x).unwrap() - poly.eval_basis_sum(x).unwrap()).abs());
        }
        let delta = rng.random_range(-0.5..0.5);
        let shifted = BernsteinPoly::new(poly.coefficients().iter().map(|c| c + delta).collect()).unwrap();
        let d = l2_norm_diff(&poly, &shifted).unwrap();
        worst[3] = worst[3].max((d - delta.abs()).abs());
    }

    for n in 0..=30 {
        let mono: Vec<f64> = (0..=n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let exact: Vec<BigRational> = mono.iter().map(|&c| BigRational::from_float(c).unwrap()).collect();
        let back = bernstein_to_monomial_exact(&monomial_to_bernstein_exact(&exact));
        let err = back.iter().zip(&mono).map(|(b, c)| (b.to_f64().unwrap() - c).abs()).fold(0.0, f64::max);
        if back.iter().zip(&exact).any(|(a, b)| !(a - b).is_zero()) {
            return Err(format!("rational round trip not exact at degree {n}"));
        }
        worst[4] = worst[4].max(err);
    }

    let limits = [1e-12, 1e-10, 1e-12, 1e-12, 1e-10];
    let names = ["unity", "gram", "casteljau", "offset", "round-trip"];
    let detail = names
        .iter()
        .zip(worst)
        .map(|(n, w)| format!("{n} {w:.1e}"))
        .collect::<Vec<_>>()
        .join(", ");
    if worst.iter().zip(limits).all(|(w, l)| *w <= l) {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn random_monotone(rng: &mut ChaCha8Rng) -> Vec<f64> {
    let n = rng.random_range(3..=30);
    let zeros = rng.random_range(1..=(n - 1) / 2);
    let ones = rng.random_range(1..=(n - zeros) / 2);
    let mut mid: Vec<f64> = (0..n + 1 - zeros - ones).map(|_| rng.random_range(1e-6..1.0 - 1e-6)).collect();
    mid.sort_by(f64::total_cmp);
    let mut beta = vec![0.0; zeros];
    beta.extend(mid);
    beta.extend(vec![1.0; ones]);
    beta
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut violations, mut widened, mut checks) = (0usize, 0usize, 0usize);
    for _ in 0..500 {
        let beta = random_monotone(&mut rng);
        let truth = BernsteinPoly::new(beta.clone()).unwrap();
        let k_min = beta.iter().position(|&b| b > 0.0).unwrap();
        let k_max = beta.iter().rposition(|&b| b < 1.0).unwrap();
        let mut pc =
            PartialCoefficients::new(beta.len() - 1, Knot::exact(k_min, beta[k_min]), Knot::exact(k_max, beta[k_max]))
                .unwrap();
        let mut order: Vec<usize> = (k_min + 1..k_max).collect();
        for i in 0..order.len() {
            let j = rng.random_range(i..order.len());
            order.swap(i, j);
        }
        order.truncate(rng.random_range(0..=order.len()));
        let mut gap = bound_gap(&pc).unwrap();
        for step in 0..=order.len() {
            if step > 0 {
                let k = order[step - 1];
                pc.add_measurement(Knot::exact(k, beta[k])).unwrap();
                let next = bound_gap(&pc).unwrap();
                if next > gap {
                    widened += 1;
                }
                gap = next;
            }
            let env = bounds(&pc).unwrap();
            for i in 0..1000 {
                let x = i as f64 / 999.0;
                let f = truth.eval(x).unwrap();
                if env.lower.eval(x).unwrap() > f || f > env.upper.eval(x).unwrap() {
                    violations += 1;
                }
                checks += 1;
            }
        }
    }
    let detail = format!("{checks} point checks, {violations} containment violations, {widened} gap increases");
    if violations == 0 && widened == 0 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn random_graph(rng: &mut ChaCha8Rng) -> (Graph, PropertyRule) {
    let v = rng.random_range(4..=7);
    let mut pairs: Vec<(usize, usize)> = (0..v).flat_map(|a| (a + 1..v).map(move |b| (a, b))).collect();
    let edges = rng.random_range(4..=pairs.len().min(12));
    for i in 0..edges {
        let j = rng.random_range(i..pairs.len());
        pairs.swap(i, j);
    }
    pairs.truncate(edges);
    let directed = rng.random_bool(0.3);
    let graph = Graph::new(v, pairs, directed).unwrap();
    let rule = match rng.random_range(0..3) {
        0 => PropertyRule::StConnectivity { source: 0, target: v - 1 },
        1 => PropertyRule::ComponentThreshold { min_size: rng.random_range(2..=v) },
        _ => PropertyRule::LargestComponent { min_size: rng.random_range(2..=v) },
    };
    (graph, rule)
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut cases = vec![(toy_graph(), TOY_ST)];
    cases.extend((0..20).map(|_| random_graph(&mut rng)));
    let exact: Vec<BernsteinPoly> =
        cases.iter().map(|(g, r)| exact_beta(g, *r, DEFAULT_EXHAUSTIVE_LIMIT).unwrap()).collect();
    let trials = 1000;
    let mut inside = 0;
    for t in 0..trials {
        let c = t % cases.len();
        let (graph, rule) = &cases[c];
        let k = rng.random_range(0..=graph.edge_count());
        let m = mc_beta(graph, *rule, k, 10_000, 1000 + t as u64).unwrap();
        let truth = exact[c].coefficients()[k];
        if (m.beta - truth).abs() <= 4.0 * m.stderr || m.beta == truth {
            inside += 1;
        }
    }

    let draws = 100_000;
    let mut counts = std::collections::HashMap::<Vec<usize>, u64>::new();
    let mut sampler = SubsetSampler::new(6, 3, 66, 0);
    for _ in 0..draws {
        let mut s = sampler.draw().to_vec();
        s.sort_unstable();
        *counts.entry(s).or_default() += 1;
    }
    let expected = draws as f64 / 20.0;
    let stat: f64 = counts.values().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
    let critical = ChiSquared::new(19.0).unwrap().inverse_cdf(0.999);

    let detail = format!(
        "{inside}/{trials} within 4σ, chi-square {stat:.2} vs {critical:.2} over {} subsets",
        counts.len()
    );
    if inside * 100 >= trials * 99 && counts.len() == 20 && stat < critical {
        Ok(detail)
    } else {
        Err(detail)
    }
}

const KARATE_RULE: PropertyRule = PropertyRule::LargestComponent { min_size: 10 };
const KARATE_KMAX: usize = 27;
const TRUTH_SAMPLES: usize = 100_000;

struct Karate {
    graph: Graph,
    truth: ReferenceBetas,
    k_min: usize,
}

fn karate() -> Karate {
    let graph = Graph::load(data("karate.edges"), false).expect("karate graph");
    let cfg = McConfig::new(TRUTH_SAMPLES, 778);
    let ms: Vec<_> = (0..=graph.edge_count())
        .map(|k| relpoly::oracle::mc_beta_with(&graph, KARATE_RULE, k, &cfg).unwrap())
        .collect();
    let truth = ReferenceBetas::new(ms.iter().map(|m| m.beta).collect(), ms.iter().map(|m| m.stderr).collect()).unwrap();
    let k_min = truth.beta().iter().position(|&b| b > 0.0).unwrap();
    Karate { graph, truth, k_min }
}

fn karate_partial(k: &Karate) -> PartialCoefficients {
    let (b, s) = (k.truth.beta(), k.truth.stderr());
    PartialCoefficients::new(
        k.graph.edge_count(),
        Knot::new(k.k_min, b[k.k_min], s[k.k_min]),
        Knot::new(KARATE_KMAX, b[KARATE_KMAX], s[KARATE_KMAX]),
    )
    .unwrap()
}

fn criterion_7(k: &Karate) -> Outcome {
    if k.graph.vertex_count() != 34 || k.graph.edge_count() != 78 {
        return Err(format!("graph has {} vertices and {} edges", k.graph.vertex_count(), k.graph.edge_count()));
    }
    if k.k_min != 9 {
        return Err(format!("rule gives k_min = {}", k.k_min));
    }
    let scores = score_candidates(&karate_partial(k), ScoreMode::OracleInformed, Some(&k.truth.poly()))
        .map_err(|e| e.to_string())?;
    let best = scores[0];
    let offset = best.k - k.k_min;
    let detail = format!(
        "k_min {} k_max {KARATE_KMAX}, argmin k = k_min + {offset} (L2 {:.4}), want k_min + 12 ± 2",
        k.k_min, best.expected_gap_after
    );
    if offset.abs_diff(12) <= 2 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn criterion_8(k: &Karate) -> Outcome {
    let cfg = DesignConfig {
        stopping: StoppingConfig::default(),
        mode: ScoreMode::BoundGap,
        likelihood: LikelihoodConfig::new(88),
    };
    let mut oracle = McOracle::new(k.graph.clone(), KARATE_RULE, McConfig::new(40_000, 88)).unwrap();
    let trace = run_design_loop(karate_partial(k), &mut oracle, &cfg, Some(&k.truth)).map_err(|f| f.to_string())?;
    let rows: Vec<_> = trace.rows().collect();
    let gaps_fall = rows.windows(2).all(|w| w[1].bound_gap < w[0].bound_gap);
    let l2_0 = trace.baseline.l2_vs_truth.unwrap();
    let l2_ok = (0.0694 / 2.0..=0.0694 * 2.0).contains(&l2_0);
    let gains = |pick: fn(&relpoly::design::Step) -> f64| -> Vec<f64> {
        rows.windows(2).map(|w| pick(w[0]) - pick(w[1])).collect()
    };
    let aic_gain = gains(|s| s.aic);
    let bic_gain = gains(|s| s.bic);
    let first_rise = |g: &[f64]| g.windows(2).position(|w| w[1] > w[0]).map(|i| i + 2);
    let (aic_rise, bic_rise) = (first_rise(&aic_gain), first_rise(&bic_gain));
    let detail = format!(
        "{} steps, gaps strictly falling {gaps_fall}, L2 at m=0 {l2_0:.4} (reference 0.0694), \
         AIC gain first rises at m={aic_rise:?}, BIC at m={bic_rise:?}; AIC gains [{}]",
        trace.steps.len(),
        aic_gain.iter().map(|g| format!("{g:.3e}")).collect::<Vec<_>>().join(" ")
    );
    if gaps_fall && l2_ok && aic_rise.is_none() && bic_rise.is_none() {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn design_once(out: &Path) -> Result<(), String> {
    let status = Command::new(env!("CARGO_BIN_EXE_relpoly"))
        .args(["design", "--graph"])
        .arg(data("karate.edges"))
        .args(["--rule", "largest", "--threshold", "10", "--kmax", "27"])
        .args(["--samples", "20000", "--seed", "99", "--out"])
        .arg(out)
        .env_remove("RELPOLY_CONFIG")
        .output()
        .map_err(|e| e.to_string())?;
    if !status.status.success() {
        return Err(String::from_utf8_lossy(&status.stderr).into_owned());
    }
    Ok(())
}

fn criterion_9() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    design_once(&a)?;
    design_once(&b)?;
    let mut names: Vec<String> = std::fs::read_dir(&a)
        .map_err(|e| e.to_string())?
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .filter(|n| n != "manifest.json")
        .collect();
    names.sort();
    let csvs = names.iter().filter(|n| n.ends_with(".csv")).count();
    if csvs == 0 || !names.iter().any(|n| n == "trace.txt") {
        return Err(format!("missing outputs: {names:?}"));
    }
    for n in &names {
        if std::fs::read(a.join(n)).ok() != std::fs::read(b.join(n)).ok() {
            return Err(format!("{n} differs between runs"));
        }
    }
    Ok(format!("{} files identical ({csvs} curve files)", names.len()))
}

fn run(label: &str, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
        let msg = p
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_default();
        Err(format!("panicked: {msg}"))
    });
    let secs = start.elapsed().as_secs_f64();
    match outcome {
        Ok(d) => {
            println!("PASS  {label}: {d} [{secs:.1}s]");
            true
        }
        Err(d) => {
            println!("FAIL  {label}: {d} [{secs:.1}s]");
            false
        }
    }
}

fn main() {
    let mut results = vec![
        run("1 toy basis conversion", criterion_1),
        run("2 toy estimator norms", criterion_2),
        run("3 exact oracle equivalence", criterion_3),
        run("4 analytic invariants", criterion_4),
        run("5 bound containment", criterion_5),
        run("6 Monte Carlo calibration", criterion_6),
    ];
    let k = karate();
    results.push(run("7 Karate selector", || criterion_7(&k)));
    results.push(run("8 Karate design trend", || criterion_8(&k)));
    results.push(run("9 design determinism", criterion_9));
    let passed = results.iter().filter(|&&r| r).count();
    println!("{passed}/{} acceptance criteria passed", results.len());
    if passed != results.len() {
        std::process::exit(1);
    }
}
