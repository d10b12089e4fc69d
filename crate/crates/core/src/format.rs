//! Plain-text coefficient files.
//!
//! Beta files hold one coefficient per line as `k beta [stderr]`.
//! Optional directives: `degree N`, and the anchors `kmin k beta [stderr]`
//! and `kmax k beta [stderr]`. `#` starts a comment. A file with every
//! `k` in `0..=N` is a full coefficient vector; a file with anchors is a
//! partially known vector.
//!
//! Monomial files hold one real per line, constant term first.

use std::fmt::Write as _;

use crate::bernstein::{BernsteinPoly, MonomialPoly};
use crate::error::{Error, Result};
use crate::estimator::{Knot, PartialCoefficients};
use crate::oracle::BetaMeasurement;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct BetaFile {
    pub degree: Option<usize>,
    pub kmin: Option<Knot>,
    pub kmax: Option<Knot>,
    pub entries: Vec<Knot>,
}

fn strip(raw: &str) -> &str {
    raw.split('#').next().unwrap_or("").trim()
}

fn field<T: std::str::FromStr>(s: &str, line: usize, what: &str) -> Result<T> {
    s.parse().map_err(|_| Error::Parse { line, message: format!("`{s}` is not a valid {what}") })
}

fn knot(fields: &[&str], line: usize) -> Result<Knot> {
    if !(2..=3).contains(&fields.len()) {
        return Err(Error::Parse { line, message: format!("expected `k beta [stderr]`, found {} fields", fields.len()) });
    }
    let k = field(fields[0], line, "index")?;
    let beta: f64 = field(fields[1], line, "coefficient")?;
    let stderr: f64 = match fields.get(2) {
        Some(s) => field(s, line, "standard error")?,
        None => 0.0,
    };
    if !beta.is_finite() || !stderr.is_finite() || stderr < 0.0 {
        return Err(Error::Parse { line, message: "coefficient and stderr must be finite, stderr ≥ 0".into() });
    }
    Ok(Knot::new(k, beta, stderr))
}

impl BetaFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut out = BetaFile::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let body = strip(raw);
            if body.is_empty() {
                continue;
            }
            let fields: Vec<&str> = body.split_whitespace().collect();
            match fields[0] {
                "degree" => {
                    if fields.len() != 2 {
                        return Err(Error::Parse { line, message: "expected `degree N`".into() });
                    }
                    out.degree = Some(field(fields[1], line, "degree")?);
                }
                "kmin" => out.kmin = Some(knot(&fields[1..], line)?),
                "kmax" => out.kmax = Some(knot(&fields[1..], line)?),
                _ => out.entries.push(knot(&fields, line)?),
            }
        }
        Ok(out)
    }

    fn inferred_degree(&self) -> Option<usize> {
        self.degree.or_else(|| {
            self.entries
                .iter()
                .chain(self.kmin.iter())
                .chain(self.kmax.iter())
                .map(|k| k.k)
                .max()
        })
    }

    /// Full coefficient vector with per-coefficient standard errors.
    pub fn to_full(&self) -> Result<(BernsteinPoly, Vec<f64>)> {
        let degree = self
            .inferred_degree()
            .ok_or_else(|| Error::Parse { line: 0, message: "beta file has no coefficients".into() })?;
        let mut slots: Vec<Option<Knot>> = vec![None; degree + 1];
        for k in self.entries.iter().chain(self.kmin.iter()).chain(self.kmax.iter()) {
            if k.k > degree {
                return Err(Error::Parse { line: 0, message: format!("k = {} exceeds degree {degree}", k.k) });
            }
            match slots[k.k] {
                Some(prev) if prev != *k => {
                    return Err(Error::Parse { line: 0, message: format!("conflicting values for k = {}", k.k) })
                }
                _ => slots[k.k] = Some(*k),
            }
        }
        if let Some(missing) = slots.iter().position(Option::is_none) {
            return Err(Error::Parse { line: 0, message: format!("no value for k = {missing}") });
        }
        let knots: Vec<Knot> = slots.into_iter().flatten().collect();
        let poly = BernsteinPoly::new(knots.iter().map(|k| k.beta).collect())?;
        Ok((poly, knots.iter().map(|k| k.stderr).collect()))
    }

    pub fn to_poly(&self) -> Result<BernsteinPoly> {
        self.to_full().map(|(p, _)| p)
    }

    /// Partially known vector. Requires both anchors and a degree (explicit
    /// or implied by the largest index). Entries outside the interior band
    /// must agree with the implied 0s and 1s.
    pub fn to_partial(&self, monotone: bool) -> Result<PartialCoefficients> {
        let (Some(lo), Some(hi)) = (self.kmin, self.kmax) else {
            return Err(Error::Parse { line: 0, message: "partial beta file needs `kmin` and `kmax` lines".into() });
        };
        let degree = self.inferred_degree().expect("anchors present");
        let mut pc = PartialCoefficients::with_flag(degree, lo, hi, monotone)?;
        for e in &self.entries {
            if e.k > lo.k && e.k < hi.k {
                pc.add_measurement(*e)?;
                continue;
            }
            let implied = pc.known(e.k);
            if implied != Some(e.beta) {
                return Err(Error::Parse {
                    line: 0,
                    message: format!("β_{} = {} contradicts the anchors (expected {:?})", e.k, e.beta, implied),
                });
            }
        }
        Ok(pc)
    }
}

pub fn write_poly(poly: &BernsteinPoly, stderr: Option<&[f64]>) -> String {
    let mut out = format!("degree {}\n", poly.degree());
    for (k, b) in poly.coefficients().iter().enumerate() {
        match stderr.and_then(|s| s.get(k)) {
            Some(s) => writeln!(out, "{k} {b} {s}"),
            None => writeln!(out, "{k} {b}"),
        }
        .expect("writing to a String cannot fail");
    }
    out
}

pub fn write_partial(pc: &PartialCoefficients) -> String {
    let mut out = format!("degree {}\n", pc.degree());
    let (lo, hi) = (pc.lower_anchor(), pc.upper_anchor());
    let _ = writeln!(out, "kmin {} {} {}", lo.k, lo.beta, lo.stderr);
    let _ = writeln!(out, "kmax {} {} {}", hi.k, hi.beta, hi.stderr);
    for m in pc.measured() {
        let _ = writeln!(out, "{} {} {}", m.k, m.beta, m.stderr);
    }
    out
}

pub fn write_measurements(degree: usize, measurements: &[BetaMeasurement]) -> String {
    let mut out = format!("degree {degree}\n");
    if let Some(first) = measurements.first() {
        let _ = writeln!(out, "# samples {} seed {}", first.samples, first.seed);
    }
    for m in measurements {
        let _ = writeln!(out, "{} {} {}", m.k, m.beta, m.stderr);
    }
    out
}

pub fn parse_monomial(text: &str) -> Result<MonomialPoly> {
    let mut coeffs = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let body = strip(raw);
        if body.is_empty() {
            continue;
        }
        let v: f64 = field(body, idx + 1, "coefficient")?;
        if !v.is_finite() {
            return Err(Error::Parse { line: idx + 1, message: "coefficient must be finite".into() });
        }
        coeffs.push(v);
    }
    if coeffs.is_empty() {
        return Err(Error::Parse { line: 0, message: "no coefficients".into() });
    }
    MonomialPoly::new(coeffs)
}

pub fn write_monomial(poly: &MonomialPoly) -> String {
    let mut out = String::from("# ascending powers of x\n");
    for a in poly.coefficients() {
        let _ = writeln!(out, "{a}");
    }
    out
}
