//! Binomial coefficients in log space.
//!
//! `C(156, 78)` is about `4.6e45`, far past `u64`, so every ratio of
//! binomials used by the Gram matrix is formed as a difference of
//! log-factorials followed by a single `exp`.

use std::sync::OnceLock;

const TABLE_LEN: usize = 4096;

fn table() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = Vec::with_capacity(TABLE_LEN);
        t.push(0.0);
        let mut acc = 0.0_f64;
        for i in 1..TABLE_LEN {
            acc += (i as f64).ln();
            t.push(acc);
        }
        t
    })
}

/// `ln(n!)`, i.e. `ln Γ(n + 1)`.
pub fn ln_factorial(n: usize) -> f64 {
    if n < TABLE_LEN {
        return table()[n];
    }
    // Stirling series; the truncation error is far below f64 resolution here.
    let x = n as f64;
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    x * x.ln() - x + 0.5 * (2.0 * std::f64::consts::PI * x).ln()
        + inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 / 1260.0))
}

/// `ln C(n, k)`. Returns `-inf` when `k > n`.
pub fn ln_binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)
}

/// `C(n, k)` as a float, exact for small arguments and correctly scaled for large ones.
pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    if n <= 60 {
        // exact in u128 for this range
        let mut acc: u128 = 1;
        for i in 0..k {
            acc = acc * (n - i) as u128 / (i + 1) as u128;
        }
        return acc as f64;
    }
    ln_binomial(n, k).exp()
}

/// `C(n, k)` as an integer, `None` on overflow.
pub fn binomial_u64(n: usize, k: usize) -> Option<u64> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return None;
        }
    }
    Some(acc as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;
    use num_traits::ToPrimitive;

    fn exact_binomial(n: usize, k: usize) -> BigUint {
        let mut acc = BigUint::from(1u32);
        for i in 0..k {
            acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
        }
        acc
    }

    #[test]
    fn log_binomial_matches_big_integers() {
        for n in 0..=156 {
            for k in 0..=n {
                let exact = exact_binomial(n, k).to_f64().unwrap();
                let approx = ln_binomial(n, k).exp();
                let rel = ((approx - exact) / exact).abs();
                assert!(rel < 1e-12, "C({n},{k}): {approx} vs {exact} (rel {rel:e})");
            }
        }
    }

    #[test]
    fn small_binomials_exact() {
        assert_eq!(binomial(7, 2), 21.0);
        assert_eq!(binomial(7, 3), 35.0);
        assert_eq!(binomial(7, 8), 0.0);
        assert_eq!(binomial_u64(78, 9), Some(exact_binomial(78, 9).to_u64().unwrap()));
        assert_eq!(binomial_u64(200, 100), None);
    }

    #[test]
    fn stirling_branch_is_continuous() {
        let below: f64 = ln_factorial(TABLE_LEN - 1) + (TABLE_LEN as f64).ln();
        let above = ln_factorial(TABLE_LEN);
        assert!((below - above).abs() / above < 1e-14);
    }
}
