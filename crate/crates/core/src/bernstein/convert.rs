//! Power basis <-> Bernstein basis, in exact rational arithmetic.
//!
//! The change of basis is badly conditioned in floating point (entries
//! of the inverse map grow like `C(N, i) C(i, k)`), so both directions
//! convert their inputs to exact rationals, transform exactly, and
//! round once on the way out.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::{BernsteinPoly, MonomialPoly};

fn pascal(n: usize) -> Vec<Vec<BigInt>> {
    let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(n + 1);
    for r in 0..=n {
        let mut row = vec![BigInt::from(1); r + 1];
        for c in 1..r {
            row[c] = &rows[r - 1][c - 1] + &rows[r - 1][c];
        }
        rows.push(row);
    }
    rows
}

/// `β_k = Σ_{i ≤ k} C(k, i) / C(N, i) · a_i`.
pub fn monomial_to_bernstein_exact(monomial: &[BigRational]) -> Vec<BigRational> {
    if monomial.is_empty() {
        return Vec::new();
    }
    let n = monomial.len() - 1;
    let c = pascal(n);
    (0..=n)
        .map(|k| {
            let mut acc = BigRational::zero();
            for (i, a) in monomial.iter().enumerate().take(k + 1) {
                if a.is_zero() {
                    continue;
                }
                acc += a * BigRational::new(c[k][i].clone(), c[n][i].clone());
            }
            acc
        })
        .collect()
}

/// `a_i = Σ_{k ≤ i} (-1)^(i-k) C(N, i) C(i, k) β_k`.
pub fn bernstein_to_monomial_exact(beta: &[BigRational]) -> Vec<BigRational> {
    if beta.is_empty() {
        return Vec::new();
    }
    let n = beta.len() - 1;
    let c = pascal(n);
    (0..=n)
        .map(|i| {
            let mut acc = BigRational::zero();
            for (k, b) in beta.iter().enumerate().take(i + 1) {
                if b.is_zero() {
                    continue;
                }
                let mut w = BigRational::from_integer(&c[n][i] * &c[i][k]);
                if (i - k) % 2 == 1 {
                    w = -w;
                }
                acc += w * b;
            }
            acc
        })
        .collect()
}

fn to_exact(values: &[f64]) -> Vec<BigRational> {
    values
        .iter()
        .map(|&v| BigRational::from_float(v).expect("coefficients are validated finite"))
        .collect()
}

fn to_float(values: &[BigRational]) -> Vec<f64> {
    values.iter().map(|v| v.to_f64().unwrap_or(f64::NAN)).collect()
}

pub fn monomial_to_bernstein(monomial: &MonomialPoly) -> BernsteinPoly {
    let beta = monomial_to_bernstein_exact(&to_exact(monomial.coefficients()));
    BernsteinPoly::new(to_float(&beta)).expect("conversion of a finite polynomial is finite")
}

pub fn bernstein_to_monomial(poly: &BernsteinPoly) -> MonomialPoly {
    let a = bernstein_to_monomial_exact(&to_exact(poly.coefficients()));
    MonomialPoly::new(to_float(&a)).expect("conversion of a finite polynomial is finite")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ratio(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn toy_polynomial_exact() {
        let a: Vec<BigRational> = [0, 0, 1, 2, 0, -3, 0, 1].iter().map(|&v| ratio(v, 1)).collect();
        let beta = monomial_to_bernstein_exact(&a);
        let expected = vec![
            ratio(0, 1),
            ratio(0, 1),
            ratio(1, 21),
            ratio(1, 5),
            ratio(18, 35),
            ratio(19, 21),
            ratio(1, 1),
            ratio(1, 1),
        ];
        assert_eq!(beta, expected);
        assert_eq!(bernstein_to_monomial_exact(&beta), a);
    }

    #[test]
    fn toy_polynomial_float() {
        let m = MonomialPoly::new(vec![0.0, 0.0, 1.0, 2.0, 0.0, -3.0, 0.0, 1.0]).unwrap();
        let b = monomial_to_bernstein(&m);
        let expected = [0.0, 0.0, 1.0 / 21.0, 0.2, 18.0 / 35.0, 19.0 / 21.0, 1.0, 1.0];
        for (got, want) in b.coefficients().iter().zip(expected) {
            assert!((got - want).abs() <= 1e-12);
        }
        let back = bernstein_to_monomial(&b);
        for (got, want) in back.coefficients().iter().zip(m.coefficients()) {
            assert!((got - want).abs() <= 1e-12);
        }
    }

    #[test]
    fn constants_and_identity() {
        let c = MonomialPoly::new(vec![0.25]).unwrap();
        assert_eq!(monomial_to_bernstein(&c).coefficients(), &[0.25]);
        let x = MonomialPoly::new(vec![0.0, 1.0]).unwrap();
        assert_eq!(monomial_to_bernstein(&x).coefficients(), &[0.0, 1.0]);
        let ones = BernsteinPoly::constant(9, 1.0).unwrap();
        let m = bernstein_to_monomial(&ones);
        assert_eq!(m.coefficients()[0], 1.0);
        assert!(m.coefficients()[1..].iter().all(|&a| a == 0.0));
    }

    #[test]
    fn constant_of_higher_degree_spreads_evenly() {
        // c + 0 x + ... + 0 x^N has β_k = c for every k
        let mut a = vec![0.0; 12];
        a[0] = -1.5;
        let b = monomial_to_bernstein(&MonomialPoly::new(a).unwrap());
        assert!(b.coefficients().iter().all(|&v| v == -1.5));
    }

    proptest! {
        #[test]
        fn exact_round_trip_to_degree_30(a in prop::collection::vec(-10.0f64..10.0, 1..=31)) {
            let exact = to_exact(&a);
            let back = to_float(&bernstein_to_monomial_exact(&monomial_to_bernstein_exact(&exact)));
            for (x, y) in a.iter().zip(&back) {
                prop_assert!((x - y).abs() <= 1e-10);
            }
        }

        #[test]
        fn float_round_trip_to_degree_10(a in prop::collection::vec(-10.0f64..10.0, 1..=11)) {
            let m = MonomialPoly::new(a.clone()).unwrap();
            let back = bernstein_to_monomial(&monomial_to_bernstein(&m));
            for (x, y) in a.iter().zip(back.coefficients()) {
                prop_assert!((x - y).abs() <= 1e-10);
            }
        }

        #[test]
        fn conversion_preserves_values(a in prop::collection::vec(-10.0f64..10.0, 1..=16), x in 0.0f64..=1.0) {
            let m = MonomialPoly::new(a).unwrap();
            let b = monomial_to_bernstein(&m);
            prop_assert!((m.eval(x) - b.eval(x).unwrap()).abs() <= 1e-9);
        }
    }
}
