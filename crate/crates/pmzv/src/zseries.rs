//! Truncated power series in one commuting variable, the coefficient
//! transforms induced by z -> z/(z-1) and z -> z^p/(z^p-1), the prime-
//! restricted logarithm series, and divided powers.
//!
//! The forward transform reads coefficients off
//!   sum_k a_k (z/(z-1))^k = sum_n z^n sum_{1<=k<=n} (-1)^k a_k C(n-1, n-k),
//! which follows from (z/(z-1))^k = (-1)^k z^k (1-z)^{-k}. Note the (-1)^k
//! sits inside the sum; [`mobius_transform_paper_literal`] keeps the variant
//! with (-1)^n outside, which fails the series-multiplication oracle and is
//! retained only so that tests can demonstrate the difference.

use crate::arith::{Backend, PascalRow, Rational, Ring};
use num_bigint::BigInt;
use std::fmt;

/// Power series truncated at a fixed order; `coeffs[n]` is the z^n
/// coefficient and every index 0..=order is materialized.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedZSeries<T> {
    coeffs: Vec<T>,
}

impl<T: Clone + PartialEq + fmt::Debug> TruncatedZSeries<T> {
    pub fn from_coeffs(coeffs: Vec<T>) -> Self {
        assert!(!coeffs.is_empty());
        TruncatedZSeries { coeffs }
    }

    pub fn zero<R: Ring<Elem = T>>(ring: &R, order: usize) -> Self {
        TruncatedZSeries {
            coeffs: vec![ring.zero(); order + 1],
        }
    }

    pub fn constant<R: Ring<Elem = T>>(ring: &R, value: T, order: usize) -> Self {
        let mut coeffs = vec![ring.zero(); order + 1];
        coeffs[0] = value;
        TruncatedZSeries { coeffs }
    }

    pub fn one<R: Ring<Elem = T>>(ring: &R, order: usize) -> Self {
        Self::constant(ring, ring.one(), order)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, n: usize) -> &T {
        &self.coeffs[n]
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn is_zero<R: Ring<Elem = T>>(&self, ring: &R) -> bool {
        self.coeffs.iter().all(|c| ring.is_zero(c))
    }

    pub fn truncated(&self, order: usize) -> Self {
        TruncatedZSeries {
            coeffs: self.coeffs[..=order.min(self.order())].to_vec(),
        }
    }
}

/// Pointwise sum, truncated at the smaller order.
pub fn series_add<R: Ring>(
    ring: &R,
    a: &TruncatedZSeries<R::Elem>,
    b: &TruncatedZSeries<R::Elem>,
) -> TruncatedZSeries<R::Elem> {
    let order = a.order().min(b.order());
    let coeffs = (0..=order)
        .map(|n| ring.add(a.coeff(n), b.coeff(n)))
        .collect();
    TruncatedZSeries { coeffs }
}

pub fn series_neg<R: Ring>(ring: &R, a: &TruncatedZSeries<R::Elem>) -> TruncatedZSeries<R::Elem> {
    TruncatedZSeries {
        coeffs: a.coeffs.iter().map(|c| ring.neg(c)).collect(),
    }
}

/// Cauchy product, truncated at the smaller order.
pub fn series_mul<R: Ring>(
    ring: &R,
    a: &TruncatedZSeries<R::Elem>,
    b: &TruncatedZSeries<R::Elem>,
) -> TruncatedZSeries<R::Elem> {
    let order = a.order().min(b.order());
    let mut coeffs = vec![ring.zero(); order + 1];
    for i in 0..=order {
        if ring.is_exact_zero(a.coeff(i)) {
            continue;
        }
        for j in 0..=order - i {
            if ring.is_exact_zero(b.coeff(j)) {
                continue;
            }
            coeffs[i + j] = ring.add(&coeffs[i + j], &ring.mul(a.coeff(i), b.coeff(j)));
        }
    }
    TruncatedZSeries { coeffs }
}

pub fn series_scale<R: Ring>(
    ring: &R,
    c: &R::Elem,
    a: &TruncatedZSeries<R::Elem>,
) -> TruncatedZSeries<R::Elem> {
    TruncatedZSeries {
        coeffs: a.coeffs.iter().map(|x| ring.mul(c, x)).collect(),
    }
}

/// b_n = sum_{k=1}^{n} (-1)^k a_k C(n-1, n-k), b_0 = 0. The entry a[0] is
/// ignored (the transform acts on series without constant term).
pub fn mobius_transform<R: Ring>(ring: &R, a: &[R::Elem]) -> Vec<R::Elem> {
    let m = a.len() - 1;
    let mut out = vec![ring.zero(); m + 1];
    let mut row = PascalRow::new();
    for n in 1..=m {
        // row holds C(n-1, .)
        let mut acc = ring.zero();
        for k in 1..=n {
            if ring.is_exact_zero(&a[k]) {
                continue;
            }
            let c = ring.from_biguint(&row.entries()[k - 1]);
            let term = ring.mul(&a[k], &c);
            acc = if k % 2 == 0 {
                ring.add(&acc, &term)
            } else {
                ring.sub(&acc, &term)
            };
        }
        out[n] = acc;
        row.advance();
    }
    out
}

/// The transform as printed in the source definition, with (-1)^n outside the
/// k-sum. Disagrees with the expansion of (z/(z-1))^k; kept only so tests can
/// show it failing the oracle.
pub fn mobius_transform_paper_literal<R: Ring>(ring: &R, a: &[R::Elem]) -> Vec<R::Elem> {
    let m = a.len() - 1;
    let mut out = vec![ring.zero(); m + 1];
    let mut row = PascalRow::new();
    for n in 1..=m {
        let mut acc = ring.zero();
        for k in 1..=n {
            if ring.is_exact_zero(&a[k]) {
                continue;
            }
            let c = ring.from_biguint(&row.entries()[k - 1]);
            acc = ring.add(&acc, &ring.mul(&a[k], &c));
        }
        out[n] = if n % 2 == 0 { acc } else { ring.neg(&acc) };
        row.advance();
    }
    out
}

/// Frobenius-twisted transform: b_{pn} = (mobius a)_n and b_m = 0 when p
/// does not divide m.
pub fn frobenius_mobius_transform<R: Ring>(ring: &R, a: &[R::Elem], p: u64) -> Vec<R::Elem> {
    let m = a.len() - 1;
    let inner = mobius_transform(ring, &a[..=(m / p as usize)]);
    let mut out = vec![ring.zero(); m + 1];
    for (n, v) in inner.into_iter().enumerate() {
        if n == 0 {
            continue;
        }
        out[n * p as usize] = v;
    }
    out
}

/// Constant-aware composite with z/(z-1): the constant term passes through,
/// the tail is transformed.
pub fn apply_mobius_series<R: Ring>(
    ring: &R,
    s: &TruncatedZSeries<R::Elem>,
) -> TruncatedZSeries<R::Elem> {
    let mut coeffs = mobius_transform(ring, s.coeffs());
    coeffs[0] = s.coeff(0).clone();
    TruncatedZSeries { coeffs }
}

/// Constant-aware composite with z^p/(z^p-1).
pub fn apply_frobenius_series<R: Ring>(
    ring: &R,
    s: &TruncatedZSeries<R::Elem>,
    p: u64,
) -> TruncatedZSeries<R::Elem> {
    let mut coeffs = frobenius_mobius_transform(ring, s.coeffs(), p);
    coeffs[0] = s.coeff(0).clone();
    TruncatedZSeries { coeffs }
}

/// sum_{n > 0, p does not divide n} z^n / n, truncated at `order`.
pub fn li1p_series<B: Backend>(backend: &B, p: u64, order: usize) -> TruncatedZSeries<B::Elem> {
    let coeffs = (0..=order)
        .map(|n| {
            if n == 0 || n as u64 % p == 0 {
                backend.zero()
            } else {
                backend.from_rational(&Rational::new(BigInt::from(1), BigInt::from(n)))
            }
        })
        .collect();
    TruncatedZSeries { coeffs }
}

/// s^b / b! for a series with zero constant term.
pub fn series_power_over_factorial<B: Backend>(
    backend: &B,
    s: &TruncatedZSeries<B::Elem>,
    b: u32,
) -> TruncatedZSeries<B::Elem> {
    assert!(
        backend.is_zero(s.coeff(0)),
        "series must have zero constant term"
    );
    let mut acc = TruncatedZSeries::one(backend, s.order());
    for _ in 0..b {
        acc = series_mul(backend, &acc, s);
    }
    let mut factorial = BigInt::from(1);
    for i in 2..=b as i64 {
        factorial *= i;
    }
    let inv = backend
        .inv(&backend.from_bigint(&factorial))
        .expect("factorial is nonzero");
    series_scale(backend, &inv, &acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, rat_int, RationalBackend};
    use num_traits::{One, Zero};

    fn rb() -> RationalBackend {
        RationalBackend
    }

    /// Oracle: expand sum_k a_k (-z)^k (1-z)^{-k} by series multiplication.
    fn mobius_oracle(a: &[Rational]) -> Vec<Rational> {
        let m = a.len() - 1;
        let mut out = vec![Rational::zero(); m + 1];
        // geom[j] = coefficient of z^j in (1-z)^{-1}
        let geom = vec![Rational::one(); m + 1];
        let mut pow = vec![Rational::zero(); m + 1]; // (-z)^k (1-z)^{-k}, k=0 -> 1
        pow[0] = Rational::one();
        for k in 1..=m {
            // multiply by -z
            let mut next = vec![Rational::zero(); m + 1];
            for i in 0..m {
                next[i + 1] = -pow[i].clone();
            }
            // multiply by (1-z)^{-1}
            let mut with_geom = vec![Rational::zero(); m + 1];
            for i in 0..=m {
                if next[i].is_zero() {
                    continue;
                }
                for j in 0..=m - i {
                    with_geom[i + j] += &next[i] * &geom[j];
                }
            }
            pow = with_geom;
            for n in 0..=m {
                out[n] += &a[k] * &pow[n];
            }
        }
        out
    }

    #[test]
    fn mobius_of_z() {
        let mut a = vec![Rational::zero(); 9];
        a[1] = Rational::one();
        let b = mobius_transform(&rb(), &a);
        for n in 1..=8 {
            assert_eq!(b[n], rat_int(-1), "n={n}");
        }
        assert!(b[0].is_zero());
    }

    #[test]
    fn mobius_of_z_squared() {
        let mut a = vec![Rational::zero(); 9];
        a[2] = Rational::one();
        let b = mobius_transform(&rb(), &a);
        assert!(b[1].is_zero());
        for n in 2..=8 {
            assert_eq!(b[n], rat_int(n as i64 - 1), "n={n}");
        }
    }

    #[test]
    fn mobius_of_li1_coefficients() {
        let m = 12;
        let mut a = vec![Rational::zero(); m + 1];
        for (k, item) in a.iter_mut().enumerate().skip(1) {
            *item = rat(1, k as i64);
        }
        let b = mobius_transform(&rb(), &a);
        for n in 1..=m {
            assert_eq!(b[n], rat(-1, n as i64), "n={n}");
        }
    }

    #[test]
    fn mobius_matches_oracle_and_literal_does_not() {
        let a: Vec<Rational> = vec![
            rat_int(0),
            rat_int(1),
            rat(1, 2),
            rat(-2, 3),
            rat_int(4),
            rat(7, 5),
        ];
        let fast = mobius_transform(&rb(), &a);
        let oracle = mobius_oracle(&a);
        assert_eq!(fast, oracle);

        // The printed-form kernel disagrees already on a = (1, 0, 0, ...).
        let mut simple = vec![Rational::zero(); 4];
        simple[1] = Rational::one();
        let literal = mobius_transform_paper_literal(&rb(), &simple);
        let truth = mobius_oracle(&simple);
        assert_ne!(literal, truth);
        assert_eq!(literal[2], rat_int(1));
        assert_eq!(truth[2], rat_int(-1));
    }

    #[test]
    fn mobius_is_involution() {
        let a: Vec<Rational> = vec![
            rat_int(0),
            rat(3, 7),
            rat(-1, 2),
            rat_int(5),
            rat(2, 9),
            rat(-8, 3),
            rat_int(1),
        ];
        let b = mobius_transform(&rb(), &a);
        let back = mobius_transform(&rb(), &b);
        assert_eq!(back, a);
    }

    #[test]
    fn frobenius_examples() {
        let mut a = vec![Rational::zero(); 9];
        a[1] = Rational::one();
        let b = frobenius_mobius_transform(&rb(), &a, 2);
        assert_eq!(b[2], rat_int(-1));
        assert_eq!(b[4], rat_int(-1));
        for n in [1, 3, 5, 7] {
            assert!(b[n].is_zero(), "n={n}");
        }

        let m = 12;
        let mut li1 = vec![Rational::zero(); m + 1];
        for (k, item) in li1.iter_mut().enumerate().skip(1) {
            *item = rat(1, k as i64);
        }
        let b = frobenius_mobius_transform(&rb(), &li1, 3);
        for j in 1..=m / 3 {
            assert_eq!(b[3 * j], rat(-1, j as i64));
        }
        assert!(b[4].is_zero() && b[7].is_zero());
    }

    #[test]
    fn frobenius_aligns_with_plain_transform() {
        let a: Vec<Rational> = (0..=20).map(|k| rat(k as i64, k as i64 + 1)).collect();
        let plain = mobius_transform(&rb(), &a[..=6]);
        let frob = frobenius_mobius_transform(&rb(), &a, 3);
        for n in 1..=6 {
            assert_eq!(frob[3 * n], plain[n]);
        }
        for m in 1..=20 {
            if m % 3 != 0 {
                assert!(frob[m].is_zero());
            }
        }
    }

    #[test]
    fn li1p_values() {
        let s = li1p_series(&rb(), 2, 5);
        let expect = vec![rat_int(0), rat_int(1), rat_int(0), rat(1, 3), rat_int(0), rat(1, 5)];
        assert_eq!(s.coeffs(), &expect[..]);
        let s = li1p_series(&rb(), 3, 9);
        assert!(s.coeff(9).is_zero());
        let s = li1p_series(&rb(), 5, 7);
        assert_eq!(s.coeff(7), &rat(1, 7));
    }

    #[test]
    fn divided_powers() {
        let s = li1p_series(&rb(), 3, 6);
        let b0 = series_power_over_factorial(&rb(), &s, 0);
        assert_eq!(b0.coeff(0), &rat_int(1));
        assert!(b0.coeffs()[1..].iter().all(|c| c.is_zero()));

        let b1 = series_power_over_factorial(&rb(), &s, 1);
        assert_eq!(b1, s);

        // p = 3 excludes the part 3: only (2,2) remains at z^4.
        let b2 = series_power_over_factorial(&rb(), &s, 2);
        assert_eq!(b2.coeff(4), &rat(1, 8));

        // p = 5 admits (1,3), (3,1), (2,2): 1/2 (1/3 + 1/3 + 1/4) = 11/24.
        let s5 = li1p_series(&rb(), 5, 6);
        let b2 = series_power_over_factorial(&rb(), &s5, 2);
        assert_eq!(b2.coeff(4), &rat(11, 24));
    }

    #[test]
    fn divided_powers_sum_to_exponential() {
        // Oracle: Horner-style composition of the truncated exponential.
        let order = 10;
        let s = li1p_series(&rb(), 3, order);
        let mut exp_composed = TruncatedZSeries::zero(&rb(), order);
        let mut factorial = rat_int(1);
        let coeffs: Vec<Rational> = (0..=order as i64)
            .map(|b| {
                if b > 0 {
                    factorial *= rat_int(b);
                }
                rat_int(1) / factorial.clone()
            })
            .collect();
        for b in (0..=order).rev() {
            exp_composed = series_mul(&rb(), &exp_composed, &s);
            let c = TruncatedZSeries::constant(&rb(), coeffs[b].clone(), order);
            exp_composed = series_add(&rb(), &exp_composed, &c);
        }
        let mut summed = TruncatedZSeries::zero(&rb(), order);
        for b in 0..=order as u32 {
            summed = series_add(
                &rb(),
                &summed,
                &series_power_over_factorial(&rb(), &s, b),
            );
        }
        assert_eq!(summed, exp_composed);
    }

    #[test]
    fn series_ring_basics() {
        let one_plus = TruncatedZSeries::from_coeffs(vec![rat_int(1), rat_int(1), rat_int(0)]);
        let one_minus = TruncatedZSeries::from_coeffs(vec![rat_int(1), rat_int(-1), rat_int(0)]);
        let prod = series_mul(&rb(), &one_plus, &one_minus);
        assert_eq!(
            prod.coeffs(),
            &[rat_int(1), rat_int(0), rat_int(-1)][..]
        );

        let s = TruncatedZSeries::from_coeffs(vec![rat(2, 3), rat(1, 7), rat_int(4)]);
        let one = TruncatedZSeries::one(&rb(), 2);
        assert_eq!(series_mul(&rb(), &s, &one), s);

        // telescoping: (sum z^n)(1 - z) = 1 at order 5
        let geo = TruncatedZSeries::from_coeffs(vec![rat_int(1); 6]);
        let lin = {
            let mut c = vec![rat_int(0); 6];
            c[0] = rat_int(1);
            c[1] = rat_int(-1);
            TruncatedZSeries::from_coeffs(c)
        };
        let prod = series_mul(&rb(), &geo, &lin);
        assert_eq!(prod.coeff(0), &rat_int(1));
        assert!(prod.coeffs()[1..].iter().all(|c| c.is_zero()));
    }
}
