//! Exact rationals, fixed-precision p-adic numbers, and binomial coefficients.
//!
//! Every other module computes through one of two interchangeable backends:
//! [`RationalBackend`] (exact, used as the oracle) and [`PadicBackend`]
//! (fixed relative precision with honest valuation/precision tracking).

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;
use thiserror::Error;

/// Arbitrary-precision rational, always in lowest terms with positive denominator.
pub type Rational = BigRational;

/// Shorthand constructor for small rationals.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(n: i64) -> Rational {
    Rational::from(BigInt::from(n))
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArithError {
    #[error("prime mismatch: {0} vs {1}")]
    PrimeMismatch(u64, u64),
    #[error("precision cannot certify invertibility: operand is O({p}^{abs_prec})")]
    UncertifiedInverse { p: u64, abs_prec: i64 },
    #[error("division by exact zero")]
    DivisionByZero,
}

/// p-adic valuation of a nonzero natural number.
pub fn vp_biguint(n: &BigUint, p: u64) -> Option<u64> {
    if n.is_zero() {
        return None;
    }
    let p_big = BigUint::from(p);
    let mut v = 0u64;
    let mut m = n.clone();
    loop {
        let (q, r) = m.div_rem(&p_big);
        if !r.is_zero() {
            return Some(v);
        }
        v += 1;
        m = q;
    }
}

pub fn vp_bigint(n: &BigInt, p: u64) -> Option<u64> {
    vp_biguint(n.magnitude(), p)
}

/// p-adic valuation of a nonzero rational.
pub fn vp_rational(x: &Rational, p: u64) -> Option<i64> {
    let num = vp_bigint(x.numer(), p)?;
    let den = vp_bigint(x.denom(), p).expect("denominator is nonzero");
    Some(num as i64 - den as i64)
}

/// Exact binomial coefficient C(m, k); zero outside 0 <= k <= m.
pub fn binomial(m: u64, k: i64) -> BigUint {
    if k < 0 || k as u64 > m {
        return BigUint::zero();
    }
    let k = (k as u64).min(m - k as u64);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(m - i) / BigUint::from(i + 1);
    }
    acc
}

/// Coefficient of X^k in (1+X)^{-n}, i.e. (-1)^k C(n+k-1, k). Requires n >= 1.
pub fn binomial_negative(n: u64, k: u64) -> BigInt {
    assert!(n >= 1, "binomial_negative requires n >= 1");
    let mag = BigInt::from(binomial(n + k - 1, k as i64));
    if k % 2 == 0 {
        mag
    } else {
        -mag
    }
}

/// Rolling Pascal row: after `advance` is called t times, `entries[j] = C(t, j)`.
pub struct PascalRow {
    top: u64,
    entries: Vec<BigUint>,
}

impl PascalRow {
    pub fn new() -> Self {
        PascalRow {
            top: 0,
            entries: vec![BigUint::one()],
        }
    }

    pub fn top(&self) -> u64 {
        self.top
    }

    pub fn entries(&self) -> &[BigUint] {
        &self.entries
    }

    pub fn advance(&mut self) {
        let mut next = Vec::with_capacity(self.entries.len() + 1);
        next.push(BigUint::one());
        for j in 1..self.entries.len() {
            next.push(&self.entries[j - 1] + &self.entries[j]);
        }
        next.push(BigUint::one());
        self.top += 1;
        self.entries = next;
    }
}

impl Default for PascalRow {
    fn default() -> Self {
        Self::new()
    }
}

/// All weak compositions of `total` into `parts` nonnegative parts, lexicographic.
pub fn compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    if parts == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    let mut cur = vec![0u32; parts];
    fn go(total: u32, pos: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if pos + 1 == cur.len() {
            cur[pos] = total;
            out.push(cur.clone());
            return;
        }
        for first in 0..=total {
            cur[pos] = first;
            go(total - first, pos + 1, cur, out);
        }
    }
    go(total, 0, &mut cur, &mut out);
    out
}

/// Placeholder precision for an exact zero; large enough to dominate any
/// tracked precision while staying safe under saturating arithmetic.
const EXACT_ZERO_PREC: i64 = i64::MAX / 4;

#[derive(Clone, Debug)]
enum Repr {
    /// Indistinguishable from zero at precision `abs`: the value is O(p^abs).
    Zero { abs: i64 },
    /// p^val * unit with unit coprime to p, known modulo p^rel.
    Unit { val: i64, unit: BigUint, rel: u32 },
}

/// A p-adic number with explicit precision tracking.
///
/// Nonzero values carry a valuation and a unit known modulo p^rel; values
/// that cannot be distinguished from zero carry the absolute precision at
/// which the cancellation was observed. Two values compare equal iff they
/// agree modulo p^(min of their absolute precisions).
#[derive(Clone, Debug)]
pub struct Padic {
    p: u64,
    repr: Repr,
}

impl Padic {
    pub fn zero(p: u64, abs_prec: i64) -> Self {
        Padic {
            p,
            repr: Repr::Zero { abs: abs_prec },
        }
    }

    pub fn exact_zero(p: u64) -> Self {
        Self::zero(p, EXACT_ZERO_PREC)
    }

    /// Build p^val * unit known mod p^rel. The unit need not be reduced or
    /// coprime; factors of p are folded into the valuation.
    pub fn from_unit(p: u64, val: i64, unit: BigUint, rel: u32) -> Self {
        let modulus = BigUint::from(p).pow(rel);
        let u = unit % &modulus;
        if u.is_zero() {
            return Padic::zero(p, val + rel as i64);
        }
        let t = vp_biguint(&u, p).expect("nonzero");
        if t >= rel as u64 {
            return Padic::zero(p, val + rel as i64);
        }
        let u = u / BigUint::from(p).pow(t as u32);
        let rel_left = rel - t as u32;
        Padic {
            p,
            repr: Repr::Unit {
                val: val + t as i64,
                unit: u % BigUint::from(p).pow(rel_left),
                rel: rel_left,
            },
        }
    }

    /// Image of a rational in Q_p with absolute precision >= abs_prec.
    pub fn from_rational_abs(p: u64, x: &Rational, abs_prec: i64) -> Self {
        match vp_rational(x, p) {
            None => Padic::zero(p, abs_prec),
            Some(v) => {
                let rel = (abs_prec - v).max(1) as u32;
                Self::from_rational_parts(p, x, v, rel)
            }
        }
    }

    /// Image of a nonzero rational at fixed relative precision.
    pub fn from_rational_rel(p: u64, x: &Rational, rel: u32) -> Self {
        match vp_rational(x, p) {
            None => Padic::exact_zero(p),
            Some(v) => Self::from_rational_parts(p, x, v, rel),
        }
    }

    fn from_rational_parts(p: u64, x: &Rational, v: i64, rel: u32) -> Self {
        let p_big = BigInt::from(p);
        let vn = vp_bigint(x.numer(), p).expect("nonzero numerator");
        let vd = vp_bigint(x.denom(), p).expect("nonzero denominator");
        let num_unit = x.numer() / p_big.pow(vn as u32);
        let den_unit = x.denom() / p_big.pow(vd as u32);
        let modulus = BigUint::from(p).pow(rel);
        let nu = mod_reduce(&num_unit, &modulus);
        let du = mod_reduce(&den_unit, &modulus);
        let unit = nu * mod_inverse(&du, &modulus, p) % &modulus;
        debug_assert!(!unit.is_zero());
        Padic {
            p,
            repr: Repr::Unit { val: v, unit, rel },
        }
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn is_zero_flagged(&self) -> bool {
        matches!(self.repr, Repr::Zero { .. })
    }

    /// Valuation; `None` when the value is indistinguishable from zero.
    pub fn valuation(&self) -> Option<i64> {
        match &self.repr {
            Repr::Zero { .. } => None,
            Repr::Unit { val, .. } => Some(*val),
        }
    }

    pub fn abs_precision(&self) -> i64 {
        match &self.repr {
            Repr::Zero { abs } => *abs,
            Repr::Unit { val, rel, .. } => val + *rel as i64,
        }
    }

    pub fn rel_precision(&self) -> Option<u32> {
        match &self.repr {
            Repr::Zero { .. } => None,
            Repr::Unit { rel, .. } => Some(*rel),
        }
    }

    /// Little-endian base-p digits of the unit part (empty for zero).
    pub fn unit_digits(&self) -> Vec<u64> {
        match &self.repr {
            Repr::Zero { .. } => vec![],
            Repr::Unit { unit, rel, .. } => {
                let mut digits = Vec::with_capacity(*rel as usize);
                let p_big = BigUint::from(self.p);
                let mut u = unit.clone();
                for _ in 0..*rel {
                    let (q, r) = u.div_rem(&p_big);
                    digits.push(r.to_u64().expect("digit fits"));
                    u = q;
                }
                digits
            }
        }
    }

    /// Multiply by p^k exactly.
    pub fn shift(&self, k: i64) -> Self {
        let repr = match &self.repr {
            Repr::Zero { abs } => Repr::Zero {
                abs: abs.saturating_add(k),
            },
            Repr::Unit { val, unit, rel } => Repr::Unit {
                val: val + k,
                unit: unit.clone(),
                rel: *rel,
            },
        };
        Padic { p: self.p, repr }
    }

    /// Forget digits beyond absolute precision `c`.
    pub fn truncate_abs(&self, c: i64) -> Self {
        match &self.repr {
            Repr::Zero { abs } => Padic::zero(self.p, (*abs).min(c)),
            Repr::Unit { val, unit, rel } => {
                if *val >= c {
                    Padic::zero(self.p, c)
                } else {
                    let new_rel = ((c - val) as u32).min(*rel);
                    Padic::from_unit(self.p, *val, unit.clone(), new_rel)
                }
            }
        }
    }

    pub fn neg(&self) -> Self {
        let repr = match &self.repr {
            Repr::Zero { abs } => Repr::Zero { abs: *abs },
            Repr::Unit { val, unit, rel } => {
                let modulus = BigUint::from(self.p).pow(*rel);
                Repr::Unit {
                    val: *val,
                    unit: &modulus - unit,
                    rel: *rel,
                }
            }
        };
        Padic { p: self.p, repr }
    }

    pub fn add(&self, other: &Padic) -> Padic {
        assert_eq!(self.p, other.p, "prime mismatch in p-adic addition");
        let p = self.p;
        match (&self.repr, &other.repr) {
            (Repr::Zero { abs: a }, Repr::Zero { abs: b }) => Padic::zero(p, (*a).min(*b)),
            (Repr::Zero { abs }, Repr::Unit { val, unit, rel })
            | (Repr::Unit { val, unit, rel }, Repr::Zero { abs }) => {
                let a = (*abs).min(val + *rel as i64);
                if *val >= a {
                    Padic::zero(p, a)
                } else {
                    Padic::from_unit(p, *val, unit.clone(), (a - val) as u32)
                }
            }
            (
                Repr::Unit {
                    val: v1,
                    unit: u1,
                    rel: r1,
                },
                Repr::Unit {
                    val: v2,
                    unit: u2,
                    rel: r2,
                },
            ) => {
                let a = (v1 + *r1 as i64).min(v2 + *r2 as i64);
                let v = (*v1).min(*v2);
                if v >= a {
                    return Padic::zero(p, a);
                }
                let window = (a - v) as u32;
                let modulus = BigUint::from(p).pow(window);
                let lift = |vi: i64, ui: &BigUint| -> BigUint {
                    let sh = (vi - v) as u32;
                    if sh as i64 >= window as i64 {
                        BigUint::zero()
                    } else {
                        ui * BigUint::from(p).pow(sh) % &modulus
                    }
                };
                let s = (lift(*v1, u1) + lift(*v2, u2)) % &modulus;
                Padic::from_unit(p, v, s, window)
            }
        }
    }

    pub fn sub(&self, other: &Padic) -> Padic {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Padic) -> Padic {
        assert_eq!(self.p, other.p, "prime mismatch in p-adic multiplication");
        let p = self.p;
        match (&self.repr, &other.repr) {
            (Repr::Zero { abs: a }, Repr::Zero { abs: b }) => {
                Padic::zero(p, a.saturating_add(*b).min(EXACT_ZERO_PREC))
            }
            (Repr::Zero { abs }, Repr::Unit { val, .. })
            | (Repr::Unit { val, .. }, Repr::Zero { abs }) => {
                Padic::zero(p, abs.saturating_add(*val).min(EXACT_ZERO_PREC))
            }
            (
                Repr::Unit {
                    val: v1,
                    unit: u1,
                    rel: r1,
                },
                Repr::Unit {
                    val: v2,
                    unit: u2,
                    rel: r2,
                },
            ) => {
                let rel = (*r1).min(*r2);
                let modulus = BigUint::from(p).pow(rel);
                Padic {
                    p,
                    repr: Repr::Unit {
                        val: v1 + v2,
                        unit: u1 * u2 % modulus,
                        rel,
                    },
                }
            }
        }
    }

    pub fn inv(&self) -> Result<Padic, ArithError> {
        match &self.repr {
            Repr::Zero { abs } => Err(ArithError::UncertifiedInverse {
                p: self.p,
                abs_prec: *abs,
            }),
            Repr::Unit { val, unit, rel } => {
                let modulus = BigUint::from(self.p).pow(*rel);
                Ok(Padic {
                    p: self.p,
                    repr: Repr::Unit {
                        val: -val,
                        unit: mod_inverse(unit, &modulus, self.p),
                        rel: *rel,
                    },
                })
            }
        }
    }

    /// Largest precision at which the two values agree: min(abs precisions,
    /// valuation of the difference).
    pub fn agreement(&self, other: &Padic) -> i64 {
        assert_eq!(self.p, other.p);
        let diff = self.sub(other);
        match diff.valuation() {
            None => diff.abs_precision(),
            Some(v) => v.min(diff.abs_precision()),
        }
    }

    /// True when the value is 0 modulo p^c (certifiable at precision c).
    pub fn vanishes_to(&self, c: i64) -> bool {
        if self.abs_precision() < c {
            return false;
        }
        match self.valuation() {
            None => true,
            Some(v) => v >= c,
        }
    }

    /// True only for a zero known exactly, not merely within precision.
    pub fn is_exact_zero(&self) -> bool {
        matches!(self.repr, Repr::Zero { abs } if abs >= EXACT_ZERO_PREC)
    }
}

impl PartialEq for Padic {
    fn eq(&self, other: &Self) -> bool {
        if self.p != other.p {
            return false;
        }
        let a = self.abs_precision().min(other.abs_precision());
        if a <= 0 {
            return true;
        }
        // Compare in a common window anchored at the lower valuation.
        let anchor = match (self.valuation(), other.valuation()) {
            (Some(v1), Some(v2)) => v1.min(v2).min(0),
            (Some(v), None) | (None, Some(v)) => v.min(0),
            (None, None) => return true,
        };
        let width = (a - anchor) as u32;
        let modulus = BigUint::from(self.p).pow(width);
        let lift = |x: &Padic| -> BigUint {
            match &x.repr {
                Repr::Zero { .. } => BigUint::zero(),
                Repr::Unit { val, unit, .. } => {
                    if *val >= a {
                        BigUint::zero()
                    } else {
                        unit * BigUint::from(x.p).pow((val - anchor) as u32) % &modulus
                    }
                }
            }
        };
        lift(self) == lift(other)
    }
}

impl fmt::Display for Padic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Zero { abs } => {
                if *abs >= EXACT_ZERO_PREC {
                    write!(f, "0 (exact, p={})", self.p)
                } else {
                    write!(f, "O({}^{})", self.p, abs)
                }
            }
            Repr::Unit { val, rel, .. } => {
                let digits = self.unit_digits();
                let strs: Vec<String> = digits.iter().map(|d| d.to_string()).collect();
                write!(
                    f,
                    "{}^{} * [{}] + O({}^{})",
                    self.p,
                    val,
                    strs.join(","),
                    self.p,
                    val + *rel as i64
                )
            }
        }
    }
}

fn mod_reduce(x: &BigInt, modulus: &BigUint) -> BigUint {
    let m = BigInt::from(modulus.clone());
    let mut r = x % &m;
    if r.is_negative() {
        r += &m;
    }
    r.to_biguint().expect("nonnegative")
}

/// Inverse of `u` modulo p^rel for `u` coprime to p.
fn mod_inverse(u: &BigUint, modulus: &BigUint, p: u64) -> BigUint {
    debug_assert!(vp_biguint(u, p).map(|v| v == 0).unwrap_or(false));
    let a = BigInt::from(u.clone());
    let m = BigInt::from(modulus.clone());
    let ext = a.extended_gcd(&m);
    debug_assert!(ext.gcd.is_one(), "unit must be invertible");
    mod_reduce(&ext.x, modulus)
}

/// Commutative-ring interface shared by the two coefficient backends and the
/// truncated-series ring built on top of them.
pub trait Ring {
    type Elem: Clone + PartialEq + fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn from_rational(&self, x: &Rational) -> Self::Elem;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn from_int(&self, n: i64) -> Self::Elem {
        self.from_rational(&rat_int(n))
    }

    fn from_bigint(&self, n: &BigInt) -> Self::Elem {
        self.from_rational(&Rational::from(n.clone()))
    }

    fn from_biguint(&self, n: &BigUint) -> Self::Elem {
        self.from_bigint(&BigInt::from(n.clone()))
    }

    /// A zero known exactly, as opposed to a value that merely cannot be
    /// distinguished from zero at the working precision.
    fn is_exact_zero(&self, a: &Self::Elem) -> bool {
        self.is_zero(a)
    }
}

/// A ring whose nonzero scalars are invertible.
pub trait Backend: Ring + Clone {
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem, ArithError>;

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem, ArithError> {
        Ok(self.mul(a, &self.inv(b)?))
    }
}

/// Exact rational arithmetic (oracle mode).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RationalBackend;

impl Ring for RationalBackend {
    type Elem = Rational;

    fn zero(&self) -> Rational {
        Rational::zero()
    }
    fn one(&self) -> Rational {
        Rational::one()
    }
    fn is_zero(&self, a: &Rational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &Rational, b: &Rational) -> Rational {
        a + b
    }
    fn neg(&self, a: &Rational) -> Rational {
        -a
    }
    fn mul(&self, a: &Rational, b: &Rational) -> Rational {
        a * b
    }
    fn from_rational(&self, x: &Rational) -> Rational {
        x.clone()
    }
}

impl Backend for RationalBackend {
    fn inv(&self, a: &Rational) -> Result<Rational, ArithError> {
        if a.is_zero() {
            Err(ArithError::DivisionByZero)
        } else {
            Ok(a.recip())
        }
    }
}

/// p-adic arithmetic at a fixed working relative precision (production mode).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PadicBackend {
    pub p: u64,
    pub rel_prec: u32,
}

impl PadicBackend {
    pub fn new(p: u64, rel_prec: u32) -> Self {
        assert!(rel_prec >= 1);
        PadicBackend { p, rel_prec }
    }
}

impl Ring for PadicBackend {
    type Elem = Padic;

    fn zero(&self) -> Padic {
        Padic::exact_zero(self.p)
    }
    fn one(&self) -> Padic {
        Padic::from_unit(self.p, 0, BigUint::one(), self.rel_prec)
    }
    fn is_zero(&self, a: &Padic) -> bool {
        a.is_zero_flagged()
    }
    fn add(&self, a: &Padic, b: &Padic) -> Padic {
        a.add(b)
    }
    fn neg(&self, a: &Padic) -> Padic {
        a.neg()
    }
    fn mul(&self, a: &Padic, b: &Padic) -> Padic {
        a.mul(b)
    }
    fn from_rational(&self, x: &Rational) -> Padic {
        Padic::from_rational_rel(self.p, x, self.rel_prec)
    }
    fn is_exact_zero(&self, a: &Padic) -> bool {
        a.is_exact_zero()
    }
}

impl Backend for PadicBackend {
    fn inv(&self, a: &Padic) -> Result<Padic, ArithError> {
        a.inv()
    }
}

/// Trial-division primality check, adequate for the small primes in play.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_basics() {
        assert_eq!(binomial(4, 2), BigUint::from(6u32));
        assert_eq!(binomial(0, 0), BigUint::one());
        assert_eq!(binomial(6, 7), BigUint::zero());
        assert_eq!(binomial(6, -1), BigUint::zero());
    }

    #[test]
    fn pascal_identity_up_to_50() {
        for m in 1u64..=50 {
            for k in 0..=m as i64 {
                assert_eq!(
                    binomial(m, k),
                    binomial(m - 1, k - 1) + binomial(m - 1, k),
                    "C({m},{k})"
                );
            }
        }
    }

    #[test]
    fn binomial_negative_values() {
        assert_eq!(binomial_negative(2, 3), BigInt::from(-4));
        assert_eq!(binomial_negative(7, 0), BigInt::one());
        assert_eq!(binomial_negative(1, 5), BigInt::from(-1));
    }

    #[test]
    fn binomial_negative_matches_series_expansion() {
        // Oracle: repeated multiplication by the expansion of (1+X)^{-1}.
        for n in 1u64..=6 {
            let order = 12usize;
            let geom: Vec<BigInt> = (0..=order)
                .map(|k| if k % 2 == 0 { BigInt::one() } else { -BigInt::one() })
                .collect();
            let mut series = vec![BigInt::zero(); order + 1];
            series[0] = BigInt::one();
            for _ in 0..n {
                let mut next = vec![BigInt::zero(); order + 1];
                for i in 0..=order {
                    for j in 0..=order - i {
                        next[i + j] += &series[i] * &geom[j];
                    }
                }
                series = next;
            }
            for k in 0..=order as u64 {
                assert_eq!(series[k as usize], binomial_negative(n, k), "n={n} k={k}");
            }
        }
    }

    #[test]
    fn from_rational_examples() {
        // 1/2 in Q_3 at absolute precision 4: unit is the inverse of 2 mod 81.
        let x = Padic::from_rational_abs(3, &rat(1, 2), 4);
        assert_eq!(x.valuation(), Some(0));
        let digits = x.unit_digits();
        let unit: u64 = digits
            .iter()
            .enumerate()
            .map(|(i, d)| d * 3u64.pow(i as u32))
            .sum();
        assert_eq!(unit, 41);

        let y = Padic::from_rational_abs(3, &rat(1, 3), 4);
        assert_eq!(y.valuation(), Some(-1));
        assert_eq!(y.unit_digits()[0], 1);

        let z = Padic::from_rational_abs(5, &rat(0, 1), 6);
        assert!(z.is_zero_flagged());
        assert_eq!(z.abs_precision(), 6);
    }

    #[test]
    fn precision_rules() {
        // abs precisions 5 and 3 -> sum known mod p^3
        let x = Padic::from_rational_abs(3, &rat(7, 1), 5);
        let y = Padic::from_rational_abs(3, &rat(4, 1), 3);
        assert_eq!(x.add(&y).abs_precision(), 3);

        // v(x) = 2, v(y) = -1 -> v(xy) = 1
        let x = Padic::from_rational_abs(5, &rat(25, 1), 8);
        let y = Padic::from_rational_abs(5, &rat(2, 5), 8);
        assert_eq!(x.mul(&y).valuation(), Some(1));
    }

    #[test]
    fn inversion_round_trip() {
        let b = PadicBackend::new(3, 4);
        let two = b.from_rational(&rat(2, 1));
        let half = b.from_rational(&rat(1, 2));
        assert_eq!(b.inv(&two).unwrap(), half);
        assert_eq!(b.mul(&two, &half), b.one());
    }

    #[test]
    fn inversion_of_uncertified_zero_fails() {
        let z = Padic::zero(5, 4);
        assert!(matches!(
            z.inv(),
            Err(ArithError::UncertifiedInverse { p: 5, abs_prec: 4 })
        ));
    }

    #[test]
    fn cancellation_produces_zero_flag() {
        let b = PadicBackend::new(5, 6);
        let x = b.from_rational(&rat(7, 3));
        let s = b.sub(&x, &x);
        assert!(s.is_zero_flagged());
        assert_eq!(s.abs_precision(), 6);
        // Partial cancellation raises the valuation and shrinks rel precision.
        let y = b.add(&b.from_rational(&rat(2, 1)), &b.from_rational(&rat(3, 1)));
        assert_eq!(y.valuation(), Some(1));
        assert_eq!(y.rel_precision(), Some(5));
    }

    #[test]
    fn equality_is_modulo_min_precision() {
        let x = Padic::from_rational_abs(5, &rat(2, 1), 6);
        let y = Padic::from_rational_abs(5, &rat(2 + 5 * 5 * 5, 1), 3);
        assert_eq!(x, y);
        let z = Padic::from_rational_abs(5, &rat(3, 1), 3);
        assert_ne!(x, z);
        // A zero-flagged value equals anything divisible enough.
        let o = Padic::zero(5, 4);
        let w = Padic::from_rational_abs(5, &rat(625, 1), 8);
        assert_eq!(o, w);
    }

    #[test]
    fn negative_valuation_equality() {
        let x = Padic::from_rational_abs(3, &rat(1, 3), 4);
        let y = Padic::from_rational_abs(3, &rat(1, 3), 6);
        assert_eq!(x, y);
        let z = Padic::from_rational_abs(3, &rat(2, 3), 6);
        assert_ne!(x, z);
    }

    #[test]
    fn compositions_enumeration() {
        assert_eq!(compositions(0, 0), vec![Vec::<u32>::new()]);
        assert_eq!(compositions(2, 0), Vec::<Vec<u32>>::new());
        let c = compositions(2, 2);
        assert_eq!(c, vec![vec![0, 2], vec![1, 1], vec![2, 0]]);
        assert_eq!(compositions(4, 3).len(), 15);
    }

    #[test]
    fn primality() {
        assert!(is_prime(2) && is_prime(3) && is_prime(5) && is_prime(7) && is_prime(61));
        assert!(!is_prime(1) && !is_prime(4) && !is_prime(57));
    }
}
