//! Truncated noncommutative formal series: words of bounded weight mapped to
//! coefficients in a commutative ring. Carries the concatenation product,
//! the antipode inverse for group-like series, the shuffle-equation check,
//! the substitution A(e0, B) evaluated through e1-segment decompositions,
//! and the three-factor triangle product used as a cross-module oracle.

use crate::arith::{Backend, Rational, Ring};
use crate::words::{
    contract, enumerate_e1_segments, shuffle, Letter, Word, WordError,
};
use crate::zseries::{
    apply_frobenius_series, apply_mobius_series, series_mul, series_scale,
    series_power_over_factorial, TruncatedZSeries,
};
use num_bigint::BigInt;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NcError {
    #[error("not invertible as group-like: constant coefficient differs from 1")]
    NotGrouplike,
    #[error("substitution precondition violated: {0}")]
    SubstitutionPrecondition(String),
    #[error("weight caps differ: {0} vs {1}")]
    CapMismatch(usize, usize),
    #[error("triangle product precondition violated: {0}")]
    TrianglePrecondition(String),
    #[error(transparent)]
    Word(#[from] WordError),
}

/// Association word -> coefficient for all words of weight <= cap; missing
/// entries mean zero. Products truncate silently at the cap.
#[derive(Clone, Debug, PartialEq)]
pub struct NcSeries<T> {
    cap: usize,
    coeffs: BTreeMap<Word, T>,
}

impl<T: Clone + PartialEq + std::fmt::Debug> NcSeries<T> {
    pub fn new(cap: usize) -> Self {
        NcSeries {
            cap,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn one<R: Ring<Elem = T>>(ring: &R, cap: usize) -> Self {
        let mut s = Self::new(cap);
        s.set(Word::empty(), ring.one());
        s
    }

    /// The single letter e1 as a series.
    pub fn e1<R: Ring<Elem = T>>(ring: &R, cap: usize) -> Self {
        let mut s = Self::new(cap);
        s.set(Word::e1(), ring.one());
        s
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn set(&mut self, w: Word, c: T) {
        assert!(w.weight() <= self.cap, "word exceeds weight cap");
        self.coeffs.insert(w, c);
    }

    pub fn coefficient<R: Ring<Elem = T>>(&self, ring: &R, w: &Word) -> T {
        self.coeffs.get(w).cloned().unwrap_or_else(|| ring.zero())
    }

    pub fn support(&self) -> impl Iterator<Item = (&Word, &T)> {
        self.coeffs.iter()
    }

    pub fn map_coeffs<U: Clone + PartialEq + std::fmt::Debug>(
        &self,
        mut f: impl FnMut(&Word, &T) -> U,
    ) -> NcSeries<U> {
        NcSeries {
            cap: self.cap,
            coeffs: self
                .coeffs
                .iter()
                .map(|(w, c)| (w.clone(), f(w, c)))
                .collect(),
        }
    }
}

/// Concatenation product: (PQ)_w = sum over factorizations w = uv of P_u Q_v.
pub fn nc_mul<R: Ring>(
    ring: &R,
    a: &NcSeries<R::Elem>,
    b: &NcSeries<R::Elem>,
) -> NcSeries<R::Elem> {
    let cap = a.cap.min(b.cap);
    let mut out: BTreeMap<Word, R::Elem> = BTreeMap::new();
    for (u, cu) in a.support() {
        if ring.is_exact_zero(cu) {
            continue;
        }
        for (v, cv) in b.support() {
            if u.weight() + v.weight() > cap {
                continue;
            }
            if ring.is_exact_zero(cv) {
                continue;
            }
            let w = u.concat(v);
            let term = ring.mul(cu, cv);
            match out.get_mut(&w) {
                Some(acc) => *acc = ring.add(acc, &term),
                None => {
                    out.insert(w, term);
                }
            }
        }
    }
    out.retain(|_, c| !ring.is_exact_zero(c));
    NcSeries { cap, coeffs: out }
}

pub fn nc_add<R: Ring>(
    ring: &R,
    a: &NcSeries<R::Elem>,
    b: &NcSeries<R::Elem>,
) -> NcSeries<R::Elem> {
    let cap = a.cap.min(b.cap);
    let mut out = a.coeffs.clone();
    out.retain(|w, _| w.weight() <= cap);
    for (w, c) in b.support() {
        if w.weight() > cap {
            continue;
        }
        match out.get_mut(w) {
            Some(acc) => *acc = ring.add(acc, c),
            None => {
                out.insert(w.clone(), c.clone());
            }
        }
    }
    out.retain(|_, c| !ring.is_exact_zero(c));
    NcSeries { cap, coeffs: out }
}

/// Inverse of a group-like series by coefficient transport through the
/// antipode: P^{-1}_w = (-1)^{wt(w)} P_{w^rev}.
pub fn grouplike_inverse<R: Ring>(
    ring: &R,
    p: &NcSeries<R::Elem>,
) -> Result<NcSeries<R::Elem>, NcError> {
    if p.coefficient(ring, &Word::empty()) != ring.one() {
        return Err(NcError::NotGrouplike);
    }
    let mut out = NcSeries::new(p.cap);
    for (w, c) in p.support() {
        let signed = if w.weight() % 2 == 0 {
            c.clone()
        } else {
            ring.neg(c)
        };
        out.set(w.reverse(), signed);
    }
    Ok(out)
}

/// Check the shuffle equation P_{u sh v} = P_u P_v for all nonempty pairs
/// with wt(u) + wt(v) <= cap (plus the unit coefficient). Returns the first
/// violating pair in graded-lex order.
pub fn is_grouplike<R: Ring>(ring: &R, p: &NcSeries<R::Elem>) -> Result<(), (Word, Word)> {
    if p.coefficient(ring, &Word::empty()) != ring.one() {
        return Err((Word::empty(), Word::empty()));
    }
    let words = Word::all_up_to_weight(p.cap);
    for u in words.iter().filter(|w| !w.is_empty()) {
        for v in words.iter().filter(|w| !w.is_empty()) {
            if u.weight() + v.weight() > p.cap {
                continue;
            }
            if v < u {
                continue; // shuffle is symmetric
            }
            let sh = shuffle(u, v);
            let mut lhs = ring.zero();
            for (w, c) in sh.terms() {
                let term = ring.mul(&ring.from_rational(c), &p.coefficient(ring, w));
                lhs = ring.add(&lhs, &term);
            }
            let rhs = ring.mul(&p.coefficient(ring, u), &p.coefficient(ring, v));
            if lhs != rhs {
                return Err((u.clone(), v.clone()));
            }
        }
    }
    Ok(())
}

/// Primitivity check: the coefficients of B vanish on all shuffle products
/// of nonempty pairs within the cap.
pub fn is_primitive<R: Ring>(ring: &R, b: &NcSeries<R::Elem>) -> Result<(), (Word, Word)> {
    let words = Word::all_up_to_weight(b.cap);
    for u in words.iter().filter(|w| !w.is_empty()) {
        for v in words.iter().filter(|w| !w.is_empty()) {
            if u.weight() + v.weight() > b.cap || v < u {
                continue;
            }
            let sh = shuffle(u, v);
            let mut lhs = ring.zero();
            for (w, c) in sh.terms() {
                lhs = ring.add(&lhs, &ring.mul(&ring.from_rational(c), &b.coefficient(ring, w)));
            }
            if !ring.is_zero(&lhs) {
                return Err((u.clone(), v.clone()));
            }
        }
    }
    Ok(())
}

fn check_substitution_pre<R: Ring>(
    ring: &R,
    a: &NcSeries<R::Elem>,
    b: &NcSeries<R::Elem>,
) -> Result<(), NcError> {
    for n in 1..=a.cap {
        if !ring.is_zero(&a.coefficient(ring, &Word::e0_power(n))) {
            return Err(NcError::SubstitutionPrecondition(format!(
                "A has nonzero coefficient at e0^{n}"
            )));
        }
    }
    for n in 0..=b.cap {
        if !ring.is_zero(&b.coefficient(ring, &Word::e0_power(n))) {
            return Err(NcError::SubstitutionPrecondition(format!(
                "B has nonzero coefficient at e0^{n}"
            )));
        }
    }
    Ok(())
}

/// A(e0, B) computed by the segment-sum formula:
/// coefficient at w = sum over e1-segment decompositions (w_k) of w of
/// (prod_k B_{w_k}) * A_{w / (w_k)}.
pub fn substitute<R: Ring>(
    ring: &R,
    a: &NcSeries<R::Elem>,
    b: &NcSeries<R::Elem>,
) -> Result<NcSeries<R::Elem>, NcError> {
    check_substitution_pre(ring, a, b)?;
    let cap = a.cap.min(b.cap);
    let mut out = NcSeries::new(cap);
    out.set(Word::empty(), a.coefficient(ring, &Word::empty()));
    for w in Word::all_up_to_weight(cap) {
        if w.depth() == 0 {
            continue; // empty handled above, e0^n coefficients vanish
        }
        let mut acc = ring.zero();
        for dec in enumerate_e1_segments(&w) {
            let mut prod = ring.one();
            let mut dead = false;
            for seg in dec.segment_words(&w) {
                let c = b.coefficient(ring, &seg);
                if ring.is_exact_zero(&c) {
                    dead = true;
                    break;
                }
                prod = ring.mul(&prod, &c);
            }
            if dead {
                continue;
            }
            let contraction = contract(&w, &dec)?;
            let ac = a.coefficient(ring, &contraction);
            if ring.is_exact_zero(&ac) {
                continue;
            }
            acc = ring.add(&acc, &ring.mul(&prod, &ac));
        }
        if !ring.is_exact_zero(&acc) {
            out.set(w, acc);
        }
    }
    Ok(out)
}

/// Direct-expansion oracle for [`substitute`]: replace each e1 letter of
/// every supporting word by the series B and multiply out. Exponential in
/// the weight; test use only.
pub fn substitute_direct<R: Ring>(
    ring: &R,
    a: &NcSeries<R::Elem>,
    b: &NcSeries<R::Elem>,
) -> Result<NcSeries<R::Elem>, NcError> {
    check_substitution_pre(ring, a, b)?;
    let cap = a.cap.min(b.cap);
    let mut out = NcSeries::new(cap);
    let e0_single = {
        let mut s = NcSeries::new(cap);
        s.set(Word::e0_power(1), ring.one());
        s
    };
    for (v, cv) in a.support() {
        if ring.is_exact_zero(cv) {
            continue;
        }
        let mut prod = NcSeries::one(ring, cap);
        for &l in v.letters() {
            prod = match l {
                Letter::E0 => nc_mul(ring, &prod, &e0_single),
                Letter::E1 => nc_mul(ring, &prod, b),
            };
        }
        let mut scaled = NcSeries::new(cap);
        for (w, c) in prod.support() {
            scaled.set(w.clone(), ring.mul(cv, c));
        }
        out = nc_add(ring, &out, &scaled);
    }
    Ok(out)
}

/// Coefficient ring of truncated z-series over a backend.
pub struct SeriesRing<'a, B: Backend> {
    pub base: &'a B,
    pub order: usize,
}

impl<'a, B: Backend> SeriesRing<'a, B> {
    pub fn new(base: &'a B, order: usize) -> Self {
        SeriesRing { base, order }
    }
}

impl<'a, B: Backend> Ring for SeriesRing<'a, B> {
    type Elem = TruncatedZSeries<B::Elem>;

    fn zero(&self) -> Self::Elem {
        TruncatedZSeries::zero(self.base, self.order)
    }
    fn one(&self) -> Self::Elem {
        TruncatedZSeries::one(self.base, self.order)
    }
    fn is_zero(&self, a: &Self::Elem) -> bool {
        a.is_zero(self.base)
    }
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        crate::zseries::series_add(self.base, a, b)
    }
    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        crate::zseries::series_neg(self.base, a)
    }
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        series_mul(self.base, a, b)
    }
    fn from_rational(&self, x: &Rational) -> Self::Elem {
        TruncatedZSeries::constant(self.base, self.base.from_rational(x), self.order)
    }
    fn is_exact_zero(&self, a: &Self::Elem) -> bool {
        a.coeffs().iter().all(|c| self.base.is_exact_zero(c))
    }
}

/// The three-factor product
///   L(e0,e1)(z/(z-1)) * exp(L1(z) e0) * L(e0/p, P^{-1}e1P/p)(z^p/(z^p-1))^{-1},
/// with the z-arguments realized by the two coefficient transforms and the
/// inverse taken through the antipode before substitution.
///
/// Preconditions: L has unit constant coefficient, vanishes on e0^n (n >= 1),
/// and is group-like over the series ring; L1 has zero constant term; P is
/// group-like (only its unit coefficient is checked here).
pub fn triangle_op<B: Backend>(
    backend: &B,
    p: u64,
    big_p: &NcSeries<B::Elem>,
    l: &NcSeries<TruncatedZSeries<B::Elem>>,
    l1: &TruncatedZSeries<B::Elem>,
) -> Result<NcSeries<TruncatedZSeries<B::Elem>>, NcError> {
    let order = l1.order();
    let sring = SeriesRing::new(backend, order);
    let cap = l.cap().min(big_p.cap());

    if l.coefficient(&sring, &Word::empty()) != sring.one() {
        return Err(NcError::TrianglePrecondition(
            "L must have constant coefficient 1".into(),
        ));
    }
    for n in 1..=cap {
        if !sring.is_zero(&l.coefficient(&sring, &Word::e0_power(n))) {
            return Err(NcError::TrianglePrecondition(format!(
                "L must vanish at e0^{n} (regularized series)"
            )));
        }
    }
    if !backend.is_zero(l1.coeff(0)) {
        return Err(NcError::TrianglePrecondition(
            "L1 must have zero constant term".into(),
        ));
    }
    if big_p.coefficient(backend, &Word::empty()) != backend.one() {
        return Err(NcError::NotGrouplike);
    }

    // B = P^{-1} e1 P over scalars, lifted to constant series.
    let p_inv = grouplike_inverse(backend, big_p)?;
    let e1s = NcSeries::e1(backend, cap);
    let b_scalar = nc_mul(backend, &p_inv, &nc_mul(backend, &e1s, big_p));
    let b_series = b_scalar.map_coeffs(|_, c| TruncatedZSeries::constant(backend, c.clone(), order));

    // First factor: L at z/(z-1).
    let f1 = l.map_coeffs(|_, s| apply_mobius_series(backend, s));

    // Second factor: exp(L1 e0), supported on e0 powers.
    let mut f2 = NcSeries::new(cap);
    for b_pow in 0..=cap {
        f2.set(
            Word::e0_power(b_pow),
            series_power_over_factorial(backend, l1, b_pow as u32),
        );
    }

    // Third factor: invert, scale letters by 1/p, substitute, evaluate at
    // z^p/(z^p-1).
    let l_inv = grouplike_inverse(&sring, l)?;
    let p_big = BigInt::from(p);
    let scaled = l_inv.map_coeffs(|w, s| {
        let scale = backend.from_rational(&Rational::new(
            BigInt::from(1),
            p_big.pow(w.weight() as u32),
        ));
        series_scale(backend, &scale, s)
    });
    let substituted = substitute(&sring, &scaled, &b_series)?;
    let f3 = substituted.map_coeffs(|_, s| apply_frobenius_series(backend, s, p));

    Ok(nc_mul(&sring, &nc_mul(&sring, &f1, &f2), &f3))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, rat_int, RationalBackend};
    use crate::words::Word;
    use num_traits::Zero;

    fn rb() -> RationalBackend {
        RationalBackend
    }

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    #[test]
    fn nc_mul_is_concatenation() {
        let mut p = NcSeries::one(&rb(), 3);
        p.set(w("0"), rat_int(1));
        let mut q = NcSeries::one(&rb(), 3);
        q.set(w("1"), rat_int(1));
        let pq = nc_mul(&rb(), &p, &q);
        assert_eq!(pq.coefficient(&rb(), &w("01")), rat_int(1));
        assert_eq!(pq.coefficient(&rb(), &w("10")), rat_int(0));

        let one = NcSeries::one(&rb(), 3);
        assert_eq!(nc_mul(&rb(), &p, &one), p);

        let mut r = NcSeries::one(&rb(), 3);
        r.set(w("1"), rat_int(1));
        let rr = nc_mul(&rb(), &r, &r);
        assert_eq!(rr.coefficient(&rb(), &w("1")), rat_int(2));
    }

    fn exp_of(prim: &NcSeries<Rational>, cap: usize) -> NcSeries<Rational> {
        let mut acc = NcSeries::one(&rb(), cap);
        let mut power = NcSeries::one(&rb(), cap);
        let mut factorial = rat_int(1);
        for k in 1..=cap as i64 {
            power = nc_mul(&rb(), &power, prim);
            factorial *= rat_int(k);
            let mut scaled = NcSeries::new(cap);
            for (word, c) in power.support() {
                scaled.set(word.clone(), c / factorial.clone());
            }
            acc = nc_add(&rb(), &acc, &scaled);
        }
        acc
    }

    #[test]
    fn grouplike_inverse_of_exp_e0() {
        let cap = 5;
        let mut e0 = NcSeries::new(cap);
        e0.set(w("0"), rat_int(1));
        let p = exp_of(&e0, cap);
        let inv = grouplike_inverse(&rb(), &p).unwrap();
        let mut fact = rat_int(1);
        for n in 1..=cap as i64 {
            fact *= rat_int(n);
            let expect = if n % 2 == 0 {
                rat_int(1) / fact.clone()
            } else {
                rat_int(-1) / fact.clone()
            };
            assert_eq!(
                inv.coefficient(&rb(), &Word::e0_power(n as usize)),
                expect
            );
        }
        assert_eq!(nc_mul(&rb(), &p, &inv), NcSeries::one(&rb(), cap));
    }

    #[test]
    fn grouplike_inverse_of_one() {
        let one = NcSeries::<Rational>::one(&rb(), 4);
        assert_eq!(grouplike_inverse(&rb(), &one).unwrap(), one);
        let mut bad = NcSeries::<Rational>::new(4);
        bad.set(Word::empty(), rat_int(2));
        assert!(matches!(
            grouplike_inverse(&rb(), &bad),
            Err(NcError::NotGrouplike)
        ));
    }

    #[test]
    fn random_grouplike_inverts() {
        let cap = 4;
        let mut prim = NcSeries::new(cap);
        prim.set(w("0"), rat(1, 2));
        prim.set(w("1"), rat(-2, 3));
        // bracket [e0, e1] keeps the exponent primitive
        prim.set(w("01"), rat(3, 5));
        prim.set(w("10"), rat(-3, 5));
        let p = exp_of(&prim, cap);
        assert!(is_grouplike(&rb(), &p).is_ok());
        let inv = grouplike_inverse(&rb(), &p).unwrap();
        assert_eq!(nc_mul(&rb(), &p, &inv), NcSeries::one(&rb(), cap));
    }

    #[test]
    fn grouplike_detection_with_witness() {
        let cap = 3;
        let mut e0 = NcSeries::new(cap);
        e0.set(w("0"), rat_int(2));
        let mut e1 = NcSeries::new(cap);
        e1.set(w("1"), rat_int(-1));
        let p = exp_of(&nc_add(&rb(), &e0, &e1), cap);
        assert!(is_grouplike(&rb(), &p).is_ok());

        let mut broken = p.clone();
        broken.set(w("00"), rat_int(7));
        let witness = is_grouplike(&rb(), &broken).unwrap_err();
        assert_eq!(witness, (w("0"), w("0")));
    }

    #[test]
    fn substitute_identity_law() {
        let cap = 4;
        let mut a = NcSeries::one(&rb(), cap);
        a.set(w("1"), rat(2, 7));
        a.set(w("01"), rat(-1, 3));
        a.set(w("011"), rat(5, 2));
        a.set(w("11"), rat_int(4));
        let e1s = NcSeries::e1(&rb(), cap);
        let out = substitute(&rb(), &a, &e1s).unwrap();
        for word in Word::all_up_to_weight(cap) {
            assert_eq!(
                out.coefficient(&rb(), &word),
                a.coefficient(&rb(), &word),
                "word {word}"
            );
        }
    }

    #[test]
    fn substitute_full_word_segment() {
        let cap = 3;
        let mut a = NcSeries::new(cap);
        a.set(w("1"), rat_int(1));
        let mut b = NcSeries::new(cap);
        b.set(w("1"), rat(1, 2));
        b.set(w("101"), rat(4, 3));
        b.set(w("11"), rat(-2, 5));
        let out = substitute(&rb(), &a, &b).unwrap();
        assert_eq!(out.coefficient(&rb(), &w("101")), rat(4, 3));
    }

    #[test]
    fn substitute_rejects_bad_inputs() {
        let cap = 3;
        let mut a = NcSeries::one(&rb(), cap);
        a.set(w("0"), rat_int(1));
        let b = NcSeries::e1(&rb(), cap);
        assert!(matches!(
            substitute(&rb(), &a, &b),
            Err(NcError::SubstitutionPrecondition(_))
        ));
        let a = NcSeries::one(&rb(), cap);
        let mut b = NcSeries::e1(&rb(), cap);
        b.set(Word::empty(), rat_int(1));
        assert!(substitute(&rb(), &a, &b).is_err());
    }

    #[test]
    fn nc_mul_associative_on_random_triples() {
        let cap = 4;
        let mk = |seedcoeffs: &[(&str, (i64, i64))]| {
            let mut s = NcSeries::new(cap);
            for (word, (n, d)) in seedcoeffs {
                s.set(w(word), rat(*n, *d));
            }
            s
        };
        let a = mk(&[("", (1, 1)), ("0", (1, 2)), ("11", (-3, 4)), ("010", (2, 7))]);
        let b = mk(&[("", (2, 3)), ("1", (5, 1)), ("00", (1, 6)), ("101", (-1, 2))]);
        let c = mk(&[("0", (-2, 5)), ("01", (3, 2)), ("1010", (7, 3))]);
        let left = nc_mul(&rb(), &nc_mul(&rb(), &a, &b), &c);
        let right = nc_mul(&rb(), &a, &nc_mul(&rb(), &b, &c));
        assert_eq!(left, right);
    }

    #[test]
    fn triangle_trivial_inputs() {
        let cap = 3;
        let order = 6;
        let backend = rb();
        let sring = SeriesRing::new(&backend, order);
        let p_one = NcSeries::one(&rb(), cap);
        let l_one = NcSeries::one(&sring, cap);
        let l1 = TruncatedZSeries::zero(&rb(), order);
        let out = triangle_op(&rb(), 3, &p_one, &l_one, &l1).unwrap();
        assert_eq!(out.coefficient(&sring, &Word::empty()), sring.one());
        for word in Word::all_up_to_weight(cap) {
            if !word.is_empty() {
                assert!(sring.is_zero(&out.coefficient(&sring, &word)), "word {word}");
            }
        }
    }

    #[test]
    fn triangle_depth_one_coefficient() {
        // P = 1, L = 1 + c(z) e1: the e1 coefficient of the product is
        // c(z/(z-1)) - (1/p) c(z^p/(z^p-1)).
        let cap = 2;
        let order = 9;
        let p = 3u64;
        let backend = rb();
        let sring = SeriesRing::new(&backend, order);
        let p_one = NcSeries::one(&rb(), cap);
        let mut l = NcSeries::one(&sring, cap);
        let c = TruncatedZSeries::from_coeffs(
            (0..=order)
                .map(|n| if n == 0 { rat_int(0) } else { rat(1, n as i64) })
                .collect(),
        );
        l.set(w("1"), c.clone());
        let l1 = TruncatedZSeries::zero(&rb(), order);
        let out = triangle_op(&rb(), p, &p_one, &l, &l1).unwrap();

        let direct = {
            let first = apply_mobius_series(&rb(), &c);
            let second = apply_frobenius_series(&rb(), &c, p);
            let scale = rat(-1, p as i64);
            crate::zseries::series_add(&rb(), &first, &series_scale(&rb(), &scale, &second))
        };
        assert_eq!(out.coefficient(&sring, &w("1")), direct);
    }

    #[test]
    fn primitivity_of_conjugated_e1() {
        let cap = 4;
        let mut prim = NcSeries::new(cap);
        prim.set(w("0"), rat(1, 3));
        prim.set(w("1"), rat(3, 2));
        prim.set(w("01"), rat(-1, 4));
        prim.set(w("10"), rat(1, 4));
        let p = exp_of(&prim, cap);
        assert!(is_grouplike(&rb(), &p).is_ok());
        let p_inv = grouplike_inverse(&rb(), &p).unwrap();
        let b = nc_mul(&rb(), &p_inv, &nc_mul(&rb(), &NcSeries::e1(&rb(), cap), &p));
        assert!(is_primitive(&rb(), &b).is_ok());
        // B vanishes on e0 powers by construction.
        for n in 0..=cap {
            assert!(b.coefficient(&rb(), &Word::e0_power(n)).is_zero());
        }
    }
}
