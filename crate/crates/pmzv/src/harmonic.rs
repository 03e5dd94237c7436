//! Multiple harmonic sums h, their binomial variant h^B for arbitrary words
//! (e1-terminated, e0-terminated, and depth zero), amortized table
//! construction, and the regularized polylogarithm generating series used by
//! the structural oracle.
//!
//! The binomial variant is the image of a_k = h_{n_1..n_{d-1}}(k) / k^{n_d}
//! under the transform of [`crate::zseries::mobius_transform`]; extension to
//! e0-terminated words goes through the composition sum weighted by
//! coefficients of (1+X)^{-n_i}, and a pure e0 power has value 1 exactly at
//! (word, argument) = (empty, 0).

use crate::arith::{binomial_negative, compositions, Backend, PascalRow, Rational};
use crate::ncseries::NcSeries;
use crate::words::{index_to_word, word_to_index, Index, Word};
use crate::zseries::TruncatedZSeries;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::collections::HashMap;

/// h_{n_1,...,n_d}(m): nested sum over 0 < m_1 < ... < m_d < m (upper bound
/// excluded); the empty index gives 1.
pub fn mhs(idx: &Index, m: u64) -> Rational {
    let rows = mhs_rows(&crate::arith::RationalBackend, idx.entries(), m as usize);
    rows[idx.depth()][m as usize].clone()
}

/// Rows of harmonic-sum values for every prefix of `entries`:
/// `rows[j][k] = h_{n_1..n_j}(k)` for 0 <= k <= m_max. Row 0 is the empty
/// index (constant 1).
pub fn mhs_rows<B: Backend>(backend: &B, entries: &[u32], m_max: usize) -> Vec<Vec<B::Elem>> {
    let mut rows: Vec<Vec<B::Elem>> = Vec::with_capacity(entries.len() + 1);
    rows.push(vec![backend.one(); m_max + 1]);
    for (j, &nj) in entries.iter().enumerate() {
        let mut row = vec![backend.zero(); m_max + 1];
        for k in 1..m_max {
            let step = backend.from_rational(&Rational::new(
                BigInt::one(),
                BigInt::from(k).pow(nj),
            ));
            row[k + 1] = backend.add(&row[k], &backend.mul(&rows[j][k], &step));
        }
        rows.push(row);
    }
    rows
}

/// h^B of an index at a single argument, exactly.
pub fn bmhs(idx: &Index, m: u64) -> Rational {
    let backend = crate::arith::RationalBackend;
    let table = bmhs_table(&backend, &index_to_word(idx), m as usize);
    table.value(m as usize).clone()
}

/// h^B of an arbitrary word at a single argument, exactly.
pub fn bmhs_word(w: &Word, m: u64) -> Rational {
    let backend = crate::arith::RationalBackend;
    let table = bmhs_table(&backend, w, m as usize);
    table.value(m as usize).clone()
}

/// Values h^B_w(0..=m_max) in a fixed backend.
#[derive(Clone, Debug)]
pub struct BmhsTable<B: Backend> {
    word: Word,
    values: Vec<B::Elem>,
}

impl<B: Backend> BmhsTable<B> {
    pub fn word(&self) -> &Word {
        &self.word
    }

    pub fn m_max(&self) -> usize {
        self.values.len() - 1
    }

    pub fn value(&self, m: usize) -> &B::Elem {
        &self.values[m]
    }

    pub fn values(&self) -> &[B::Elem] {
        &self.values
    }
}

/// Build the value table for any word. e1-terminated words run the
/// incremental transform in O(m_max^2 * depth) coefficient operations;
/// e0-terminated words combine extended-index tables; pure e0 powers use the
/// depth-0 clause.
pub fn bmhs_table<B: Backend>(backend: &B, w: &Word, m_max: usize) -> BmhsTable<B> {
    let values = if w.depth() == 0 {
        let mut v = vec![backend.zero(); m_max + 1];
        if w.is_empty() {
            v[0] = backend.one();
        }
        v
    } else if w.ends_with_e1() {
        let idx = word_to_index(w).expect("e1-terminated");
        bmhs_values_for_index(backend, &idx, m_max)
    } else {
        // w = prefix e0^t with e1-terminated prefix; expand through the
        // composition sum with (1+X)^{-n_i} coefficients.
        let letters = w.letters();
        let mut t = 0usize;
        while letters[letters.len() - 1 - t] == crate::words::Letter::E0 {
            t += 1;
        }
        let prefix = w.subword(0, w.weight() - t);
        let idx = word_to_index(&prefix).expect("prefix is e1-terminated");
        let d = idx.depth();
        let mut values = vec![backend.zero(); m_max + 1];
        for comp in compositions(t as u32, d) {
            let mut coeff = BigInt::one();
            for (i, &k) in comp.iter().enumerate() {
                coeff *= binomial_negative(idx.entries()[i] as u64, k as u64);
            }
            if coeff.is_zero() {
                continue;
            }
            let extended = Index::new(
                idx.entries()
                    .iter()
                    .zip(comp.iter())
                    .map(|(&n, &k)| n + k)
                    .collect(),
            )
            .expect("entries stay positive");
            let sub = bmhs_values_for_index(backend, &extended, m_max);
            let c = backend.from_bigint(&coeff);
            for (acc, v) in values.iter_mut().zip(sub.iter()) {
                *acc = backend.add(acc, &backend.mul(&c, v));
            }
        }
        values
    };
    BmhsTable {
        word: w.clone(),
        values,
    }
}

fn bmhs_values_for_index<B: Backend>(backend: &B, idx: &Index, m_max: usize) -> Vec<B::Elem> {
    let entries = idx.entries();
    let d = entries.len();
    let rows = mhs_rows(backend, &entries[..d - 1], m_max);
    let n_last = entries[d - 1];
    // a_k = h_{n_1..n_{d-1}}(k) / k^{n_d}
    let mut a = vec![backend.zero(); m_max + 1];
    for k in 1..=m_max {
        let inv_pow = backend.from_rational(&Rational::new(
            BigInt::one(),
            BigInt::from(k).pow(n_last),
        ));
        a[k] = backend.mul(&rows[d - 1][k], &inv_pow);
    }
    // b_m = sum_{k=1}^m (-1)^k a_k C(m-1, k-1)
    let mut values = vec![backend.zero(); m_max + 1];
    let mut row = PascalRow::new();
    for m in 1..=m_max {
        let mut acc = backend.zero();
        for k in 1..=m {
            if backend.is_exact_zero(&a[k]) {
                continue;
            }
            let c = backend.from_biguint(&row.entries()[k - 1]);
            let term = backend.mul(&a[k], &c);
            acc = if k % 2 == 0 {
                backend.add(&acc, &term)
            } else {
                backend.sub(&acc, &term)
            };
        }
        values[m] = acc;
        row.advance();
    }
    values
}

/// Memoized tables keyed by word, all sized to one argument bound.
pub struct BmhsCache<B: Backend> {
    backend: B,
    m_max: usize,
    tables: HashMap<Word, BmhsTable<B>>,
}

impl<B: Backend> BmhsCache<B> {
    pub fn new(backend: B, m_max: usize) -> Self {
        BmhsCache {
            backend,
            m_max,
            tables: HashMap::new(),
        }
    }

    pub fn m_max(&self) -> usize {
        self.m_max
    }

    pub fn table(&mut self, w: &Word) -> &BmhsTable<B> {
        if !self.tables.contains_key(w) {
            let table = bmhs_table(&self.backend, w, self.m_max);
            self.tables.insert(w.clone(), table);
        }
        &self.tables[w]
    }

    pub fn value(&mut self, w: &Word, m: u64) -> B::Elem {
        self.table(w).value(m as usize).clone()
    }
}

/// Check the reciprocal formula: applying the same signed-binomial kernel to
/// the h^B sequence recovers h_{n_1..n_{d-1}}(m) / m^{n_d}.
pub fn reciprocal_check(idx: &Index, m: u64) -> bool {
    let m = m as usize;
    let backend = crate::arith::RationalBackend;
    let table = bmhs_table(&backend, &index_to_word(idx), m);
    let mut row = PascalRow::new();
    for _ in 1..m {
        row.advance();
    }
    let mut rhs = Rational::zero();
    for k in 1..=m {
        let c = Rational::from(BigInt::from(row.entries()[k - 1].clone()));
        let term = table.value(k) * c;
        if k % 2 == 0 {
            rhs += term;
        } else {
            rhs -= term;
        }
    }
    let entries = idx.entries();
    let d = entries.len();
    let prefix = &entries[..d - 1];
    let h = if prefix.is_empty() {
        Rational::one()
    } else {
        mhs(&Index::new(prefix.to_vec()).unwrap(), m as u64)
    };
    let lhs = h / Rational::from(BigInt::from(m).pow(entries[d - 1]));
    lhs == rhs
}

/// The regularized polylogarithm generating series, truncated to words of
/// weight <= cap and z-order <= order: unit constant coefficient, zero on
/// e0 powers, (-1)^depth times the polylogarithm expansion on e1-terminated
/// words, and the composition-sum extension on e0-terminated words. It is
/// group-like over the series ring.
pub fn polylog_generating_series<B: Backend>(
    backend: &B,
    cap: usize,
    order: usize,
) -> NcSeries<TruncatedZSeries<B::Elem>> {
    let mut out = NcSeries::new(cap);
    out.set(Word::empty(), TruncatedZSeries::one(backend, order));
    let words = Word::all_up_to_weight(cap);
    // e1-terminated words first; e0-terminated ones reference them.
    let mut e1_coeffs: HashMap<Word, TruncatedZSeries<B::Elem>> = HashMap::new();
    for w in words.iter().filter(|w| w.ends_with_e1()) {
        let idx = word_to_index(w).expect("e1-terminated");
        let entries = idx.entries();
        let d = entries.len();
        let rows = mhs_rows(backend, &entries[..d - 1], order);
        let n_last = entries[d - 1];
        let mut coeffs = vec![backend.zero(); order + 1];
        for (m, c) in coeffs.iter_mut().enumerate().skip(1) {
            let inv_pow = backend.from_rational(&Rational::new(
                BigInt::one(),
                BigInt::from(m).pow(n_last),
            ));
            let v = backend.mul(&rows[d - 1][m], &inv_pow);
            *c = if d % 2 == 0 { v } else { backend.neg(&v) };
        }
        let series = TruncatedZSeries::from_coeffs(coeffs);
        e1_coeffs.insert(w.clone(), series.clone());
        out.set(w.clone(), series);
    }
    for w in words.iter() {
        if w.is_empty() || w.ends_with_e1() || w.depth() == 0 {
            continue;
        }
        let letters = w.letters();
        let mut t = 0usize;
        while letters[letters.len() - 1 - t] == crate::words::Letter::E0 {
            t += 1;
        }
        let prefix = w.subword(0, w.weight() - t);
        let idx = word_to_index(&prefix).expect("prefix is e1-terminated");
        let mut acc = TruncatedZSeries::zero(backend, order);
        for comp in compositions(t as u32, idx.depth()) {
            let mut coeff = BigInt::one();
            for (i, &k) in comp.iter().enumerate() {
                coeff *= binomial_negative(idx.entries()[i] as u64, k as u64);
            }
            let extended = index_to_word(
                &Index::new(
                    idx.entries()
                        .iter()
                        .zip(comp.iter())
                        .map(|(&n, &k)| n + k)
                        .collect(),
                )
                .expect("positive entries"),
            );
            let sub = &e1_coeffs[&extended];
            let c = backend.from_bigint(&coeff);
            acc = crate::zseries::series_add(
                backend,
                &acc,
                &crate::zseries::series_scale(backend, &c, sub),
            );
        }
        out.set(w.clone(), acc);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, rat_int, Padic, PadicBackend, RationalBackend};
    use crate::ncseries::{is_grouplike, SeriesRing};

    fn idx(v: &[u32]) -> Index {
        Index::new(v.to_vec()).unwrap()
    }

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    #[test]
    fn mhs_examples() {
        assert_eq!(mhs(&idx(&[1]), 3), rat(3, 2));
        for n in 1..=4 {
            assert_eq!(mhs(&idx(&[n]), 1), rat_int(0));
        }
        assert_eq!(mhs(&idx(&[1, 2]), 3), rat(1, 4));
    }

    #[test]
    fn mhs_brute_force_agreement() {
        // direct nested loops as oracle
        fn brute(entries: &[u32], m: u64) -> Rational {
            fn go(entries: &[u32], lo: u64, m: u64) -> Rational {
                if entries.is_empty() {
                    return rat_int(1);
                }
                let mut acc = Rational::zero();
                for m1 in (lo + 1)..m {
                    let term = rat(1, 1)
                        / Rational::from(BigInt::from(m1).pow(entries[0]))
                        * go(&entries[1..], m1, m);
                    acc += term;
                }
                acc
            }
            go(entries, 0, m)
        }
        for entries in [vec![2], vec![1, 1], vec![2, 3], vec![1, 2, 1]] {
            for m in 0..=8 {
                assert_eq!(mhs(&idx(&entries), m), brute(&entries, m), "{entries:?} {m}");
            }
        }
    }

    #[test]
    fn bmhs_depth_one_closed_forms() {
        for m in 1..=50u64 {
            assert_eq!(bmhs(&idx(&[1]), m), rat(-1, m as i64));
            let h1 = mhs(&idx(&[1]), m);
            let expect = rat(-1, (m * m) as i64) - h1 / rat_int(m as i64);
            assert_eq!(bmhs(&idx(&[2]), m), expect, "m={m}");
        }
        assert_eq!(bmhs(&idx(&[2]), 2), rat(-3, 4));
        assert_eq!(bmhs(&idx(&[1]), 1), rat_int(-1));
    }

    #[test]
    fn bmhs_word_cases() {
        assert_eq!(bmhs_word(&Word::empty(), 0), rat_int(1));
        assert_eq!(bmhs_word(&Word::empty(), 3), rat_int(0));
        assert_eq!(bmhs_word(&w("00"), 5), rat_int(0));
        for m in 0..=12 {
            assert_eq!(bmhs_word(&w("10"), m), -bmhs(&idx(&[2]), m));
        }
    }

    #[test]
    fn table_matches_pointwise_and_closed_form() {
        let backend = RationalBackend;
        let table = bmhs_table(&backend, &w("1"), 4);
        assert_eq!(
            table.values(),
            &[rat_int(0), rat_int(-1), rat(-1, 2), rat(-1, 3), rat(-1, 4)][..]
        );
        for word in ["011", "110", "101", "0101"] {
            let word = w(word);
            let table = bmhs_table(&backend, &word, 9);
            assert_eq!(table.value(0), &rat_int(0));
            for m in 0..=9u64 {
                assert_eq!(table.value(m as usize), &bmhs_word(&word, m), "{word} {m}");
            }
        }
    }

    #[test]
    fn backend_equivalence() {
        let p = 5u64;
        let rel = 8u32;
        let pb = PadicBackend::new(p, rel);
        let rb = RationalBackend;
        for word in ["1", "01", "11", "101", "110"] {
            let word = w(word);
            let pt = bmhs_table(&pb, &word, 12);
            let rt = bmhs_table(&rb, &word, 12);
            for m in 0..=12 {
                let reduced = Padic::from_rational_rel(p, rt.value(m), rel);
                assert_eq!(pt.value(m), &reduced, "{word} {m}");
            }
        }
    }

    #[test]
    fn e0_extension_order_invariance() {
        // composition-first pointwise evaluation vs extended-table assembly
        let backend = RationalBackend;
        for word in ["10", "100", "1010", "1100"] {
            let word = w(word);
            let table = bmhs_table(&backend, &word, 10);
            for m in 0..=10usize {
                // expand composition first at this single argument
                let letters = word.letters();
                let mut t = 0usize;
                while letters[letters.len() - 1 - t] == crate::words::Letter::E0 {
                    t += 1;
                }
                let prefix = word.subword(0, word.weight() - t);
                let base = word_to_index(&prefix).unwrap();
                let mut acc = Rational::zero();
                for comp in compositions(t as u32, base.depth()) {
                    let mut coeff = BigInt::one();
                    for (i, &k) in comp.iter().enumerate() {
                        coeff *= binomial_negative(base.entries()[i] as u64, k as u64);
                    }
                    let ext = Index::new(
                        base.entries()
                            .iter()
                            .zip(comp.iter())
                            .map(|(&n, &k)| n + k)
                            .collect(),
                    )
                    .unwrap();
                    acc += Rational::from(coeff) * bmhs(&ext, m as u64);
                }
                assert_eq!(table.value(m), &acc, "{word} {m}");
            }
        }
    }

    #[test]
    fn reciprocal_formula() {
        for m in 1..=20 {
            assert!(reciprocal_check(&idx(&[1]), m));
        }
        for m in 1..=15 {
            assert!(reciprocal_check(&idx(&[2, 3]), m));
        }
        assert!(reciprocal_check(&idx(&[1, 1]), 10));
    }

    #[test]
    fn bmhs_series_oracle() {
        // h^B_w(m) is the z^m coefficient of Li_idx(z/(z-1)), expanded by
        // series multiplication only.
        let order = 10usize;
        for entries in [vec![1], vec![2], vec![1, 1], vec![2, 1], vec![1, 2]] {
            let index = idx(&entries);
            let d = index.depth();
            let rows = mhs_rows(&RationalBackend, &entries[..d - 1], order);
            let n_last = entries[d - 1];
            // polylog coefficients a_k
            let a: Vec<Rational> = (0..=order)
                .map(|k| {
                    if k == 0 {
                        Rational::zero()
                    } else {
                        rows[d - 1][k].clone() / Rational::from(BigInt::from(k).pow(n_last))
                    }
                })
                .collect();
            // expand sum a_k (-z)^k (1-z)^{-k}
            let mut expanded = vec![Rational::zero(); order + 1];
            let mut pow = vec![Rational::zero(); order + 1];
            pow[0] = Rational::one();
            for k in 1..=order {
                let mut shifted = vec![Rational::zero(); order + 1];
                for i in 0..order {
                    shifted[i + 1] = -pow[i].clone();
                }
                let mut next = vec![Rational::zero(); order + 1];
                for i in 0..=order {
                    if shifted[i].is_zero() {
                        continue;
                    }
                    for j in 0..=order - i {
                        next[i + j] += &shifted[i];
                    }
                }
                pow = next;
                for n in 0..=order {
                    expanded[n] += &a[k] * &pow[n];
                }
            }
            for m in 0..=order as u64 {
                assert_eq!(bmhs(&index, m), expanded[m as usize], "{entries:?} {m}");
            }
        }
    }

    #[test]
    fn polylog_series_is_grouplike() {
        let backend = RationalBackend;
        let cap = 3;
        let order = 8;
        let l = polylog_generating_series(&backend, cap, order);
        let sring = SeriesRing::new(&backend, order);
        assert!(is_grouplike(&sring, &l).is_ok());
    }
}
