//! Adjoint p-adic multiple zeta values from a table of lower-depth values:
//! the closed quadratic formula (production path) and the literal
//! conjugation coefficient (reference path), together with the
//! reconstruction of the full generating series from an index table.

use crate::arith::{binomial_negative, compositions, Padic, PadicBackend, Ring};
use crate::ncseries::{grouplike_inverse, nc_mul, NcError, NcSeries};
use crate::words::{word_to_index, Index, Letter, Word};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::collections::{BTreeMap, HashMap};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::RwLock;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TableError {
    #[error("zeta table entry missing for index ({0})")]
    MissingIndex(Index),
    #[error("insufficient table depth/weight: need all indices of weight <= {0}")]
    InsufficientWeight(usize),
    #[error(transparent)]
    Nc(#[from] NcError),
}

/// A stored zeta value: the stabilized value at full tracked arithmetic
/// precision together with the certified accuracy of its agreement with the
/// true limit.
#[derive(Debug, Clone)]
pub struct TableEntry {
    pub value: Padic,
    pub certified: i64,
}

/// Memoized association index -> zeta value for one prime at one working
/// precision, populated depth by depth. Reads are logged by depth so tests
/// can enforce that depth-d computations touch only lower-depth entries.
///
/// Entries carry full tracked precision (the engine consumes them that way;
/// accuracy shortfalls surface in the next depth's measured agreement
/// sequence) plus a certified accuracy bound; consistency checks compare at
/// certified precision through [`MzvTable::truncated_copy`].
#[derive(Debug)]
pub struct MzvTable {
    p: u64,
    rel_prec: u32,
    zeta: BTreeMap<Index, TableEntry>,
    adjoint_memo: RwLock<HashMap<Word, Padic>>,
    max_depth_read: AtomicUsize,
}

impl MzvTable {
    pub fn new(p: u64, rel_prec: u32) -> Self {
        MzvTable {
            p,
            rel_prec,
            zeta: BTreeMap::new(),
            adjoint_memo: RwLock::new(HashMap::new()),
            max_depth_read: AtomicUsize::new(0),
        }
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn rel_prec(&self) -> u32 {
        self.rel_prec
    }

    pub fn backend(&self) -> PadicBackend {
        PadicBackend::new(self.p, self.rel_prec)
    }

    pub fn insert_zeta(&mut self, idx: Index, value: Padic) {
        let certified = value.abs_precision();
        self.insert_entry(idx, TableEntry { value, certified });
    }

    pub fn insert_entry(&mut self, idx: Index, entry: TableEntry) {
        assert_eq!(entry.value.prime(), self.p);
        self.adjoint_memo.write().unwrap().clear();
        self.zeta.insert(idx, entry);
    }

    pub fn zeta(&self, idx: &Index) -> Result<Padic, TableError> {
        self.max_depth_read.fetch_max(idx.depth(), Ordering::Relaxed);
        self.zeta
            .get(idx)
            .map(|e| e.value.clone())
            .ok_or_else(|| TableError::MissingIndex(idx.clone()))
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Index, &TableEntry)> {
        self.zeta.iter()
    }

    /// A copy with every entry truncated to its certified accuracy, for
    /// consistency checks that must not compare beyond what the computation
    /// actually certifies about the true values.
    pub fn truncated_copy(&self) -> MzvTable {
        let mut out = MzvTable::new(self.p, self.rel_prec);
        for (idx, e) in self.zeta.iter() {
            out.zeta.insert(
                idx.clone(),
                TableEntry {
                    value: e.value.truncate_abs(e.certified),
                    certified: e.certified,
                },
            );
        }
        out
    }

    pub fn len(&self) -> usize {
        self.zeta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.zeta.is_empty()
    }

    /// True when every index of weight <= w is present.
    pub fn complete_to_weight(&self, w: usize) -> bool {
        crate::engine::indices_up_to_weight(w)
            .iter()
            .all(|idx| self.zeta.contains_key(idx))
    }

    pub fn reset_depth_log(&self) {
        self.max_depth_read.store(0, Ordering::Relaxed);
    }

    /// Drop memoized adjoint values (used by access-discipline tests, which
    /// must observe the underlying table reads).
    pub fn clear_adjoint_memo(&self) {
        self.adjoint_memo.write().unwrap().clear();
    }

    pub fn max_depth_read(&self) -> usize {
        self.max_depth_read.load(Ordering::Relaxed)
    }
}

/// Split a word of depth >= 2 as e0^b e1 [inner index word] e0^a.
fn split_adjoint_word(w: &Word) -> (usize, Index, usize) {
    let letters = w.letters();
    let b = letters.iter().take_while(|&&l| l == Letter::E0).count();
    let a = letters
        .iter()
        .rev()
        .take_while(|&&l| l == Letter::E0)
        .count();
    debug_assert_eq!(letters[b], Letter::E1);
    let inner = w.subword(b + 1, w.weight() - a);
    let idx = word_to_index(&inner).expect("inner word is e1-terminated");
    (a, idx, b)
}

/// Adjoint value by the closed formula: a three-part sum over splittings,
/// with the binomial product inside each composition sum and boundary terms
/// gated by vanishing of the trailing/leading e0 runs. Depth-0 words give 0
/// and depth-1 words give 1 exactly at the single letter e1.
pub fn adjoint_mzv(table: &MzvTable, w: &Word) -> Result<Padic, TableError> {
    if let Some(v) = table.adjoint_memo.read().unwrap().get(w) {
        return Ok(v.clone());
    }
    let value = adjoint_mzv_uncached(table, w)?;
    table
        .adjoint_memo
        .write()
        .unwrap()
        .insert(w.clone(), value.clone());
    Ok(value)
}

fn adjoint_mzv_uncached(table: &MzvTable, w: &Word) -> Result<Padic, TableError> {
    let backend = table.backend();
    match w.depth() {
        0 => Ok(Padic::exact_zero(table.p)),
        1 => {
            if *w == Word::e1() {
                Ok(backend.one())
            } else {
                Ok(Padic::exact_zero(table.p))
            }
        }
        _ => {
            let (a, inner, b) = split_adjoint_word(w);
            let ms = inner.entries();
            let d = ms.len();
            let mut total = Padic::exact_zero(table.p);

            let sign = |parity: u64| -> bool { parity % 2 == 1 };
            let add_term = |total: &mut Padic,
                            negate: bool,
                            coeff: &BigInt,
                            zs: &[Padic]|
             -> () {
                if coeff.is_zero() {
                    return;
                }
                let mut term = backend.from_bigint(coeff);
                for z in zs {
                    term = backend.mul(&term, z);
                }
                if negate {
                    term = backend.neg(&term);
                }
                *total = backend.add(total, &term);
            };

            // Splittings into two nonempty argument lists.
            for dsplit in 1..d {
                let tail_weight: u64 = ms[dsplit..].iter().map(|&n| n as u64).sum();
                let negate = sign(tail_weight + b as u64);
                for k_a in compositions(a as u32, dsplit) {
                    for k_b in compositions(b as u32, d - dsplit) {
                        let mut coeff = BigInt::one();
                        for (i, &k) in k_a.iter().chain(k_b.iter()).enumerate() {
                            coeff *= binomial_negative(ms[i] as u64, k as u64);
                        }
                        let first = Index::new(
                            (0..dsplit).map(|i| ms[i] + k_a[i]).collect(),
                        )
                        .unwrap();
                        let second = Index::new(
                            (dsplit..d)
                                .rev()
                                .map(|i| ms[i] + k_b[i - dsplit])
                                .collect(),
                        )
                        .unwrap();
                        let z1 = table.zeta(&first)?;
                        let z2 = table.zeta(&second)?;
                        add_term(&mut total, negate, &coeff, &[z1, z2]);
                    }
                }
            }

            // Boundary term gated by a = 0: fully reversed argument list.
            if a == 0 {
                let full_weight: u64 = ms.iter().map(|&n| n as u64).sum();
                let negate = sign(full_weight + b as u64);
                for k in compositions(b as u32, d) {
                    let mut coeff = BigInt::one();
                    for (i, &ki) in k.iter().enumerate() {
                        coeff *= binomial_negative(ms[i] as u64, ki as u64);
                    }
                    let rev = Index::new(
                        (0..d).rev().map(|i| ms[i] + k[i]).collect(),
                    )
                    .unwrap();
                    let z = table.zeta(&rev)?;
                    add_term(&mut total, negate, &coeff, &[z]);
                }
            }

            // Boundary term gated by b = 0: argument list in order.
            if b == 0 {
                for k in compositions(a as u32, d) {
                    let mut coeff = BigInt::one();
                    for (i, &ki) in k.iter().enumerate() {
                        coeff *= binomial_negative(ms[i] as u64, ki as u64);
                    }
                    let fwd =
                        Index::new((0..d).map(|i| ms[i] + k[i]).collect()).unwrap();
                    let z = table.zeta(&fwd)?;
                    add_term(&mut total, false, &coeff, &[z]);
                }
            }

            Ok(total)
        }
    }
}

/// Assemble the generating series from the table: unit constant term, zero
/// on e0 powers, (-1)^depth times the zeta value on e1-terminated words, and
/// the composition-sum extension on e0-terminated ones.
pub fn phi_from_table(table: &MzvTable, cap: usize) -> Result<NcSeries<Padic>, TableError> {
    if !table.complete_to_weight(cap) {
        return Err(TableError::InsufficientWeight(cap));
    }
    let backend = table.backend();
    let mut phi = NcSeries::new(cap);
    phi.set(Word::empty(), backend.one());
    let words = Word::all_up_to_weight(cap);
    for w in words.iter().filter(|w| w.ends_with_e1()) {
        let idx = word_to_index(w).expect("e1-terminated");
        let z = table.zeta(&idx)?;
        let v = if idx.depth() % 2 == 0 { z } else { z.neg() };
        phi.set(w.clone(), v);
    }
    for w in words.iter() {
        if w.is_empty() || w.ends_with_e1() {
            continue;
        }
        if w.depth() == 0 {
            phi.set(w.clone(), Padic::exact_zero(table.p));
            continue;
        }
        let letters = w.letters();
        let mut t = 0usize;
        while letters[letters.len() - 1 - t] == Letter::E0 {
            t += 1;
        }
        let prefix = w.subword(0, w.weight() - t);
        let idx = word_to_index(&prefix).expect("prefix is e1-terminated");
        let mut acc = Padic::exact_zero(table.p);
        for comp in compositions(t as u32, idx.depth()) {
            let mut coeff = BigInt::one();
            for (i, &k) in comp.iter().enumerate() {
                coeff *= binomial_negative(idx.entries()[i] as u64, k as u64);
            }
            let extended = crate::words::index_to_word(
                &Index::new(
                    idx.entries()
                        .iter()
                        .zip(comp.iter())
                        .map(|(&n, &k)| n + k)
                        .collect(),
                )
                .unwrap(),
            );
            let sub = phi.coefficient(&backend, &extended);
            acc = backend.add(&acc, &backend.mul(&backend.from_bigint(&coeff), &sub));
        }
        phi.set(w.clone(), acc);
    }
    Ok(phi)
}

/// Adjoint value as the literal conjugation coefficient
/// (-1)^{depth-1} (Phi^{-1} e1 Phi)_w, computed from the assembled series.
pub fn adjoint_mzv_via_conjugation(table: &MzvTable, w: &Word) -> Result<Padic, TableError> {
    let backend = table.backend();
    let cap = w.weight();
    let phi = phi_from_table(table, cap)?;
    let phi_inv = grouplike_inverse(&backend, &phi)?;
    let e1s = NcSeries::e1(&backend, cap);
    let conj = nc_mul(&backend, &phi_inv, &nc_mul(&backend, &e1s, &phi));
    let c = conj.coefficient(&backend, w);
    Ok(if w.depth() % 2 == 0 { c.neg() } else { c })
}
