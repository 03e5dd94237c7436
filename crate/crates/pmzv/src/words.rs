//! Words over the alphabet {e0, e1}: index encoding, e1-segment
//! decompositions with their contractions, shuffle product, antipode.
//!
//! An index (n_1,...,n_d) with n_i >= 1 corresponds to the word
//! e0^{n_d-1} e1 ... e0^{n_1-1} e1 (leftmost block carries n_d). The text
//! format used by the CLI and tests reads a word left-to-right as a string
//! over '0'/'1', e.g. "011" = e0 e1 e1.

use crate::arith::Rational;
use num_traits::Zero;
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("not an index word: {0}")]
    NotAnIndexWord(String),
    #[error("index entries must be >= 1 and nonempty")]
    BadIndex,
    #[error("invalid segment decomposition: {0}")]
    InvalidSegments(String),
    #[error("malformed word string {0:?}: expected characters '0'/'1'")]
    BadWordString(String),
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Letter {
    E0,
    E1,
}

/// A finite word over {e0, e1}, possibly empty.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn empty() -> Self {
        Word { letters: vec![] }
    }

    pub fn from_letters(letters: Vec<Letter>) -> Self {
        Word { letters }
    }

    pub fn e1() -> Self {
        Word {
            letters: vec![Letter::E1],
        }
    }

    pub fn e0_power(n: usize) -> Self {
        Word {
            letters: vec![Letter::E0; n],
        }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    /// Weight = length of the word.
    pub fn weight(&self) -> usize {
        self.letters.len()
    }

    /// Depth = number of e1 letters.
    pub fn depth(&self) -> usize {
        self.letters.iter().filter(|&&l| l == Letter::E1).count()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn reverse(&self) -> Word {
        let mut letters = self.letters.clone();
        letters.reverse();
        Word { letters }
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Word { letters }
    }

    pub fn push(&mut self, l: Letter) {
        self.letters.push(l);
    }

    pub fn subword(&self, start: usize, end: usize) -> Word {
        Word {
            letters: self.letters[start..end].to_vec(),
        }
    }

    pub fn ends_with_e1(&self) -> bool {
        self.letters.last() == Some(&Letter::E1)
    }

    /// Parse the "0"/"1" text format; the empty string is the empty word.
    pub fn parse(s: &str) -> Result<Word, WordError> {
        let mut letters = Vec::with_capacity(s.len());
        for c in s.chars() {
            match c {
                '0' => letters.push(Letter::E0),
                '1' => letters.push(Letter::E1),
                _ => return Err(WordError::BadWordString(s.to_string())),
            }
        }
        Ok(Word { letters })
    }

    /// Positions of the e1 letters, ascending.
    pub fn e1_positions(&self) -> Vec<usize> {
        self.letters
            .iter()
            .enumerate()
            .filter(|(_, &l)| l == Letter::E1)
            .map(|(i, _)| i)
            .collect()
    }

    /// All words of weight <= cap in graded-lex order.
    pub fn all_up_to_weight(cap: usize) -> Vec<Word> {
        let mut out = vec![Word::empty()];
        let mut layer = vec![Word::empty()];
        for _ in 0..cap {
            let mut next = Vec::with_capacity(layer.len() * 2);
            for w in &layer {
                for l in [Letter::E0, Letter::E1] {
                    let mut v = w.clone();
                    v.push(l);
                    next.push(v);
                }
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        out.sort();
        out
    }
}

impl Ord for Word {
    /// Graded lexicographic: by weight first, then letterwise with e0 < e1.
    fn cmp(&self, other: &Self) -> Ordering {
        self.letters
            .len()
            .cmp(&other.letters.len())
            .then_with(|| self.letters.cmp(&other.letters))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.letters {
            match l {
                Letter::E0 => write!(f, "0")?,
                Letter::E1 => write!(f, "1")?,
            }
        }
        Ok(())
    }
}

/// A nonempty exponent tuple (n_1,...,n_d) with all n_i >= 1.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct Index {
    entries: Vec<u32>,
}

impl Index {
    pub fn new(entries: Vec<u32>) -> Result<Self, WordError> {
        if entries.is_empty() || entries.iter().any(|&n| n < 1) {
            return Err(WordError::BadIndex);
        }
        Ok(Index { entries })
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn depth(&self) -> usize {
        self.entries.len()
    }

    pub fn weight(&self) -> u64 {
        self.entries.iter().map(|&n| n as u64).sum()
    }

    pub fn parse(s: &str) -> Result<Index, WordError> {
        let entries: Result<Vec<u32>, _> = s.split(',').map(|t| t.trim().parse::<u32>()).collect();
        Index::new(entries.map_err(|_| WordError::BadIndex)?)
    }
}

impl fmt::Display for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let strs: Vec<String> = self.entries.iter().map(|n| n.to_string()).collect();
        write!(f, "{}", strs.join(","))
    }
}

/// Encode (n_1,...,n_d) as e0^{n_d-1} e1 ... e0^{n_1-1} e1.
pub fn index_to_word(idx: &Index) -> Word {
    let mut letters = Vec::with_capacity(idx.weight() as usize);
    for &n in idx.entries.iter().rev() {
        letters.extend(std::iter::repeat(Letter::E0).take(n as usize - 1));
        letters.push(Letter::E1);
    }
    Word { letters }
}

/// Inverse of [`index_to_word`] on nonempty words ending in e1.
pub fn word_to_index(w: &Word) -> Result<Index, WordError> {
    if w.is_empty() || !w.ends_with_e1() {
        return Err(WordError::NotAnIndexWord(w.to_string()));
    }
    let mut blocks_left_to_right = Vec::new();
    let mut run = 0u32;
    for &l in &w.letters {
        match l {
            Letter::E0 => run += 1,
            Letter::E1 => {
                blocks_left_to_right.push(run + 1);
                run = 0;
            }
        }
    }
    blocks_left_to_right.reverse();
    Index::new(blocks_left_to_right)
}

/// Signed reversal S(w) = (-1)^{wt(w)} w^rev; the first component is +-1.
pub fn antipode(w: &Word) -> (i8, Word) {
    let sign = if w.weight() % 2 == 0 { 1 } else { -1 };
    (sign, w.reverse())
}

/// An ordered family of disjoint ranges of a host word, each covering at
/// least one e1, with every e1 of the host inside some range (so the
/// complementary gaps are e1-free). Ranges are half-open.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct SegmentDecomposition {
    ranges: Vec<(usize, usize)>,
}

impl SegmentDecomposition {
    pub fn ranges(&self) -> &[(usize, usize)] {
        &self.ranges
    }

    pub fn segment_count(&self) -> usize {
        self.ranges.len()
    }

    /// The segment subwords w_1,...,w_r in order.
    pub fn segment_words(&self, host: &Word) -> Vec<Word> {
        self.ranges
            .iter()
            .map(|&(s, e)| host.subword(s, e))
            .collect()
    }
}

/// Every e1-segment decomposition of `w`, ordered lexicographically by
/// (segment count, range list). Depth-0 words have none.
pub fn enumerate_e1_segments(w: &Word) -> Vec<SegmentDecomposition> {
    let pos = w.e1_positions();
    if pos.is_empty() {
        return vec![];
    }
    let len = w.weight();
    let mut out = Vec::new();
    let mut acc: Vec<(usize, usize)> = Vec::new();
    // next: index into pos of the first uncovered e1; min_start: first legal
    // start for the next segment (end of the previous one, so gaps stay
    // e1-free and segments disjoint).
    fn go(
        pos: &[usize],
        len: usize,
        next: usize,
        min_start: usize,
        acc: &mut Vec<(usize, usize)>,
        out: &mut Vec<SegmentDecomposition>,
    ) {
        if next == pos.len() {
            out.push(SegmentDecomposition {
                ranges: acc.clone(),
            });
            return;
        }
        for start in min_start..=pos[next] {
            // The segment covers e1's next..=last of a consecutive group.
            for last in next..pos.len() {
                let end_bound = if last + 1 < pos.len() {
                    pos[last + 1]
                } else {
                    len
                };
                for end in (pos[last] + 1)..=end_bound {
                    acc.push((start, end));
                    go(pos, len, last + 1, end, acc, out);
                    acc.pop();
                }
            }
        }
    }
    go(&pos, len, 0, 0, &mut acc, &mut out);
    out.sort_by(|a, b| {
        a.segment_count()
            .cmp(&b.segment_count())
            .then_with(|| a.ranges.cmp(&b.ranges))
    });
    out
}

/// Replace each segment of `w` by a single e1: a_0 e1 a_1 ... e1 a_r.
pub fn contract(w: &Word, segs: &SegmentDecomposition) -> Result<Word, WordError> {
    let len = w.weight();
    let mut prev_end = 0usize;
    for &(s, e) in &segs.ranges {
        if s >= e || e > len {
            return Err(WordError::InvalidSegments(format!(
                "range ({s},{e}) out of bounds for weight {len}"
            )));
        }
        if s < prev_end {
            return Err(WordError::InvalidSegments(
                "ranges overlap or are out of order".into(),
            ));
        }
        if w.subword(s, e).depth() == 0 {
            return Err(WordError::InvalidSegments(format!(
                "segment ({s},{e}) contains no e1"
            )));
        }
        prev_end = e;
    }
    // Gap letters must be e1-free.
    let mut covered = vec![false; len];
    for &(s, e) in &segs.ranges {
        for c in covered.iter_mut().take(e).skip(s) {
            *c = true;
        }
    }
    for (i, &l) in w.letters.iter().enumerate() {
        if l == Letter::E1 && !covered[i] {
            return Err(WordError::InvalidSegments(format!(
                "e1 at position {i} lies in a gap"
            )));
        }
    }
    let mut letters = Vec::new();
    let mut cursor = 0usize;
    for &(s, e) in &segs.ranges {
        letters.extend_from_slice(&w.letters[cursor..s]);
        letters.push(Letter::E1);
        cursor = e;
    }
    letters.extend_from_slice(&w.letters[cursor..]);
    Ok(Word { letters })
}

/// Finitely supported map Word -> Rational with no explicit zeros.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct WordPolynomial {
    terms: BTreeMap<Word, Rational>,
}

impl WordPolynomial {
    pub fn zero() -> Self {
        WordPolynomial {
            terms: BTreeMap::new(),
        }
    }

    pub fn singleton(w: Word, c: Rational) -> Self {
        let mut p = WordPolynomial::zero();
        p.add_term(w, c);
        p
    }

    pub fn add_term(&mut self, w: Word, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(w.clone()).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&w);
        }
    }

    pub fn coefficient(&self, w: &Word) -> Rational {
        self.terms.get(w).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Rational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &WordPolynomial) -> WordPolynomial {
        let mut out = self.clone();
        for (w, c) in other.terms() {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> WordPolynomial {
        let mut out = WordPolynomial::zero();
        for (w, v) in self.terms() {
            out.add_term(w.clone(), v * c);
        }
        out
    }

    /// Total coefficient mass.
    pub fn mass(&self) -> Rational {
        self.terms.values().sum()
    }
}

/// Shuffle product of two words: the multiset of all interleavings.
pub fn shuffle(u: &Word, v: &Word) -> WordPolynomial {
    fn go(u: &[Letter], v: &[Letter], out: &mut BTreeMap<Word, Rational>, prefix: &mut Vec<Letter>) {
        if u.is_empty() && v.is_empty() {
            let w = Word::from_letters(prefix.clone());
            *out.entry(w).or_insert_with(Rational::zero) += Rational::from(num_bigint::BigInt::from(1));
            return;
        }
        if let Some((&l, rest)) = u.split_first() {
            prefix.push(l);
            go(rest, v, out, prefix);
            prefix.pop();
        }
        if let Some((&l, rest)) = v.split_first() {
            prefix.push(l);
            go(u, rest, out, prefix);
            prefix.pop();
        }
    }
    let mut terms = BTreeMap::new();
    let mut prefix = Vec::with_capacity(u.weight() + v.weight());
    go(u.letters(), v.letters(), &mut terms, &mut prefix);
    WordPolynomial { terms }
}

/// Bilinear extension of the shuffle product to polynomials.
pub fn shuffle_mul(a: &WordPolynomial, b: &WordPolynomial) -> WordPolynomial {
    let mut out = WordPolynomial::zero();
    for (u, cu) in a.terms() {
        for (v, cv) in b.terms() {
            let sh = shuffle(u, v);
            for (w, c) in sh.terms() {
                out.add_term(w.clone(), c * cu * cv);
            }
        }
    }
    out
}
