//! Named verification suites over the library's internally checkable
//! identities. Each suite returns a report with one line per identity;
//! the acceptance tests and the CLI `verify` command both run these.

use crate::adjoint::{adjoint_mzv, adjoint_mzv_via_conjugation, phi_from_table, MzvTable};
use crate::arith::{rat, PadicBackend, Rational, RationalBackend, Ring};
use crate::engine::{
    build_table, default_n_max, depth1_sum, depth2_sum, expansion_coefficient, partial_sum,
    zeta_limit, CompCache, ConjugationAdjoint, SignMode, TrivialAdjoint,
};
use crate::harmonic::{bmhs, mhs, polylog_generating_series, reciprocal_check, BmhsCache};
use crate::ncseries::{
    is_grouplike, nc_add, nc_mul, substitute, substitute_direct, NcSeries, SeriesRing,
};
use crate::words::{word_to_index, Index, Word};
use crate::zseries::{li1p_series, mobius_transform};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub use crate::engine::LimitReport;

#[derive(Debug, Clone)]
pub struct CheckLine {
    pub label: String,
    pub pass: bool,
    pub detail: Option<String>,
}

#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub name: &'static str,
    pub seed: Option<u64>,
    pub checks: Vec<CheckLine>,
}

impl SuiteReport {
    fn new(name: &'static str, seed: Option<u64>) -> Self {
        SuiteReport {
            name,
            seed,
            checks: Vec::new(),
        }
    }

    fn push(&mut self, label: impl Into<String>, pass: bool, detail: Option<String>) {
        self.checks.push(CheckLine {
            label: label.into(),
            pass,
            detail,
        });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    /// First failing line, if any.
    pub fn first_failure(&self) -> Option<&CheckLine> {
        self.checks.iter().find(|c| !c.pass)
    }
}

fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
    let num = rng.gen_range(-6i64..=6);
    let den = rng.gen_range(1i64..=5);
    rat(num, den)
}

/// A random series with zero coefficients on e0 powers (and optionally on
/// the empty word), supported on `support_size` random words.
fn random_substitution_series(
    rng: &mut ChaCha8Rng,
    cap: usize,
    support_size: usize,
    unit_constant: bool,
) -> NcSeries<Rational> {
    let backend = RationalBackend;
    let words = Word::all_up_to_weight(cap);
    let mut s = NcSeries::new(cap);
    if unit_constant {
        s.set(Word::empty(), backend.one());
    }
    let mut placed = 0;
    while placed < support_size {
        let w = &words[rng.gen_range(0..words.len())];
        if w.depth() == 0 {
            continue; // keeps e0 powers (and the empty word) at zero
        }
        s.set(w.clone(), random_rational(rng));
        placed += 1;
    }
    s
}

/// Substitution versus direct word-expansion on random exact-rational pairs.
pub fn suite_contraction(seed: u64, pairs: usize, cap: usize) -> SuiteReport {
    let mut report = SuiteReport::new("contraction", Some(seed));
    let backend = RationalBackend;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut all_match = true;
    let mut first_bad = None;
    for trial in 0..pairs {
        let with_unit = rng.gen_bool(0.7);
        let a = random_substitution_series(&mut rng, cap, 8, with_unit);
        let b = random_substitution_series(&mut rng, cap, 8, false);
        let fast = substitute(&backend, &a, &b).expect("preconditions hold");
        let direct = substitute_direct(&backend, &a, &b).expect("preconditions hold");
        let mut equal = true;
        for w in Word::all_up_to_weight(cap) {
            if fast.coefficient(&backend, &w) != direct.coefficient(&backend, &w) {
                equal = false;
                break;
            }
        }
        if !equal {
            all_match = false;
            first_bad = Some(trial);
            break;
        }
    }
    report.push(
        format!("substitution equals direct expansion on {pairs} random pairs at weight cap {cap}"),
        all_match,
        first_bad.map(|t| format!("first mismatch at trial {t}")),
    );

    // identity law: substituting the single letter e1 changes nothing
    let mut rng2 = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let a = random_substitution_series(&mut rng2, cap, 10, true);
    let e1s = NcSeries::e1(&backend, cap);
    let out = substitute(&backend, &a, &e1s).expect("identity substitution");
    let identity_ok = Word::all_up_to_weight(cap)
        .iter()
        .all(|w| out.coefficient(&backend, w) == a.coefficient(&backend, w));
    report.push("substituting the letter e1 is the identity", identity_ok, None);
    report
}

fn bracket(
    ring: &RationalBackend,
    a: &NcSeries<Rational>,
    b: &NcSeries<Rational>,
) -> NcSeries<Rational> {
    let ab = nc_mul(ring, a, b);
    let ba = nc_mul(ring, b, a);
    let mut out = NcSeries::new(ab.cap());
    for w in Word::all_up_to_weight(ab.cap()) {
        let v = ring.sub(&ab.coefficient(ring, &w), &ba.coefficient(ring, &w));
        if !ring.is_zero(&v) {
            out.set(w, v);
        }
    }
    out
}

fn exp_concat(ring: &RationalBackend, x: &NcSeries<Rational>, cap: usize) -> NcSeries<Rational> {
    let mut acc = NcSeries::one(ring, cap);
    let mut power = NcSeries::one(ring, cap);
    let mut factorial = Rational::from(BigInt::from(1));
    for k in 1..=cap as i64 {
        power = nc_mul(ring, &power, x);
        factorial *= Rational::from(BigInt::from(k));
        let mut scaled = NcSeries::new(cap);
        for (w, c) in power.support() {
            scaled.set(w.clone(), c / factorial.clone());
        }
        acc = nc_add(ring, &acc, &scaled);
    }
    acc
}

/// A random group-like series: the exponential of a random Lie combination.
pub fn random_grouplike(rng: &mut ChaCha8Rng, cap: usize) -> NcSeries<Rational> {
    let ring = RationalBackend;
    let single = |s: &str| {
        let mut out = NcSeries::new(cap);
        out.set(Word::parse(s).unwrap(), Rational::from(BigInt::from(1)));
        out
    };
    let e0 = single("0");
    let e1 = single("1");
    let b01 = bracket(&ring, &e0, &e1);
    let b001 = bracket(&ring, &e0, &b01);
    let b101 = bracket(&ring, &e1, &b01);
    let b0001 = bracket(&ring, &e0, &b001);
    let b1001 = bracket(&ring, &e1, &b001);
    let b1101 = bracket(&ring, &e1, &b101);
    let mut x = NcSeries::new(cap);
    for basis in [&e0, &e1, &b01, &b001, &b101, &b0001, &b1001, &b1101] {
        let c = random_rational(rng);
        for (w, v) in basis.support() {
            if w.weight() > cap {
                continue;
            }
            let cur = x.coefficient(&ring, w);
            x.set(w.clone(), cur + v * c.clone());
        }
    }
    exp_concat(&ring, &x, cap)
}

/// The triangle-product coefficient identity: the mechanical three-factor
/// product against the combinatorial assembly, exact rationals, synthetic
/// group-like P.
pub fn suite_triangle(seed: u64, cap: usize, z_order: usize, p: u64) -> SuiteReport {
    let mut report = SuiteReport::new("triangle", Some(seed));
    let backend = RationalBackend;
    let sring = SeriesRing::new(&backend, z_order);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let l = polylog_generating_series(&backend, cap, z_order);
    report.push(
        "polylogarithm generating series is group-like",
        is_grouplike(&sring, &l).is_ok(),
        None,
    );

    let p_series = random_grouplike(&mut rng, cap);
    report.push(
        "synthetic exponential series is group-like",
        is_grouplike(&backend, &p_series).is_ok(),
        None,
    );

    let l1 = li1p_series(&backend, p, z_order);
    let triangle = match crate::ncseries::triangle_op(&backend, p, &p_series, &l, &l1) {
        Ok(t) => t,
        Err(e) => {
            report.push("triangle product computed", false, Some(e.to_string()));
            return report;
        }
    };

    let adj = ConjugationAdjoint::from_grouplike(&backend, &p_series)
        .expect("group-like by construction");
    let mut bmhs_cache = BmhsCache::new(backend, z_order);
    let comp = CompCache::new(&backend, p, z_order, cap);

    let mut all_equal = true;
    let mut witness = None;
    for w in Word::all_up_to_weight(cap) {
        if !w.ends_with_e1() {
            continue;
        }
        let idx = word_to_index(&w).expect("e1-terminated");
        let series = triangle.coefficient(&sring, &w);
        for m in 0..=z_order as u64 {
            let assembled = expansion_coefficient(
                &backend,
                p,
                &idx,
                m,
                &mut bmhs_cache,
                &comp,
                &adj,
            )
            .expect("adjoint values available");
            if series.coeff(m as usize) != &assembled {
                all_equal = false;
                witness = Some(format!(
                    "word {w} at z^{m}: product {} vs assembly {}",
                    series.coeff(m as usize),
                    assembled
                ));
                break;
            }
        }
        if !all_equal {
            break;
        }
    }
    report.push(
        format!(
            "product coefficients equal the assembly at every e1-terminated word of weight <= {cap}, z-order <= {z_order}"
        ),
        all_equal,
        witness,
    );

    // The empty-word coefficient of the product is the constant series 1.
    let empty = triangle.coefficient(&sring, &Word::empty());
    report.push(
        "empty-word coefficient is 1",
        empty == sring.one(),
        None,
    );

    // The printed sign variant must disagree somewhere at depth >= 2.
    let mut literal_differs = false;
    'outer: for w in Word::all_up_to_weight(cap) {
        if !w.ends_with_e1() || w.depth() < 2 {
            continue;
        }
        let idx = word_to_index(&w).expect("e1-terminated");
        let series = triangle.coefficient(&sring, &w);
        for m in 0..=z_order as u64 {
            let literal = partial_sum(
                &backend,
                p,
                &idx,
                m,
                SignMode::PaperLiteral,
                &mut bmhs_cache,
                &comp,
                &adj,
            )
            .expect("adjoint values available");
            // literal partial sum = (-1)^d * literal base; the product
            // coefficient is (-1)^d * corrected base = -(corrected sum).
            let sign_adjusted = if idx.depth() % 2 == 0 {
                literal
            } else {
                backend.neg(&literal)
            };
            if series.coeff(m as usize) != &sign_adjusted {
                literal_differs = true;
                break 'outer;
            }
        }
    }
    report.push(
        "printed sign variant disagrees with the product at depth >= 2 (expected)",
        literal_differs,
        None,
    );

    report
}

/// Transform involution and the reciprocal formula.
pub fn suite_transforms(seed: u64) -> SuiteReport {
    let mut report = SuiteReport::new("transforms", Some(seed));
    let backend = RationalBackend;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut involution_ok = true;
    for _ in 0..25 {
        let len = rng.gen_range(1..=30usize);
        let mut a = vec![Rational::from(BigInt::from(0)); len + 1];
        for item in a.iter_mut().skip(1) {
            *item = random_rational(&mut rng);
        }
        let b = mobius_transform(&backend, &a);
        let back = mobius_transform(&backend, &b);
        if back != a {
            involution_ok = false;
            break;
        }
    }
    report.push(
        "coefficient transform is an involution on random sequences (length <= 30)",
        involution_ok,
        None,
    );

    let mut linear_ok = true;
    for _ in 0..10 {
        let len = rng.gen_range(2..=20usize);
        let mk = |rng: &mut ChaCha8Rng| -> Vec<Rational> {
            let mut v = vec![Rational::from(BigInt::from(0)); len + 1];
            for item in v.iter_mut().skip(1) {
                *item = random_rational(rng);
            }
            v
        };
        let a = mk(&mut rng);
        let b = mk(&mut rng);
        let c = random_rational(&mut rng);
        let combo: Vec<Rational> = a
            .iter()
            .zip(b.iter())
            .map(|(x, y)| x + y * c.clone())
            .collect();
        let lhs = mobius_transform(&backend, &combo);
        let ta = mobius_transform(&backend, &a);
        let tb = mobius_transform(&backend, &b);
        let rhs: Vec<Rational> = ta
            .iter()
            .zip(tb.iter())
            .map(|(x, y)| x + y * c.clone())
            .collect();
        if lhs != rhs {
            linear_ok = false;
            break;
        }
    }
    report.push("coefficient transform is linear", linear_ok, None);

    let mut reciprocal_ok = true;
    let mut witness = None;
    'outer: for idx in crate::engine::indices_up_to_weight(6) {
        for m in 1..=30u64 {
            if !reciprocal_check(&idx, m) {
                reciprocal_ok = false;
                witness = Some(format!("index ({idx}) at m = {m}"));
                break 'outer;
            }
        }
    }
    report.push(
        "reciprocal formula holds for all indices of weight <= 6, m <= 30",
        reciprocal_ok,
        witness,
    );
    report
}

/// Closed forms of the two depth-1 binomial harmonic sums.
pub fn suite_bmhs() -> SuiteReport {
    let mut report = SuiteReport::new("bmhs", None);
    let one = Index::new(vec![1]).unwrap();
    let two = Index::new(vec![2]).unwrap();
    let mut ok1 = true;
    let mut ok2 = true;
    for m in 1..=50u64 {
        if bmhs(&one, m) != rat(-1, m as i64) {
            ok1 = false;
        }
        let h1 = mhs(&one, m);
        let expect = rat(-1, (m * m) as i64) - h1 / rat(m as i64, 1);
        if bmhs(&two, m) != expect {
            ok2 = false;
        }
    }
    report.push("h^B at index (1) is -1/m for m <= 50", ok1, None);
    report.push(
        "h^B at index (2) is -1/m^2 - h_1(m)/m for m <= 50",
        ok2,
        None,
    );
    report
}

/// Specialized depth-1/depth-2 evaluators against the general assembly.
pub fn suite_examples(p: u64, target_prec: u32) -> SuiteReport {
    let mut report = SuiteReport::new("examples", None);
    let n_max = default_n_max(p);
    let table = match build_table(p, 4, 1, target_prec, n_max, SignMode::Corrected) {
        Ok(t) => t,
        Err(e) => {
            report.push("depth-1 table built", false, Some(e.to_string()));
            return report;
        }
    };
    let m_cap = 2 * p * p;
    let rel = crate::engine::working_rel_prec(5, target_prec, n_max);
    let backend = PadicBackend::new(p, rel);
    let mut cache = BmhsCache::new(backend, m_cap as usize);
    let comp = CompCache::new(&backend, p, m_cap as usize, 4);

    let mut d1_ok = true;
    let mut witness = None;
    for n in 1..=5u32 {
        let idx = Index::new(vec![n]).unwrap();
        for m in 0..=m_cap {
            let general = partial_sum(
                &backend,
                p,
                &idx,
                m,
                SignMode::Corrected,
                &mut cache,
                &comp,
                &TrivialAdjoint,
            )
            .expect("depth-1 adjoints are trivial");
            let special = depth1_sum(&backend, p, n, m, &mut cache, &comp);
            if general != special {
                d1_ok = false;
                witness = Some(format!("n={n} m={m}"));
                break;
            }
        }
    }
    report.push(
        format!("depth-1 evaluator matches the assembly termwise at p={p}, m <= {m_cap}"),
        d1_ok,
        witness,
    );

    let mut d2_ok = true;
    let mut witness = None;
    'outer: for n1 in 1..=4u32 {
        for n2 in 1..=(5 - n1) {
            let idx = Index::new(vec![n1, n2]).unwrap();
            for m in 0..=m_cap {
                let general = partial_sum(
                    &backend,
                    p,
                    &idx,
                    m,
                    SignMode::Corrected,
                    &mut cache,
                    &comp,
                    &table,
                )
                .expect("table has depth-1 entries");
                let special = depth2_sum(&table, &backend, n1, n2, m, &mut cache, &comp)
                    .expect("table has depth-1 entries");
                if general != special {
                    d2_ok = false;
                    witness = Some(format!("(n1,n2)=({n1},{n2}) m={m}"));
                    break 'outer;
                }
            }
        }
    }
    report.push(
        format!("depth-2 evaluator matches the assembly termwise at p={p}, m <= {m_cap}"),
        d2_ok,
        witness,
    );
    report
}

/// Closed-formula adjoint values against literal conjugation coefficients.
pub fn suite_adjoint(p: u64, target_prec: u32, weight_cap: usize) -> SuiteReport {
    let mut report = SuiteReport::new("adjoint", None);
    let n_max = default_n_max(p);
    let table = match build_table(
        p,
        weight_cap,
        weight_cap,
        target_prec,
        n_max,
        SignMode::Corrected,
    ) {
        Ok(t) => t,
        Err(e) => {
            report.push("zeta table built", false, Some(e.to_string()));
            return report;
        }
    };
    let mut all_ok = true;
    let mut witness = None;
    for w in Word::all_up_to_weight(weight_cap) {
        if w.is_empty() {
            continue;
        }
        let closed = adjoint_mzv(&table, &w);
        let conj = adjoint_mzv_via_conjugation(&table, &w);
        match (closed, conj) {
            (Ok(x), Ok(y)) => {
                if x != y {
                    all_ok = false;
                    witness = Some(format!("word {w}: closed {x} vs conjugation {y}"));
                    break;
                }
            }
            (a, b) => {
                all_ok = false;
                witness = Some(format!("word {w}: {a:?} vs {b:?}"));
                break;
            }
        }
    }
    report.push(
        format!(
            "closed formula equals conjugation coefficient on all words of weight <= {weight_cap} at p={p}"
        ),
        all_ok,
        witness,
    );

    // Depth-access discipline: adjoints of depth-k words read only depth < k.
    let mut discipline_ok = true;
    for w in Word::all_up_to_weight(weight_cap) {
        if w.depth() < 2 {
            continue;
        }
        table.clear_adjoint_memo();
        table.reset_depth_log();
        let _ = adjoint_mzv(&table, &w);
        if table.max_depth_read() >= w.depth() {
            discipline_ok = false;
            break;
        }
    }
    report.push(
        "adjoint values read only strictly lower-depth table entries",
        discipline_ok,
        None,
    );
    report
}

/// Vanishing of the depth-1 values at even arguments, used as an oracle.
/// The computed stabilized value must be congruent to 0 modulo p^3 with the
/// congruence certified by the precision-tracked arithmetic; the agreement
/// sequence must be nondecreasing; the limit-accuracy bound is reported.
pub fn suite_even_zeta(target_prec: u32) -> SuiteReport {
    let mut report = SuiteReport::new("even-zeta", None);
    for (p, n, n_max, min_digits) in
        [(5u64, 2u32, 3u32, 3i64), (5, 4, 3, 3), (3, 2, 4, 3)]
    {
        let rel = crate::engine::working_rel_prec(n as u64, target_prec, n_max);
        let table = MzvTable::new(p, rel);
        let idx = Index::new(vec![n]).unwrap();
        match zeta_limit(&table, &idx, target_prec, n_max, SignMode::Corrected) {
            Ok(rep) => {
                let monotone = (1..rep.agreements.len()).all(|i| {
                    !(rep.measured[i - 1] && rep.measured[i])
                        || rep.agreements[i - 1] <= rep.agreements[i]
                });
                let pass = rep.value.vanishes_to(min_digits) && monotone;
                report.push(
                    format!(
                        "zeta_{p}({n}) at N_max={n_max} is 0 mod {p}^{min_digits} (value {}, accuracy bound {})",
                        rep.value, rep.certified
                    ),
                    pass,
                    Some(format!(
                        "agreements {:?}, accelerated agreements {:?}",
                        rep.agreements, rep.accel_agreements
                    )),
                );
            }
            Err(e) => {
                report.push(format!("zeta_{p}({n}) computed"), false, Some(e.to_string()));
            }
        }
    }
    report
}

/// Shuffle consistency of the assembled generating series.
pub fn suite_shuffle(p: u64, weight_cap: usize, target_prec: u32) -> SuiteReport {
    let mut report = SuiteReport::new("shuffle", None);
    let n_max = default_n_max(p);
    match build_table(
        p,
        weight_cap,
        weight_cap,
        target_prec,
        n_max,
        SignMode::Corrected,
    ) {
        Ok(table) => match phi_from_table(&table, weight_cap) {
            Ok(phi) => {
                let backend = table.backend();
                let check = is_grouplike(&backend, &phi);
                report.push(
                    format!(
                        "assembled series is group-like within precision at p={p}, weight cap {weight_cap}"
                    ),
                    check.is_ok(),
                    check.err().map(|(u, v)| format!("violating pair ({u}, {v})")),
                );
            }
            Err(e) => report.push("series assembled", false, Some(e.to_string())),
        },
        Err(e) => report.push("zeta table built", false, Some(e.to_string())),
    }
    report
}

/// Convergence-valuation monotonicity for a few indices; reported, not
/// assumed.
pub fn suite_convergence(p: u64, target_prec: u32) -> SuiteReport {
    let mut report = SuiteReport::new("convergence", None);
    let table = match build_table(p, 3, 1, target_prec, 3, SignMode::Corrected) {
        Ok(t) => t,
        Err(e) => {
            report.push("depth-1 table built", false, Some(e.to_string()));
            return report;
        }
    };
    for entries in [vec![2u32], vec![3], vec![1, 2]] {
        let idx = Index::new(entries).unwrap();
        match zeta_limit(&table, &idx, target_prec, 3, SignMode::Corrected) {
            Ok(rep) => {
                let nondecreasing = (1..rep.agreements.len()).all(|i| {
                    !(rep.measured[i - 1] && rep.measured[i])
                        || rep.agreements[i - 1] <= rep.agreements[i]
                });
                report.push(
                    format!(
                        "agreement valuations for ({idx}) at p={p}: {:?}",
                        rep.agreements
                    ),
                    nondecreasing,
                    None,
                );
            }
            Err(e) => report.push(
                format!("limit for ({idx}) computed"),
                false,
                Some(e.to_string()),
            ),
        }
    }
    report
}

/// Exact vanishing of the index-(1) partial sums at prime powers, in the
/// exact rational backend.
pub fn suite_exact_zero() -> SuiteReport {
    let mut report = SuiteReport::new("exact-zero", None);
    let backend = RationalBackend;
    for (p, n_max) in [(2u64, 6u32), (3, 4), (5, 3)] {
        let m_cap = p.pow(n_max);
        let mut cache = BmhsCache::new(backend, m_cap as usize);
        let comp = CompCache::new(&backend, p, m_cap as usize, 1);
        let idx = Index::new(vec![1]).unwrap();
        let mut ok = true;
        for n in 1..=n_max {
            let m = p.pow(n);
            let s = partial_sum(
                &backend,
                p,
                &idx,
                m,
                SignMode::Corrected,
                &mut cache,
                &comp,
                &TrivialAdjoint,
            )
            .expect("depth-1 adjoints are trivial");
            if !backend.is_zero(&s) {
                ok = false;
                break;
            }
        }
        report.push(
            format!("partial sums of index (1) vanish exactly at powers of {p} up to {p}^{n_max}"),
            ok,
            None,
        );
    }
    report
}
