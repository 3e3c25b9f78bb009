#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::PathBuf;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use splitlp::extend::{code_of, run_extension_search, ExtensionProblem};
use splitlp::gf2::{BitMatrix, BitWord, Code};
use splitlp::groups::{closure, Permutation};
use splitlp::model::CodeType;

pub fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

pub fn read_data(name: &str) -> String {
    std::fs::read_to_string(data(name)).unwrap()
}

/// Words as bit masks, bit `i` for coordinate `i`.
pub fn mask(w: &BitWord) -> u64 {
    w.ones_iter().fold(0, |m, i| m | 1 << i)
}

/// All words orthogonal to every row, by enumeration.
pub fn brute_nullspace(rows: &[u64], n: usize) -> BTreeSet<u64> {
    (0..1u64 << n).filter(|x| rows.iter().all(|r| (r & x).count_ones() % 2 == 0)).collect()
}

pub fn brute_span(rows: &[u64]) -> BTreeSet<u64> {
    let mut span = BTreeSet::from([0u64]);
    for &r in rows {
        let more: Vec<u64> = span.iter().map(|s| s ^ r).collect();
        span.extend(more);
    }
    span
}

pub fn brute_min_weight(words: &BTreeSet<u64>) -> Option<u32> {
    words.iter().filter(|&&w| w != 0).map(|w| w.count_ones()).min()
}

pub fn permute_mask(w: u64, images: &[usize]) -> u64 {
    (0..images.len()).filter(|&i| w >> i & 1 == 1).fold(0, |m, i| m | 1 << images[i])
}

/// Every permutation of `0..n`, in lexicographic order.
pub fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    loop {
        out.push(cur.clone());
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else { break };
        let j = (i + 1..n).rev().find(|&j| cur[j] > cur[i]).unwrap();
        cur.swap(i, j);
        cur[i + 1..].reverse();
    }
    out
}

/// A random base code with `n - k <= 4`, a few of its automorphisms, and a
/// target reachable in at most three steps.
pub fn tiny_problem(rng: &mut ChaCha8Rng, dual_word: bool) -> ExtensionProblem {
    loop {
        let m = rng.gen_range(4..=7usize);
        let t = rng.gen_range(2..=4usize).min(m - 1);
        let s = m - t;
        let rows: Vec<u64> = (0..s).map(|_| rng.gen_range(1..1u64 << m)).collect();
        let span = brute_span(&rows);
        if span.len() != 1 << s {
            continue;
        }
        let mut rows = rows;
        if dual_word {
            // Pad with a zero coordinate, as for the normalized dual word.
            if m + 1 - s > 4 {
                continue;
            }
            rows.iter_mut().for_each(|r| *r &= !(1 << (m - 1)));
            if brute_span(&rows).len() != 1 << s {
                continue;
            }
        }
        let span = brute_span(&rows);
        let Some(dmin) = brute_min_weight(&span) else { continue };
        let even = span.iter().all(|w| w.count_ones() % 2 == 0) && rng.gen_bool(0.5);
        let d = (dmin as usize).saturating_sub(rng.gen_range(0..2)).max(1);
        let r = rng.gen_range(1..=3usize);
        let auts: Vec<Vec<usize>> = all_permutations(m)
            .into_iter()
            .filter(|p| rows.iter().all(|&w| span.contains(&permute_mask(w, p))))
            .collect();
        let gens: Vec<Permutation> = (0..rng.gen_range(0..=2))
            .map(|_| Permutation::from_images(auts[rng.gen_range(0..auts.len())].clone()).unwrap())
            .collect();
        let words: Vec<BitWord> =
            rows.iter().map(|&w| BitWord::from_support(m, (0..m).filter(|i| w >> i & 1 == 1))).collect();
        let code = Code::span(&BitMatrix::from_rows(m, words).unwrap());
        let target = CodeType::new(m + r, s + r, d, even).unwrap();
        return ExtensionProblem::new(code, r, target, gens).unwrap().with_dual_word(dual_word);
    }
}

/// Result of comparing a search against exhaustive enumeration.
#[derive(Debug, PartialEq, Eq)]
pub struct OracleReport {
    pub admissible_sequences: usize,
    pub orbits: usize,
    pub found: usize,
    pub all_found_admissible: bool,
    pub all_reached: bool,
    pub prefix_property: bool,
}

impl OracleReport {
    pub fn ok(&self) -> bool {
        self.orbits == self.found && self.all_found_admissible && self.all_reached && self.prefix_property
    }
}

fn column_bits(c: u64, t: usize) -> Vec<bool> {
    (0..t).map(|i| c >> (t - 1 - i) & 1 == 1).collect()
}

/// Code of `[M | c_1 .. c_j]` by enumeration, as masks.
fn brute_code(m_rows: &[Vec<bool>], base_len: usize, seq: &[u64]) -> BTreeSet<u64> {
    let t = m_rows.len();
    let n = base_len + seq.len();
    let rows: Vec<u64> = (0..t)
        .map(|i| {
            let mut w = (0..base_len).filter(|&c| m_rows[i][c]).fold(0u64, |m, c| m | 1 << c);
            for (l, &c) in seq.iter().enumerate() {
                if column_bits(c, t)[i] {
                    w |= 1 << (base_len + l);
                }
            }
            w
        })
        .collect();
    brute_nullspace(&rows, n)
}

fn brute_admissible(p: &ExtensionProblem, m_rows: &[Vec<bool>], seq: &[u64]) -> bool {
    let base_len = p.base.len();
    let code = brute_code(m_rows, base_len, seq);
    let n = base_len + seq.len();
    if code.len() != 1 << (p.base.dimension() + seq.len()) {
        return false;
    }
    if p.target.even && code.iter().any(|w| w.count_ones() % 2 == 1) {
        return false;
    }
    if brute_min_weight(&code).is_some_and(|w| (w as usize) < p.target.d) {
        return false;
    }
    if p.dual_word && !seq.is_empty() {
        let word = (n - seq.len() - 1..n).fold(0u64, |m, i| m | 1 << i);
        if code.iter().any(|c| (c & word).count_ones() % 2 == 1) {
            return false;
        }
    }
    true
}

/// Runs the search and checks it against every column sequence.
pub fn check_against_oracle(p: &ExtensionProblem) -> OracleReport {
    let base_len = p.base.len();
    let t = p.column_dim();
    let m = p.dual_matrix();
    let m_rows: Vec<Vec<bool>> = m.rows().iter().map(|r| (0..base_len).map(|i| r.get(i)).collect()).collect();
    let mut group = closure(&p.generators, base_len, 1_000_000).unwrap();
    if p.dual_word {
        group.retain(|g| g.apply(base_len - 1) == base_len - 1);
    }
    let (level, _) = run_extension_search(p).unwrap();

    // Every sorted sequence of length r.
    let mut all: Vec<Vec<u64>> = vec![vec![]];
    for _ in 0..p.r {
        all = all
            .into_iter()
            .flat_map(|x| {
                let start = x.last().copied().unwrap_or(0);
                (start..1u64 << t).map(move |c| {
                    let mut y = x.clone();
                    y.push(c);
                    y
                })
            })
            .collect();
    }
    let admissible: Vec<&Vec<u64>> = all.iter().filter(|x| brute_admissible(p, &m_rows, x)).collect();

    // Equivalence under the group on the base coordinates and any
    // permutation of the new ones.
    let n = base_len + p.r;
    let tails = all_permutations(p.r);
    let canon = |code: &BTreeSet<u64>| -> BTreeSet<u64> {
        let mut best: Option<BTreeSet<u64>> = None;
        for g in &group {
            for tail in &tails {
                let mut images: Vec<usize> = g.images().to_vec();
                images.extend(tail.iter().map(|&i| base_len + i));
                let img: BTreeSet<u64> = code.iter().map(|&w| permute_mask(w, &images)).collect();
                if best.as_ref().is_none_or(|b| img < *b) {
                    best = Some(img);
                }
            }
        }
        best.unwrap()
    };
    let orbit_keys: BTreeSet<BTreeSet<u64>> =
        admissible.iter().map(|x| canon(&brute_code(&m_rows, base_len, x))).collect();
    let found_keys: BTreeSet<BTreeSet<u64>> =
        level.sequences.iter().map(|x| canon(&brute_code(&m_rows, base_len, x))).collect();
    let all_found_admissible = level.sequences.iter().all(|x| brute_admissible(p, &m_rows, x));

    // The code built by the library agrees with the enumerated one.
    for x in &level.sequences {
        let lib: BTreeSet<u64> =
            Code::span(code_of(p, x).generators()).enumerate_codewords().unwrap().iter().map(mask).collect();
        assert_eq!(lib, brute_code(&m_rows, base_len, x));
        assert_eq!(code_of(p, x).len(), n);
    }

    let mut prefix_property = true;
    let mut prev = splitlp::extend::TLevel::root();
    let actions = splitlp::extend::column_group(p).unwrap().0;
    for _ in 0..p.r {
        let (next, _) = splitlp::extend::extend_level(p, &prev, &actions).unwrap();
        let prev_set: BTreeSet<&Vec<u64>> = prev.sequences.iter().collect();
        prefix_property &= next.sequences.iter().all(|x| prev_set.contains(&x[..x.len() - 1].to_vec()));
        prev = next;
    }
    assert_eq!(prev, level);

    OracleReport {
        admissible_sequences: admissible.len(),
        orbits: orbit_keys.len(),
        found: level.sequences.len(),
        all_found_admissible,
        all_reached: orbit_keys == found_keys,
        prefix_property,
    }
}

/// A random nonzero code of length `n` and dimension at most `k_max`, as
/// independent row masks.
pub fn random_code(rng: &mut ChaCha8Rng, n: usize, k_max: usize) -> Vec<u64> {
    loop {
        let k = rng.gen_range(1..=k_max.min(n));
        let rows: Vec<u64> = (0..k).map(|_| rng.gen_range(1..1u64 << n)).collect();
        if brute_span(&rows).len() == 1 << k {
            return rows;
        }
    }
}

/// A random partition of `n` into at most `r_max` positive parts.
pub fn random_partition(rng: &mut ChaCha8Rng, n: usize, r_max: usize) -> Vec<usize> {
    let r = rng.gen_range(1..=r_max.min(n));
    let mut cuts: BTreeSet<usize> = BTreeSet::new();
    while cuts.len() < r - 1 {
        cuts.insert(rng.gen_range(1..n));
    }
    let mut parts = Vec::new();
    let mut prev = 0;
    for c in cuts.into_iter().chain([n]) {
        parts.push(c - prev);
        prev = c;
    }
    parts
}

/// Multiweight of a mask under block sizes `parts`.
pub fn mask_multiweight(w: u64, parts: &[usize]) -> Vec<usize> {
    let mut start = 0;
    parts
        .iter()
        .map(|&p| {
            let block = ((1u64 << p) - 1) << start;
            start += p;
            (w & block).count_ones() as usize
        })
        .collect()
}

/// Multiweight counts of a set of words.
pub fn brute_split_distribution(
    words: &BTreeSet<u64>,
    parts: &[usize],
) -> std::collections::BTreeMap<Vec<usize>, i128> {
    let mut out = std::collections::BTreeMap::new();
    for &w in words {
        *out.entry(mask_multiweight(w, parts)).or_insert(0) += 1;
    }
    out
}

pub fn word_of_mask(w: u64, n: usize) -> BitWord {
    BitWord::from_support(n, (0..n).filter(|&i| w >> i & 1 == 1))
}

pub fn code_of_masks(rows: &[u64], n: usize) -> Code {
    Code::span(&BitMatrix::from_rows(n, rows.iter().map(|&r| word_of_mask(r, n)).collect()).unwrap())
}

/// `sum_{i < k} ceil(d / 2^i)` written out independently.
pub fn griesmer_sum(k: usize, d: usize) -> usize {
    let mut total = 0;
    let mut pow = 1;
    for _ in 0..k {
        total += d.div_ceil(pow);
        pow *= 2;
    }
    total
}

/// Exact feasibility of `a . x (>=|=) b` over the reals by Fourier-Motzkin
/// elimination with rational arithmetic.
pub fn fourier_motzkin_feasible(cs: &splitlp::lpcert::ConstraintSystem) -> bool {
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use num_traits::{Signed, Zero};
    use splitlp::lpcert::Sense;
    use std::collections::BTreeMap;

    type Rows = BTreeMap<Vec<BigRational>, BigRational>;
    // Scales the row so its first nonzero coefficient is +-1 and keeps the
    // strongest right-hand side per coefficient vector. Returns false on `0 >= b > 0`.
    fn insert(rows: &mut Rows, c: Vec<BigRational>, b: BigRational) -> bool {
        let Some(lead) = c.iter().find(|v| !v.is_zero()).map(|v| v.abs()) else {
            return !b.is_positive();
        };
        let c: Vec<BigRational> = c.iter().map(|v| v / &lead).collect();
        let b = b / lead;
        match rows.get(&c) {
            Some(old) if *old >= b => {}
            _ => {
                rows.insert(c, b);
            }
        }
        true
    }

    let q = |v: i64| BigRational::from_integer(BigInt::from(v));
    let mut rows = Rows::new();
    for r in &cs.rows {
        let c: Vec<BigRational> = r.coeffs.iter().map(|&v| q(v)).collect();
        let mut ok = insert(&mut rows, c.clone(), q(r.rhs));
        if r.sense == Sense::Eq {
            ok &= insert(&mut rows, c.iter().map(|v| -v).collect(), -q(r.rhs));
        }
        if !ok {
            return false;
        }
    }
    for j in 0..cs.num_vars() {
        let (mut pos, mut neg, mut next) = (Vec::new(), Vec::new(), Rows::new());
        for (c, b) in rows {
            if c[j].is_positive() {
                pos.push((c, b));
            } else if c[j].is_negative() {
                neg.push((c, b));
            } else {
                next.insert(c, b);
            }
        }
        for (pc, pb) in &pos {
            for (nc, nb) in &neg {
                let (sp, sn) = (-nc[j].clone(), pc[j].clone());
                let c: Vec<BigRational> = pc.iter().zip(nc).map(|(a, b)| a * &sp + b * &sn).collect();
                if !insert(&mut next, c, pb * &sp + nb * &sn) {
                    return false;
                }
            }
        }
        rows = next;
    }
    true
}

/// Certified verdict against the elimination oracle: `Ok(true)` when the
/// system was certified infeasible, `Ok(false)` when a verified point was found.
pub fn audit_system(cs: &splitlp::lpcert::ConstraintSystem) -> Result<bool, String> {
    use splitlp::lpcert::{prove_infeasible, system_to_text, verify_farkas, CertifyError, RetryPolicy};
    let feasible = fourier_motzkin_feasible(cs);
    match prove_infeasible(cs, &RetryPolicy::default()) {
        Ok(_) if feasible => Err(format!("certified infeasible but the oracle finds a point:\n{}", system_to_text(cs))),
        Ok(c) if verify_farkas(cs, &c.certificate) != Ok(true) => Err("certificate does not verify".into()),
        Ok(_) => Ok(true),
        Err(CertifyError::ProvablyFeasible { .. }) if !feasible => {
            Err(format!("feasible point reported but the oracle refutes:\n{}", system_to_text(cs)))
        }
        Err(CertifyError::ProvablyFeasible { point }) if !cs.satisfied_by(&point) => {
            Err("point does not satisfy".into())
        }
        Err(CertifyError::ProvablyFeasible { .. }) => Ok(false),
        Err(e) => Err(format!("no verdict ({e}) on\n{}", system_to_text(cs))),
    }
}

/// Base split systems with at most four variables.
pub fn small_split_systems() -> Vec<(CodeType, splitlp::lpcert::ConstraintSystem)> {
    use splitlp::enumerator::{build_constraint_system, BuildOptions, ProofContext};
    use splitlp::model::Configuration;
    let mut out = Vec::new();
    for n in 2..=12 {
        for k in 1..=4.min(n) {
            for d in 1..=n {
                for even in [false, true] {
                    let Ok(t) = CodeType::new(n, k, d, even) else { continue };
                    for dual_min in 1..=3 {
                        let ctx =
                            ProofContext { code_type: &t, dual_min, facts: &[], options: BuildOptions::default() };
                        let Ok(s) = build_constraint_system(&ctx, &Configuration::base(n)) else { continue };
                        if s.system.num_vars() <= 4 {
                            out.push((t.clone(), s.system));
                        }
                    }
                }
            }
        }
    }
    out
}

/// A random system with at most four variables.
pub fn random_small_system(rng: &mut ChaCha8Rng) -> splitlp::lpcert::ConstraintSystem {
    use splitlp::lpcert::{ConstraintSystem, RowTag, Sense};
    let nv = rng.gen_range(1..=4);
    let mut cs = ConstraintSystem::new((0..nv).map(|j| format!("v{j}")).collect());
    for i in 0..rng.gen_range(1..=7) {
        let coeffs = (0..nv).map(|_| rng.gen_range(-3..=3)).collect();
        let sense = if rng.gen_bool(0.3) { Sense::Eq } else { Sense::Ge };
        cs.push(coeffs, sense, rng.gen_range(-4..=4), RowTag::new(format!("r{i}")).unwrap()).unwrap();
    }
    if rng.gen_bool(0.5) {
        cs.push_nonnegativity();
    }
    cs
}

/// A labelled unit-partition configuration of a script with the
/// automorphism lines and group size that follow it.
pub struct CatalogCode {
    pub label: String,
    pub n: usize,
    pub rows: Vec<u64>,
    pub config: splitlp::model::Configuration,
    pub automorphisms: Vec<Vec<usize>>,
    pub group_size: Option<u128>,
}

pub fn catalog(script: &str) -> Vec<CatalogCode> {
    use splitlp::interp::{configuration_from, parse, Command};
    let mut out: Vec<CatalogCode> = Vec::new();
    for cmd in parse(&read_data(script)).unwrap().commands {
        match cmd {
            Command::Config(c) if c.label.is_some() && c.partition.iter().all(|&p| p == 1) && !c.rows.is_empty() => {
                let rows = c
                    .rows
                    .iter()
                    .map(|r| r.chars().enumerate().filter(|(_, b)| *b == '1').fold(0u64, |m, (i, _)| m | 1 << i))
                    .collect();
                out.push(CatalogCode {
                    label: c.label.clone().unwrap(),
                    n: c.partition.len(),
                    rows,
                    config: configuration_from(&c).unwrap(),
                    automorphisms: Vec::new(),
                    group_size: None,
                });
            }
            Command::Config(_) => {}
            Command::Automorphism(g) => {
                if let Some(last) = out.last_mut() {
                    last.automorphisms.push(g);
                }
            }
            Command::GroupSize(s) => {
                if let Some(last) = out.last_mut() {
                    last.group_size = Some(s);
                }
            }
            _ => {}
        }
    }
    out
}

/// The single database axiom the regression scripts rely on.
pub const AXIOM_DB: &str = "FACT no [25,8,10] BY axiom";

pub fn run_data_script(name: &str) -> splitlp::interp::ProofReport {
    let db = splitlp::rules::FactDatabase::parse(AXIOM_DB).unwrap();
    splitlp::interp::run_script(&read_data(name), db, Default::default(), true).unwrap()
}

/// Re-checks every certificate of a report against its own system.
pub fn recheck_certificates(report: &splitlp::interp::ProofReport) -> bool {
    report.certificates.iter().all(|c| splitlp::lpcert::verify_farkas(&c.system, &c.certificate) == Ok(true))
}

/// Number of `show` and `via lp` commands in a script.
pub fn lp_steps(name: &str) -> usize {
    use splitlp::interp::{parse, Command, Method};
    parse(&read_data(name))
        .unwrap()
        .commands
        .iter()
        .filter(|c| matches!(c, Command::Show(_) | Command::Via { method: Method::Lp, .. }))
        .count()
}
