//! Krawtchouk polynomials, the split MacWilliams transform and the split
//! linear programming constraint system of a configuration.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::gf2::{BitMatrix, BitWord, Code, Gf2Error, Multiweight, Partition};
use crate::lpcert::{ConstraintSystem, Row, RowTag, Sense};
use crate::model::{CodeType, Configuration, CountVar, Relation, SideConstraint};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnumError {
    #[error("krawtchouk arguments out of range: k={k}, x={x}, n={n}")]
    Range { k: usize, x: usize, n: usize },
    #[error("multiweight {0} does not fit the partition")]
    Multiweight(String),
    #[error("configuration length {found} differs from code length {expected}")]
    Length { expected: usize, found: usize },
    #[error("inconsistent configuration: {0}")]
    Inconsistent(String),
    #[error("system too large: {variables} variables x {indices} dual indices")]
    TooLarge { variables: usize, indices: usize },
    #[error("side constraint {0} does not apply to this partition")]
    SideConstraint(String),
    #[error(transparent)]
    Gf2(#[from] Gf2Error),
}

fn binomial(n: usize, k: usize) -> i64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: i128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as i128 / (i + 1) as i128;
    }
    acc as i64
}

/// `K_k(x; n) = sum_j (-1)^j C(x, j) C(n - x, k - j)`.
pub fn krawtchouk(k: usize, x: usize, n: usize) -> Result<i64, EnumError> {
    if k > n || x > n {
        return Err(EnumError::Range { k, x, n });
    }
    let mut acc: i128 = 0;
    for j in 0..=k.min(x) {
        let term = binomial(x, j) as i128 * binomial(n - x, k - j) as i128;
        acc += if j % 2 == 0 { term } else { -term };
    }
    Ok(acc as i64)
}

/// All values `K_k(x; n)` for one block size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KrawtchoukTable {
    n: usize,
    values: Vec<i64>,
}

impl KrawtchoukTable {
    pub fn new(n: usize) -> Self {
        let mut values = Vec::with_capacity((n + 1) * (n + 1));
        for k in 0..=n {
            for x in 0..=n {
                values.push(krawtchouk(k, x, n).expect("indices are in range"));
            }
        }
        Self { n, values }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, k: usize, x: usize) -> i64 {
        self.values[k * (self.n + 1) + x]
    }
}

/// Tables for every block size of a partition.
struct KernelSet {
    tables: BTreeMap<usize, KrawtchoukTable>,
}

impl KernelSet {
    fn new(p: &Partition) -> Self {
        let tables = p.parts().iter().map(|&s| (s, KrawtchoukTable::new(s))).collect();
        Self { tables }
    }

    /// `prod_i K_{b_i}(a_i; p_i)`.
    fn coefficient(&self, p: &Partition, b: &[usize], a: &[usize]) -> i64 {
        let mut acc: i64 = 1;
        for ((&s, &bi), &ai) in p.parts().iter().zip(b).zip(a) {
            let v = self.tables[&s].get(bi, ai);
            if v == 0 {
                return 0;
            }
            acc *= v;
        }
        acc
    }
}

/// Dense vector of integers indexed by the multiweights of a partition
/// (last block varying fastest).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiweightDistribution {
    partition: Partition,
    counts: Vec<i128>,
}

impl MultiweightDistribution {
    pub fn zero(partition: Partition) -> Self {
        let len = partition.multiweight_count();
        Self { partition, counts: vec![0; len] }
    }

    pub fn from_counts(partition: Partition, counts: Vec<i128>) -> Result<Self, EnumError> {
        if counts.len() != partition.multiweight_count() {
            return Err(EnumError::Length { expected: partition.multiweight_count(), found: counts.len() });
        }
        Ok(Self { partition, counts })
    }

    /// Multiweight distribution of `code` by enumeration.
    pub fn of_code(code: &Code, partition: &Partition) -> Result<Self, EnumError> {
        if code.len() != partition.n() {
            return Err(EnumError::Length { expected: partition.n(), found: code.len() });
        }
        let mut d = Self::zero(partition.clone());
        code.for_each_codeword(crate::gf2::DEFAULT_ENUMERATION_CAP, |w| {
            let a = partition.multiweight(w).expect("length checked");
            let i = d.index_of(&a).expect("multiweight of a word fits");
            d.counts[i] += 1;
        })?;
        Ok(d)
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn counts(&self) -> &[i128] {
        &self.counts
    }

    pub fn index_of(&self, a: &Multiweight) -> Option<usize> {
        if !a.fits(&self.partition) {
            return None;
        }
        Some(a.entries().iter().zip(self.partition.parts()).fold(0, |acc, (&ai, &p)| acc * (p + 1) + ai))
    }

    pub fn get(&self, a: &Multiweight) -> i128 {
        self.index_of(a).map_or(0, |i| self.counts[i])
    }

    pub fn set(&mut self, a: &Multiweight, value: i128) -> Result<(), EnumError> {
        let i = self.index_of(a).ok_or_else(|| EnumError::Multiweight(a.to_string()))?;
        self.counts[i] = value;
        Ok(())
    }

    pub fn total(&self) -> i128 {
        self.counts.iter().sum()
    }

    /// Nonzero entries in index order.
    pub fn support(&self) -> impl Iterator<Item = (Multiweight, i128)> + '_ {
        self.partition.all_multiweights().zip(self.counts.iter().copied()).filter(|(_, c)| *c != 0)
    }
}

/// `S_b = sum_a d[a] prod_i K_{b_i}(a_i; p_i)`. For the distribution of an
/// `[n, k]` code, `S / 2^k` is the distribution of its dual.
pub fn split_transform(d: &MultiweightDistribution) -> MultiweightDistribution {
    let p = d.partition();
    let kernels = KernelSet::new(p);
    let nonzero: Vec<(Multiweight, i128)> = d.support().collect();
    let counts = p
        .all_multiweights()
        .map(|b| nonzero.iter().map(|(a, c)| c * kernels.coefficient(p, b.entries(), a.entries()) as i128).sum())
        .collect();
    MultiweightDistribution { partition: p.clone(), counts }
}

/// Whether a fact asserts a count is zero or nonzero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CountKind {
    Zero,
    Nonzero,
}

/// Sum of codeword counts over a set of multiweights of some partition is
/// zero or nonzero. `y_w` facts use the single-block partition.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CountFact {
    pub partition: Partition,
    pub support: BTreeSet<Multiweight>,
    pub kind: CountKind,
    /// The support is an orbit standing for one of its members.
    pub up_to_symmetry: bool,
}

impl CountFact {
    pub fn weight(n: usize, w: usize, kind: CountKind) -> Self {
        Self {
            partition: Partition::trivial(n),
            support: BTreeSet::from([Multiweight(vec![w])]),
            kind,
            up_to_symmetry: false,
        }
    }

    pub fn split(partition: Partition, support: BTreeSet<Multiweight>, kind: CountKind, up_to_symmetry: bool) -> Self {
        Self { partition, support, kind, up_to_symmetry }
    }

    /// The excluded weight when this is a `y_w = 0` fact.
    pub fn zero_weight(&self) -> Option<usize> {
        if self.kind == CountKind::Zero && self.partition.len() == 1 && self.support.len() == 1 {
            self.support.first().map(Multiweight::total)
        } else {
            None
        }
    }

    /// Whether the count of multiweight `a` of partition `p` belongs to the
    /// fact's sum.
    pub fn covers(&self, p: &Partition, owner: &[usize], a: &Multiweight) -> bool {
        debug_assert_eq!(p.len(), a.entries().len());
        self.support.contains(&a.coarsen(owner, self.partition.len()))
    }
}

impl fmt::Display for CountFact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rel = match self.kind {
            CountKind::Zero => "=",
            CountKind::Nonzero => "!=",
        };
        if self.partition.len() == 1 && self.support.len() == 1 {
            let w = self.support.first().map_or(0, Multiweight::total);
            return write!(f, "y{w} {rel} 0");
        }
        let terms: Vec<String> = self.support.iter().map(ToString::to_string).collect();
        write!(f, "{} {rel} 0 @ {}", terms.join("+"), self.partition)?;
        if self.up_to_symmetry {
            f.write_str(" up to symmetry")?;
        }
        Ok(())
    }
}

/// Optional sound strengthenings beyond the basic rule set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BuildOptions {
    /// Drop `x_a` when `a` meets a configuration dual word in an odd number
    /// of coordinates.
    pub dual_word_parity: bool,
    /// Force `S_b = 0` when `b` meets a subcode row in an odd number of
    /// coordinates.
    pub subcode_parity: bool,
    /// Upper bound on `variables * dual indices`.
    pub max_entries: usize,
}

impl Default for BuildOptions {
    fn default() -> Self {
        Self { dual_word_parity: true, subcode_parity: false, max_entries: 40_000_000 }
    }
}

/// Everything the constraint builder needs from the proof state.
#[derive(Debug, Clone, Copy)]
pub struct ProofContext<'a> {
    pub code_type: &'a CodeType,
    /// Proven lower bound on the dual minimum distance (1 when unknown).
    pub dual_min: usize,
    pub facts: &'a [CountFact],
    pub options: BuildOptions,
}

/// Codeword weights not excluded by `d`, evenness, length and `y_w = 0`.
pub fn admissible_totals(code_type: &CodeType, facts: &[CountFact]) -> BTreeSet<usize> {
    let mut zero: BTreeSet<usize> = facts.iter().filter_map(CountFact::zero_weight).collect();
    for c in &code_type.constraints {
        if let (CountVar::Weight(w), true) = (&c.var, c.is_zero()) {
            zero.insert(*w);
        }
    }
    let mut out = BTreeSet::from([0]);
    for w in code_type.d.max(1)..=code_type.n {
        if (code_type.even && w % 2 == 1) || zero.contains(&w) {
            continue;
        }
        out.insert(w);
    }
    out
}

/// A constraint system whose columns are multiweights of a partition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitSystem {
    pub partition: Partition,
    pub variables: Vec<Multiweight>,
    pub system: ConstraintSystem,
}

impl SplitSystem {
    pub fn column(&self, a: &Multiweight) -> Option<usize> {
        self.variables.binary_search(a).ok()
    }

    /// Copy of the system with the extra row `sum_{a in set} x_a = 0`.
    /// Returns `None` when no member of the set is a variable.
    pub fn with_zero_sum<'a>(
        &self,
        set: impl IntoIterator<Item = &'a Multiweight>,
        tag: RowTag,
    ) -> Option<ConstraintSystem> {
        let mut coeffs = vec![0i64; self.variables.len()];
        let mut any = false;
        for a in set {
            if let Some(j) = self.column(a) {
                coeffs[j] = 1;
                any = true;
            }
        }
        if !any {
            return None;
        }
        let mut cs = self.system.clone();
        cs.rows.push(Row { coeffs, sense: Sense::Eq, rhs: 0, tag });
        Some(cs)
    }
}

fn tag(s: String) -> RowTag {
    RowTag::new(s.replace(' ', "")).expect("tags are built without whitespace")
}

fn pattern_parity(pattern: &[bool], a: &Multiweight) -> bool {
    pattern.iter().zip(a.entries()).filter(|(on, _)| **on).map(|(_, &x)| x).sum::<usize>() % 2 == 1
}

fn span_multiweights(m: &BitMatrix, p: &Partition) -> Result<BTreeMap<Multiweight, i64>, EnumError> {
    let mut out = BTreeMap::new();
    Code::span(m).for_each_codeword(crate::gf2::DEFAULT_ENUMERATION_CAP, |w: &BitWord| {
        *out.entry(p.multiweight(w).expect("rows share the length")).or_insert(0) += 1;
    })?;
    Ok(out)
}

/// Builds the split LP system of `cfg` under the facts of `ctx`.
///
/// Rows: `x_0 = 1`; `sum x = 2^k`; subcode lower bounds; nonzero count
/// facts; `S_b = 0` below the dual minimum and for excluded dual weights;
/// `S_b >= 2^k * (configuration dual words of multiweight b)`; side
/// constraints; `x_a >= 0`. Excluded variables are removed, rows that are
/// identically zero and satisfied are dropped and duplicate `>=` rows are
/// merged.
pub fn build_constraint_system(ctx: &ProofContext<'_>, cfg: &Configuration) -> Result<SplitSystem, EnumError> {
    let ty = ctx.code_type;
    let p = &cfg.partition;
    if p.n() != ty.n {
        return Err(EnumError::Length { expected: ty.n, found: p.n() });
    }
    let totals = admissible_totals(ty, ctx.facts);
    let sub = cfg.subcode_matrix();
    let subcode = span_multiweights(&sub, p)?;
    if let Some((a, _)) = subcode.iter().find(|(a, _)| !totals.contains(&a.total())) {
        return Err(EnumError::Inconsistent(format!(
            "subcode word of multiweight {a} has excluded weight {}",
            a.total()
        )));
    }
    let dual_words = span_multiweights(&cfg.dual_matrix(), p)?;
    if let Some((b, _)) = dual_words.iter().find(|(b, _)| !b.is_zero() && b.total() < ctx.dual_min) {
        return Err(EnumError::Inconsistent(format!("dual word of multiweight {b} is below the dual minimum")));
    }

    let fact_owners: Vec<Option<Vec<usize>>> = ctx.facts.iter().map(|f| p.refines(&f.partition)).collect();
    let mut side: Vec<&SideConstraint> = ty.constraints.iter().collect();
    side.extend(&cfg.constraints);
    for c in &side {
        if let CountVar::Split(a) = &c.var {
            if !a.fits(p) {
                return Err(EnumError::SideConstraint(c.to_string()));
            }
        }
    }
    let x_zero: BTreeSet<&Multiweight> = side
        .iter()
        .filter(|c| c.is_zero())
        .filter_map(|c| match &c.var {
            CountVar::Split(a) => Some(a),
            _ => None,
        })
        .collect();

    let excluded = |a: &Multiweight| -> bool {
        if a.is_zero() {
            return false;
        }
        if !totals.contains(&a.total()) || x_zero.contains(a) {
            return true;
        }
        if ctx.options.dual_word_parity && cfg.dual_rows.iter().any(|d| pattern_parity(&d.0, a)) {
            return true;
        }
        ctx.facts
            .iter()
            .zip(&fact_owners)
            .any(|(f, owner)| f.kind == CountKind::Zero && owner.as_ref().is_some_and(|o| f.covers(p, o, a)))
    };
    let variables: Vec<Multiweight> = p.all_multiweights().filter(|a| !excluded(a)).collect();
    let nv = variables.len();
    let nb = p.multiweight_count();
    if nv.saturating_mul(nb) > ctx.options.max_entries {
        return Err(EnumError::TooLarge { variables: nv, indices: nb });
    }
    let names = variables.iter().map(ToString::to_string).collect();
    let mut cs = ConstraintSystem::new(names);
    let col = |a: &Multiweight| variables.binary_search(a).ok();
    let two_k: i64 = 1i64 << ty.k;
    let mut rows: Vec<Row> = Vec::new();
    let mut push = |coeffs: Vec<i64>, sense, rhs, t: String| rows.push(Row { coeffs, sense, rhs, tag: tag(t) });

    let zero = Multiweight::zero(p.len());
    let mut c0 = vec![0; nv];
    if let Some(j) = col(&zero) {
        c0[j] = 1;
    }
    push(c0, Sense::Eq, 1, format!("origin:{zero}"));
    push(vec![1; nv], Sense::Eq, two_k, "total".into());

    for (a, &count) in subcode.iter().filter(|(a, _)| !a.is_zero()) {
        let mut c = vec![0; nv];
        if let Some(j) = col(a) {
            c[j] = 1;
        }
        push(c, Sense::Ge, count, format!("subcode:{a}"));
    }

    for (f, owner) in ctx.facts.iter().zip(&fact_owners) {
        let Some(owner) = owner else { continue };
        if f.kind != CountKind::Nonzero {
            continue;
        }
        let c: Vec<i64> = variables.iter().map(|a| i64::from(f.covers(p, owner, a))).collect();
        push(c, Sense::Ge, 1, format!("fact:{}", f.to_string().replace(' ', "")));
    }

    // Side constraints on codeword counts.
    let mut dual_zero: BTreeSet<usize> = BTreeSet::new();
    let mut dual_sums: Vec<(usize, Relation, u64)> = Vec::new();
    for c in &side {
        let label = format!("side:{c}");
        let (members, rel, value): (Vec<i64>, Relation, u64) = match &c.var {
            CountVar::Weight(w) => {
                (variables.iter().map(|a| i64::from(a.total() == *w)).collect(), c.relation, c.value)
            }
            CountVar::Split(t) => (variables.iter().map(|a| i64::from(a == t)).collect(), c.relation, c.value),
            CountVar::DualWeight(w) => {
                if c.is_zero() {
                    dual_zero.insert(*w);
                } else {
                    dual_sums.push((*w, c.relation, c.value));
                }
                continue;
            }
        };
        let value = value as i64;
        match rel {
            Relation::Eq => push(members, Sense::Eq, value, label),
            Relation::Ge => push(members, Sense::Ge, value, label),
            Relation::Ne if value == 0 => push(members, Sense::Ge, 1, label),
            Relation::Ne => {}
        }
    }

    // Dual rows S_b.
    let kernels = KernelSet::new(p);
    let mut dual_sum_rows: Vec<Vec<i64>> = vec![vec![0; nv]; dual_sums.len()];
    for b in p.all_multiweights() {
        let coeffs: Vec<i64> = variables.iter().map(|a| kernels.coefficient(p, b.entries(), a.entries())).collect();
        let w = b.total();
        for ((dw, _, _), acc) in dual_sums.iter().zip(dual_sum_rows.iter_mut()) {
            if *dw == w {
                for (s, c) in acc.iter_mut().zip(&coeffs) {
                    *s += c;
                }
            }
        }
        let odd_to_subcode = ctx.options.subcode_parity && cfg.rows.iter().any(|r| pattern_parity(&r.0, &b));
        if (w > 0 && w < ctx.dual_min) || dual_zero.contains(&w) || odd_to_subcode {
            push(coeffs, Sense::Eq, 0, format!("dualzero:{b}"));
        } else {
            let count = dual_words.get(&b).copied().unwrap_or(0);
            push(coeffs, Sense::Ge, two_k * count, format!("dual:{b}"));
        }
    }
    for ((w, rel, value), coeffs) in dual_sums.into_iter().zip(dual_sum_rows) {
        let rhs = two_k * value as i64;
        let label = format!("side:mu{w}{rel}{value}");
        match rel {
            Relation::Eq => push(coeffs, Sense::Eq, rhs, label),
            Relation::Ge => push(coeffs, Sense::Ge, rhs, label),
            Relation::Ne if value == 0 => push(coeffs, Sense::Ge, two_k, label),
            Relation::Ne => {}
        }
    }

    // Simplify: drop satisfied all-zero rows, merge identical >= rows.
    let mut seen: BTreeMap<Vec<i64>, usize> = BTreeMap::new();
    for row in rows {
        if row.coeffs.iter().all(|&c| c == 0) {
            let satisfied = match row.sense {
                Sense::Ge => row.rhs <= 0,
                Sense::Eq => row.rhs == 0,
            };
            if satisfied {
                continue;
            }
        }
        if row.sense == Sense::Ge {
            if let Some(&i) = seen.get(&row.coeffs) {
                if row.rhs > cs.rows[i].rhs {
                    cs.rows[i] = row;
                }
                continue;
            }
            seen.insert(row.coeffs.clone(), cs.rows.len());
        }
        cs.rows.push(row);
    }
    cs.push_nonnegativity();
    Ok(SplitSystem { partition: p.clone(), variables, system: cs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lpcert::{prove_infeasible, verify_farkas, FarkasCertificate, RetryPolicy};
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn mw(v: &[usize]) -> Multiweight {
        Multiweight(v.to_vec())
    }

    #[test]
    fn krawtchouk_examples() {
        assert_eq!(krawtchouk(0, 5, 9), Ok(1));
        assert_eq!(krawtchouk(1, 2, 5), Ok(1));
        assert_eq!(krawtchouk(3, 3, 3), Ok(-1));
        assert!(krawtchouk(4, 0, 3).is_err());
    }

    #[test]
    fn krawtchouk_table_identities() {
        for n in 0..=10usize {
            let t = KrawtchoukTable::new(n);
            for k in 0..=n {
                assert_eq!(t.get(0, k), 1);
                assert_eq!(t.get(k, 0), binomial(n, k));
                for l in 0..=n {
                    let s: i128 =
                        (0..=n).map(|x| binomial(n, x) as i128 * t.get(k, x) as i128 * t.get(l, x) as i128).sum();
                    let expected = if k == l { (1i128 << n) * binomial(n, k) as i128 } else { 0 };
                    assert_eq!(s, expected);
                }
            }
        }
    }

    #[test]
    fn transform_of_repetition_code() {
        let rep = Code::repetition(3);
        let d = MultiweightDistribution::of_code(&rep, &Partition::trivial(3)).unwrap();
        assert_eq!(d.counts(), &[1, 0, 0, 1]);
        assert_eq!(split_transform(&d).counts(), &[2, 0, 6, 0]);

        let p = Partition::new(vec![1, 2]).unwrap();
        let d = MultiweightDistribution::of_code(&rep, &p).unwrap();
        let s = split_transform(&d);
        assert_eq!(s.get(&mw(&[0, 0])), 2);
        assert_eq!(s.get(&mw(&[1, 1])), 4);
        assert_eq!(s.get(&mw(&[0, 2])), 2);
        assert_eq!(s.total(), 8);
    }

    #[test]
    fn transform_of_point_mass_is_binomial_product() {
        let p = Partition::new(vec![2, 3, 1]).unwrap();
        let mut d = MultiweightDistribution::zero(p.clone());
        d.set(&Multiweight::zero(3), 1).unwrap();
        let s = split_transform(&d);
        for b in p.all_multiweights() {
            let expected: i64 = p.parts().iter().zip(b.entries()).map(|(&n, &k)| binomial(n, k)).product();
            assert_eq!(s.get(&b), expected as i128);
        }
    }

    #[test]
    fn admissible_totals_examples() {
        let t = CodeType::new(21, 5, 10, true).unwrap();
        assert_eq!(admissible_totals(&t, &[]).into_iter().collect::<Vec<_>>(), vec![0, 10, 12, 14, 16, 18, 20]);
        let facts = [CountFact::weight(21, 20, CountKind::Zero), CountFact::weight(21, 18, CountKind::Zero)];
        assert_eq!(admissible_totals(&t, &facts).into_iter().collect::<Vec<_>>(), vec![0, 10, 12, 14, 16]);
        let t = CodeType::new(3, 1, 1, false).unwrap();
        assert_eq!(admissible_totals(&t, &[]).into_iter().collect::<Vec<_>>(), vec![0, 1, 2, 3]);
    }

    fn ctx<'a>(t: &'a CodeType, facts: &'a [CountFact], dual_min: usize) -> ProofContext<'a> {
        ProofContext { code_type: t, dual_min, facts, options: BuildOptions::default() }
    }

    #[test]
    fn base_system_of_8_2_6() {
        let t = CodeType::new(8, 2, 6, false).unwrap();
        let s = build_constraint_system(&ctx(&t, &[], 1), &Configuration::base(8)).unwrap();
        assert_eq!(s.variables, vec![mw(&[0]), mw(&[6]), mw(&[7]), mw(&[8])]);
        let proved = prove_infeasible(&s.system, &RetryPolicy::default()).unwrap();
        assert!(verify_farkas(&s.system, &proved.certificate).unwrap());
    }

    #[test]
    fn hand_certificate_for_8_2_6() {
        // S_1 = 8x0 - 4x6 - 6x7 - 8x8 >= 0 and x6+x7+x8 = 3 give 0 >= 4.
        let t = CodeType::new(8, 2, 6, false).unwrap();
        let s = build_constraint_system(&ctx(&t, &[], 1), &Configuration::base(8)).unwrap();
        let cs = &s.system;
        let find = |name: &str| cs.rows.iter().position(|r| r.tag.as_str() == name).unwrap();
        let q = |n: i64, d: i64| BigRational::new(BigInt::from(n), BigInt::from(d));
        let mut y = vec![q(0, 1); cs.rows.len()];
        // (1/4) S_1 >= 0 : 2x0 - x6 - 1.5x7 - 2x8 >= 0
        y[find("dual:x_1")] = q(1, 4);
        // + (x0+x6+x7+x8 = 4)
        y[find("total")] = q(1, 1);
        // - 3 (x0 = 1)
        y[find("origin:x_0")] = q(-3, 1);
        // + 0.5 x7 + x8 >= 0
        y[find("nonneg:x_7")] = q(1, 2);
        y[find("nonneg:x_8")] = q(1, 1);
        let cert = FarkasCertificate::from_multipliers(cs, y);
        assert_eq!(cert.combined_rhs, q(1, 1));
        assert!(verify_farkas(cs, &cert).unwrap());
    }

    #[test]
    fn base_31_13_10_even_has_twelve_variables() {
        let t = CodeType::new(31, 13, 10, true).unwrap();
        let s = build_constraint_system(&ctx(&t, &[], 1), &Configuration::base(31)).unwrap();
        let totals: Vec<usize> = s.variables.iter().map(Multiweight::total).collect();
        assert_eq!(totals, vec![0, 10, 12, 14, 16, 18, 20, 22, 24, 26, 28, 30]);
    }

    #[test]
    fn subcode_rows_give_lower_bounds() {
        use crate::model::BlockPattern;
        let t = CodeType::with_constraints(
            29,
            11,
            10,
            true,
            vec![SideConstraint::new(CountVar::DualWeight(5), Relation::Eq, 0)],
        )
        .unwrap();
        let cfg = Configuration::new(
            Partition::new(vec![10, 18, 1]).unwrap(),
            vec![BlockPattern::parse("100").unwrap(), BlockPattern::parse("010").unwrap()],
            vec![],
            vec![],
        )
        .unwrap();
        let s = build_constraint_system(&ctx(&t, &[], 6), &cfg).unwrap();
        for a in [[10, 0, 0], [0, 18, 0], [10, 18, 0]] {
            let j = s.column(&mw(&a)).unwrap();
            assert!(s.system.rows.iter().any(|r| r.sense == Sense::Ge
                && r.rhs == 1
                && r.coeffs[j] == 1
                && r.coeffs.iter().filter(|&&c| c != 0).count() == 1
                && r.tag.rule() == "subcode"));
        }
    }

    #[test]
    fn inconsistent_subcode_is_rejected() {
        use crate::model::BlockPattern;
        let t = CodeType::new(8, 2, 6, false).unwrap();
        let cfg = Configuration::new(
            Partition::new(vec![5, 3]).unwrap(),
            vec![BlockPattern::parse("10").unwrap()],
            vec![],
            vec![],
        )
        .unwrap();
        assert!(matches!(build_constraint_system(&ctx(&t, &[], 1), &cfg), Err(EnumError::Inconsistent(_))));
    }

    #[test]
    fn actual_code_satisfies_its_system() {
        // The [8,2,5] code spanned by 11111000 and 00011111 (weights 5,5,6).
        let code = Code::parse_rows(&["11111000", "00011111"]).unwrap();
        let t = CodeType::new(8, 2, 5, false).unwrap();
        let p = Partition::new(vec![3, 2, 3]).unwrap();
        let cfg =
            Configuration::new(p.clone(), vec![crate::model::BlockPattern::parse("110").unwrap()], vec![], vec![])
                .unwrap();
        let dual_min = code.dual().min_weight().unwrap();
        let s = build_constraint_system(&ctx(&t, &[], dual_min), &cfg).unwrap();
        let d = MultiweightDistribution::of_code(&code, &p).unwrap();
        let point: Vec<BigRational> =
            s.variables.iter().map(|a| BigRational::from_integer(BigInt::from(d.get(a) as i64))).collect();
        assert!(s.system.satisfied_by(&point));
    }
}
