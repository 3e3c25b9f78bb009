//! Coding-theory inference rules, facts and the persistent fact database.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use thiserror::Error;

use crate::enumerator::{CountFact, CountKind};
use crate::gf2::{Multiweight, Partition};
use crate::model::{BlockPattern, CodeType, Configuration, CountVar, Relation, SideConstraint};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuleError {
    #[error("cannot parse fact: {0}")]
    Parse(String),
    #[error("premise {0} does not exist")]
    Premise(usize),
}

/// `sum_{i < k} ceil(d / 2^i)`, the least length of an `[n, k, d]` code.
pub fn griesmer(k: usize, d: usize) -> usize {
    (0..k).map(|i| if i >= usize::BITS as usize { 1 } else { d.div_ceil(1 << i) }).sum()
}

/// Parameters `[n - w, k - w + 1, d]` of the codewords vanishing on a dual
/// word of weight `w`, restricted to the other coordinates.
pub fn residual_of_dual_word(n: usize, k: usize, d: usize, w: usize) -> Option<(usize, usize, usize)> {
    if w == 0 || w > n || k < w {
        return None;
    }
    Some((n - w, k + 1 - w, d))
}

/// Nonexistence of even `[n, k, d]` codes implies nonexistence of all
/// `[n, k, d]` codes when `d` is even: puncture and add a parity bit.
pub fn even_reduction(n: usize, k: usize, d: usize) -> Option<CodeType> {
    if d % 2 == 1 {
        return None;
    }
    CodeType::new(n, k, d, false).ok()
}

/// Codes meeting the Griesmer bound with even `d` have only even weights.
pub fn griesmer_evenness(n: usize, k: usize, d: usize) -> bool {
    d.is_multiple_of(2) && n == griesmer(k, d)
}

/// `Some(W)` when the smallest admissible nonzero weight `W` must occur:
/// without it the minimum distance would be the next admissible weight,
/// which the Griesmer bound rules out.
pub fn min_weight_realized(n: usize, k: usize, totals: &BTreeSet<usize>) -> Option<usize> {
    let mut nonzero = totals.iter().copied().filter(|&w| w > 0);
    let w = nonzero.next()?;
    match nonzero.next() {
        Some(next) if griesmer(k, next) > n => Some(w),
        Some(_) => None,
        None => Some(w),
    }
}

/// The configuration `w, n - w : {10}` asserting a word of weight `w`.
pub fn kill_configuration(n: usize, w: usize) -> Option<Configuration> {
    if w == 0 || w > n {
        return None;
    }
    let (parts, row) = if w == n { (vec![n], vec![true]) } else { (vec![w, n - w], vec![true, false]) };
    let partition = Partition::new(parts).ok()?;
    Configuration::new(partition, vec![BlockPattern(row)], Vec::new(), Vec::new()).ok()
}

/// What a fact asserts.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Statement {
    /// No code of this type exists.
    Nonexistence(CodeType),
    DualMinAtLeast(usize),
    Count(CountFact),
    Side(SideConstraint),
    /// Every codeword has even weight.
    Even,
    Contradiction,
    /// Every code of the type has one of the labelled configurations.
    Classification(Vec<String>),
}

impl fmt::Display for Statement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Statement::Nonexistence(t) => write!(f, "no {t}"),
            Statement::DualMinAtLeast(m) => write!(f, "dual min >= {m}"),
            Statement::Count(c) => write!(f, "{c}"),
            Statement::Side(c) => write!(f, "{c}"),
            Statement::Even => f.write_str("even"),
            Statement::Contradiction => f.write_str("contradiction"),
            Statement::Classification(labels) => {
                f.write_str("one of ")?;
                for (i, l) in labels.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" or ")?;
                    }
                    write!(f, "[{l}]")?;
                }
                Ok(())
            }
        }
    }
}

fn parse_usize(s: &str, whole: &str) -> Result<usize, RuleError> {
    s.trim().parse().map_err(|_| RuleError::Parse(whole.into()))
}

fn parse_relation(s: &str, whole: &str) -> Result<Relation, RuleError> {
    match s {
        "=" => Ok(Relation::Eq),
        "!=" => Ok(Relation::Ne),
        ">=" => Ok(Relation::Ge),
        _ => Err(RuleError::Parse(whole.into())),
    }
}

fn parse_var(s: &str, whole: &str) -> Result<CountVar, RuleError> {
    if let Some(w) = s.strip_prefix("mu") {
        Ok(CountVar::DualWeight(parse_usize(w, whole)?))
    } else if let Some(w) = s.strip_prefix('y') {
        Ok(CountVar::Weight(parse_usize(w, whole)?))
    } else if let Some(a) = s.strip_prefix("x_") {
        Ok(CountVar::Split(Multiweight(a.split('_').map(|p| parse_usize(p, whole)).collect::<Result<_, _>>()?)))
    } else {
        Err(RuleError::Parse(whole.into()))
    }
}

/// Parses `var rel value`, as printed by `SideConstraint`.
pub fn parse_side_constraint(s: &str) -> Result<SideConstraint, RuleError> {
    let parts: Vec<&str> = s.split_whitespace().collect();
    let [var, rel, value] = parts[..] else { return Err(RuleError::Parse(s.into())) };
    Ok(SideConstraint::new(parse_var(var, s)?, parse_relation(rel, s)?, parse_usize(value, s)? as u64))
}

/// Parses `[n,k,d]`, `[n,k,d_2]` and an optional `{c, c}` suffix.
pub fn parse_code_type(s: &str) -> Result<CodeType, RuleError> {
    let s = s.trim();
    let err = || RuleError::Parse(s.into());
    let inner = s.strip_prefix('[').ok_or_else(err)?;
    let close = inner.find(']').ok_or_else(err)?;
    let params: Vec<&str> = inner[..close].split(',').map(str::trim).collect();
    let [n, k, d] = params[..] else { return Err(err()) };
    let (d, even) = match d.strip_suffix("_2") {
        Some(d) => (d, true),
        None => (d, false),
    };
    let rest = inner[close + 1..].trim();
    let mut constraints = Vec::new();
    if !rest.is_empty() {
        let body = rest.strip_prefix('{').and_then(|r| r.strip_suffix('}')).ok_or_else(err)?;
        for c in body.split(',').map(str::trim).filter(|c| !c.is_empty()) {
            constraints.push(parse_side_constraint(c)?);
        }
    }
    CodeType::with_constraints(parse_usize(n, s)?, parse_usize(k, s)?, parse_usize(d, s)?, even, constraints)
        .map_err(|_| err())
}

fn parse_count_fact(s: &str) -> Result<CountFact, RuleError> {
    let err = || RuleError::Parse(s.into());
    let (body, up_to_symmetry) = match s.strip_suffix(" up to symmetry") {
        Some(b) => (b, true),
        None => (s, false),
    };
    let (lhs, partition) = body.split_once(" @ ").ok_or_else(err)?;
    let parts = partition.split(',').map(|p| parse_usize(p, s)).collect::<Result<Vec<_>, _>>()?;
    let partition = Partition::new(parts).map_err(|_| err())?;
    let mut it = lhs.split_whitespace();
    let (terms, rel, zero) = (it.next().ok_or_else(err)?, it.next().ok_or_else(err)?, it.next().ok_or_else(err)?);
    if zero != "0" || it.next().is_some() {
        return Err(err());
    }
    let kind = match rel {
        "=" => CountKind::Zero,
        "!=" => CountKind::Nonzero,
        _ => return Err(err()),
    };
    let mut support = BTreeSet::new();
    for t in terms.split('+') {
        match parse_var(t, s)? {
            CountVar::Split(a) if a.fits(&partition) => {
                support.insert(a);
            }
            _ => return Err(err()),
        }
    }
    Ok(CountFact::split(partition, support, kind, up_to_symmetry))
}

impl FromStr for Statement {
    type Err = RuleError;

    fn from_str(s: &str) -> Result<Self, RuleError> {
        let s = s.trim();
        if let Some(t) = s.strip_prefix("no ") {
            return Ok(Statement::Nonexistence(parse_code_type(t)?));
        }
        if let Some(m) = s.strip_prefix("dual min >= ") {
            return Ok(Statement::DualMinAtLeast(parse_usize(m, s)?));
        }
        if let Some(labels) = s.strip_prefix("one of ") {
            let labels = labels
                .split(" or ")
                .map(|l| l.trim().strip_prefix('[').and_then(|l| l.strip_suffix(']')).map(String::from))
                .collect::<Option<Vec<_>>>()
                .ok_or_else(|| RuleError::Parse(s.into()))?;
            return Ok(Statement::Classification(labels));
        }
        match s {
            "even" => return Ok(Statement::Even),
            "contradiction" => return Ok(Statement::Contradiction),
            _ => {}
        }
        if s.contains(" @ ") {
            return Ok(Statement::Count(parse_count_fact(s)?));
        }
        Ok(Statement::Side(parse_side_constraint(s)?))
    }
}

/// Why a fact holds.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Justification {
    /// A named rule applied to earlier facts.
    Rule { name: String, premises: Vec<usize> },
    /// An exactly verified Farkas certificate.
    Certificate(usize),
    /// An extension-search transcript.
    Transcript(String),
    /// Part of the code type under study.
    Given,
    /// Assumed without proof.
    Axiom(String),
}

impl Justification {
    pub fn rule(name: impl Into<String>, premises: Vec<usize>) -> Self {
        Justification::Rule { name: name.into(), premises }
    }

    pub fn is_axiom(&self) -> bool {
        matches!(self, Justification::Axiom(_))
    }

    pub fn premises(&self) -> &[usize] {
        match self {
            Justification::Rule { premises, .. } => premises,
            _ => &[],
        }
    }
}

impl fmt::Display for Justification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Justification::Rule { name, premises } => {
                f.write_str(name)?;
                if !premises.is_empty() {
                    let list: Vec<String> = premises.iter().map(ToString::to_string).collect();
                    write!(f, " [{}]", list.join(","))?;
                }
                Ok(())
            }
            Justification::Certificate(id) => write!(f, "cert:{id}"),
            Justification::Transcript(id) => write!(f, "transcript:{id}"),
            Justification::Given => f.write_str("given"),
            Justification::Axiom(_) => f.write_str("axiom"),
        }
    }
}

impl FromStr for Justification {
    type Err = RuleError;

    fn from_str(s: &str) -> Result<Self, RuleError> {
        let s = s.trim();
        let err = || RuleError::Parse(s.into());
        if s == "axiom" {
            return Ok(Justification::Axiom(String::new()));
        }
        if s == "given" {
            return Ok(Justification::Given);
        }
        if let Some(id) = s.strip_prefix("cert:") {
            return Ok(Justification::Certificate(parse_usize(id, s)?));
        }
        if let Some(id) = s.strip_prefix("transcript:") {
            return Ok(Justification::Transcript(id.into()));
        }
        let (name, premises) = match s.split_once(" [") {
            Some((name, rest)) => {
                let list = rest.strip_suffix(']').ok_or_else(err)?;
                (name, list.split(',').map(|p| parse_usize(p, s)).collect::<Result<Vec<_>, _>>()?)
            }
            None => (s, Vec::new()),
        };
        if name.is_empty() || name.contains(char::is_whitespace) {
            return Err(err());
        }
        Ok(Justification::rule(name, premises))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Fact {
    pub statement: Statement,
    pub justification: Justification,
}

impl fmt::Display for Fact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FACT {} BY {}", self.statement, self.justification)
    }
}

impl FromStr for Fact {
    type Err = RuleError;

    fn from_str(s: &str) -> Result<Self, RuleError> {
        let body = s.trim().strip_prefix("FACT ").ok_or_else(|| RuleError::Parse(s.into()))?;
        let (statement, justification) = body.rsplit_once(" BY ").ok_or_else(|| RuleError::Parse(s.into()))?;
        Ok(Fact { statement: statement.parse()?, justification: justification.parse()? })
    }
}

/// Facts that outlive a single script, such as nonexistence results.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FactDatabase {
    pub facts: Vec<Fact>,
}

impl FactDatabase {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a fact whose premises already exist; returns its index.
    pub fn add(&mut self, fact: Fact) -> Result<usize, RuleError> {
        if let Some(&p) = fact.justification.premises().iter().find(|&&p| p >= self.facts.len()) {
            return Err(RuleError::Premise(p));
        }
        if let Some(i) = self.facts.iter().position(|f| *f == fact) {
            return Ok(i);
        }
        self.facts.push(fact);
        Ok(self.facts.len() - 1)
    }

    pub fn axiom(&mut self, statement: Statement, reason: impl Into<String>) -> usize {
        self.add(Fact { statement, justification: Justification::Axiom(reason.into()) })
            .expect("axioms have no premises")
    }

    pub fn axiom_count(&self) -> usize {
        self.facts.iter().filter(|f| f.justification.is_axiom()).count()
    }

    pub fn find(&self, statement: &Statement) -> Option<usize> {
        self.facts.iter().position(|f| &f.statement == statement)
    }

    /// One `FACT` line per fact.
    pub fn to_text(&self) -> String {
        self.facts.iter().map(|f| format!("{f}\n")).collect()
    }

    /// Reads `FACT` lines; blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self, RuleError> {
        let mut db = FactDatabase::new();
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
            let fact: Fact = line.parse()?;
            db.add(fact)?;
        }
        Ok(db)
    }

    /// Nonexistence facts usable for codes of any parity.
    fn nonexistence(&self, even_target: bool) -> impl Iterator<Item = (usize, &CodeType)> + '_ {
        self.facts.iter().enumerate().filter_map(move |(i, f)| match &f.statement {
            Statement::Nonexistence(t) if t.constraints.is_empty() && (!t.even || t.d % 2 == 0 || even_target) => {
                Some((i, t))
            }
            _ => None,
        })
    }
}

/// How a parameter set was ruled out.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Refutation {
    /// `n < griesmer(k, d)`.
    Griesmer { n: usize, k: usize, d: usize },
    /// Shortening and padding reach a database nonexistence fact.
    Database { fact: usize },
    /// Excluded by a `mu_w = 0` constraint of the type.
    DualWeightExcluded { w: usize },
}

impl fmt::Display for Refutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Refutation::Griesmer { n, k, d } => write!(f, "griesmer({k},{d}) = {} > {n}", griesmer(*k, *d)),
            Refutation::Database { fact } => write!(f, "fact {fact}"),
            Refutation::DualWeightExcluded { w } => write!(f, "mu{w} = 0"),
        }
    }
}

/// Shows that no `[n, k, d]` code (even when `even`) exists, using the
/// Griesmer bound or a database fact `[N, K, D]` with `K <= k`, `D <= d` and
/// `n - (k - K) <= N` (shorten `k - K` times, then pad with zeros).
pub fn refute(n: usize, k: usize, d: usize, even: bool, db: &FactDatabase) -> Option<Refutation> {
    if n < griesmer(k, d) {
        return Some(Refutation::Griesmer { n, k, d });
    }
    db.nonexistence(even)
        .find(|(_, t)| t.k <= k && t.d <= d && n - (k - t.k) <= t.n)
        .map(|(fact, _)| Refutation::Database { fact })
}

/// Largest `m` with every dual weight `1 <= w < m` refuted, and the
/// per-weight refutations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualMin {
    pub m: usize,
    pub steps: Vec<(usize, Refutation)>,
}

impl DualMin {
    /// Database facts used by the steps.
    pub fn premises(&self) -> Vec<usize> {
        let set: BTreeSet<usize> = self
            .steps
            .iter()
            .filter_map(|(_, r)| match r {
                Refutation::Database { fact } => Some(*fact),
                _ => None,
            })
            .collect();
        set.into_iter().collect()
    }
}

pub fn infer_dual_min(code_type: &CodeType, db: &FactDatabase) -> DualMin {
    let (n, k, d) = code_type.plain();
    let mut steps = Vec::new();
    let mut w = 1;
    loop {
        let excluded = code_type.constraints.iter().any(|c| c.var == CountVar::DualWeight(w) && c.is_zero());
        let step = if excluded {
            Some(Refutation::DualWeightExcluded { w })
        } else {
            residual_of_dual_word(n, k, d, w).and_then(|(rn, rk, rd)| refute(rn, rk, rd, code_type.even, db))
        };
        match step {
            Some(r) => {
                steps.push((w, r));
                w += 1;
            }
            None => return DualMin { m: w, steps },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ty(s: &str) -> CodeType {
        parse_code_type(s).unwrap()
    }

    #[test]
    fn griesmer_sums() {
        assert_eq!(griesmer(1, 7), 7);
        assert_eq!(griesmer(5, 10), 21);
        assert_eq!(griesmer(13, 10), 29);
        assert_eq!(griesmer(2, 6), 9);
        assert_eq!(griesmer(7, 10), 23);
        assert_eq!(griesmer(7, 12), 26);
        assert_eq!(griesmer(5, 12), 24);
    }

    #[test]
    fn residuals() {
        assert_eq!(residual_of_dual_word(29, 11, 10, 5), Some((24, 7, 10)));
        assert_eq!(residual_of_dual_word(31, 13, 10, 6), Some((25, 8, 10)));
        assert_eq!(residual_of_dual_word(9, 3, 4, 1), Some((8, 3, 4)));
        assert_eq!(residual_of_dual_word(9, 3, 4, 4), None);
    }

    #[test]
    fn evenness_rules() {
        assert!(griesmer_evenness(21, 5, 10));
        assert!(!griesmer_evenness(24, 7, 10));
        assert!(!griesmer_evenness(9, 3, 5));
        assert_eq!(even_reduction(31, 13, 10), Some(ty("[31,13,10]")));
        assert_eq!(even_reduction(9, 2, 9), None);
    }

    #[test]
    fn minimum_weight_realization() {
        let totals = BTreeSet::from([0, 10, 12, 14, 16, 18, 20]);
        assert_eq!(min_weight_realized(21, 5, &totals), Some(10));
        let totals = BTreeSet::from([0, 10, 12, 14, 16, 18, 20, 22, 24]);
        assert_eq!(min_weight_realized(24, 7, &totals), Some(10));
        let totals = BTreeSet::from([0, 2, 4]);
        assert_eq!(min_weight_realized(8, 2, &totals), None);
    }

    #[test]
    fn dual_min_from_griesmer() {
        let dm = infer_dual_min(&ty("[21,5,10_2]"), &FactDatabase::new());
        assert!(dm.m >= 2);
        assert_eq!(dm.steps[0], (1, Refutation::Griesmer { n: 20, k: 5, d: 10 }));
        assert_eq!(infer_dual_min(&ty("[12,2,4]"), &FactDatabase::new()).m, 1);
    }

    #[test]
    fn dual_min_from_database() {
        let mut db = FactDatabase::new();
        assert!(infer_dual_min(&ty("[31,13,10_2]"), &db).m < 7);
        let f = db.axiom(Statement::Nonexistence(ty("[25,8,10]")), "known");
        let dm = infer_dual_min(&ty("[31,13,10_2]"), &db);
        assert_eq!(dm.m, 7);
        assert_eq!(dm.premises(), vec![f]);
        let dm = infer_dual_min(&ty("[29,11,10_2]{mu5 = 0}"), &db);
        assert_eq!(dm.m, 6);
        assert_eq!(dm.steps[4], (5, Refutation::DualWeightExcluded { w: 5 }));
    }

    #[test]
    fn kill_configurations() {
        let c = kill_configuration(21, 18).unwrap();
        assert_eq!(c.partition.parts(), &[18, 3]);
        assert_eq!(kill_configuration(5, 5).unwrap().partition.parts(), &[5]);
        assert!(kill_configuration(5, 0).is_none());
    }

    #[test]
    fn database_round_trip() {
        let mut db = FactDatabase::new();
        let a = db.axiom(Statement::Nonexistence(ty("[25,8,10]")), "known");
        db.add(Fact {
            statement: Statement::Nonexistence(ty("[31,13,10]")),
            justification: Justification::rule("even-reduction", vec![a]),
        })
        .unwrap();
        db.add(Fact { statement: Statement::DualMinAtLeast(7), justification: Justification::Certificate(3) }).unwrap();
        db.add(Fact {
            statement: Statement::Nonexistence(ty("[29,11,10_2]{mu5 = 0}")),
            justification: Justification::Given,
        })
        .unwrap();
        let fact = CountFact::split(
            Partition::new(vec![20, 11]).unwrap(),
            BTreeSet::from([Multiweight(vec![10, 0]), Multiweight(vec![0, 10])]),
            CountKind::Nonzero,
            true,
        );
        db.add(Fact { statement: Statement::Count(fact), justification: Justification::Certificate(4) }).unwrap();
        db.add(Fact {
            statement: Statement::Classification(vec!["a".into(), "b".into()]),
            justification: Justification::Transcript("t1".into()),
        })
        .unwrap();
        let text = db.to_text();
        assert!(text.starts_with("FACT no [25,8,10] BY axiom\nFACT no [31,13,10] BY even-reduction [0]\n"));
        let back = FactDatabase::parse(&text).unwrap();
        assert_eq!(back.to_text(), text);
        assert_eq!(back.axiom_count(), 1);
        assert!(FactDatabase::parse("FACT no [3,1,3] BY rule [5]").is_err());
    }
}
