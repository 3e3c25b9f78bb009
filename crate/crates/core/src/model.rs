//! Code types, side constraints and configurations.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::gf2::{BitMatrix, BitWord, Gf2Error, Multiweight, Partition};

/// Largest supported length; keeps every Krawtchouk product inside `i64`.
pub const MAX_LENGTH: usize = 62;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("invalid code type: {0}")]
    CodeType(String),
    #[error("pattern {pattern} has {found} blocks, partition has {expected}")]
    PatternLength { pattern: String, expected: usize, found: usize },
    #[error("partition sums to {found}, code length is {expected}")]
    PartitionLength { expected: usize, found: usize },
    #[error("configuration rows are linearly dependent")]
    DependentRows,
    #[error("dual row {0} is not orthogonal to the subcode")]
    NotOrthogonal(String),
    #[error(transparent)]
    Gf2(#[from] Gf2Error),
}

/// Counting variable of the proof language.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CountVar {
    /// `y<w>`: codewords of weight `w`.
    Weight(usize),
    /// `mu<w>`: dual words of weight `w`.
    DualWeight(usize),
    /// `x_a1_..._ar`: codewords of a multiweight of the current partition.
    Split(Multiweight),
}

impl fmt::Display for CountVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CountVar::Weight(w) => write!(f, "y{w}"),
            CountVar::DualWeight(w) => write!(f, "mu{w}"),
            CountVar::Split(a) => write!(f, "{a}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Relation {
    Eq,
    Ne,
    Ge,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Eq => "=",
            Relation::Ne => "!=",
            Relation::Ge => ">=",
        })
    }
}

/// A relation such as `y14 != 0` or `mu5 = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SideConstraint {
    pub var: CountVar,
    pub relation: Relation,
    pub value: u64,
}

impl SideConstraint {
    pub fn new(var: CountVar, relation: Relation, value: u64) -> Self {
        Self { var, relation, value }
    }

    pub fn is_zero(&self) -> bool {
        self.relation == Relation::Eq && self.value == 0
    }

    pub fn is_nonzero(&self) -> bool {
        (self.relation == Relation::Ne && self.value == 0) || (self.relation == Relation::Ge && self.value >= 1)
    }

    /// The complementary constraint for the `v = 0` / `v != 0` pair.
    pub fn negation(&self) -> Option<SideConstraint> {
        match (self.relation, self.value) {
            (Relation::Eq, 0) => Some(SideConstraint::new(self.var.clone(), Relation::Ne, 0)),
            (Relation::Ne, 0) => Some(SideConstraint::new(self.var.clone(), Relation::Eq, 0)),
            _ => None,
        }
    }

    /// Whether the two constraints split every code into exactly one side.
    pub fn complementary(&self, other: &SideConstraint) -> bool {
        self.negation().as_ref() == Some(other)
    }
}

impl fmt::Display for SideConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.var, self.relation, self.value)
    }
}

/// Parameters `[n, k, d]`, evenness and extra constraints of the codes under study.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CodeType {
    pub n: usize,
    pub k: usize,
    pub d: usize,
    pub even: bool,
    pub constraints: Vec<SideConstraint>,
}

impl CodeType {
    pub fn new(n: usize, k: usize, d: usize, even: bool) -> Result<Self, ModelError> {
        Self::with_constraints(n, k, d, even, Vec::new())
    }

    pub fn with_constraints(
        n: usize,
        k: usize,
        d: usize,
        even: bool,
        constraints: Vec<SideConstraint>,
    ) -> Result<Self, ModelError> {
        if n == 0 || k == 0 || d == 0 {
            return Err(ModelError::CodeType(alloc::format!("[{n},{k},{d}] has a zero parameter")));
        }
        if k > n || d > n {
            return Err(ModelError::CodeType(alloc::format!("[{n},{k},{d}] needs k <= n and d <= n")));
        }
        if n > MAX_LENGTH {
            return Err(ModelError::CodeType(alloc::format!("length {n} exceeds {MAX_LENGTH}")));
        }
        for c in &constraints {
            match &c.var {
                CountVar::Weight(w) | CountVar::DualWeight(w) if *w > n => {
                    return Err(ModelError::CodeType(alloc::format!("constraint {c} exceeds length {n}")));
                }
                CountVar::Split(_) => {
                    return Err(ModelError::CodeType(alloc::format!("constraint {c} needs a partition")));
                }
                _ => {}
            }
        }
        Ok(Self { n, k, d, even, constraints })
    }

    /// The same parameters without side constraints or evenness.
    pub fn plain(&self) -> (usize, usize, usize) {
        (self.n, self.k, self.d)
    }
}

impl fmt::Display for CodeType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{},{}{}]", self.n, self.k, self.d, if self.even { "_2" } else { "" })?;
        if !self.constraints.is_empty() {
            f.write_str("{")?;
            for (i, c) in self.constraints.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{c}")?;
            }
            f.write_str("}")?;
        }
        Ok(())
    }
}

/// One bit per block: the word that is all ones on the marked blocks.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BlockPattern(pub Vec<bool>);

impl BlockPattern {
    pub fn parse(s: &str) -> Option<Self> {
        let bits: Option<Vec<bool>> = s
            .chars()
            .map(|c| match c {
                '0' => Some(false),
                '1' => Some(true),
                _ => None,
            })
            .collect();
        bits.filter(|b| !b.is_empty()).map(BlockPattern)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for BlockPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BlockPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// A partition with block-constant subcode rows, block-constant dual rows
/// and side constraints.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Configuration {
    pub partition: Partition,
    pub rows: Vec<BlockPattern>,
    pub dual_rows: Vec<BlockPattern>,
    pub constraints: Vec<SideConstraint>,
}

impl Configuration {
    /// The trivial `config n : { }` configuration.
    pub fn base(n: usize) -> Self {
        Self { partition: Partition::trivial(n), rows: Vec::new(), dual_rows: Vec::new(), constraints: Vec::new() }
    }

    pub fn new(
        partition: Partition,
        rows: Vec<BlockPattern>,
        dual_rows: Vec<BlockPattern>,
        constraints: Vec<SideConstraint>,
    ) -> Result<Self, ModelError> {
        let cfg = Self { partition, rows, dual_rows, constraints };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Checks pattern lengths, row independence and dual orthogonality.
    pub fn validate(&self) -> Result<(), ModelError> {
        let r = self.partition.len();
        for p in self.rows.iter().chain(&self.dual_rows) {
            if p.len() != r {
                return Err(ModelError::PatternLength { pattern: alloc::format!("{p}"), expected: r, found: p.len() });
            }
        }
        let sub = self.subcode_matrix();
        if sub.rank() != sub.nrows() {
            return Err(ModelError::DependentRows);
        }
        for (p, d) in self.dual_rows.iter().zip(self.dual_matrix().rows()) {
            if sub.rows().iter().any(|s| s.dot(d)) {
                return Err(ModelError::NotOrthogonal(alloc::format!("{p}")));
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.partition.n()
    }

    /// Subcode basis rows expanded to full-length words.
    pub fn subcode_matrix(&self) -> BitMatrix {
        let rows = self.rows.iter().map(|p| self.partition.expand_pattern(&p.0)).collect();
        BitMatrix::from_rows(self.n(), rows).expect("expanded rows share the partition length")
    }

    pub fn dual_matrix(&self) -> BitMatrix {
        let rows = self.dual_rows.iter().map(|p| self.partition.expand_pattern(&p.0)).collect();
        BitMatrix::from_rows(self.n(), rows).expect("expanded rows share the partition length")
    }

    /// Whether all blocks are single coordinates.
    pub fn is_unit(&self) -> bool {
        self.partition.parts().iter().all(|&p| p == 1)
    }

    /// Configuration for explicit full-length rows on the unit partition.
    pub fn from_words(words: &[BitWord]) -> Result<Self, ModelError> {
        let n = words.first().map_or(0, BitWord::len);
        let rows = words.iter().map(|w| BlockPattern((0..w.len()).map(|i| w.get(i)).collect())).collect();
        Self::new(Partition::unit(n), rows, Vec::new(), Vec::new())
    }
}
