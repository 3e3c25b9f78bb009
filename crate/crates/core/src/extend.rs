//! Column-by-column extension search over the dual basis of a base code,
//! keeping only admissible sequences that are minimal under an automorphism
//! group.

use alloc::collections::{BTreeSet, VecDeque};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::gf2::{BitMatrix, BitWord, Code, Gf2Error};
use crate::groups::{is_isomorphism, stochastic_isomorphism_search, GroupError, Permutation};
use crate::model::CodeType;

/// Largest column-action group that is closed explicitly.
pub const DEFAULT_GROUP_CAP: usize = 100_000;
/// Default bound on the size of one level.
pub const DEFAULT_LEVEL_CAP: usize = 5_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExtendError {
    #[error("target [{n},{k}] does not match base [{m},{s}] plus {r} steps")]
    Parameters { n: usize, k: usize, m: usize, s: usize, r: usize },
    #[error("column space of dimension {0} exceeds 63 bits")]
    ColumnSpace(usize),
    #[error("generator {0} is not an automorphism of the base code")]
    NotAutomorphism(usize),
    #[error("level {level} exceeded {cap} sequences")]
    Capacity { level: usize, cap: usize, transcript: Transcript },
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Gf2(#[from] Gf2Error),
}

/// Extension of an `[m, s]` code `D` by `r` coordinates to an `[m + r, s + r]`
/// code of the target type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtensionProblem {
    pub base: Code,
    pub r: usize,
    pub target: CodeType,
    pub generators: Vec<Permutation>,
    /// Require the word that is one on the last `j + 1` coordinates to lie
    /// in the dual of `D_j`.
    pub dual_word: bool,
    pub group_cap: usize,
    pub level_cap: usize,
}

impl ExtensionProblem {
    pub fn new(base: Code, r: usize, target: CodeType, generators: Vec<Permutation>) -> Result<Self, ExtendError> {
        let (m, s) = (base.len(), base.dimension());
        if target.n != m + r || target.k != s + r {
            return Err(ExtendError::Parameters { n: target.n, k: target.k, m, s, r });
        }
        if m - s > 63 {
            return Err(ExtendError::ColumnSpace(m - s));
        }
        for (i, g) in generators.iter().enumerate() {
            if !is_isomorphism(&base, &base, g)? {
                return Err(ExtendError::NotAutomorphism(i));
            }
        }
        Ok(Self {
            base,
            r,
            target,
            generators,
            dual_word: false,
            group_cap: DEFAULT_GROUP_CAP,
            level_cap: DEFAULT_LEVEL_CAP,
        })
    }

    pub fn with_dual_word(mut self, on: bool) -> Self {
        self.dual_word = on;
        self
    }

    /// Dimension of the column space `V`.
    pub fn column_dim(&self) -> usize {
        self.base.len() - self.base.dimension()
    }

    pub fn dual_matrix(&self) -> BitMatrix {
        self.base.dual_basis()
    }
}

/// Nondecreasing columns of `V`, each an integer whose most significant bit
/// is the entry in the first dual basis row.
pub type LexSequence = Vec<u64>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TLevel {
    pub j: usize,
    pub sequences: Vec<LexSequence>,
}

impl TLevel {
    pub fn root() -> Self {
        Self { j: 0, sequences: vec![Vec::new()] }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LevelStats {
    pub j: usize,
    pub candidates: usize,
    pub admissible: usize,
    pub minimal: usize,
}

impl fmt::Display for LevelStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "LEVEL {} candidates={} admissible={} minimal={}",
            self.j, self.candidates, self.admissible, self.minimal
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Transcript {
    pub levels: Vec<LevelStats>,
    /// Size of the final level, once reached.
    pub result: Option<usize>,
}

impl fmt::Display for Transcript {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.levels {
            writeln!(f, "{l}")?;
        }
        if let Some(t) = self.result {
            writeln!(f, "RESULT {} count={t}", if t == 0 { "empty" } else { "nonempty" })?;
        }
        Ok(())
    }
}

/// An invertible matrix acting on `V`, stored as the images of the basis
/// columns (`cols[l]` is the image of the column with only bit `l` set).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ColumnAction {
    pub cols: Vec<u64>,
}

impl ColumnAction {
    pub fn identity(t: usize) -> Self {
        Self { cols: (0..t).map(|l| 1u64 << l).collect() }
    }

    pub fn apply(&self, c: u64) -> u64 {
        let mut out = 0;
        let mut rest = c;
        while rest != 0 {
            let l = rest.trailing_zeros() as usize;
            out ^= self.cols[l];
            rest &= rest - 1;
        }
        out
    }

    /// `self` first, then `other`.
    pub fn then(&self, other: &ColumnAction) -> ColumnAction {
        ColumnAction { cols: self.cols.iter().map(|&c| other.apply(c)).collect() }
    }

    pub fn apply_sequence(&self, seq: &[u64]) -> LexSequence {
        let mut out: Vec<u64> = seq.iter().map(|&c| self.apply(c)).collect();
        out.sort_unstable();
        out
    }
}

fn column_value(bits: impl Iterator<Item = bool>, t: usize) -> u64 {
    bits.enumerate().fold(0u64, |acc, (i, b)| if b { acc | (1 << (t - 1 - i)) } else { acc })
}

/// The map `c -> A^{-1} c` where `g(M) = A M` for the dual basis `M`.
pub fn induced_column_action(g: &Permutation, m: &BitMatrix) -> Result<ColumnAction, ExtendError> {
    let t = m.nrows();
    let gm = g.apply_matrix(m)?;
    // Rows of A^{-1} express the rows of M in terms of the rows of g(M).
    let mut inv_rows = Vec::with_capacity(t);
    for row in m.rows() {
        let combo = gm.solve_combination(row).ok_or(ExtendError::Group(GroupError::NotAutomorphism))?;
        inv_rows.push(combo);
    }
    if gm.rank() != t {
        return Err(ExtendError::Group(GroupError::NotAutomorphism));
    }
    // Column l of A^{-1}, as a value in V.
    let cols = (0..t)
        .map(|l| {
            let bit = t - 1 - l;
            column_value(inv_rows.iter().map(|r| r.get(bit)), t)
        })
        .collect();
    Ok(ColumnAction { cols })
}

/// `[M | c_1 | ... | c_j]` for a sequence of columns.
pub fn extended_matrix(m: &BitMatrix, seq: &[u64]) -> BitMatrix {
    let t = m.nrows();
    let mut out = m.clone();
    for &c in seq {
        let col = BitWord::from_bits(&(0..t).map(|i| c >> (t - 1 - i) & 1 == 1).collect::<Vec<_>>());
        out = out.with_column(&col).expect("column has one bit per row");
    }
    out
}

/// The code `D_j` determined by a sequence.
pub fn code_of(problem: &ExtensionProblem, seq: &[u64]) -> Code {
    Code::span(&extended_matrix(&problem.dual_matrix(), seq).nullspace())
}

fn admissible_with(problem: &ExtensionProblem, m: &BitMatrix, seq: &[u64]) -> bool {
    let mj = extended_matrix(m, seq);
    let j = seq.len();
    let len = problem.base.len() + j;
    let code = Code::span(&mj.nullspace());
    if code.dimension() != problem.base.dimension() + j {
        return false;
    }
    if problem.target.even && !code.is_even() {
        return false;
    }
    if code.dimension() > 0 && code.min_weight().map_or(true, |w| w < problem.target.d) {
        return false;
    }
    if problem.dual_word && j > 0 {
        let w = BitWord::from_support(len, len - j - 1..len);
        if !mj.span_contains(&w).expect("lengths agree") {
            return false;
        }
    }
    true
}

/// Whether `D_j` is consistent with the target type.
pub fn admissible(problem: &ExtensionProblem, seq: &[u64]) -> bool {
    admissible_with(problem, &problem.dual_matrix(), seq)
}

/// Whether no group element maps `seq` to a lexicographically smaller
/// sorted sequence.
pub fn is_g_minimal(seq: &[u64], actions: &[ColumnAction]) -> bool {
    actions.iter().all(|a| a.apply_sequence(seq).as_slice() >= seq)
}

/// The column actions used for minimality: the closed group when it has at
/// most `cap` elements, else the generators alone (which can only keep
/// extra sequences).
pub fn column_group(problem: &ExtensionProblem) -> Result<(Vec<ColumnAction>, bool), ExtendError> {
    let m = problem.dual_matrix();
    let t = m.nrows();
    let last = problem.base.len().checked_sub(1);
    let mut gens = Vec::new();
    for g in &problem.generators {
        gens.push(induced_column_action(g, &m)?);
    }
    let id = ColumnAction::identity(t);
    let mut seen = BTreeSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in &gens {
            let y = x.then(g);
            if seen.insert(y.clone()) {
                if seen.len() > problem.group_cap {
                    return Ok((gens, false));
                }
                queue.push_back(y);
            }
        }
    }
    if problem.dual_word {
        if let Some(last) = last {
            // Only elements fixing the padding coordinate keep the normalized
            // dual word; recompute their actions.
            let perms = match crate::groups::closure(&problem.generators, problem.base.len(), problem.group_cap) {
                Ok(p) => p,
                Err(GroupError::Capacity(_)) => return Ok((vec![ColumnAction::identity(t)], false)),
                Err(e) => return Err(e.into()),
            };
            let mut kept = BTreeSet::new();
            for p in perms.iter().filter(|p| p.apply(last) == last) {
                kept.insert(induced_column_action(p, &m)?);
            }
            return Ok((kept.into_iter().collect(), true));
        }
    }
    Ok((seen.into_iter().collect(), true))
}

/// `T_j` from `T_{j-1}`.
pub fn extend_level(
    problem: &ExtensionProblem,
    prev: &TLevel,
    actions: &[ColumnAction],
) -> Result<(TLevel, LevelStats), ExtendError> {
    let m = problem.dual_matrix();
    let t = m.nrows();
    let top: u64 = if t == 0 { 0 } else { (1u64 << t) - 1 };
    let j = prev.j + 1;
    let mut stats = LevelStats { j, candidates: 0, admissible: 0, minimal: 0 };
    let mut next = Vec::new();
    for x in &prev.sequences {
        let start = x.last().copied().unwrap_or(0);
        for c in start..=top {
            stats.candidates += 1;
            let mut y = x.clone();
            y.push(c);
            if !admissible_with(problem, &m, &y) {
                continue;
            }
            stats.admissible += 1;
            if !is_g_minimal(&y, actions) {
                continue;
            }
            stats.minimal += 1;
            if next.len() >= problem.level_cap {
                return Err(ExtendError::Capacity {
                    level: j,
                    cap: problem.level_cap,
                    transcript: Transcript::default(),
                });
            }
            next.push(y);
        }
    }
    next.sort_unstable();
    Ok((TLevel { j, sequences: next }, stats))
}

/// Computes `T_1, .., T_r`; an empty final level proves that no extension
/// exists.
pub fn run_extension_search(problem: &ExtensionProblem) -> Result<(TLevel, Transcript), ExtendError> {
    let (actions, _) = column_group(problem)?;
    let mut transcript = Transcript::default();
    let mut level = TLevel::root();
    for _ in 0..problem.r {
        match extend_level(problem, &level, &actions) {
            Ok((next, stats)) => {
                transcript.levels.push(stats);
                level = next;
            }
            Err(ExtendError::Capacity { level, cap, .. }) => {
                return Err(ExtendError::Capacity { level, cap, transcript });
            }
            Err(e) => return Err(e),
        }
    }
    transcript.result = Some(level.sequences.len());
    Ok((level, transcript))
}

/// Representatives after merging codes joined by a verified isomorphism.
/// Merges are exact; distinctness of the representatives is not proven.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsomorphismClasses {
    pub representatives: Vec<Code>,
    /// `(code index, representative index, isomorphism)` for each merge.
    pub merges: Vec<(usize, usize, Permutation)>,
}

pub fn reduce_up_to_isomorphism(
    codes: &[Code],
    iters: usize,
    restarts: usize,
    seed: u64,
) -> Result<IsomorphismClasses, ExtendError> {
    let mut reps: Vec<Code> = Vec::new();
    let mut merges = Vec::new();
    'codes: for (i, c) in codes.iter().enumerate() {
        let dist = c.weight_distribution()?;
        for (ri, rep) in reps.iter().enumerate() {
            if rep.weight_distribution()? != dist {
                continue;
            }
            if let Some(p) = stochastic_isomorphism_search(c, rep, iters, restarts, seed)? {
                merges.push((i, ri, p));
                continue 'codes;
            }
        }
        reps.push(c.clone());
    }
    Ok(IsomorphismClasses { representatives: reps, merges })
}
