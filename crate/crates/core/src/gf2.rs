//! Dense linear algebra over the two-element field.
//!
//! Words are packed into `u64` limbs, bit `i` of a word living in limb
//! `i / 64` at position `i % 64`. Text forms print coordinate 1 first, the
//! way codewords are usually listed by hand.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::Range;
use core::str::FromStr;

use thiserror::Error;

/// Largest dimension [`Code::enumerate_codewords`] will expand by default.
pub const DEFAULT_ENUMERATION_CAP: usize = 22;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Gf2Error {
    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("dimension {dimension} exceeds the enumeration cap {cap}")]
    Capacity { dimension: usize, cap: usize },
    #[error("invalid bit character {0:?}")]
    InvalidBit(char),
    #[error("empty word")]
    Empty,
    #[error("rows are linearly dependent")]
    Dependent,
    #[error("code has no nonzero words")]
    ZeroDimension,
    #[error("invalid partition: {0}")]
    Partition(&'static str),
}

fn limbs_for(len: usize) -> usize {
    len.div_ceil(64)
}

/// A vector over the two-element field of fixed length.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitWord {
    len: usize,
    limbs: Vec<u64>,
}

impl BitWord {
    pub fn zeros(len: usize) -> Self {
        Self { len, limbs: vec![0; limbs_for(len)] }
    }

    pub fn ones(len: usize) -> Self {
        let mut w = Self::zeros(len);
        w.set_range(0..len, true);
        w
    }

    /// Builds a word from its 0/1 values.
    pub fn from_bits(bits: &[bool]) -> Self {
        let mut w = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                w.set(i, true);
            }
        }
        w
    }

    /// The word of length `len` with ones exactly at `positions`.
    pub fn from_support(len: usize, positions: impl IntoIterator<Item = usize>) -> Self {
        let mut w = Self::zeros(len);
        for p in positions {
            w.set(p, true);
        }
        w
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.limbs[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i % 64);
        if value {
            self.limbs[i / 64] |= mask;
        } else {
            self.limbs[i / 64] &= !mask;
        }
    }

    pub fn flip(&mut self, i: usize) {
        self.limbs[i / 64] ^= 1u64 << (i % 64);
    }

    pub fn set_range(&mut self, range: Range<usize>, value: bool) {
        for i in range {
            self.set(i, value);
        }
    }

    pub fn weight(&self) -> usize {
        self.limbs.iter().map(|l| l.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.limbs.iter().all(|&l| l == 0)
    }

    /// Number of ones inside `range`.
    pub fn weight_in(&self, range: Range<usize>) -> usize {
        range.filter(|&i| self.get(i)).count()
    }

    pub fn xor_assign(&mut self, other: &BitWord) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.limbs.iter_mut().zip(&other.limbs) {
            *a ^= *b;
        }
    }

    pub fn xor(&self, other: &BitWord) -> BitWord {
        let mut w = self.clone();
        w.xor_assign(other);
        w
    }

    /// Parity of the overlap of the two supports.
    pub fn dot(&self, other: &BitWord) -> bool {
        let ones: u32 = self.limbs.iter().zip(&other.limbs).map(|(a, b)| (a & b).count_ones()).sum();
        ones % 2 == 1
    }

    pub fn ones_iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.get(i))
    }

    /// Lowest coordinate holding a one.
    pub fn leading_one(&self) -> Option<usize> {
        for (li, &l) in self.limbs.iter().enumerate() {
            if l != 0 {
                return Some(li * 64 + l.trailing_zeros() as usize);
            }
        }
        None
    }

    /// Appends the bits of `other` after the bits of `self`.
    pub fn concat(&self, other: &BitWord) -> BitWord {
        let mut w = BitWord::zeros(self.len + other.len);
        for i in self.ones_iter() {
            w.set(i, true);
        }
        for i in other.ones_iter() {
            w.set(self.len + i, true);
        }
        w
    }

    /// The word restricted to `range`.
    pub fn slice(&self, range: Range<usize>) -> BitWord {
        let start = range.start;
        let mut w = BitWord::zeros(range.len());
        for i in range {
            if self.get(i) {
                w.set(i - start, true);
            }
        }
        w
    }

    /// Formats the word with a space at every block boundary of `p`.
    pub fn to_blocked_string(&self, p: &Partition) -> String {
        let mut s = String::with_capacity(self.len + p.len());
        for (bi, range) in p.blocks().enumerate() {
            if bi > 0 {
                s.push(' ');
            }
            for i in range {
                s.push(if self.get(i) { '1' } else { '0' });
            }
        }
        s
    }

    /// The word read as an unsigned integer with coordinate 0 most
    /// significant. Only meaningful for `len <= 64`.
    pub fn to_u64_msb_first(&self) -> u64 {
        debug_assert!(self.len <= 64);
        (0..self.len).fold(0u64, |acc, i| (acc << 1) | self.get(i) as u64)
    }

    pub fn from_u64_msb_first(value: u64, len: usize) -> BitWord {
        let mut w = BitWord::zeros(len);
        for i in 0..len {
            if value >> (len - 1 - i) & 1 == 1 {
                w.set(i, true);
            }
        }
        w
    }
}

impl PartialOrd for BitWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Lexicographic on the text form: coordinate 0 is most significant.
impl Ord for BitWord {
    fn cmp(&self, other: &Self) -> Ordering {
        for i in 0..self.len.min(other.len) {
            match (self.get(i), other.get(i)) {
                (false, true) => return Ordering::Less,
                (true, false) => return Ordering::Greater,
                _ => {}
            }
        }
        self.len.cmp(&other.len)
    }
}

impl fmt::Display for BitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitWord({self})")
    }
}

/// Parses a string of `0`/`1`, ignoring whitespace.
impl FromStr for BitWord {
    type Err = Gf2Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut bits = Vec::with_capacity(s.len());
        for c in s.chars() {
            match c {
                '0' => bits.push(false),
                '1' => bits.push(true),
                c if c.is_whitespace() => {}
                c => return Err(Gf2Error::InvalidBit(c)),
            }
        }
        if bits.is_empty() {
            return Err(Gf2Error::Empty);
        }
        Ok(BitWord::from_bits(&bits))
    }
}

/// A list of equal-length rows.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    ncols: usize,
    rows: Vec<BitWord>,
}

impl BitMatrix {
    pub fn new(ncols: usize) -> Self {
        Self { ncols, rows: Vec::new() }
    }

    pub fn identity(n: usize) -> Self {
        let rows = (0..n).map(|i| BitWord::from_support(n, [i])).collect();
        Self { ncols: n, rows }
    }

    pub fn from_rows(ncols: usize, rows: Vec<BitWord>) -> Result<Self, Gf2Error> {
        for r in &rows {
            if r.len() != ncols {
                return Err(Gf2Error::LengthMismatch { expected: ncols, found: r.len() });
            }
        }
        Ok(Self { ncols, rows })
    }

    /// Parses rows from `0`/`1` strings; all must share one length.
    pub fn parse_rows<S: AsRef<str>>(rows: &[S]) -> Result<Self, Gf2Error> {
        let words = rows.iter().map(|r| r.as_ref().parse::<BitWord>()).collect::<Result<Vec<_>, _>>()?;
        let ncols = words.first().map_or(0, BitWord::len);
        Self::from_rows(ncols, words)
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[BitWord] {
        &self.rows
    }

    pub fn into_rows(self) -> Vec<BitWord> {
        self.rows
    }

    pub fn push(&mut self, row: BitWord) -> Result<(), Gf2Error> {
        if row.len() != self.ncols {
            return Err(Gf2Error::LengthMismatch { expected: self.ncols, found: row.len() });
        }
        self.rows.push(row);
        Ok(())
    }

    /// Rows of `self` followed by rows of `other`.
    pub fn stack(&self, other: &BitMatrix) -> Result<BitMatrix, Gf2Error> {
        if self.ncols != other.ncols {
            return Err(Gf2Error::LengthMismatch { expected: self.ncols, found: other.ncols });
        }
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        Ok(BitMatrix { ncols: self.ncols, rows })
    }

    /// Reduced row echelon form with pivots leftmost; zero rows dropped.
    pub fn reduce(&self) -> BitMatrix {
        let (rows, _) = rref(self.rows.clone(), self.ncols);
        BitMatrix { ncols: self.ncols, rows }
    }

    /// Pivot columns of the reduced form, in increasing order.
    pub fn pivots(&self) -> Vec<usize> {
        rref(self.rows.clone(), self.ncols).1
    }

    pub fn rank(&self) -> usize {
        rref(self.rows.clone(), self.ncols).0.len()
    }

    /// Whether `w` is a sum of rows.
    pub fn span_contains(&self, w: &BitWord) -> Result<bool, Gf2Error> {
        if w.len() != self.ncols {
            return Err(Gf2Error::LengthMismatch { expected: self.ncols, found: w.len() });
        }
        let (rows, pivots) = rref(self.rows.clone(), self.ncols);
        Ok(reduce_against(w, &rows, &pivots).is_zero())
    }

    /// Basis of the words orthogonal to every row, in reduced form.
    pub fn nullspace(&self) -> BitMatrix {
        let n = self.ncols;
        let (rows, pivots) = rref(self.rows.clone(), n);
        let mut is_pivot = vec![false; n];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for free in (0..n).filter(|&c| !is_pivot[c]) {
            let mut v = BitWord::zeros(n);
            v.set(free, true);
            for (row, &p) in rows.iter().zip(&pivots) {
                if row.get(free) {
                    v.set(p, true);
                }
            }
            basis.push(v);
        }
        BitMatrix { ncols: n, rows: basis }.reduce()
    }

    /// The column at index `c` as a word of length `nrows`.
    pub fn column(&self, c: usize) -> BitWord {
        BitWord::from_bits(&self.rows.iter().map(|r| r.get(c)).collect::<Vec<_>>())
    }

    /// Appends one column; `col` must have `nrows` bits.
    pub fn with_column(&self, col: &BitWord) -> Result<BitMatrix, Gf2Error> {
        if col.len() != self.rows.len() {
            return Err(Gf2Error::LengthMismatch { expected: self.rows.len(), found: col.len() });
        }
        let rows = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let mut w = r.concat(&BitWord::zeros(1));
                w.set(self.ncols, col.get(i));
                w
            })
            .collect();
        Ok(BitMatrix { ncols: self.ncols + 1, rows })
    }

    pub fn transpose(&self) -> BitMatrix {
        let rows = (0..self.ncols).map(|c| self.column(c)).collect();
        BitMatrix { ncols: self.rows.len(), rows }
    }

    /// Expresses `w` as a combination of the rows, if possible. Bit `i` of the
    /// result selects row `i`.
    pub fn solve_combination(&self, w: &BitWord) -> Option<BitWord> {
        // Track row provenance by augmenting with an identity block.
        let m = self.rows.len();
        let aug: Vec<BitWord> =
            self.rows.iter().enumerate().map(|(i, r)| r.concat(&BitWord::from_support(m, [i]))).collect();
        let (rows, pivots) = rref(aug, self.ncols + m);
        let mut target = w.concat(&BitWord::zeros(m));
        for (row, &p) in rows.iter().zip(&pivots) {
            if p >= self.ncols {
                break;
            }
            if target.get(p) {
                target.xor_assign(row);
            }
        }
        if !target.slice(0..self.ncols).is_zero() {
            return None;
        }
        Some(target.slice(self.ncols..self.ncols + m))
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.rows.iter().map(|r| alloc::format!("{r}"))).finish()
    }
}

fn rref(mut rows: Vec<BitWord>, ncols: usize) -> (Vec<BitWord>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| rows[i].get(c)) else {
            continue;
        };
        rows.swap(r, p);
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && row.get(c) {
                row.xor_assign(&pivot_row);
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    (rows, pivots)
}

fn reduce_against(w: &BitWord, rows: &[BitWord], pivots: &[usize]) -> BitWord {
    let mut v = w.clone();
    for (row, &p) in rows.iter().zip(pivots) {
        if v.get(p) {
            v.xor_assign(row);
        }
    }
    v
}

/// A binary linear code, stored by a reduced generator matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Code {
    generators: BitMatrix,
}

impl Code {
    /// The row space of `m`.
    pub fn span(m: &BitMatrix) -> Code {
        Code { generators: m.reduce() }
    }

    /// A code from independent generators.
    pub fn from_basis(m: &BitMatrix) -> Result<Code, Gf2Error> {
        let reduced = m.reduce();
        if reduced.nrows() != m.nrows() {
            return Err(Gf2Error::Dependent);
        }
        Ok(Code { generators: reduced })
    }

    pub fn parse_rows<S: AsRef<str>>(rows: &[S]) -> Result<Code, Gf2Error> {
        Code::from_basis(&BitMatrix::parse_rows(rows)?)
    }

    /// The `[n, 0]` code.
    pub fn zero(n: usize) -> Code {
        Code { generators: BitMatrix::new(n) }
    }

    pub fn full(n: usize) -> Code {
        Code { generators: BitMatrix::identity(n) }
    }

    pub fn repetition(n: usize) -> Code {
        Code { generators: BitMatrix { ncols: n, rows: vec![BitWord::ones(n)] } }
    }

    pub fn even_weight(n: usize) -> Code {
        Code::repetition(n).dual()
    }

    pub fn generators(&self) -> &BitMatrix {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.ncols()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dimension(&self) -> usize {
        self.generators.nrows()
    }

    pub fn contains(&self, w: &BitWord) -> Result<bool, Gf2Error> {
        if w.len() != self.len() {
            return Err(Gf2Error::LengthMismatch { expected: self.len(), found: w.len() });
        }
        Ok(reduce_against(w, self.generators.rows(), &self.generators.pivots()).is_zero())
    }

    pub fn dual_basis(&self) -> BitMatrix {
        self.generators.nullspace()
    }

    pub fn dual(&self) -> Code {
        Code { generators: self.dual_basis() }
    }

    /// All `2^k` codewords, in Gray-code order starting from zero.
    pub fn enumerate_codewords(&self) -> Result<Vec<BitWord>, Gf2Error> {
        self.enumerate_codewords_capped(DEFAULT_ENUMERATION_CAP)
    }

    pub fn enumerate_codewords_capped(&self, cap: usize) -> Result<Vec<BitWord>, Gf2Error> {
        let k = self.dimension();
        if k > cap {
            return Err(Gf2Error::Capacity { dimension: k, cap });
        }
        let mut out = Vec::with_capacity(1 << k);
        self.for_each_codeword(cap, |w| out.push(w.clone()))?;
        Ok(out)
    }

    /// Visits every codeword without collecting them.
    pub fn for_each_codeword(&self, cap: usize, mut f: impl FnMut(&BitWord)) -> Result<(), Gf2Error> {
        let k = self.dimension();
        if k > cap {
            return Err(Gf2Error::Capacity { dimension: k, cap });
        }
        let rows = self.generators.rows();
        let mut w = BitWord::zeros(self.len());
        f(&w);
        for i in 1u64..(1u64 << k) {
            w.xor_assign(&rows[i.trailing_zeros() as usize]);
            f(&w);
        }
        Ok(())
    }

    /// Number of codewords of each weight `0..=n`.
    pub fn weight_distribution(&self) -> Result<Vec<u64>, Gf2Error> {
        let mut dist = vec![0u64; self.len() + 1];
        self.for_each_codeword(DEFAULT_ENUMERATION_CAP, |w| dist[w.weight()] += 1)?;
        Ok(dist)
    }

    pub fn min_weight(&self) -> Result<usize, Gf2Error> {
        if self.dimension() == 0 {
            return Err(Gf2Error::ZeroDimension);
        }
        let dist = self.weight_distribution()?;
        Ok(dist.iter().enumerate().skip(1).find(|(_, &c)| c > 0).map(|(w, _)| w).unwrap_or(0))
    }

    pub fn is_even(&self) -> bool {
        self.generators.rows().iter().all(|r| r.weight() % 2 == 0)
    }

    /// The code with one all-zero coordinate appended.
    pub fn with_zero_coordinate(&self) -> Code {
        let rows = self.generators.rows().iter().map(|r| r.concat(&BitWord::zeros(1))).collect();
        Code { generators: BitMatrix { ncols: self.len() + 1, rows } }
    }

    /// Codewords vanishing on `support`, restricted to the other coordinates.
    pub fn shorten_on(&self, support: &BitWord) -> Code {
        let n = self.len();
        let keep: Vec<usize> = (0..n).filter(|&i| !support.get(i)).collect();
        // Kernel of the restriction onto the support: solve over generator
        // combinations whose support part vanishes.
        let k = self.dimension();
        let restricted = BitMatrix {
            ncols: support.weight(),
            rows: self
                .generators
                .rows()
                .iter()
                .map(|r| BitWord::from_bits(&support.ones_iter().map(|i| r.get(i)).collect::<Vec<_>>()))
                .collect(),
        };
        // Combinations c with c^T R = 0 are the nullspace of R^T.
        let combos = restricted.transpose().nullspace();
        let rows = combos
            .rows()
            .iter()
            .map(|c| {
                let mut w = BitWord::zeros(n);
                for i in 0..k {
                    if c.get(i) {
                        w.xor_assign(&self.generators.rows()[i]);
                    }
                }
                BitWord::from_bits(&keep.iter().map(|&i| w.get(i)).collect::<Vec<_>>())
            })
            .collect();
        Code::span(&BitMatrix { ncols: keep.len(), rows })
    }
}

impl fmt::Debug for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Code[{},{}]{:?}", self.len(), self.dimension(), self.generators)
    }
}

/// Sizes of consecutive coordinate blocks.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    pub fn new(parts: Vec<usize>) -> Result<Self, Gf2Error> {
        if parts.is_empty() {
            return Err(Gf2Error::Partition("no blocks"));
        }
        if parts.contains(&0) {
            return Err(Gf2Error::Partition("empty block"));
        }
        Ok(Self { parts })
    }

    /// The single-block partition of `n`.
    pub fn trivial(n: usize) -> Self {
        Self { parts: vec![n] }
    }

    pub fn unit(n: usize) -> Self {
        Self { parts: vec![1; n] }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// Number of blocks.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Total length.
    pub fn n(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn blocks(&self) -> impl Iterator<Item = Range<usize>> + '_ {
        self.parts.iter().scan(0, |start, &p| {
            let r = *start..*start + p;
            *start += p;
            Some(r)
        })
    }

    pub fn block_of(&self, coord: usize) -> Option<usize> {
        self.blocks().position(|r| r.contains(&coord))
    }

    /// Per-block weights of `w`.
    pub fn multiweight(&self, w: &BitWord) -> Result<Multiweight, Gf2Error> {
        if w.len() != self.n() {
            return Err(Gf2Error::LengthMismatch { expected: self.n(), found: w.len() });
        }
        Ok(Multiweight(self.blocks().map(|r| w.weight_in(r)).collect()))
    }

    /// Number of multiweights, i.e. `prod (p_i + 1)`.
    pub fn multiweight_count(&self) -> usize {
        self.parts.iter().map(|p| p + 1).product()
    }

    /// Every multiweight, last block varying fastest.
    pub fn all_multiweights(&self) -> MultiweightIter<'_> {
        MultiweightIter { parts: &self.parts, next: Some(vec![0; self.parts.len()]) }
    }

    /// Word that is all ones on the blocks selected by `pattern`.
    pub fn expand_pattern(&self, pattern: &[bool]) -> BitWord {
        let mut w = BitWord::zeros(self.n());
        for (range, &on) in self.blocks().zip(pattern) {
            if on {
                w.set_range(range, true);
            }
        }
        w
    }

    /// Whether `self` splits each block of `coarse` into consecutive pieces.
    /// Returns the index of the coarse block containing each fine block.
    pub fn refines(&self, coarse: &Partition) -> Option<Vec<usize>> {
        if self.n() != coarse.n() {
            return None;
        }
        let mut owner = Vec::with_capacity(self.len());
        let mut ci = 0;
        let mut filled = 0;
        for &p in &self.parts {
            filled += p;
            if filled > coarse.parts[ci] {
                return None;
            }
            owner.push(ci);
            if filled == coarse.parts[ci] {
                ci += 1;
                filled = 0;
            }
        }
        Some(owner)
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Partition({self})")
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

pub struct MultiweightIter<'a> {
    parts: &'a [usize],
    next: Option<Vec<usize>>,
}

impl Iterator for MultiweightIter<'_> {
    type Item = Multiweight;

    fn next(&mut self) -> Option<Multiweight> {
        let cur = self.next.take()?;
        let mut succ = cur.clone();
        let mut i = succ.len();
        let mut done = true;
        while i > 0 {
            i -= 1;
            if succ[i] < self.parts[i] {
                succ[i] += 1;
                done = false;
                break;
            }
            succ[i] = 0;
        }
        if !done {
            self.next = Some(succ);
        }
        Some(Multiweight(cur))
    }
}

/// Per-block weights `(a_1, ..., a_r)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Multiweight(pub Vec<usize>);

impl Multiweight {
    pub fn zero(r: usize) -> Self {
        Multiweight(vec![0; r])
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn entries(&self) -> &[usize] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&a| a == 0)
    }

    /// Sums entries over the coarse blocks given by `owner` (see
    /// [`Partition::refines`]).
    pub fn coarsen(&self, owner: &[usize], coarse_len: usize) -> Multiweight {
        let mut out = vec![0; coarse_len];
        for (a, &o) in self.0.iter().zip(owner) {
            out[o] += a;
        }
        Multiweight(out)
    }

    /// Whether `0 <= a_i <= p_i` for every block.
    pub fn fits(&self, p: &Partition) -> bool {
        self.0.len() == p.len() && self.0.iter().zip(p.parts()).all(|(a, p)| a <= p)
    }
}

impl fmt::Debug for Multiweight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// The `x_a1_a2_..` variable spelling.
impl fmt::Display for Multiweight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("x")?;
        for a in &self.0 {
            write!(f, "_{a}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::collections::BTreeSet;

    fn m(rows: &[&str]) -> BitMatrix {
        BitMatrix::parse_rows(rows).unwrap()
    }

    fn w(s: &str) -> BitWord {
        s.parse().unwrap()
    }

    fn brute_span(mat: &BitMatrix) -> BTreeSet<BitWord> {
        let k = mat.nrows();
        (0u32..1 << k)
            .map(|mask| {
                let mut v = BitWord::zeros(mat.ncols());
                for i in 0..k {
                    if mask >> i & 1 == 1 {
                        v.xor_assign(&mat.rows()[i]);
                    }
                }
                v
            })
            .collect()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(BitMatrix::identity(3).rank(), 3);
        let dependent = m(&["110", "101", "011"]);
        assert_eq!(dependent.rank(), 2);
        assert_eq!(brute_span(&dependent).len(), 4);
        assert_eq!(BitMatrix::new(5).rank(), 0);
    }

    #[test]
    fn span_membership() {
        let mat = m(&["110", "011"]);
        assert!(mat.span_contains(&w("000")).unwrap());
        assert!(mat.span_contains(&w("101")).unwrap());
        assert!(!mat.span_contains(&w("100")).unwrap());
        assert!(!brute_span(&mat).contains(&w("100")));
        assert_eq!(mat.span_contains(&w("10")), Err(Gf2Error::LengthMismatch { expected: 3, found: 2 }));
    }

    #[test]
    fn dual_of_repetition_is_even_weight() {
        let rep = Code::repetition(3);
        let dual = rep.dual_basis();
        // brute force: every word with even overlap with 111
        let expected: BTreeSet<BitWord> =
            (0u64..8).map(|v| BitWord::from_u64_msb_first(v, 3)).filter(|v| v.weight() % 2 == 0).collect();
        assert_eq!(brute_span(&dual), expected);
        assert_eq!(Code::span(&dual), Code::span(&m(&["110", "011"])));
        assert_eq!(Code::full(4).dual_basis().nrows(), 0);
    }

    #[test]
    fn enumeration_small_codes() {
        let rep: BTreeSet<_> = Code::repetition(3).enumerate_codewords().unwrap().into_iter().collect();
        assert_eq!(rep, [w("000"), w("111")].into_iter().collect());
        let even: BTreeSet<_> = Code::even_weight(3).enumerate_codewords().unwrap().into_iter().collect();
        assert_eq!(even, [w("000"), w("110"), w("101"), w("011")].into_iter().collect());
        assert_eq!(Code::even_weight(3).min_weight().unwrap(), 2);
        assert_eq!(Code::repetition(3).min_weight().unwrap(), 3);
        assert_eq!(Code::zero(3).min_weight(), Err(Gf2Error::ZeroDimension));
    }

    #[test]
    fn enumeration_cap() {
        let c = Code::full(5);
        assert_eq!(c.enumerate_codewords_capped(4), Err(Gf2Error::Capacity { dimension: 5, cap: 4 }));
    }

    #[test]
    fn multiweight_examples() {
        let p = Partition::new(vec![10, 10, 11]).unwrap();
        let word = w("1111111111 1111111111 00000000000");
        assert_eq!(p.multiweight(&word).unwrap().0, vec![10, 10, 0]);
        let p = Partition::new(vec![18, 6, 7]).unwrap();
        let dual = w("000000000000000000 000000 1111111");
        assert_eq!(p.multiweight(&dual).unwrap().0, vec![0, 0, 7]);
        assert!(p.multiweight(&BitWord::zeros(31)).unwrap().is_zero());
        assert!(p.multiweight(&BitWord::zeros(30)).is_err());
        assert_eq!(
            word.to_blocked_string(&Partition::new(vec![10, 10, 11]).unwrap()),
            "1111111111 1111111111 00000000000"
        );
    }

    #[test]
    fn partition_refinement() {
        let coarse = Partition::new(vec![20, 11]).unwrap();
        let fine = Partition::new(vec![10, 10, 11]).unwrap();
        assert_eq!(fine.refines(&coarse), Some(vec![0, 0, 1]));
        let bad = Partition::new(vec![10, 15, 6]).unwrap();
        assert_eq!(bad.refines(&coarse), None);
        assert!(Partition::new(vec![]).is_err());
        assert!(Partition::new(vec![3, 0]).is_err());
        assert_eq!(Partition::new(vec![2, 1]).unwrap().all_multiweights().count(), 6);
    }

    #[test]
    fn solve_combination_recovers_rows() {
        let mat = m(&["1100", "0110", "0011"]);
        let sol = mat.solve_combination(&w("1001")).unwrap();
        assert_eq!(sol, w("111"));
        assert!(mat.solve_combination(&w("1000")).is_none());
    }

    #[test]
    fn shortening_repetition_pair() {
        // [4,2] code {0000,1100,0011,1111}; vanishing on coordinates 0,1 leaves 0011
        let c = Code::parse_rows(&["1100", "0011"]).unwrap();
        let s = c.shorten_on(&w("1100"));
        assert_eq!(s.len(), 2);
        assert_eq!(s.dimension(), 1);
        assert!(s.contains(&w("11")).unwrap());
    }
}
