//! Coordinate permutations, configuration automorphisms, group orders and
//! the stochastic search for automorphisms and isomorphisms.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::gf2::{BitMatrix, BitWord, Code, Multiweight, Partition};
use crate::model::Configuration;

/// Default element cap of [`closure_order`].
pub const DEFAULT_CLOSURE_CAP: usize = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("permutation of degree {found} applied to {expected} coordinates")]
    Degree { expected: usize, found: usize },
    #[error("not a permutation: {0}")]
    Invalid(String),
    #[error("group closure exceeded {0} elements")]
    Capacity(usize),
    #[error("group order overflows 128 bits")]
    Overflow,
    #[error("permutation is not an automorphism of the configuration")]
    NotAutomorphism,
    #[error("codes have different parameters")]
    Parameters,
}

/// A bijection of `{0, .., n-1}`; text form is the 1-based image list.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Self { images: (0..n).collect() }
    }

    /// From 0-based images.
    pub fn from_images(images: Vec<usize>) -> Result<Self, GroupError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return Err(GroupError::Invalid(alloc::format!("{images:?}")));
            }
            seen[i] = true;
        }
        Ok(Self { images })
    }

    /// From 1-based images, as written in scripts.
    pub fn from_one_based(images: &[usize]) -> Result<Self, GroupError> {
        if images.contains(&0) {
            return Err(GroupError::Invalid(alloc::format!("{images:?}")));
        }
        Self::from_images(images.iter().map(|i| i - 1).collect())
    }

    /// Swaps two coordinates.
    pub fn transposition(n: usize, a: usize, b: usize) -> Self {
        let mut p = Self::identity(n);
        p.images.swap(a, b);
        p
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// `self` first, then `other`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        Permutation { images: self.images.iter().map(|&i| other.images[i]).collect() }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.degree()];
        for (i, &j) in self.images.iter().enumerate() {
            inv[j] = i;
        }
        Permutation { images: inv }
    }

    /// Moves coordinate `i` of `w` to coordinate `self(i)`.
    pub fn apply_word(&self, w: &BitWord) -> Result<BitWord, GroupError> {
        if w.len() != self.degree() {
            return Err(GroupError::Degree { expected: w.len(), found: self.degree() });
        }
        Ok(BitWord::from_support(w.len(), w.ones_iter().map(|i| self.images[i])))
    }

    pub fn apply_matrix(&self, m: &BitMatrix) -> Result<BitMatrix, GroupError> {
        let rows = m.rows().iter().map(|r| self.apply_word(r)).collect::<Result<Vec<_>, _>>()?;
        Ok(BitMatrix::from_rows(m.ncols(), rows).expect("permuted rows keep their length"))
    }

    fn first_moved(&self) -> Option<usize> {
        self.images.iter().enumerate().find(|(i, j)| i != *j).map(|(i, _)| i)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, i) in self.images.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", i + 1)?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation({self})")
    }
}

impl FromStr for Permutation {
    type Err = GroupError;

    fn from_str(s: &str) -> Result<Self, GroupError> {
        let images = s
            .split(',')
            .map(|t| t.trim().parse::<usize>().map_err(|_| GroupError::Invalid(s.into())))
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_one_based(&images)
    }
}

/// Generators of a permutation group with an optional claimed order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GeneratorSet {
    pub perms: Vec<Permutation>,
    pub claimed_order: Option<u128>,
}

impl GeneratorSet {
    pub fn new(perms: Vec<Permutation>) -> Self {
        Self { perms, claimed_order: None }
    }

    /// Whether the generated order equals the claimed one.
    pub fn verify_claim(&self, degree: usize) -> Result<bool, GroupError> {
        Ok(match self.claimed_order {
            Some(c) => group_order(&self.perms, degree)? == c,
            None => true,
        })
    }
}

/// Base and strong generating set built by the Schreier-Sims algorithm.
#[derive(Debug, Clone)]
pub struct StabilizerChain {
    degree: usize,
    base: Vec<usize>,
    strong: Vec<Permutation>,
    /// Per base point: orbit point -> element mapping the base point there.
    transversals: Vec<BTreeMap<usize, Permutation>>,
}

impl StabilizerChain {
    pub fn new(gens: &[Permutation], degree: usize) -> Result<Self, GroupError> {
        for g in gens {
            if g.degree() != degree {
                return Err(GroupError::Degree { expected: degree, found: g.degree() });
            }
        }
        let mut chain = Self {
            degree,
            base: Vec::new(),
            strong: gens.iter().filter(|g| !g.is_identity()).cloned().collect(),
            transversals: Vec::new(),
        };
        chain.extend_base();
        chain.rebuild();
        'outer: loop {
            for level in (0..chain.base.len()).rev() {
                let gens = chain.level_generators(level);
                let orbit: Vec<(usize, Permutation)> =
                    chain.transversals[level].iter().map(|(&b, u)| (b, u.clone())).collect();
                for (beta, u) in &orbit {
                    for s in &gens {
                        let image = s.apply(*beta);
                        let back = chain.transversals[level][&image].inverse();
                        let schreier = u.then(s).then(&back);
                        let residue = chain.sift(schreier, level + 1);
                        if !residue.is_identity() {
                            chain.strong.push(residue);
                            chain.extend_base();
                            chain.rebuild();
                            continue 'outer;
                        }
                    }
                }
            }
            break;
        }
        Ok(chain)
    }

    fn extend_base(&mut self) {
        for g in &self.strong {
            if self.base.iter().all(|&b| g.apply(b) == b) {
                let p = g.first_moved().expect("strong generators are not the identity");
                self.base.push(p);
            }
        }
    }

    fn level_generators(&self, level: usize) -> Vec<Permutation> {
        self.strong.iter().filter(|g| self.base[..level].iter().all(|&b| g.apply(b) == b)).cloned().collect()
    }

    fn rebuild(&mut self) {
        self.transversals = (0..self.base.len())
            .map(|level| {
                let gens = self.level_generators(level);
                let b = self.base[level];
                let mut t = BTreeMap::from([(b, Permutation::identity(self.degree))]);
                let mut queue = VecDeque::from([b]);
                while let Some(x) = queue.pop_front() {
                    let ux = t[&x].clone();
                    for g in &gens {
                        let y = g.apply(x);
                        if let alloc::collections::btree_map::Entry::Vacant(e) = t.entry(y) {
                            e.insert(ux.then(g));
                            queue.push_back(y);
                        }
                    }
                }
                t
            })
            .collect();
    }

    /// Divides out transversal elements from `level` on; the identity
    /// residue means membership.
    fn sift(&self, mut g: Permutation, level: usize) -> Permutation {
        for l in level..self.base.len() {
            let beta = g.apply(self.base[l]);
            match self.transversals[l].get(&beta) {
                Some(u) => g = g.then(&u.inverse()),
                None => return g,
            }
        }
        g
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        g.degree() == self.degree && self.sift(g.clone(), 0).is_identity()
    }

    pub fn base(&self) -> &[usize] {
        &self.base
    }

    pub fn order(&self) -> Result<u128, GroupError> {
        self.transversals.iter().try_fold(1u128, |acc, t| acc.checked_mul(t.len() as u128).ok_or(GroupError::Overflow))
    }
}

/// Exact order of the group generated by `gens` (Schreier-Sims).
pub fn group_order(gens: &[Permutation], degree: usize) -> Result<u128, GroupError> {
    StabilizerChain::new(gens, degree)?.order()
}

/// Every element of the generated group, by breadth-first closure.
pub fn closure(gens: &[Permutation], degree: usize, cap: usize) -> Result<Vec<Permutation>, GroupError> {
    for g in gens {
        if g.degree() != degree {
            return Err(GroupError::Degree { expected: degree, found: g.degree() });
        }
    }
    let id = Permutation::identity(degree);
    let mut seen = BTreeSet::from([id.clone()]);
    let mut order = vec![id.clone()];
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = x.then(g);
            if seen.insert(y.clone()) {
                if seen.len() > cap {
                    return Err(GroupError::Capacity(cap));
                }
                order.push(y.clone());
                queue.push_back(y);
            }
        }
    }
    Ok(order)
}

/// Order by closure; cross-check for [`group_order`].
pub fn closure_order(gens: &[Permutation], degree: usize, cap: usize) -> Result<u128, GroupError> {
    Ok(closure(gens, degree, cap)?.len() as u128)
}

fn check_degree(cfg: &Configuration, g: &Permutation) -> Result<(), GroupError> {
    if g.degree() != cfg.n() {
        return Err(GroupError::Degree { expected: cfg.n(), found: g.degree() });
    }
    Ok(())
}

/// Block each block is mapped onto, if `g` maps blocks onto equal blocks.
fn block_images(p: &Partition, g: &Permutation) -> Option<Vec<usize>> {
    let blocks: Vec<_> = p.blocks().collect();
    let mut out = Vec::with_capacity(blocks.len());
    for b in &blocks {
        let target = p.block_of(g.apply(b.start))?;
        let t = &blocks[target];
        if t.len() != b.len() || !b.clone().all(|i| t.contains(&g.apply(i))) {
            return None;
        }
        out.push(target);
    }
    Some(out)
}

fn maps_span_onto_itself(m: &BitMatrix, g: &Permutation) -> bool {
    m.rows().iter().all(|r| {
        let image = g.apply_word(r).expect("degree checked");
        m.span_contains(&image).expect("lengths agree")
    })
}

/// Whether `g` maps blocks onto equal-size blocks and preserves the subcode
/// and dual spans. Side constraints are coordinate free.
pub fn verify_automorphism(cfg: &Configuration, g: &Permutation) -> Result<bool, GroupError> {
    check_degree(cfg, g)?;
    Ok(block_images(&cfg.partition, g).is_some()
        && maps_span_onto_itself(&cfg.subcode_matrix(), g)
        && maps_span_onto_itself(&cfg.dual_matrix(), g))
}

/// Permutation of partition blocks induced by an automorphism.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BlockAction {
    pub block_perm: Vec<usize>,
}

impl BlockAction {
    pub fn identity(r: usize) -> Self {
        Self { block_perm: (0..r).collect() }
    }

    /// Moves entry `i` of `a` to entry `block_perm[i]`.
    pub fn apply(&self, a: &Multiweight) -> Multiweight {
        let mut out = vec![0; a.entries().len()];
        for (i, &v) in a.entries().iter().enumerate() {
            out[self.block_perm[i]] = v;
        }
        Multiweight(out)
    }

    pub fn is_identity(&self) -> bool {
        self.block_perm.iter().enumerate().all(|(i, &j)| i == j)
    }
}

pub fn induced_block_action(cfg: &Configuration, g: &Permutation) -> Result<BlockAction, GroupError> {
    if !verify_automorphism(cfg, g)? {
        return Err(GroupError::NotAutomorphism);
    }
    let block_perm = block_images(&cfg.partition, g).expect("verified automorphism maps blocks");
    Ok(BlockAction { block_perm })
}

/// Orbit of a multiweight under the group generated by block actions.
pub fn orbit_sum(varidx: &Multiweight, actions: &[BlockAction]) -> BTreeSet<Multiweight> {
    let mut orbit = BTreeSet::from([varidx.clone()]);
    let mut queue = VecDeque::from([varidx.clone()]);
    while let Some(a) = queue.pop_front() {
        for act in actions {
            let b = act.apply(&a);
            if orbit.insert(b.clone()) {
                queue.push_back(b);
            }
        }
    }
    orbit
}

/// Largest `n - dim` for which coset-leader tables are built.
const COSET_TABLE_LIMIT: usize = 22;

/// Distance from a word to a code, via syndromes. Uses the exact
/// coset-leader weight when the table is small enough and the syndrome
/// weight otherwise.
struct Distance {
    columns: Vec<u64>,
    leader: Option<Vec<u8>>,
}

impl Distance {
    fn new(code: &BitMatrix, n: usize) -> Self {
        let h = Code::span(code).dual_basis();
        let columns: Vec<u64> = (0..n)
            .map(|i| h.rows().iter().enumerate().fold(0u64, |m, (r, row)| if row.get(i) { m | (1 << r) } else { m }))
            .collect();
        let leader = (h.nrows() <= COSET_TABLE_LIMIT).then(|| {
            let size = 1usize << h.nrows();
            let mut dist = vec![u8::MAX; size];
            dist[0] = 0;
            let mut queue = VecDeque::from([0u64]);
            while let Some(s) = queue.pop_front() {
                let d = dist[s as usize];
                for &c in &columns {
                    let t = (s ^ c) as usize;
                    if dist[t] == u8::MAX {
                        dist[t] = d + 1;
                        queue.push_back(t as u64);
                    }
                }
            }
            dist
        });
        Self { columns, leader }
    }

    fn of_image(&self, support: &[usize], g: &[usize]) -> u32 {
        let s = support.iter().fold(0u64, |s, &i| s ^ self.columns[g[i]]);
        match &self.leader {
            Some(t) => u32::from(t[s as usize]),
            None => s.count_ones(),
        }
    }
}

/// Score of a candidate map: higher is better, `max` exactly when every
/// target condition holds.
struct Objective {
    n: usize,
    partition: Partition,
    sources: Vec<(Vec<usize>, usize)>,
    distances: Vec<Distance>,
    spans: Vec<(BitMatrix, BitMatrix)>,
}

impl Objective {
    /// Maps rows of each `source` into the span of the paired `target`.
    fn new(partition: Partition, pairs: &[(&BitMatrix, &BitMatrix)]) -> Self {
        let n = partition.n();
        let mut sources = Vec::new();
        let mut distances = Vec::new();
        let mut spans = Vec::new();
        for (k, (src, tgt)) in pairs.iter().enumerate() {
            if src.nrows() == 0 {
                continue;
            }
            for r in src.rows() {
                sources.push((r.ones_iter().collect(), k));
            }
            distances.push(Distance::new(tgt, n));
            spans.push(((*src).clone(), (*tgt).clone()));
        }
        // Indices into `distances` follow the filtered pair order.
        let mut remap = BTreeMap::new();
        for (k, (src, _)) in pairs.iter().enumerate() {
            if src.nrows() > 0 {
                let next = remap.len();
                remap.insert(k, next);
            }
        }
        for s in &mut sources {
            s.1 = remap[&s.1];
        }
        Self { n, partition, sources, distances, spans }
    }

    fn block_score(&self, g: &[usize]) -> usize {
        let owner: Vec<usize> = (0..self.n).map(|i| self.partition.block_of(i).expect("coordinate in range")).collect();
        let parts = self.partition.parts();
        let mut score = 0;
        for (bi, block) in self.partition.blocks().enumerate() {
            let mut hits: BTreeMap<usize, usize> = BTreeMap::new();
            for i in block {
                let t = owner[g[i]];
                if parts[t] == parts[bi] {
                    *hits.entry(t).or_insert(0) += 1;
                }
            }
            score += hits.values().copied().max().unwrap_or(0);
        }
        score
    }

    /// `(block score + sum of span intersection dimensions, -distance)`.
    fn score(&self, g: &Permutation) -> (usize, i64) {
        let imgs = g.images();
        let mut primary = if self.partition.len() == self.n { self.n } else { self.block_score(imgs) };
        for (src, tgt) in &self.spans {
            let moved = g.apply_matrix(src).expect("degree checked");
            let both = tgt.stack(&moved).expect("same length").rank();
            primary += tgt.rank() + src.rank() - both;
        }
        let dist: u32 = self.sources.iter().map(|(supp, k)| self.distances[*k].of_image(supp, imgs)).sum();
        (primary, -i64::from(dist))
    }

    fn max_primary(&self) -> usize {
        self.n + self.spans.iter().map(|(s, _)| s.rank()).sum::<usize>()
    }
}

fn random_permutation(n: usize, rng: &mut ChaCha8Rng) -> Permutation {
    let mut images: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.gen_range(0..=i);
        images.swap(i, j);
    }
    Permutation { images }
}

/// Hill climbing over `t * p` for random transpositions `t`, accepting
/// moves that do not lower the score. Each candidate reaching the maximum
/// score is passed to `accept`; returning `true` ends the current restart.
fn local_search(
    obj: &Objective,
    iters: usize,
    restarts: usize,
    seed: u64,
    mut accept: impl FnMut(&Permutation) -> bool,
    stop_after_first: bool,
) {
    let n = obj.n;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let max = obj.max_primary();
    for _ in 0..restarts {
        let mut p = random_permutation(n, &mut rng);
        let mut score = obj.score(&p);
        for _ in 0..iters {
            if score.0 == max && score.1 == 0 {
                break;
            }
            if n < 2 {
                break;
            }
            let a = rng.gen_range(0..n);
            let mut b = rng.gen_range(0..n - 1);
            if b >= a {
                b += 1;
            }
            let q = p.then(&Permutation::transposition(n, a, b));
            let s = obj.score(&q);
            if s >= score {
                p = q;
                score = s;
            }
        }
        if score.0 == max && score.1 == 0 && accept(&p) && stop_after_first {
            return;
        }
    }
}

/// Distinct verified automorphisms found by `restarts` hill climbs of
/// `iters` steps each.
pub fn stochastic_automorphism_search(
    cfg: &Configuration,
    iters: usize,
    restarts: usize,
    seed: u64,
) -> Vec<Permutation> {
    let sub = cfg.subcode_matrix();
    let dual = cfg.dual_matrix();
    let obj = Objective::new(cfg.partition.clone(), &[(&sub, &sub), (&dual, &dual)]);
    let mut found = BTreeSet::new();
    local_search(
        &obj,
        iters,
        restarts,
        seed,
        |p| {
            if verify_automorphism(cfg, p) == Ok(true) {
                found.insert(p.clone());
                true
            } else {
                false
            }
        },
        false,
    );
    found.into_iter().collect()
}

/// Whether `g` maps code `a` onto code `b`.
pub fn is_isomorphism(a: &Code, b: &Code, g: &Permutation) -> Result<bool, GroupError> {
    if a.len() != b.len() || a.dimension() != b.dimension() {
        return Err(GroupError::Parameters);
    }
    if g.degree() != a.len() {
        return Err(GroupError::Degree { expected: a.len(), found: g.degree() });
    }
    Ok(a.generators().rows().iter().all(|r| {
        let image = g.apply_word(r).expect("degree checked");
        b.contains(&image).expect("lengths agree")
    }))
}

/// A verified permutation mapping `a` onto `b`, if the search finds one.
pub fn stochastic_isomorphism_search(
    a: &Code,
    b: &Code,
    iters: usize,
    restarts: usize,
    seed: u64,
) -> Result<Option<Permutation>, GroupError> {
    if a.len() != b.len() || a.dimension() != b.dimension() {
        return Err(GroupError::Parameters);
    }
    if a == b {
        return Ok(Some(Permutation::identity(a.len())));
    }
    let obj = Objective::new(Partition::unit(a.len()), &[(a.generators(), b.generators())]);
    let mut result = None;
    local_search(
        &obj,
        iters,
        restarts,
        seed,
        |p| {
            if is_isomorphism(a, b, p) == Ok(true) {
                result = Some(p.clone());
                true
            } else {
                false
            }
        },
        true,
    );
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::BlockPattern;
    use alloc::string::ToString;

    fn perm(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    fn pat(s: &str) -> BlockPattern {
        BlockPattern::parse(s).unwrap()
    }

    #[test]
    fn permutation_text_round_trip() {
        let p = perm("2,3,1");
        assert_eq!(p.to_string(), "2,3,1");
        assert_eq!(p.apply(0), 1);
        assert!(p.then(&p.inverse()).is_identity());
        assert!("1,1,2".parse::<Permutation>().is_err());
        assert!("0,1".parse::<Permutation>().is_err());
    }

    #[test]
    fn word_action_moves_coordinates() {
        let p = perm("2,3,1");
        let w: BitWord = "100".parse().unwrap();
        assert_eq!(p.apply_word(&w).unwrap().to_string(), "010");
        let q = perm("3,1,2");
        // (p then q) acts as p followed by q
        assert_eq!(p.then(&q).apply_word(&w).unwrap(), q.apply_word(&p.apply_word(&w).unwrap()).unwrap());
    }

    #[test]
    fn small_group_orders() {
        assert_eq!(group_order(&[], 5).unwrap(), 1);
        let s3 = [perm("2,1,3"), perm("2,3,1")];
        assert_eq!(group_order(&s3, 3).unwrap(), 6);
        assert_eq!(closure_order(&s3, 3, 100).unwrap(), 6);
        let s5 = [perm("2,1,3,4,5"), perm("2,3,4,5,1")];
        assert_eq!(group_order(&s5, 5).unwrap(), 120);
        let c2c2 = [perm("2,1,4,3"), perm("3,4,1,2")];
        assert_eq!(group_order(&c2c2, 4).unwrap(), 4);
        assert_eq!(closure_order(&s5, 5, 50), Err(GroupError::Capacity(50)));
    }

    #[test]
    fn chain_membership() {
        let gens = [perm("2,1,4,3"), perm("3,4,1,2")];
        let chain = StabilizerChain::new(&gens, 4).unwrap();
        assert!(chain.contains(&perm("4,3,2,1")));
        assert!(!chain.contains(&perm("2,1,3,4")));
    }

    #[test]
    fn block_swap_automorphism() {
        let cfg =
            Configuration::new(Partition::new(vec![10, 10, 11]).unwrap(), vec![pat("110"), pat("100")], vec![], vec![])
                .unwrap();
        let mut images: Vec<usize> = (0..31).collect();
        for i in 0..10 {
            images[i] = i + 10;
            images[i + 10] = i;
        }
        let swap = Permutation::from_images(images).unwrap();
        assert!(verify_automorphism(&cfg, &swap).unwrap());
        let act = induced_block_action(&cfg, &swap).unwrap();
        assert_eq!(act.block_perm, vec![1, 0, 2]);
        let id = induced_block_action(&cfg, &Permutation::identity(31)).unwrap();
        assert!(id.is_identity());
        let orbit = orbit_sum(&Multiweight(vec![3, 7, 0]), core::slice::from_ref(&act));
        assert_eq!(orbit.len(), 2);
        assert_eq!(orbit_sum(&Multiweight(vec![10, 10, 0]), &[act]).len(), 1);
        // Moving a coordinate across unequal blocks is rejected.
        let bad = Permutation::transposition(31, 0, 25);
        assert!(!verify_automorphism(&cfg, &bad).unwrap());
        assert_eq!(induced_block_action(&cfg, &bad), Err(GroupError::NotAutomorphism));
        assert!(verify_automorphism(&cfg, &Permutation::identity(30)).is_err());
    }

    #[test]
    fn full_space_search_succeeds_immediately() {
        let words: Vec<BitWord> = (0..4).map(|i| BitWord::from_support(4, [i])).collect();
        let cfg = Configuration::from_words(&words).unwrap();
        let found = stochastic_automorphism_search(&cfg, 1, 1, 7);
        assert_eq!(found.len(), 1);
        assert!(verify_automorphism(&cfg, &found[0]).unwrap());
    }

    #[test]
    fn isomorphism_of_permuted_copy() {
        let a = Code::parse_rows(&["111100000", "000111100", "110000011"]).unwrap();
        let g = perm("3,7,1,9,2,5,4,8,6");
        let b = Code::span(&g.apply_matrix(a.generators()).unwrap());
        let found = stochastic_isomorphism_search(&a, &b, 2000, 50, 1).unwrap().unwrap();
        assert!(is_isomorphism(&a, &b, &found).unwrap());
        assert_eq!(stochastic_isomorphism_search(&a, &a, 1, 1, 1).unwrap(), Some(Permutation::identity(9)));
    }

    #[test]
    fn coset_distance_is_exact() {
        let code = Code::repetition(5);
        let d = Distance::new(code.generators(), 5);
        let id: Vec<usize> = (0..5).collect();
        assert_eq!(d.of_image(&[], &id), 0);
        assert_eq!(d.of_image(&[0, 1, 2, 3, 4], &id), 0);
        assert_eq!(d.of_image(&[0, 1], &id), 2);
        assert_eq!(d.of_image(&[0, 1, 2], &id), 2);
    }
}
