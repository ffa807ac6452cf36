//! Congruences of finite lattices: principal congruences, the congruence
//! lattice through its join-irreducibles, restriction along embeddings,
//! quotients, and the congruence-preserving-extension test.

use std::collections::HashMap;
use std::fmt;

use fixedbitset::FixedBitSet;
use thiserror::Error;

use crate::order::{downset_lattice, Lattice, OrderError, Poset};

/// Default ceiling on the number of congruences materialized by
/// [`congruence_lattice`].
pub const DEFAULT_CONGRUENCE_CAP: usize = 1 << 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CongruenceError {
    #[error("size mismatch: expected {expected} elements, found {found}")]
    SizeMismatch { expected: usize, found: usize },
    #[error("invalid embedding: {reason}")]
    InvalidEmbedding { reason: String },
    #[error("internal verification failed: {detail}")]
    InternalVerificationFailed { detail: String },
    #[error(transparent)]
    Order(#[from] OrderError),
}

/// An equivalence relation on lattice elements, stored as the least element
/// of each element's block. Two congruences are equal iff their partitions are.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Congruence {
    labels: Vec<u32>,
}

impl Congruence {
    pub fn identity(n: usize) -> Self {
        Self {
            labels: (0..n as u32).collect(),
        }
    }

    pub fn all(n: usize) -> Self {
        Self { labels: vec![0; n] }
    }

    /// Canonicalizes an arbitrary block assignment (`block[x]` any key).
    pub fn from_blocks<K: std::hash::Hash + Eq>(block: &[K]) -> Self {
        let mut first: HashMap<&K, u32> = HashMap::new();
        let labels = block
            .iter()
            .enumerate()
            .map(|(x, k)| *first.entry(k).or_insert(x as u32))
            .collect();
        Self { labels }
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    /// The least element of `x`'s block.
    #[inline]
    pub fn label(&self, x: usize) -> usize {
        self.labels[x] as usize
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    #[inline]
    pub fn related(&self, a: usize, b: usize) -> bool {
        self.labels[a] == self.labels[b]
    }

    /// Blocks in order of their least elements, each ascending.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut index = vec![usize::MAX; self.size()];
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for x in 0..self.size() {
            let l = self.label(x);
            if index[l] == usize::MAX {
                index[l] = blocks.len();
                blocks.push(Vec::new());
            }
            blocks[index[l]].push(x);
        }
        blocks
    }

    pub fn block_count(&self) -> usize {
        (0..self.size()).filter(|&x| self.label(x) == x).count()
    }

    pub fn is_identity(&self) -> bool {
        self.block_count() == self.size()
    }

    pub fn is_all(&self) -> bool {
        self.labels.iter().all(|&l| l == 0)
    }

    /// Whether every block of `self` lies inside a block of `other`.
    pub fn is_finer_than(&self, other: &Congruence) -> bool {
        (0..self.size()).all(|x| other.related(x, self.label(x)))
    }

    /// Checks the substitution property on `lattice`; returns `(a, b, c)`
    /// with `a ≡ b` but `a∧c ≢ b∧c` or `a∨c ≢ b∨c`, first in index order.
    pub fn substitution_failure(&self, lattice: &Lattice) -> Option<(usize, usize, usize)> {
        // Comparing each element with its block's least element suffices.
        for a in 0..self.size() {
            let r = self.label(a);
            if r == a {
                continue;
            }
            for c in 0..self.size() {
                if !self.related(lattice.meet(a, c), lattice.meet(r, c))
                    || !self.related(lattice.join(a, c), lattice.join(r, c))
                {
                    return Some((r, a, c));
                }
            }
        }
        None
    }

    pub fn respects(&self, lattice: &Lattice) -> bool {
        self.size() == lattice.size() && self.substitution_failure(lattice).is_none()
    }
}

/// Blocks in order of least element, e.g. `[0 1] [2] [3 4]`.
impl fmt::Display for Congruence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, block) in self.blocks().iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{}", BlockDisplay(block))?;
        }
        Ok(())
    }
}

/// A block as `[a b c]`.
pub struct BlockDisplay<'a>(pub &'a [usize]);

impl fmt::Display for BlockDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str("]")
    }
}

/// Union-find over lattice elements that records every successful merge
/// for later translation by meets and joins.
pub(crate) struct Closure {
    parent: Vec<u32>,
    pending: Vec<(u32, u32)>,
}

impl Closure {
    pub(crate) fn new(n: usize) -> Self {
        Self {
            parent: (0..n as u32).collect(),
            pending: Vec::new(),
        }
    }

    /// Starts from the classes of an existing congruence; those need no
    /// further translation.
    pub(crate) fn from_congruence(theta: &Congruence) -> Self {
        Self {
            parent: theta.labels.clone(),
            pending: Vec::new(),
        }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] as usize != root {
            root = self.parent[root] as usize;
        }
        let mut cur = x;
        while self.parent[cur] as usize != root {
            let next = self.parent[cur] as usize;
            self.parent[cur] = root as u32;
            cur = next;
        }
        root
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = (ra.min(rb), ra.max(rb));
            self.parent[hi] = lo as u32;
            self.pending.push((a as u32, b as u32));
        }
    }

    pub(crate) fn pop(&mut self) -> Option<(usize, usize)> {
        self.pending.pop().map(|(a, b)| (a as usize, b as usize))
    }

    /// Translates every merged pair by all meets and joins until stable.
    pub(crate) fn close(mut self, lattice: &Lattice) -> Congruence {
        let n = lattice.size();
        while let Some((x, y)) = self.pop() {
            for z in 0..n {
                self.union(lattice.meet(x, z), lattice.meet(y, z));
                self.union(lattice.join(x, z), lattice.join(y, z));
            }
        }
        self.finish()
    }

    /// Reads off the partition. Roots are always the least element of
    /// their class because unions attach the larger root below the smaller.
    pub(crate) fn finish(mut self) -> Congruence {
        let labels = (0..self.parent.len())
            .map(|x| self.find(x) as u32)
            .collect();
        Congruence { labels }
    }
}

/// The least congruence of `lattice` with `a ≡ b`.
pub fn principal_congruence(lattice: &Lattice, a: usize, b: usize) -> Congruence {
    let mut closure = Closure::new(lattice.size());
    closure.union(a, b);
    closure.close(lattice)
}

/// The least congruence containing both `theta` and `phi`.
pub fn congruence_join(lattice: &Lattice, theta: &Congruence, phi: &Congruence) -> Congruence {
    let mut closure = Closure::from_congruence(theta);
    for x in 0..phi.size() {
        closure.union(x, phi.label(x));
    }
    closure.close(lattice)
}

/// The common refinement of `theta` and `phi`.
pub fn congruence_meet(theta: &Congruence, phi: &Congruence) -> Congruence {
    let keys: Vec<(u32, u32)> = theta
        .labels
        .iter()
        .zip(&phi.labels)
        .map(|(&a, &b)| (a, b))
        .collect();
    Congruence::from_blocks(&keys)
}

/// Every congruence, indexed as the down-sets of the join-irreducible
/// congruences.
#[derive(Clone, Debug)]
pub struct MaterializedCongruences {
    /// Lattice of down-sets of the join-irreducible poset; element `i` is
    /// `congruences[i]`.
    pub lattice: Lattice,
    pub congruences: Vec<Congruence>,
    pub downsets: Vec<FixedBitSet>,
}

/// The congruence lattice of a finite lattice.
#[derive(Clone, Debug)]
pub struct CongruenceLattice {
    base_size: usize,
    ji: Vec<Congruence>,
    ji_order: Poset,
    /// `(a, b)` cover of the base lattice and the index of `con(a, b)`.
    principal_index: Vec<((usize, usize), usize)>,
    all: Option<MaterializedCongruences>,
}

impl CongruenceLattice {
    pub fn base_size(&self) -> usize {
        self.base_size
    }

    /// The join-irreducible congruences, in order of the first cover
    /// generating each.
    pub fn ji(&self) -> &[Congruence] {
        &self.ji
    }

    /// The join-irreducible congruences ordered by refinement.
    pub fn ji_order(&self) -> &Poset {
        &self.ji_order
    }

    /// Index into [`CongruenceLattice::ji`] of `con(a, b)` for a cover `a ≺ b`.
    pub fn principal_for_cover(&self, a: usize, b: usize) -> Option<usize> {
        self.principal_index
            .binary_search_by_key(&(a, b), |&(pair, _)| pair)
            .ok()
            .map(|i| self.principal_index[i].1)
    }

    pub fn principal_index(&self) -> &[((usize, usize), usize)] {
        &self.principal_index
    }

    /// All congruences, when their number stayed within the cap.
    pub fn materialized(&self) -> Option<&MaterializedCongruences> {
        self.all.as_ref()
    }

    /// Number of congruences, when materialized.
    pub fn len(&self) -> Option<usize> {
        self.all.as_ref().map(|m| m.congruences.len())
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// The set of join-irreducible congruences below `theta`.
    pub fn support(&self, theta: &Congruence) -> FixedBitSet {
        let mut set = FixedBitSet::with_capacity(self.ji.len());
        for (i, j) in self.ji.iter().enumerate() {
            if j.is_finer_than(theta) {
                set.insert(i);
            }
        }
        set
    }

    /// Position of `theta` among the materialized congruences.
    pub fn index_of(&self, theta: &Congruence) -> Option<usize> {
        let all = self.all.as_ref()?;
        let support = self.support(theta);
        let key = |s: &FixedBitSet| (s.count_ones(..), s.ones().collect::<Vec<_>>());
        let target = key(&support);
        let i = all
            .downsets
            .binary_search_by(|d| key(d).cmp(&target))
            .ok()?;
        (all.congruences[i] == *theta).then_some(i)
    }
}

/// Computes `Con lattice` with the default materialization cap.
pub fn congruence_lattice(lattice: &Lattice) -> Result<CongruenceLattice, CongruenceError> {
    congruence_lattice_with_cap(lattice, DEFAULT_CONGRUENCE_CAP)
}

/// Computes the join-irreducible congruences (the distinct `con(a, b)` over
/// covers `a ≺ b`) and, when there are at most `cap` congruences in all,
/// materializes every congruence as a join of join-irreducibles.
pub fn congruence_lattice_with_cap(
    lattice: &Lattice,
    cap: usize,
) -> Result<CongruenceLattice, CongruenceError> {
    let n = lattice.size();
    let mut ji: Vec<Congruence> = Vec::new();
    let mut seen: HashMap<Congruence, usize> = HashMap::new();
    let mut principal_index = Vec::with_capacity(lattice.covers().len());
    for &(a, b) in lattice.covers() {
        let theta = principal_congruence(lattice, a, b);
        let idx = *seen.entry(theta.clone()).or_insert_with(|| {
            ji.push(theta);
            ji.len() - 1
        });
        principal_index.push(((a, b), idx));
    }
    let ji_order =
        Poset::from_order_fn(ji.len(), |i, j| ji[i].is_finer_than(&ji[j])).map_err(|e| {
            CongruenceError::InternalVerificationFailed {
                detail: format!("refinement among principal congruences is not an order: {e}"),
            }
        })?;

    let all = match downset_lattice(&ji_order, cap) {
        Ok(d) => Some(materialize(lattice, &ji, d)?),
        Err(OrderError::SizeLimitExceeded { .. }) => None,
        Err(e) => return Err(e.into()),
    };
    Ok(CongruenceLattice {
        base_size: n,
        ji,
        ji_order,
        principal_index,
        all,
    })
}

fn materialize(
    lattice: &Lattice,
    ji: &[Congruence],
    d: crate::order::DownsetLattice,
) -> Result<MaterializedCongruences, CongruenceError> {
    let n = lattice.size();
    let index: HashMap<Vec<usize>, usize> = d
        .downsets
        .iter()
        .enumerate()
        .map(|(i, s)| (s.ones().collect(), i))
        .collect();
    let mut congruences: Vec<Congruence> = Vec::with_capacity(d.downsets.len());
    for set in &d.downsets {
        // Downsets come sorted by size, so dropping a maximal member
        // leaves a downset that is already built.
        let theta = match maximal_member(set, ji) {
            None => Congruence::identity(n),
            Some(m) => {
                let mut rest = set.clone();
                rest.set(m, false);
                let prev = index.get(&rest.ones().collect::<Vec<_>>()).ok_or_else(|| {
                    CongruenceError::InternalVerificationFailed {
                        detail: "downset minus a maximal member is not a downset".into(),
                    }
                })?;
                congruence_join(lattice, &congruences[*prev], &ji[m])
            }
        };
        congruences.push(theta);
    }

    // Each materialized partition must be a congruence lying above exactly
    // the join-irreducibles of its downset; distinctness follows.
    for (set, theta) in d.downsets.iter().zip(&congruences) {
        if let Some((a, b, c)) = theta.substitution_failure(lattice) {
            return Err(CongruenceError::InternalVerificationFailed {
                detail: format!("materialized partition fails substitution at ({a}, {b}, {c})"),
            });
        }
        for (j, phi) in ji.iter().enumerate() {
            if phi.is_finer_than(theta) != set.contains(j) {
                return Err(CongruenceError::InternalVerificationFailed {
                    detail: format!(
                        "join-irreducible {j} misplaced relative to a materialized join"
                    ),
                });
            }
        }
    }
    Ok(MaterializedCongruences {
        lattice: d.lattice,
        congruences,
        downsets: d.downsets,
    })
}

fn maximal_member(set: &FixedBitSet, ji: &[Congruence]) -> Option<usize> {
    set.ones()
        .find(|&m| set.ones().all(|k| k == m || !ji[m].is_finer_than(&ji[k])))
}

/// A lattice embedding of `source` into `target`.
#[derive(Clone, Debug)]
pub struct Embedding<'a> {
    source: &'a Lattice,
    target: &'a Lattice,
    map: Vec<usize>,
}

impl<'a> Embedding<'a> {
    /// Validates that `map` is injective and preserves meets and joins.
    pub fn new(
        source: &'a Lattice,
        target: &'a Lattice,
        map: Vec<usize>,
    ) -> Result<Self, CongruenceError> {
        let invalid = |reason: String| CongruenceError::InvalidEmbedding { reason };
        if map.len() != source.size() {
            return Err(invalid(format!(
                "map has {} entries for {} source elements",
                map.len(),
                source.size()
            )));
        }
        let mut hit = FixedBitSet::with_capacity(target.size());
        for (x, &y) in map.iter().enumerate() {
            if y >= target.size() {
                return Err(invalid(format!("image {y} of {x} is out of range")));
            }
            if hit.put(y) {
                return Err(invalid(format!("image {y} is hit twice")));
            }
        }
        for a in 0..source.size() {
            for b in a + 1..source.size() {
                if map[source.meet(a, b)] != target.meet(map[a], map[b]) {
                    return Err(invalid(format!("meet of {a} and {b} is not preserved")));
                }
                if map[source.join(a, b)] != target.join(map[a], map[b]) {
                    return Err(invalid(format!("join of {a} and {b} is not preserved")));
                }
            }
        }
        Ok(Self {
            source,
            target,
            map,
        })
    }

    /// The identity embedding of a lattice into itself.
    pub fn identity(lattice: &'a Lattice) -> Self {
        Self {
            source: lattice,
            target: lattice,
            map: (0..lattice.size()).collect(),
        }
    }

    pub fn source(&self) -> &'a Lattice {
        self.source
    }

    pub fn target(&self) -> &'a Lattice {
        self.target
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }
}

/// The restriction of a congruence of the target to the source.
pub fn restrict(theta: &Congruence, embedding: &Embedding<'_>) -> Congruence {
    let keys: Vec<u32> = embedding.map.iter().map(|&y| theta.labels[y]).collect();
    Congruence::from_blocks(&keys)
}

/// Why an embedding fails to be congruence-preserving.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CpeViolation {
    /// Source congruence (by materialized index) with no extension.
    NoExtension { source: usize },
    /// Source congruence with two distinct extensions (target indices).
    TwoExtensions {
        source: usize,
        first: usize,
        second: usize,
    },
}

/// Result of the congruence-preserving-extension test.
#[derive(Clone, Debug)]
pub struct CpeCertificate {
    pub holds: bool,
    /// For each source congruence (materialized order), the target
    /// congruences restricting to it, ascending.
    pub extensions: Vec<Vec<usize>>,
    /// First violation in source-congruence order.
    pub violation: Option<CpeViolation>,
    pub source_congruences: Vec<Congruence>,
    pub target_congruences: Vec<Congruence>,
}

/// Tests whether every congruence of the source has exactly one extension
/// to the target, i.e. restriction `Con target → Con source` is bijective.
pub fn is_congruence_preserving_extension(
    embedding: &Embedding<'_>,
) -> Result<CpeCertificate, CongruenceError> {
    let materialize_all = |l: &Lattice| -> Result<Vec<Congruence>, CongruenceError> {
        let con = congruence_lattice(l)?;
        con.all.map(|m| m.congruences).ok_or(CongruenceError::Order(
            OrderError::SizeLimitExceeded {
                required: DEFAULT_CONGRUENCE_CAP + 1,
                cap: DEFAULT_CONGRUENCE_CAP,
            },
        ))
    };
    let source_congruences = materialize_all(embedding.source)?;
    let target_congruences = materialize_all(embedding.target)?;
    let position: HashMap<&Congruence, usize> = source_congruences
        .iter()
        .enumerate()
        .map(|(i, c)| (c, i))
        .collect();
    let mut extensions = vec![Vec::new(); source_congruences.len()];
    for (t, theta) in target_congruences.iter().enumerate() {
        let r = restrict(theta, embedding);
        let s = position
            .get(&r)
            .ok_or_else(|| CongruenceError::InternalVerificationFailed {
                detail: "restriction of a congruence is not a congruence".into(),
            })?;
        extensions[*s].push(t);
    }
    let violation = extensions
        .iter()
        .enumerate()
        .find_map(|(s, ext)| match ext.as_slice() {
            [] => Some(CpeViolation::NoExtension { source: s }),
            [_] => None,
            [first, second, ..] => Some(CpeViolation::TwoExtensions {
                source: s,
                first: *first,
                second: *second,
            }),
        });
    Ok(CpeCertificate {
        holds: violation.is_none(),
        extensions,
        violation,
        source_congruences,
        target_congruences,
    })
}

/// The quotient `lattice / theta`. Block `i` is the `i`-th block in order
/// of least elements; the second component lists those least elements.
pub fn quotient_lattice(
    lattice: &Lattice,
    theta: &Congruence,
) -> Result<(Lattice, Vec<usize>), CongruenceError> {
    if theta.size() != lattice.size() {
        return Err(CongruenceError::SizeMismatch {
            expected: lattice.size(),
            found: theta.size(),
        });
    }
    let reps: Vec<usize> = (0..theta.size()).filter(|&x| theta.label(x) == x).collect();
    let q = Lattice::from_order_fn(reps.len(), |i, j| {
        theta.related(lattice.join(reps[i], reps[j]), reps[j])
    })?;
    Ok((q, reps))
}
