//! Checkers for lattice properties. Every failed check carries a witness
//! that [`LawReport::recheck`] can re-evaluate independently.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::congruence::{congruence_lattice, BlockDisplay, Congruence, CongruenceError};
use crate::order::{interval, poset_isomorphism, Lattice};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Law {
    Distributive,
    SectionallyComplemented,
    Semimodular,
    Simple,
    Regular,
    Uniform,
    Isoform,
    DimensionAtMostTwo,
}

impl Law {
    pub const ALL: [Law; 8] = [
        Law::Distributive,
        Law::SectionallyComplemented,
        Law::Semimodular,
        Law::Simple,
        Law::Regular,
        Law::Uniform,
        Law::Isoform,
        Law::DimensionAtMostTwo,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Law::Distributive => "distributive",
            Law::SectionallyComplemented => "sectionally_complemented",
            Law::Semimodular => "semimodular",
            Law::Simple => "simple",
            Law::Regular => "regular",
            Law::Uniform => "uniform",
            Law::Isoform => "isoform",
            Law::DimensionAtMostTwo => "dimension_le2",
        }
    }

    pub fn from_name(name: &str) -> Option<Law> {
        Law::ALL.into_iter().find(|l| l.name() == name)
    }
}

impl fmt::Display for Law {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Evidence that a law fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// `x ∧ (y ∨ z) ≠ (x ∧ y) ∨ (x ∧ z)`.
    Triple(usize, usize, usize),
    /// A pair `(a, b)` breaking a two-variable condition.
    Pair(usize, usize),
    /// A congruence other than the identity and the total one.
    NontrivialCongruence(Congruence),
    /// Two distinct congruences with a common block.
    SharedBlock {
        theta: Congruence,
        phi: Congruence,
        block: Vec<usize>,
    },
    /// Two blocks of one congruence that differ in size or shape.
    UnlikeBlocks {
        theta: Congruence,
        first: Vec<usize>,
        second: Vec<usize>,
    },
    /// Directed incomparability edges, each forced by the previous one,
    /// running from `(a, b)` to `(b, a)`.
    ForcingCycle(Vec<(usize, usize)>),
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Triple(x, y, z) => write!(f, "x={x} y={y} z={z}"),
            Witness::Pair(a, b) => write!(f, "a={a} b={b}"),
            Witness::NontrivialCongruence(theta) => write!(f, "congruence {theta}"),
            Witness::SharedBlock { theta, phi, block } => write!(
                f,
                "block {} shared by {theta} and {phi}",
                BlockDisplay(block)
            ),
            Witness::UnlikeBlocks {
                theta,
                first,
                second,
            } => write!(
                f,
                "blocks {} and {} of {theta}",
                BlockDisplay(first),
                BlockDisplay(second)
            ),
            Witness::ForcingCycle(edges) => {
                for (i, (a, b)) in edges.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" -> ")?;
                    }
                    write!(f, "({a},{b})")?;
                }
                Ok(())
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LawReport {
    pub law: Law,
    pub holds: bool,
    pub witness: Option<Witness>,
}

impl LawReport {
    fn verdict(law: Law, witness: Option<Witness>) -> Self {
        Self {
            law,
            holds: witness.is_none(),
            witness,
        }
    }

    /// Re-evaluates the defining condition on the witness; `true` when the
    /// witness is present and really violates the law.
    pub fn recheck(&self, lattice: &Lattice) -> bool {
        let Some(w) = &self.witness else {
            return false;
        };
        let l = lattice;
        match (self.law, w) {
            (Law::Distributive, &Witness::Triple(x, y, z)) => {
                l.meet(x, l.join(y, z)) != l.join(l.meet(x, y), l.meet(x, z))
            }
            (Law::SectionallyComplemented, &Witness::Pair(a, b)) => {
                l.leq(a, b)
                    && !(0..l.size()).any(|c| l.meet(a, c) == l.bottom() && l.join(a, c) == b)
            }
            (Law::Semimodular, &Witness::Pair(a, b)) => {
                l.is_cover(l.meet(a, b), a) && !l.is_cover(b, l.join(a, b))
            }
            (Law::Simple, Witness::NontrivialCongruence(theta)) => {
                theta.respects(l) && !theta.is_identity() && !theta.is_all()
            }
            (Law::Regular, Witness::SharedBlock { theta, phi, block }) => {
                theta.respects(l)
                    && phi.respects(l)
                    && theta != phi
                    && theta.blocks().contains(block)
                    && phi.blocks().contains(block)
            }
            (
                Law::Uniform,
                Witness::UnlikeBlocks {
                    theta,
                    first,
                    second,
                },
            ) => {
                let blocks = theta.blocks();
                theta.respects(l)
                    && blocks.contains(first)
                    && blocks.contains(second)
                    && first.len() != second.len()
            }
            (
                Law::Isoform,
                Witness::UnlikeBlocks {
                    theta,
                    first,
                    second,
                },
            ) => {
                let blocks = theta.blocks();
                theta.respects(l)
                    && blocks.contains(first)
                    && blocks.contains(second)
                    && poset_isomorphism(&l.poset().induced(first), &l.poset().induced(second))
                        .is_none()
            }
            (Law::DimensionAtMostTwo, Witness::ForcingCycle(path)) => {
                recheck_forcing_cycle(l, path)
            }
            _ => false,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LawError {
    #[error("lattice has {size} element(s); the check needs at least 2")]
    TooSmall { size: usize },
    #[error(transparent)]
    Congruence(#[from] CongruenceError),
    #[error("congruence lattice too large to materialize")]
    TooManyCongruences,
}

/// Runs one law by name.
pub fn check(law: Law, lattice: &Lattice) -> Result<LawReport, LawError> {
    match law {
        Law::Distributive => Ok(is_distributive(lattice)),
        Law::SectionallyComplemented => Ok(is_sectionally_complemented(lattice)),
        Law::Semimodular => Ok(is_semimodular(lattice)),
        Law::Simple => is_simple(lattice),
        Law::Regular => is_regular(lattice),
        Law::Uniform => is_uniform(lattice),
        Law::Isoform => is_isoform(lattice),
        Law::DimensionAtMostTwo => Ok(order_dimension_le2(lattice)),
    }
}

pub fn is_distributive(l: &Lattice) -> LawReport {
    let n = l.size();
    let witness = (0..n)
        .flat_map(|x| (0..n).flat_map(move |y| (0..n).map(move |z| (x, y, z))))
        .find(|&(x, y, z)| l.meet(x, l.join(y, z)) != l.join(l.meet(x, y), l.meet(x, z)))
        .map(|(x, y, z)| Witness::Triple(x, y, z));
    LawReport::verdict(Law::Distributive, witness)
}

pub fn is_sectionally_complemented(l: &Lattice) -> LawReport {
    let n = l.size();
    let mut witness = None;
    'outer: for b in 0..n {
        for a in l.poset().down_set(b).ones() {
            let complemented = l
                .poset()
                .down_set(b)
                .ones()
                .any(|c| l.meet(a, c) == l.bottom() && l.join(a, c) == b);
            if !complemented {
                witness = Some(Witness::Pair(a, b));
                break 'outer;
            }
        }
    }
    LawReport::verdict(Law::SectionallyComplemented, witness)
}

pub fn is_semimodular(l: &Lattice) -> LawReport {
    let n = l.size();
    let witness = (0..n)
        .flat_map(|a| (0..n).map(move |b| (a, b)))
        .find(|&(a, b)| l.is_cover(l.meet(a, b), a) && !l.is_cover(b, l.join(a, b)))
        .map(|(a, b)| Witness::Pair(a, b));
    LawReport::verdict(Law::Semimodular, witness)
}

fn all_congruences(l: &Lattice) -> Result<Vec<Congruence>, LawError> {
    let con = congruence_lattice(l)?;
    con.materialized()
        .map(|m| m.congruences.clone())
        .ok_or(LawError::TooManyCongruences)
}

/// Simple: exactly two congruences.
pub fn is_simple(l: &Lattice) -> Result<LawReport, LawError> {
    if l.size() < 2 {
        return Err(LawError::TooSmall { size: l.size() });
    }
    let con = congruence_lattice(l)?;
    // All congruences are joins of principal ones on covers, so a lattice is
    // simple iff every cover generates the total congruence.
    let witness = con
        .ji()
        .iter()
        .find(|theta| !theta.is_all())
        .map(|theta| Witness::NontrivialCongruence(theta.clone()));
    Ok(LawReport::verdict(Law::Simple, witness))
}

/// Regular: a congruence is determined by any one of its blocks.
pub fn is_regular(l: &Lattice) -> Result<LawReport, LawError> {
    let all = all_congruences(l)?;
    let mut owner: HashMap<Vec<usize>, usize> = HashMap::new();
    for (i, theta) in all.iter().enumerate() {
        for block in theta.blocks() {
            if let Some(&j) = owner.get(&block) {
                let witness = Witness::SharedBlock {
                    theta: all[j].clone(),
                    phi: theta.clone(),
                    block,
                };
                return Ok(LawReport::verdict(Law::Regular, Some(witness)));
            }
            owner.insert(block, i);
        }
    }
    Ok(LawReport::verdict(Law::Regular, None))
}

/// Uniform: every congruence has blocks of one size.
pub fn is_uniform(l: &Lattice) -> Result<LawReport, LawError> {
    let all = all_congruences(l)?;
    let witness = all.into_iter().find_map(|theta| {
        let blocks = theta.blocks();
        let second = blocks.iter().find(|b| b.len() != blocks[0].len())?.clone();
        Some(Witness::UnlikeBlocks {
            first: blocks[0].clone(),
            second,
            theta,
        })
    });
    Ok(LawReport::verdict(Law::Uniform, witness))
}

/// Isoform: every congruence has pairwise isomorphic blocks.
pub fn is_isoform(l: &Lattice) -> Result<LawReport, LawError> {
    let all = all_congruences(l)?;
    for theta in all {
        let blocks = theta.blocks();
        // Blocks are intervals; compare each with the first.
        let shape = |b: &[usize]| {
            let lo = b[0];
            let hi = *b
                .iter()
                .max_by_key(|&&x| l.poset().down_set(x).count_ones(..))
                .unwrap();
            interval(l, lo, hi).map(|(sub, _)| sub)
        };
        let first = shape(&blocks[0]).map_err(CongruenceError::from)?;
        for b in &blocks[1..] {
            let other = shape(b).map_err(CongruenceError::from)?;
            if b.len() != blocks[0].len()
                || poset_isomorphism(first.poset(), other.poset()).is_none()
            {
                let witness = Witness::UnlikeBlocks {
                    first: blocks[0].clone(),
                    second: b.clone(),
                    theta,
                };
                return Ok(LawReport::verdict(Law::Isoform, Some(witness)));
            }
        }
    }
    Ok(LawReport::verdict(Law::Isoform, None))
}

/// Order dimension at most two, tested as transitive orientability of the
/// incomparability graph. Directed edges `(a, b)` and `(a, b')` force each
/// other when `b` and `b'` are comparable, likewise `(a, b)` and `(a', b)`;
/// the graph is orientable iff no forcing class holds an edge and its
/// reverse.
pub fn order_dimension_le2(l: &Lattice) -> LawReport {
    let n = l.size();
    let p = l.poset();
    const NONE: u32 = u32::MAX;
    let mut class = vec![NONE; n * n];
    let mut next_class = 0u32;
    let mut queue = VecDeque::new();
    for a in 0..n {
        for b in 0..n {
            if p.comparable(a, b) || class[a * n + b] != NONE {
                continue;
            }
            class[a * n + b] = next_class;
            queue.push_back((a, b));
            while let Some((x, y)) = queue.pop_front() {
                for_each_forced(l, x, y, |u, v| {
                    if class[u * n + v] == NONE {
                        class[u * n + v] = next_class;
                        queue.push_back((u, v));
                    }
                });
            }
            next_class += 1;
        }
    }
    for a in 0..n {
        for b in 0..n {
            if !p.comparable(a, b) && class[a * n + b] == class[b * n + a] {
                let path = forcing_path(l, (a, b), (b, a));
                return LawReport::verdict(
                    Law::DimensionAtMostTwo,
                    Some(Witness::ForcingCycle(path)),
                );
            }
        }
    }
    LawReport::verdict(Law::DimensionAtMostTwo, None)
}

/// Calls `f` on every directed incomparability edge forced by `(x, y)`.
fn for_each_forced(l: &Lattice, x: usize, y: usize, mut f: impl FnMut(usize, usize)) {
    let p = l.poset();
    for w in 0..l.size() {
        if w != y && !p.comparable(x, w) && p.comparable(y, w) {
            f(x, w);
        }
        if w != x && !p.comparable(w, y) && p.comparable(x, w) {
            f(w, y);
        }
    }
}

fn forcing_path(l: &Lattice, from: (usize, usize), to: (usize, usize)) -> Vec<(usize, usize)> {
    let n = l.size();
    let mut prev: Vec<Option<(usize, usize)>> = vec![None; n * n];
    let mut seen = vec![false; n * n];
    let mut queue = VecDeque::from([from]);
    seen[from.0 * n + from.1] = true;
    while let Some((x, y)) = queue.pop_front() {
        if (x, y) == to {
            break;
        }
        for_each_forced(l, x, y, |u, v| {
            if !seen[u * n + v] {
                seen[u * n + v] = true;
                prev[u * n + v] = Some((x, y));
                queue.push_back((u, v));
            }
        });
    }
    let mut path = vec![to];
    let mut cur = to;
    while let Some(p) = prev[cur.0 * n + cur.1] {
        path.push(p);
        cur = p;
    }
    path.reverse();
    path
}

fn recheck_forcing_cycle(l: &Lattice, path: &[(usize, usize)]) -> bool {
    let p = l.poset();
    let (Some(&(a, b)), Some(&last)) = (path.first(), path.last()) else {
        return false;
    };
    if last != (b, a) || path.iter().any(|&(x, y)| p.comparable(x, y)) {
        return false;
    }
    path.windows(2).all(|w| {
        let ((x, y), (u, v)) = (w[0], w[1]);
        (x == u && y != v && p.comparable(y, v)) || (y == v && x != u && p.comparable(x, u))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extension::partition_lattice;
    use crate::order::{direct_product, DEFAULT_SIZE_CAP};

    fn assert_fails_with_witness(r: &LawReport, l: &Lattice) {
        assert!(!r.holds, "{} unexpectedly holds", r.law);
        assert!(r.recheck(l), "{} witness does not recheck", r.law);
    }

    #[test]
    fn distributivity() {
        assert!(is_distributive(&Lattice::chain(5)).holds);
        let m3 = Lattice::diamond(3);
        let r = is_distributive(&m3);
        assert_fails_with_witness(&r, &m3);
        let Some(Witness::Triple(x, y, z)) = r.witness else {
            panic!()
        };
        let mut atoms = [x, y, z];
        atoms.sort();
        assert_eq!(atoms, [1, 2, 3]);
        let n5 = Lattice::pentagon();
        assert_fails_with_witness(&is_distributive(&n5), &n5);
    }

    #[test]
    fn sectional_complements() {
        assert!(is_sectionally_complemented(&Lattice::boolean(3)).holds);
        assert!(is_sectionally_complemented(&Lattice::diamond(3)).holds);
        let n5 = Lattice::pentagon();
        let r = is_sectionally_complemented(&n5);
        assert_fails_with_witness(&r, &n5);
        // a = 1, b = 2 in the pentagon's labeling
        assert_eq!(r.witness, Some(Witness::Pair(1, 2)));
    }

    #[test]
    fn semimodularity() {
        let n5 = Lattice::pentagon();
        assert_fails_with_witness(&is_semimodular(&n5), &n5);
        assert!(is_semimodular(&Lattice::diamond(3)).holds);
        assert!(is_semimodular(&Lattice::boolean(3)).holds);
    }

    #[test]
    fn simplicity() {
        assert!(is_simple(&Lattice::diamond(3)).unwrap().holds);
        let c3 = Lattice::chain(3);
        assert_fails_with_witness(&is_simple(&c3).unwrap(), &c3);
        assert_eq!(
            is_simple(&Lattice::chain(1)),
            Err(LawError::TooSmall { size: 1 })
        );
        assert!(is_simple(&partition_lattice(4).unwrap()).unwrap().holds);
    }

    #[test]
    fn regularity_uniformity_isoformity() {
        let c3 = Lattice::chain(3);
        assert_fails_with_witness(&is_regular(&c3).unwrap(), &c3);
        assert!(is_regular(&Lattice::diamond(3)).unwrap().holds);

        let c4 = Lattice::chain(4);
        assert_fails_with_witness(&is_uniform(&c4).unwrap(), &c4);
        assert!(is_uniform(&Lattice::boolean(2)).unwrap().holds);
        assert!(is_uniform(&Lattice::diamond(3)).unwrap().holds);

        assert!(is_isoform(&Lattice::boolean(2)).unwrap().holds);
        assert_fails_with_witness(&is_isoform(&c3).unwrap(), &c3);
    }

    #[test]
    fn dimension_two() {
        assert!(order_dimension_le2(&Lattice::chain(6)).holds);
        let grid =
            direct_product(&Lattice::chain(7), &Lattice::chain(7), DEFAULT_SIZE_CAP).unwrap();
        assert!(order_dimension_le2(&grid).holds);
        assert!(order_dimension_le2(&Lattice::diamond(3)).holds);
        let cube = Lattice::boolean(3);
        let r = order_dimension_le2(&cube);
        assert_fails_with_witness(&r, &cube);
        assert!(order_dimension_le2(&Lattice::diamond(4)).holds);
    }

    #[test]
    fn law_names_round_trip() {
        for law in Law::ALL {
            assert_eq!(Law::from_name(law.name()), Some(law));
        }
    }
}
