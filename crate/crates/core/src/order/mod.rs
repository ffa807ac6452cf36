//! Posets and lattices, Birkhoff duality, isomorphism, and small-lattice
//! enumeration.

mod enumerate;
mod iso;
mod lattice;
mod poset;

use std::fmt;

use fixedbitset::FixedBitSet;
use thiserror::Error;

pub use enumerate::{
    enumerate_lattices, enumerate_posets, lattice_canonical_code, DEFAULT_ENUMERATION_CAP,
    POSET_LIMIT,
};
pub use iso::{lattice_isomorphism, poset_isomorphism, IsoWitness};
pub use lattice::Lattice;
pub use poset::Poset;

/// Default ceiling on the number of elements a constructed lattice may have.
pub const DEFAULT_SIZE_CAP: usize = 200_000;

/// Why a poset failed to be a lattice.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LatticeDefect {
    NoLub,
    NoGlb,
    NonUnique,
}

impl fmt::Display for LatticeDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LatticeDefect::NoLub => "no-lub",
            LatticeDefect::NoGlb => "no-glb",
            LatticeDefect::NonUnique => "non-unique",
        })
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OrderError {
    #[error("cycle detected through element {element}")]
    CycleDetected { element: usize },
    #[error("element index {index} out of range for size {size}")]
    IndexOutOfRange { index: usize, size: usize },
    #[error("relation is not a partial order at ({a}, {b})")]
    NotAnOrder { a: usize, b: usize },
    #[error("not a lattice: pair ({a}, {b}) has {reason}")]
    NotALattice {
        a: usize,
        b: usize,
        reason: LatticeDefect,
    },
    #[error("a lattice needs at least one element")]
    Empty,
    #[error("size limit exceeded: {required} elements required, cap is {cap}")]
    SizeLimitExceeded { required: usize, cap: usize },
    #[error("elements {a} and {b} are not comparable")]
    NotComparable { a: usize, b: usize },
}

/// The poset of join-irreducible elements of `lattice` (elements with
/// exactly one lower cover), with the inherited order. Element `i` of the
/// result is the `i`-th join-irreducible in ascending index order.
pub fn join_irreducibles(lattice: &Lattice) -> Poset {
    lattice
        .poset()
        .induced(&lattice.join_irreducible_elements())
}

/// The lattice of down-sets of a poset, together with the down-sets.
#[derive(Clone, Debug)]
pub struct DownsetLattice {
    pub lattice: Lattice,
    /// `downsets[i]` is lattice element `i`; ordered by size, then by
    /// the members' indices.
    pub downsets: Vec<FixedBitSet>,
}

/// All down-sets of `poset` in canonical order; fails once more than `cap`
/// have been produced.
pub fn downsets(poset: &Poset, cap: usize) -> Result<Vec<FixedBitSet>, OrderError> {
    let n = poset.size();
    let linear = poset.linear_extension().to_vec();
    let mut out = Vec::new();
    let mut current = FixedBitSet::with_capacity(n);

    // Walk the linear extension deciding membership; an element may join
    // only when all its lower covers already have.
    fn walk(
        poset: &Poset,
        linear: &[usize],
        depth: usize,
        current: &mut FixedBitSet,
        out: &mut Vec<FixedBitSet>,
        cap: usize,
    ) -> Result<(), OrderError> {
        if depth == linear.len() {
            if out.len() == cap {
                return Err(OrderError::SizeLimitExceeded {
                    required: cap + 1,
                    cap,
                });
            }
            out.push(current.clone());
            return Ok(());
        }
        let x = linear[depth];
        walk(poset, linear, depth + 1, current, out, cap)?;
        if poset.lower_covers(x).iter().all(|&c| current.contains(c)) {
            current.insert(x);
            walk(poset, linear, depth + 1, current, out, cap)?;
            current.set(x, false);
        }
        Ok(())
    }

    walk(poset, &linear, 0, &mut current, &mut out, cap)?;
    out.sort_by(|a, b| {
        a.count_ones(..)
            .cmp(&b.count_ones(..))
            .then_with(|| a.ones().cmp(b.ones()))
    });
    Ok(out)
}

/// The distributive lattice of down-sets of `poset` ordered by inclusion.
pub fn downset_lattice(poset: &Poset, cap: usize) -> Result<DownsetLattice, OrderError> {
    let sets = downsets(poset, cap)?;
    let lattice = Lattice::from_order_trusted(sets.len(), |a, b| sets[a].is_subset(&sets[b]))?;
    Ok(DownsetLattice {
        lattice,
        downsets: sets,
    })
}

/// The direct product `a × b`; element `(i, j)` has index `i * |b| + j`.
pub fn direct_product(a: &Lattice, b: &Lattice, cap: usize) -> Result<Lattice, OrderError> {
    let (na, nb) = (a.size(), b.size());
    let required = na.saturating_mul(nb);
    if required > cap {
        return Err(OrderError::SizeLimitExceeded { required, cap });
    }
    let mut covers = Vec::with_capacity(na * b.covers().len() + a.covers().len() * nb);
    for i in 0..na {
        for &(x, y) in b.covers() {
            covers.push((i * nb + x, i * nb + y));
        }
    }
    for &(x, y) in a.covers() {
        for j in 0..nb {
            covers.push((x * nb + j, y * nb + j));
        }
    }
    Lattice::from_covers(required, &covers)
}

/// The interval `[lo, hi]` as a lattice, with the ascending list of the
/// original elements it contains.
pub fn interval(
    lattice: &Lattice,
    lo: usize,
    hi: usize,
) -> Result<(Lattice, Vec<usize>), OrderError> {
    if !lattice.leq(lo, hi) {
        return Err(OrderError::NotComparable { a: lo, b: hi });
    }
    let elements = lattice.interval_elements(lo, hi);
    let sub = Lattice::from_poset(lattice.poset().induced(&elements))?;
    Ok((sub, elements))
}
