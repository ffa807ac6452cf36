//! Finite lattices with dense meet and join tables.

use fixedbitset::FixedBitSet;

use super::{LatticeDefect, OrderError, Poset};

/// A finite lattice: a poset together with total meet and join tables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice {
    poset: Poset,
    meet: Vec<u32>,
    join: Vec<u32>,
    bottom: usize,
    top: usize,
}

impl Lattice {
    /// Builds the lattice whose Hasse diagram is given by `covers`.
    pub fn from_covers(size: usize, covers: &[(usize, usize)]) -> Result<Self, OrderError> {
        Self::from_poset(Poset::from_covers(size, covers)?)
    }

    /// Builds a lattice from an order predicate, validating both the order
    /// and the existence of all meets and joins.
    pub fn from_order_fn(
        size: usize,
        leq: impl Fn(usize, usize) -> bool,
    ) -> Result<Self, OrderError> {
        Self::from_poset(Poset::from_order_fn(size, leq)?)
    }

    pub(crate) fn from_order_trusted(
        size: usize,
        leq: impl Fn(usize, usize) -> bool,
    ) -> Result<Self, OrderError> {
        Self::from_poset(Poset::from_order_trusted(size, leq))
    }

    /// Computes meet and join tables for `poset`, or reports the first pair
    /// (in linear-extension order) lacking a unique bound.
    pub fn from_poset(poset: Poset) -> Result<Self, OrderError> {
        let n = poset.size();
        if n == 0 {
            return Err(OrderError::Empty);
        }
        let meet = bound_table(&poset, Direction::Down)?;
        let dual = poset.dual();
        let join = bound_table(&dual, Direction::Up)?;
        let bottom = (0..n)
            .find(|&x| poset.up_set(x).count_ones(..) == n)
            .expect("meets exist, so a least element exists");
        let top = (0..n)
            .find(|&x| poset.down_set(x).count_ones(..) == n)
            .expect("joins exist, so a greatest element exists");
        Ok(Self {
            poset,
            meet,
            join,
            bottom,
            top,
        })
    }

    /// The `n`-element chain `0 < 1 < ... < n-1`.
    pub fn chain(n: usize) -> Self {
        Self::from_poset(Poset::chain(n)).expect("chains are lattices")
    }

    /// `M_k`: a bottom `0`, atoms `1..=k`, and a top `k+1`. `M_3` is the diamond.
    pub fn diamond(k: usize) -> Self {
        let top = k + 1;
        let covers: Vec<_> = (1..=k).flat_map(|a| [(0, a), (a, top)]).collect();
        Self::from_covers(k + 2, &covers).expect("M_k is a lattice")
    }

    /// The pentagon `N5`: `0 ≺ 1 ≺ 2 ≺ 4` and `0 ≺ 3 ≺ 4`.
    pub fn pentagon() -> Self {
        Self::from_covers(5, &[(0, 1), (1, 2), (2, 4), (0, 3), (3, 4)]).expect("N5 is a lattice")
    }

    /// The Boolean lattice of subsets of a `k`-set, element `i` being the
    /// subset with bitmask `i`.
    pub fn boolean(k: usize) -> Self {
        let n = 1usize << k;
        Self::from_order_trusted(n, |a, b| a & b == a).expect("subset lattices are lattices")
    }

    pub fn size(&self) -> usize {
        self.poset.size()
    }

    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    #[inline]
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.poset.leq(a, b)
    }

    #[inline]
    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a * self.size() + b] as usize
    }

    #[inline]
    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a * self.size() + b] as usize
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn covers(&self) -> &[(usize, usize)] {
        self.poset.covers()
    }

    pub fn is_cover(&self, a: usize, b: usize) -> bool {
        self.poset.is_cover(a, b)
    }

    pub fn atoms(&self) -> &[usize] {
        self.poset.upper_covers(self.bottom)
    }

    /// Elements with exactly one lower cover.
    pub fn join_irreducible_elements(&self) -> Vec<usize> {
        (0..self.size())
            .filter(|&x| self.poset.lower_covers(x).len() == 1)
            .collect()
    }

    /// Elements with exactly one upper cover.
    pub fn meet_irreducible_elements(&self) -> Vec<usize> {
        (0..self.size())
            .filter(|&x| self.poset.upper_covers(x).len() == 1)
            .collect()
    }

    /// The elements of `[a, b]`, ascending.
    pub fn interval_elements(&self, a: usize, b: usize) -> Vec<usize> {
        let mut set: FixedBitSet = self.poset.up_set(a).clone();
        set.intersect_with(self.poset.down_set(b));
        set.ones().collect()
    }

    /// Checks the lattice identities over all pairs and triples; returns the
    /// first violating triple.
    pub fn check_axioms(&self) -> Option<(usize, usize, usize)> {
        let n = self.size();
        for a in 0..n {
            for b in 0..n {
                if self.meet(a, b) != self.meet(b, a)
                    || self.join(a, b) != self.join(b, a)
                    || self.meet(a, self.join(a, b)) != a
                    || self.join(a, self.meet(a, b)) != a
                {
                    return Some((a, b, b));
                }
                for c in 0..n {
                    if self.meet(self.meet(a, b), c) != self.meet(a, self.meet(b, c))
                        || self.join(self.join(a, b), c) != self.join(a, self.join(b, c))
                    {
                        return Some((a, b, c));
                    }
                }
            }
        }
        None
    }
}

#[derive(Clone, Copy)]
enum Direction {
    Down,
    Up,
}

/// Greatest-lower-bound table of `poset` (with `Direction::Up` the caller
/// passes the dual, producing the join table in original indices).
///
/// The glb of an incomparable pair `(a, b)` is the largest of
/// `glb(a', b)` over the lower covers `a'` of `a`, so rows are filled in
/// linear-extension order.
fn bound_table(poset: &Poset, dir: Direction) -> Result<Vec<u32>, OrderError> {
    let n = poset.size();
    const UNSET: u32 = u32::MAX;
    let mut table = vec![UNSET; n * n];
    for &a in poset.linear_extension() {
        for b in 0..n {
            let value = if poset.leq(a, b) {
                a
            } else if poset.leq(b, a) {
                b
            } else {
                let candidates: Vec<usize> = poset
                    .lower_covers(a)
                    .iter()
                    .map(|&c| table[c * n + b] as usize)
                    .collect();
                let Some(&best) = candidates
                    .iter()
                    .max_by_key(|&&c| poset.down_set(c).count_ones(..))
                else {
                    return Err(defect(dir, a, b, false));
                };
                if candidates.iter().any(|&c| !poset.leq(c, best)) {
                    return Err(defect(dir, a, b, true));
                }
                best
            };
            table[a * n + b] = value as u32;
        }
    }
    debug_assert!(table.iter().all(|&v| v != UNSET));
    Ok(table)
}

fn defect(dir: Direction, a: usize, b: usize, several: bool) -> OrderError {
    let reason = match (dir, several) {
        (_, true) => LatticeDefect::NonUnique,
        (Direction::Down, false) => LatticeDefect::NoGlb,
        (Direction::Up, false) => LatticeDefect::NoLub,
    };
    let (a, b) = (a.min(b), a.max(b));
    OrderError::NotALattice { a, b, reason }
}
