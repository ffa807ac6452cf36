//! Order isomorphism by backtracking with invariant pruning.

use super::{Lattice, Poset};

/// An order isomorphism: `mapping[x]` is the image of `x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsoWitness {
    pub mapping: Vec<usize>,
}

impl IsoWitness {
    pub fn inverse(&self) -> IsoWitness {
        let mut inv = vec![0; self.mapping.len()];
        for (x, &y) in self.mapping.iter().enumerate() {
            inv[y] = x;
        }
        IsoWitness { mapping: inv }
    }

    /// Whether the mapping is a bijection that preserves and reflects order.
    pub fn is_valid_for(&self, from: &Poset, to: &Poset) -> bool {
        let n = from.size();
        if to.size() != n || self.mapping.len() != n {
            return false;
        }
        let mut seen = vec![false; n];
        for &y in &self.mapping {
            if y >= n || std::mem::replace(&mut seen[y], true) {
                return false;
            }
        }
        (0..n).all(|a| (0..n).all(|b| from.leq(a, b) == to.leq(self.mapping[a], self.mapping[b])))
    }
}

type Signature = (usize, usize, usize, usize, usize);

fn signatures(p: &Poset) -> Vec<Signature> {
    let heights = p.heights();
    (0..p.size())
        .map(|x| {
            (
                heights[x],
                p.lower_covers(x).len(),
                p.upper_covers(x).len(),
                p.down_set(x).count_ones(..),
                p.up_set(x).count_ones(..),
            )
        })
        .collect()
}

/// Finds the lexicographically least order isomorphism `p → q`, if any.
pub fn poset_isomorphism(p: &Poset, q: &Poset) -> Option<IsoWitness> {
    let n = p.size();
    if q.size() != n || p.covers().len() != q.covers().len() {
        return None;
    }
    let sp = signatures(p);
    let sq = signatures(q);
    let mut sorted_p = sp.clone();
    let mut sorted_q = sq.clone();
    sorted_p.sort_unstable();
    sorted_q.sort_unstable();
    if sorted_p != sorted_q {
        return None;
    }
    let candidates: Vec<Vec<usize>> = (0..n)
        .map(|x| (0..n).filter(|&y| sq[y] == sp[x]).collect())
        .collect();

    let mut mapping = vec![usize::MAX; n];
    let mut used = vec![false; n];
    if extend(p, q, &candidates, 0, &mut mapping, &mut used) {
        Some(IsoWitness { mapping })
    } else {
        None
    }
}

fn extend(
    p: &Poset,
    q: &Poset,
    candidates: &[Vec<usize>],
    x: usize,
    mapping: &mut [usize],
    used: &mut [bool],
) -> bool {
    if x == p.size() {
        return true;
    }
    for &y in &candidates[x] {
        if used[y] {
            continue;
        }
        let consistent = (0..x).all(|w| {
            let z = mapping[w];
            p.leq(w, x) == q.leq(z, y) && p.leq(x, w) == q.leq(y, z)
        });
        if !consistent {
            continue;
        }
        mapping[x] = y;
        used[y] = true;
        if extend(p, q, candidates, x + 1, mapping, used) {
            return true;
        }
        used[y] = false;
    }
    mapping[x] = usize::MAX;
    false
}

/// Lattice isomorphism; for lattices this is the same as order isomorphism.
pub fn lattice_isomorphism(a: &Lattice, b: &Lattice) -> Option<IsoWitness> {
    poset_isomorphism(a.poset(), b.poset())
}
