//! Isomorphism-free generation of small lattices.
//!
//! An `n`-element lattice (`n ≥ 2`) is a bottom and a top around an inner
//! poset `Q` of `n - 2` elements, and `0 ⊕ Q ⊕ 1` is a lattice exactly when
//! every pair of `Q` with a common lower bound has a greatest one. That
//! condition is inherited by down-sets, so inner posets are grown one
//! maximal element at a time and pruned as soon as it fails. Each candidate
//! is reduced to a canonical code (the lexicographically least strict-order
//! matrix over relabelings that keep elements sorted by level and degree
//! invariants) and kept once.

use std::collections::BTreeMap;

use super::{Lattice, OrderError, Poset};

/// Default maximum lattice size accepted by [`enumerate_lattices`].
pub const DEFAULT_ENUMERATION_CAP: usize = 8;

/// Codes are 128-bit strict-order matrices, so inner posets top out at 11.
const HARD_LIMIT: usize = 13;

/// Largest poset size accepted by [`enumerate_posets`].
pub const POSET_LIMIT: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct SmallPoset {
    n: usize,
    /// `down[x]` has bit `a` set iff `a ≤ x` (reflexive).
    down: [u16; 16],
}

impl SmallPoset {
    fn empty() -> Self {
        Self {
            n: 0,
            down: [0; 16],
        }
    }

    fn leq(&self, a: usize, b: usize) -> bool {
        self.down[b] >> a & 1 == 1
    }

    fn up_mask(&self, a: usize) -> u16 {
        (0..self.n)
            .filter(|&b| self.leq(a, b))
            .fold(0, |m, b| m | 1 << b)
    }

    fn is_down_closed(&self, set: u16) -> bool {
        (0..self.n)
            .filter(|&x| set >> x & 1 == 1)
            .all(|x| self.down[x] & !set == 0)
    }

    fn with_maximal(&self, below: u16) -> Self {
        let mut next = *self;
        next.down[self.n] = below | 1 << self.n;
        next.n += 1;
        next
    }

    /// Whether each pair involving `x` that has a common lower bound has a
    /// greatest one.
    fn meets_ok_for(&self, x: usize) -> bool {
        (0..self.n).all(|a| {
            let common = self.down[a] & self.down[x];
            common == 0 || (0..self.n).any(|g| self.down[g] == common)
        })
    }

    fn lower_cover_count(&self, x: usize) -> usize {
        let strict = self.down[x] & !(1 << x);
        (0..self.n)
            .filter(|&a| strict >> a & 1 == 1)
            .filter(|&a| {
                // a is a cover unless some other strict lower element sits above it
                !(0..self.n).any(|c| c != a && strict >> c & 1 == 1 && self.leq(a, c))
            })
            .count()
    }

    fn heights(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.n).collect();
        order.sort_by_key(|&x| self.down[x].count_ones());
        let mut h = vec![0; self.n];
        for &x in &order {
            h[x] = (0..self.n)
                .filter(|&a| a != x && self.leq(a, x))
                .map(|a| h[a] + 1)
                .max()
                .unwrap_or(0);
        }
        h
    }

    /// Canonical relabeling `order[new] = old` and its code.
    fn canonical(&self) -> (u128, Vec<usize>) {
        let n = self.n;
        let heights = self.heights();
        let mut upper_covers = vec![0usize; n];
        for x in 0..n {
            for a in 0..n {
                if a != x && self.leq(a, x) && self.lower_cover_count(x) > 0 {
                    let strict = self.down[x] & !(1 << x);
                    let is_cover =
                        !(0..n).any(|c| c != a && strict >> c & 1 == 1 && self.leq(a, c));
                    if is_cover {
                        upper_covers[a] += 1;
                    }
                }
            }
        }
        let signature = |x: usize| {
            (
                heights[x],
                self.down[x].count_ones(),
                self.up_mask(x).count_ones(),
                self.lower_cover_count(x),
                upper_covers[x],
            )
        };
        let mut by_sig: Vec<usize> = (0..n).collect();
        by_sig.sort_by_key(|&x| signature(x));
        let slot_sig: Vec<_> = by_sig.iter().map(|&x| signature(x)).collect();

        let mut best: Option<(u128, Vec<usize>)> = None;
        let mut order = Vec::with_capacity(n);
        let mut used = vec![false; n];
        self.search(&slot_sig, &signature, &mut order, &mut used, &mut best);
        best.expect("at least one labeling")
    }

    fn search<S: Ord + Copy>(
        &self,
        slot_sig: &[S],
        signature: &impl Fn(usize) -> S,
        order: &mut Vec<usize>,
        used: &mut [bool],
        best: &mut Option<(u128, Vec<usize>)>,
    ) {
        let n = self.n;
        if order.len() == n {
            let code = self.code(order);
            if best.as_ref().is_none_or(|(c, _)| code < *c) {
                *best = Some((code, order.clone()));
            }
            return;
        }
        let slot = order.len();
        for x in 0..n {
            if used[x] || signature(x) != slot_sig[slot] {
                continue;
            }
            used[x] = true;
            order.push(x);
            self.search(slot_sig, signature, order, used, best);
            order.pop();
            used[x] = false;
        }
    }

    fn code(&self, order: &[usize]) -> u128 {
        let n = self.n;
        let mut code = 0u128;
        for i in 0..n {
            for j in 0..n {
                code <<= 1;
                if i != j && self.leq(order[i], order[j]) {
                    code |= 1;
                }
            }
        }
        code
    }

    fn relabel(&self, order: &[usize]) -> Self {
        let mut position = [0usize; 16];
        for (new, &old) in order.iter().enumerate() {
            position[old] = new;
        }
        let mut out = Self::empty();
        out.n = self.n;
        for (new, &old) in order.iter().enumerate() {
            let mut mask = 0u16;
            for a in 0..self.n {
                if self.leq(a, old) {
                    mask |= 1 << position[a];
                }
            }
            out.down[new] = mask;
        }
        out
    }

    fn bounded_lattice(&self) -> Lattice {
        let n = self.n + 2;
        let top = n - 1;
        Lattice::from_order_trusted(n, |a, b| {
            a == 0 || b == top || (a != top && b != 0 && self.leq(a - 1, b - 1))
        })
        .expect("inner poset satisfies the meet condition")
    }
}

/// One canonical representative per isomorphism class of `n`-element
/// lattices, sorted by canonical code.
pub fn enumerate_lattices(n: usize, cap: usize) -> Result<Vec<Lattice>, OrderError> {
    let cap = cap.min(HARD_LIMIT);
    if n > cap {
        return Err(OrderError::SizeLimitExceeded { required: n, cap });
    }
    match n {
        0 => return Ok(Vec::new()),
        1 => return Ok(vec![Lattice::chain(1)]),
        _ => {}
    }
    let inner = inner_posets(n - 2, true);
    Ok(inner.values().map(SmallPoset::bounded_lattice).collect())
}

/// One representative per isomorphism class of `n`-element posets, sorted by
/// canonical code. Labels follow a linear extension.
pub fn enumerate_posets(n: usize) -> Result<Vec<Poset>, OrderError> {
    if n > POSET_LIMIT {
        return Err(OrderError::SizeLimitExceeded {
            required: n,
            cap: POSET_LIMIT,
        });
    }
    Ok(inner_posets(n, false)
        .values()
        .map(|q| Poset::from_order_fn(q.n, |a, b| q.leq(a, b)).expect("grown posets are orders"))
        .collect())
}

fn inner_posets(k: usize, require_meets: bool) -> BTreeMap<u128, SmallPoset> {
    let mut level: BTreeMap<u128, SmallPoset> = BTreeMap::new();
    level.insert(0, SmallPoset::empty());
    for _ in 0..k {
        let mut next = BTreeMap::new();
        for q in level.values() {
            for below in 0..(1u32 << q.n) {
                let below = below as u16;
                if !q.is_down_closed(below) {
                    continue;
                }
                let candidate = q.with_maximal(below);
                if require_meets && !candidate.meets_ok_for(q.n) {
                    continue;
                }
                let (code, order) = candidate.canonical();
                next.entry(code)
                    .or_insert_with(|| candidate.relabel(&order));
            }
        }
        level = next;
    }
    level
}

/// Canonical code of a lattice with at most 13 elements; equal codes mean
/// isomorphic lattices.
pub fn lattice_canonical_code(lattice: &Lattice) -> Option<(usize, u128)> {
    let n = lattice.size();
    if n > HARD_LIMIT {
        return None;
    }
    if n <= 2 {
        return Some((n, 0));
    }
    let inner: Vec<usize> = (0..n)
        .filter(|&x| x != lattice.bottom() && x != lattice.top())
        .collect();
    let mut q = SmallPoset::empty();
    q.n = inner.len();
    for (i, &x) in inner.iter().enumerate() {
        let mut mask = 0u16;
        for (j, &y) in inner.iter().enumerate() {
            if lattice.leq(y, x) {
                mask |= 1 << j;
            }
        }
        q.down[i] = mask;
    }
    Some((n, q.canonical().0))
}
