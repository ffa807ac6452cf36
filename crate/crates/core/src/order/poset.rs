//! Finite partial orders on dense `0..n` indices.

use fixedbitset::FixedBitSet;

use super::OrderError;

/// A finite partial order.
///
/// The order is stored twice, as principal down-sets and principal up-sets,
/// one bitset row per element. The cover relation (the transitive reduction)
/// and a linear extension are derived once at construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poset {
    size: usize,
    down: Vec<FixedBitSet>,
    up: Vec<FixedBitSet>,
    covers: Vec<(usize, usize)>,
    lower_covers: Vec<Vec<usize>>,
    upper_covers: Vec<Vec<usize>>,
    linear: Vec<usize>,
}

impl Poset {
    /// Builds the poset whose order is the reflexive-transitive closure of
    /// `covers`, where `(a, b)` means `a < b`. Redundant pairs are dropped,
    /// so [`Poset::covers`] always returns the transitive reduction.
    pub fn from_covers(size: usize, covers: &[(usize, usize)]) -> Result<Self, OrderError> {
        let mut succ = vec![Vec::new(); size];
        let mut indegree = vec![0usize; size];
        for &(a, b) in covers {
            for x in [a, b] {
                if x >= size {
                    return Err(OrderError::IndexOutOfRange { index: x, size });
                }
            }
            if a == b {
                return Err(OrderError::CycleDetected { element: a });
            }
            succ[a].push(b);
            indegree[b] += 1;
        }

        // Kahn's algorithm, always releasing the smallest ready index.
        let mut ready: std::collections::BTreeSet<usize> =
            (0..size).filter(|&x| indegree[x] == 0).collect();
        let mut linear = Vec::with_capacity(size);
        while let Some(x) = ready.pop_first() {
            linear.push(x);
            for &y in &succ[x] {
                indegree[y] -= 1;
                if indegree[y] == 0 {
                    ready.insert(y);
                }
            }
        }
        if linear.len() < size {
            let element = (0..size).find(|&x| indegree[x] > 0).unwrap_or(0);
            return Err(OrderError::CycleDetected { element });
        }

        let mut down = vec![FixedBitSet::with_capacity(size); size];
        let mut preds = vec![Vec::new(); size];
        for &(a, b) in covers {
            preds[b].push(a);
        }
        for &x in &linear {
            let mut row = FixedBitSet::with_capacity(size);
            row.insert(x);
            for &p in &preds[x] {
                row.union_with(&down[p]);
            }
            down[x] = row;
        }
        Ok(Self::from_down_rows(down, linear))
    }

    /// Builds a poset from an order predicate `leq(a, b)`, checking that it
    /// is reflexive, antisymmetric and transitive.
    pub fn from_order_fn(
        size: usize,
        leq: impl Fn(usize, usize) -> bool,
    ) -> Result<Self, OrderError> {
        let mut down = vec![FixedBitSet::with_capacity(size); size];
        for b in 0..size {
            for a in 0..size {
                if leq(a, b) {
                    down[b].insert(a);
                }
            }
        }
        for a in 0..size {
            if !down[a].contains(a) {
                return Err(OrderError::NotAnOrder { a, b: a });
            }
            for b in down[a].ones() {
                if b != a && down[b].contains(a) {
                    return Err(OrderError::NotAnOrder { a: b, b: a });
                }
                // transitivity: down[b] must be inside down[a]
                if !down[b].is_subset(&down[a]) {
                    return Err(OrderError::NotAnOrder { a: b, b: a });
                }
            }
        }
        let linear = linear_from_down(&down);
        Ok(Self::from_down_rows(down, linear))
    }

    /// Same as [`Poset::from_order_fn`] without validation; the caller
    /// guarantees `leq` is a partial order.
    pub(crate) fn from_order_trusted(size: usize, leq: impl Fn(usize, usize) -> bool) -> Self {
        let mut down = vec![FixedBitSet::with_capacity(size); size];
        for b in 0..size {
            for a in 0..size {
                if leq(a, b) {
                    down[b].insert(a);
                }
            }
        }
        let linear = linear_from_down(&down);
        Self::from_down_rows(down, linear)
    }

    fn from_down_rows(down: Vec<FixedBitSet>, linear: Vec<usize>) -> Self {
        let size = down.len();
        let mut up = vec![FixedBitSet::with_capacity(size); size];
        for (b, row) in down.iter().enumerate() {
            for a in row.ones() {
                up[a].insert(b);
            }
        }
        let mut position = vec![0usize; size];
        for (i, &x) in linear.iter().enumerate() {
            position[x] = i;
        }

        // Lower covers of b: scan the strict down-set from the top of the
        // linear extension; an element is a cover unless a cover found
        // earlier already lies above it.
        let mut lower_covers = vec![Vec::new(); size];
        let mut upper_covers = vec![Vec::new(); size];
        let mut covers = Vec::new();
        for b in 0..size {
            let mut strict: Vec<usize> = down[b].ones().filter(|&a| a != b).collect();
            strict.sort_unstable_by_key(|&a| std::cmp::Reverse(position[a]));
            let mut shadowed = FixedBitSet::with_capacity(size);
            for a in strict {
                if shadowed.contains(a) {
                    continue;
                }
                lower_covers[b].push(a);
                shadowed.union_with(&down[a]);
            }
            lower_covers[b].sort_unstable();
            for &a in &lower_covers[b] {
                upper_covers[a].push(b);
                covers.push((a, b));
            }
        }
        for row in &mut upper_covers {
            row.sort_unstable();
        }
        covers.sort_unstable();
        Self {
            size,
            down,
            up,
            covers,
            lower_covers,
            upper_covers,
            linear,
        }
    }

    /// The empty poset.
    pub fn empty() -> Self {
        Self::from_down_rows(Vec::new(), Vec::new())
    }

    /// The `n`-element chain `0 < 1 < ... < n-1`.
    pub fn chain(n: usize) -> Self {
        let covers: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Self::from_covers(n, &covers).expect("a path is acyclic")
    }

    /// The `n`-element antichain.
    pub fn antichain(n: usize) -> Self {
        Self::from_covers(n, &[]).expect("no covers")
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    #[inline]
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.down[b].contains(a)
    }

    #[inline]
    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.leq(a, b)
    }

    pub fn comparable(&self, a: usize, b: usize) -> bool {
        self.leq(a, b) || self.leq(b, a)
    }

    /// Cover pairs `(a, b)` with `a ≺ b`, sorted.
    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    pub fn is_cover(&self, a: usize, b: usize) -> bool {
        self.covers.binary_search(&(a, b)).is_ok()
    }

    pub fn lower_covers(&self, x: usize) -> &[usize] {
        &self.lower_covers[x]
    }

    pub fn upper_covers(&self, x: usize) -> &[usize] {
        &self.upper_covers[x]
    }

    /// The principal down-set `{a : a ≤ x}`.
    pub fn down_set(&self, x: usize) -> &FixedBitSet {
        &self.down[x]
    }

    /// The principal up-set `{b : x ≤ b}`.
    pub fn up_set(&self, x: usize) -> &FixedBitSet {
        &self.up[x]
    }

    /// A linear extension; among all, the one that always takes the
    /// smallest available index.
    pub fn linear_extension(&self) -> &[usize] {
        &self.linear
    }

    pub fn minimal_elements(&self) -> Vec<usize> {
        (0..self.size)
            .filter(|&x| self.lower_covers[x].is_empty())
            .collect()
    }

    pub fn maximal_elements(&self) -> Vec<usize> {
        (0..self.size)
            .filter(|&x| self.upper_covers[x].is_empty())
            .collect()
    }

    /// Length of the longest chain from a minimal element up to each element.
    pub fn heights(&self) -> Vec<usize> {
        let mut height = vec![0usize; self.size];
        for &x in &self.linear {
            height[x] = self.lower_covers[x]
                .iter()
                .map(|&a| height[a] + 1)
                .max()
                .unwrap_or(0);
        }
        height
    }

    /// Number of elements in the longest chain.
    pub fn height(&self) -> usize {
        self.heights().into_iter().max().map_or(0, |h| h + 1)
    }

    pub fn is_chain(&self) -> bool {
        (0..self.size).all(|a| (0..self.size).all(|b| self.comparable(a, b)))
    }

    pub fn is_antichain(&self) -> bool {
        self.covers.is_empty()
    }

    /// The subposet induced on `elements`; element `i` of the result is
    /// `elements[i]`.
    pub fn induced(&self, elements: &[usize]) -> Poset {
        Poset::from_order_trusted(elements.len(), |i, j| self.leq(elements[i], elements[j]))
    }

    /// The order dual.
    pub fn dual(&self) -> Poset {
        Poset::from_order_trusted(self.size, |a, b| self.leq(b, a))
    }

    /// Whether `set` is closed downward.
    pub fn is_down_set(&self, set: &FixedBitSet) -> bool {
        set.ones().all(|x| self.down[x].is_subset(set))
    }
}

fn linear_from_down(down: &[FixedBitSet]) -> Vec<usize> {
    // Sorting by down-set size is a linear extension: a < b implies
    // |down(a)| < |down(b)|.
    let mut linear: Vec<usize> = (0..down.len()).collect();
    linear.sort_by_key(|&x| (down[x].count_ones(..), x));
    linear
}
