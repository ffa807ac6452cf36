//! Chopped lattices (finite meet-semilattices whose bounded pairs have
//! joins), their ideal lattices and congruences, and the construction of a
//! sectionally complemented lattice with a prescribed congruence lattice.

use std::collections::{BTreeSet, HashMap};

use fixedbitset::FixedBitSet;
use thiserror::Error;

use crate::congruence::{congruence_lattice, Closure, Congruence, CongruenceError};
use crate::laws::{is_distributive, is_sectionally_complemented, LawError};
use crate::order::{join_irreducibles, poset_isomorphism, Lattice, OrderError, Poset};

const UNDEFINED: u32 = u32::MAX;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ChoppedError {
    #[error("elements {a} and {b} have no greatest lower bound")]
    NoMeet { a: usize, b: usize },
    #[error("elements {a} and {b} have a common upper bound but no least one")]
    NoJoinForBoundedPair { a: usize, b: usize },
    #[error("element {bottom} is not below every element")]
    NoBottom { bottom: usize },
    #[error("congruence correspondence failed: {detail}")]
    BijectionFailed { detail: String },
    #[error("gadgets do not merge into a chopped lattice: {detail}")]
    MergeConflict { detail: String },
    #[error("contract violated: {detail}")]
    ContractViolated { detail: String },
    #[error("input lattice is not distributive")]
    NotDistributive,
    #[error(transparent)]
    Order(#[from] OrderError),
    #[error(transparent)]
    Congruence(#[from] CongruenceError),
    #[error(transparent)]
    Law(#[from] LawError),
}

fn contract(detail: impl Into<String>) -> ChoppedError {
    ChoppedError::ContractViolated {
        detail: detail.into(),
    }
}

/// A finite poset with a least element, total meets, and joins for exactly
/// the pairs that have an upper bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChoppedLattice {
    poset: Poset,
    meet: Vec<u32>,
    join: Vec<u32>,
    bottom: usize,
}

/// Validates conditions (i) and (ii) and builds the operation tables.
pub fn chopped_from_covers(
    n: usize,
    covers: &[(usize, usize)],
    bottom: usize,
) -> Result<ChoppedLattice, ChoppedError> {
    ChoppedLattice::from_poset(Poset::from_covers(n, covers)?, bottom)
}

impl ChoppedLattice {
    pub fn from_poset(poset: Poset, bottom: usize) -> Result<Self, ChoppedError> {
        let n = poset.size();
        if bottom >= n || poset.up_set(bottom).count_ones(..) != n {
            return Err(ChoppedError::NoBottom { bottom });
        }
        let mut meet = vec![UNDEFINED; n * n];
        let mut join = vec![UNDEFINED; n * n];
        for a in 0..n {
            for b in a..n {
                let mut lower = poset.down_set(a).clone();
                lower.intersect_with(poset.down_set(b));
                let count = lower.count_ones(..);
                let glb = lower
                    .ones()
                    .find(|&g| poset.down_set(g).count_ones(..) == count)
                    .ok_or(ChoppedError::NoMeet { a, b })?;
                meet[a * n + b] = glb as u32;
                meet[b * n + a] = glb as u32;

                let mut upper = poset.up_set(a).clone();
                upper.intersect_with(poset.up_set(b));
                let count = upper.count_ones(..);
                if count > 0 {
                    let lub = upper
                        .ones()
                        .find(|&l| poset.up_set(l).count_ones(..) == count)
                        .ok_or(ChoppedError::NoJoinForBoundedPair { a, b })?;
                    join[a * n + b] = lub as u32;
                    join[b * n + a] = lub as u32;
                }
            }
        }
        Ok(Self {
            poset,
            meet,
            join,
            bottom,
        })
    }

    pub fn from_lattice(lattice: &Lattice) -> Self {
        Self::from_poset(lattice.poset().clone(), lattice.bottom())
            .expect("a lattice is a chopped lattice")
    }

    pub fn size(&self) -> usize {
        self.poset.size()
    }

    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.poset.leq(a, b)
    }

    #[inline]
    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a * self.size() + b] as usize
    }

    /// The join of `a` and `b` when they have an upper bound.
    #[inline]
    pub fn join(&self, a: usize, b: usize) -> Option<usize> {
        let j = self.join[a * self.size() + b];
        (j != UNDEFINED).then_some(j as usize)
    }

    /// Whether every pair has a join, i.e. this is a lattice.
    pub fn is_lattice(&self) -> bool {
        self.join.iter().all(|&j| j != UNDEFINED)
    }

    /// Returns `(a, b, c)` with `a ≡ b` whose meets or defined joins with
    /// `c` fall in different blocks.
    pub fn substitution_failure(&self, theta: &Congruence) -> Option<(usize, usize, usize)> {
        let n = self.size();
        for block in theta.blocks() {
            for (i, &a) in block.iter().enumerate() {
                for &b in &block[i + 1..] {
                    for c in 0..n {
                        if !theta.related(self.meet(a, c), self.meet(b, c)) {
                            return Some((a, b, c));
                        }
                        if let (Some(x), Some(y)) = (self.join(a, c), self.join(b, c)) {
                            if !theta.related(x, y) {
                                return Some((a, b, c));
                            }
                        }
                    }
                }
            }
        }
        None
    }

    /// Least congruence containing `seed` pairs and `base`.
    ///
    /// Translating merged pairs alone is not enough here: `a ≡ m ≡ b` may
    /// hold with `a ∨ c` and `b ∨ c` defined but `m ∨ c` undefined, so
    /// blocks are re-examined pairwise until nothing changes.
    fn close(&self, base: Option<&Congruence>, seed: &[(usize, usize)]) -> Congruence {
        let n = self.size();
        let mut closure = match base {
            Some(theta) => Closure::from_congruence(theta),
            None => Closure::new(n),
        };
        for &(a, b) in seed {
            closure.union(a, b);
        }
        loop {
            while let Some((x, y)) = closure.pop() {
                for z in 0..n {
                    closure.union(self.meet(x, z), self.meet(y, z));
                    if let (Some(u), Some(v)) = (self.join(x, z), self.join(y, z)) {
                        closure.union(u, v);
                    }
                }
            }
            let theta = closure.finish();
            match self.substitution_failure(&theta) {
                None => return theta,
                Some((a, b, c)) => {
                    closure = Closure::from_congruence(&theta);
                    let (x, y) = (self.join(a, c).unwrap(), self.join(b, c).unwrap());
                    closure.union(x, y);
                }
            }
        }
    }

    pub fn principal_congruence(&self, a: usize, b: usize) -> Congruence {
        self.close(None, &[(a, b)])
    }

    pub fn congruence_join(&self, theta: &Congruence, phi: &Congruence) -> Congruence {
        let pairs: Vec<(usize, usize)> = (0..phi.size()).map(|x| (x, phi.label(x))).collect();
        self.close(Some(theta), &pairs)
    }
}

/// Every congruence of a chopped lattice, ordered by refinement.
#[derive(Clone, Debug)]
pub struct ChoppedCongruences {
    /// Distinct principal congruences of covers.
    pub ji: Vec<Congruence>,
    pub ji_order: Poset,
    /// All congruences, sorted; element `i` of `lattice` is `all[i]`.
    pub all: Vec<Congruence>,
    pub lattice: Lattice,
}

/// Computes all congruences as joins of principal congruences of covers.
pub fn chopped_congruences(
    m: &ChoppedLattice,
    cap: usize,
) -> Result<ChoppedCongruences, ChoppedError> {
    let mut ji: Vec<Congruence> = Vec::new();
    for &(a, b) in m.poset().covers() {
        let theta = m.principal_congruence(a, b);
        if !ji.contains(&theta) {
            ji.push(theta);
        }
    }
    let ji_order = Poset::from_order_fn(ji.len(), |i, j| ji[i].is_finer_than(&ji[j]))?;

    let mut all: BTreeSet<Congruence> = BTreeSet::new();
    let mut frontier = vec![Congruence::identity(m.size())];
    all.insert(frontier[0].clone());
    while let Some(theta) = frontier.pop() {
        for j in &ji {
            if j.is_finer_than(&theta) {
                continue;
            }
            let next = m.congruence_join(&theta, j);
            if all.insert(next.clone()) {
                if all.len() > cap {
                    return Err(OrderError::SizeLimitExceeded {
                        required: all.len(),
                        cap,
                    }
                    .into());
                }
                frontier.push(next);
            }
        }
    }
    let all: Vec<Congruence> = all.into_iter().collect();
    for theta in &all {
        if let Some((a, b, c)) = m.substitution_failure(theta) {
            return Err(ChoppedError::ContractViolated {
                detail: format!("closure produced a non-congruence at ({a}, {b}, {c})"),
            });
        }
    }
    let lattice = Lattice::from_order_fn(all.len(), |i, j| all[i].is_finer_than(&all[j]))?;
    Ok(ChoppedCongruences {
        ji,
        ji_order,
        all,
        lattice,
    })
}

/// The lattice of ideals of a chopped lattice.
#[derive(Clone, Debug)]
pub struct IdealLattice {
    pub lattice: Lattice,
    /// `ideals[i]` is lattice element `i`; sorted by size, then members.
    pub ideals: Vec<FixedBitSet>,
    /// `principal[a]` is the element `(a]`.
    pub principal: Vec<usize>,
}

/// Smallest ideal containing `set`: closed downward and under defined joins.
fn generated_ideal(m: &ChoppedLattice, set: &FixedBitSet) -> FixedBitSet {
    let mut ideal = set.clone();
    loop {
        let members: Vec<usize> = ideal.ones().collect();
        for &x in &members {
            ideal.union_with(m.poset().down_set(x));
        }
        let members: Vec<usize> = ideal.ones().collect();
        let mut grew = false;
        for (i, &a) in members.iter().enumerate() {
            for &b in &members[i + 1..] {
                if let Some(j) = m.join(a, b) {
                    if !ideal.contains(j) {
                        ideal.insert(j);
                        grew = true;
                    }
                }
            }
        }
        if !grew
            && members
                .iter()
                .all(|&x| m.poset().down_set(x).is_subset(&ideal))
        {
            return ideal;
        }
    }
}

/// Enumerates ideals by growing from `{0}` one generator at a time.
pub fn ideal_lattice(m: &ChoppedLattice, cap: usize) -> Result<IdealLattice, ChoppedError> {
    let n = m.size();
    let mut start = FixedBitSet::with_capacity(n);
    start.insert(m.bottom());
    let start = generated_ideal(m, &start);
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    seen.insert(start.ones().collect());
    let mut stack = vec![start];
    let mut ideals = Vec::new();
    while let Some(ideal) = stack.pop() {
        for x in 0..n {
            if ideal.contains(x) {
                continue;
            }
            let mut grown = ideal.clone();
            grown.insert(x);
            let grown = generated_ideal(m, &grown);
            if seen.insert(grown.ones().collect()) {
                if seen.len() > cap {
                    return Err(OrderError::SizeLimitExceeded {
                        required: seen.len(),
                        cap,
                    }
                    .into());
                }
                stack.push(grown);
            }
        }
        ideals.push(ideal);
    }
    ideals.sort_by(|a, b| {
        a.count_ones(..)
            .cmp(&b.count_ones(..))
            .then_with(|| a.ones().cmp(b.ones()))
    });
    let lattice = Lattice::from_order_fn(ideals.len(), |i, j| ideals[i].is_subset(&ideals[j]))?;
    let index: HashMap<Vec<usize>, usize> = ideals
        .iter()
        .enumerate()
        .map(|(i, s)| (s.ones().collect(), i))
        .collect();
    let principal = (0..n)
        .map(|a| {
            let down: Vec<usize> = m.poset().down_set(a).ones().collect();
            index[&down]
        })
        .collect();
    Ok(IdealLattice {
        lattice,
        ideals,
        principal,
    })
}

/// The correspondence between congruences of a chopped lattice and of its
/// ideal lattice.
#[derive(Clone, Debug)]
pub struct GlCertificate {
    pub chopped: ChoppedCongruences,
    pub ideals: IdealLattice,
    /// Congruences of the ideal lattice, in materialized order.
    pub ideal_congruences: Vec<Congruence>,
    /// `extension[i]` is the unique congruence of the ideal lattice whose
    /// restriction to principal ideals is `chopped.all[i]`.
    pub extension: Vec<usize>,
}

/// Checks that restriction to principal ideals is a bijection from
/// `Con(Id M)` onto `Con M` and an order isomorphism.
pub fn gl_bijection(m: &ChoppedLattice, cap: usize) -> Result<GlCertificate, ChoppedError> {
    let fail = |detail: String| ChoppedError::BijectionFailed { detail };
    let chopped = chopped_congruences(m, cap)?;
    let ideals = ideal_lattice(m, cap)?;
    let con = congruence_lattice(&ideals.lattice)?;
    let ideal_congruences = con
        .materialized()
        .ok_or(LawError::TooManyCongruences)?
        .congruences
        .clone();
    let position: HashMap<&Congruence, usize> = chopped
        .all
        .iter()
        .enumerate()
        .map(|(i, c)| (c, i))
        .collect();
    let mut extension = vec![usize::MAX; chopped.all.len()];
    for (k, psi) in ideal_congruences.iter().enumerate() {
        let keys: Vec<u32> = ideals.principal.iter().map(|&p| psi.labels()[p]).collect();
        let restricted = Congruence::from_blocks(&keys);
        let &i = position.get(&restricted).ok_or_else(|| {
            fail(format!(
                "restriction of ideal congruence {k} is not a congruence"
            ))
        })?;
        if extension[i] != usize::MAX {
            return Err(fail(format!("congruence {i} has two extensions")));
        }
        extension[i] = k;
    }
    if let Some(i) = extension.iter().position(|&k| k == usize::MAX) {
        return Err(fail(format!("congruence {i} has no extension")));
    }
    for i in 0..chopped.all.len() {
        for j in 0..chopped.all.len() {
            let below = chopped.all[i].is_finer_than(&chopped.all[j]);
            let ext_below =
                ideal_congruences[extension[i]].is_finer_than(&ideal_congruences[extension[j]]);
            if below != ext_below {
                return Err(fail(format!(
                    "order between congruences {i} and {j} is not preserved"
                )));
            }
        }
    }
    Ok(GlCertificate {
        chopped,
        ideals,
        ideal_congruences,
        extension,
    })
}

/// The six-element gadget: bottom `0`, atoms `p1`, `q1`, `q2`, `q = q1 ∨ q2`,
/// and `top = p1 ∨ q`.
#[derive(Clone, Debug)]
pub struct N6Gadget {
    pub p: usize,
    pub q: usize,
    pub lattice: Lattice,
    pub p1: usize,
    pub q1: usize,
    pub q2: usize,
    pub q_top: usize,
    pub top: usize,
}

pub const N6_COVERS: [(usize, usize); 7] = [(0, 1), (0, 2), (0, 3), (2, 4), (3, 4), (4, 5), (1, 5)];

/// Checks that collapsing `p1` to the bottom collapses the q-atoms, that the
/// q-atoms generate a single congruence which is the only join-irreducible
/// strictly below that of `p1`, and that the converse forcing fails.
pub fn n6_contract(l: &Lattice, p1: usize, q1: usize, q2: usize) -> Result<(), String> {
    let zero = l.bottom();
    let atoms = l.atoms();
    if ![p1, q1, q2].iter().all(|x| atoms.contains(x)) || p1 == q1 || p1 == q2 || q1 == q2 {
        return Err("p1, q1, q2 must be distinct atoms".into());
    }
    let con = congruence_lattice(l).map_err(|e| e.to_string())?;
    let cp = crate::congruence::principal_congruence(l, p1, zero);
    let cq1 = crate::congruence::principal_congruence(l, q1, zero);
    let cq2 = crate::congruence::principal_congruence(l, q2, zero);
    if cq1 != cq2 {
        return Err("the two q-atoms generate different congruences".into());
    }
    if !cp.related(q1, zero) || !cp.related(q2, zero) {
        return Err("collapsing p1 does not collapse the q-atoms".into());
    }
    if cq1.related(p1, zero) {
        return Err("collapsing a q-atom collapses p1".into());
    }
    let below: Vec<&Congruence> = con
        .ji()
        .iter()
        .filter(|j| j.is_finer_than(&cp) && **j != cp)
        .collect();
    if below != vec![&cq1] {
        return Err(
            "the q-atom congruence is not the only join-irreducible below that of p1".into(),
        );
    }
    Ok(())
}

/// Builds the gadget for a cover `q ≺ p` and validates it against
/// [`n6_contract`] and sectional complementation.
pub fn n6_gadget(p: usize, q: usize) -> Result<N6Gadget, ChoppedError> {
    let lattice = Lattice::from_covers(6, &N6_COVERS)?;
    n6_contract(&lattice, 1, 2, 3).map_err(contract)?;
    if !is_sectionally_complemented(&lattice).holds {
        return Err(contract("gadget is not sectionally complemented"));
    }
    Ok(N6Gadget {
        p,
        q,
        lattice,
        p1: 1,
        q1: 2,
        q2: 3,
        q_top: 4,
        top: 5,
    })
}

/// A chopped lattice assembled from gadgets, with element names.
#[derive(Clone, Debug)]
pub struct ScConstruction {
    pub chopped: ChoppedLattice,
    pub names: Vec<String>,
    /// For each element of the input poset, the atoms copying it.
    pub copies: Vec<Vec<usize>>,
}

/// Builds the chopped lattice: a bottom, one atom per maximal element of
/// `p` and two atoms (with their join) per other element, and for each
/// cover `q ≺ p` a gadget top above the first copy of `p` and the join of
/// the copies of `q`.
pub fn sc_chopped_construction(p: &Poset) -> Result<ScConstruction, ChoppedError> {
    let mut names = vec!["0".to_string()];
    let mut covers = Vec::new();
    let mut copies = vec![Vec::new(); p.size()];
    let mut q_top = vec![usize::MAX; p.size()];
    let add = |names: &mut Vec<String>, name: String| {
        names.push(name);
        names.len() - 1
    };
    for x in 0..p.size() {
        if p.upper_covers(x).is_empty() {
            let a = add(&mut names, format!("p{x}"));
            covers.push((0, a));
            copies[x].push(a);
        } else {
            let a = add(&mut names, format!("p{x}_1"));
            let b = add(&mut names, format!("p{x}_2"));
            let t = add(&mut names, format!("p{x}_q"));
            covers.extend([(0, a), (0, b), (a, t), (b, t)]);
            copies[x].extend([a, b]);
            q_top[x] = t;
        }
    }
    for &(q, upper) in p.covers() {
        let gadget = n6_gadget(upper, q)?;
        let t = add(&mut names, format!("g{upper}_{q}"));
        // p-atom below the gadget top, and the q-copies' join below it
        covers.push((copies[gadget.p][0], t));
        covers.push((q_top[gadget.q], t));
    }
    let chopped =
        chopped_from_covers(names.len(), &covers, 0).map_err(|e| ChoppedError::MergeConflict {
            detail: e.to_string(),
        })?;

    // Con M must match the down-set lattice of `p` via join-irreducibles.
    let mut ji: Vec<Congruence> = Vec::new();
    for &(a, b) in chopped.poset().covers() {
        let theta = chopped.principal_congruence(a, b);
        if !ji.contains(&theta) {
            ji.push(theta);
        }
    }
    let ji_order = Poset::from_order_fn(ji.len(), |i, j| ji[i].is_finer_than(&ji[j]))?;
    if poset_isomorphism(&ji_order, p).is_none() {
        return Err(contract(
            "join-irreducible congruences do not reproduce the poset",
        ));
    }
    Ok(ScConstruction {
        chopped,
        names,
        copies,
    })
}

/// A sectionally complemented lattice whose congruence lattice is `d`.
#[derive(Clone, Debug)]
pub struct Representation {
    pub construction: ScConstruction,
    pub ideals: IdealLattice,
    pub lattice: Lattice,
}

/// Builds `Id M` for the chopped lattice of `Ji d` and checks that it is
/// sectionally complemented with `Ji(Con L) ≅ Ji d`.
pub fn representation_1962(d: &Lattice, cap: usize) -> Result<Representation, ChoppedError> {
    if !is_distributive(d).holds {
        return Err(ChoppedError::NotDistributive);
    }
    let p = join_irreducibles(d);
    let construction = sc_chopped_construction(&p)?;
    let ideals = ideal_lattice(&construction.chopped, cap)?;
    let lattice = ideals.lattice.clone();
    if !is_sectionally_complemented(&lattice).holds {
        return Err(contract("ideal lattice is not sectionally complemented"));
    }
    let con = congruence_lattice(&lattice)?;
    if poset_isomorphism(con.ji_order(), &p).is_none() {
        return Err(contract(
            "congruence lattice of the ideal lattice does not match",
        ));
    }
    Ok(Representation {
        construction,
        ideals,
        lattice,
    })
}
