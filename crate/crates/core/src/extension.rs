//! Congruence-preserving extensions: the lattice of Boolean triples of a
//! bounded lattice, and cubic extensions built as products of simple
//! extensions of subdirect factors.

use std::collections::HashSet;

use thiserror::Error;

use crate::congruence::{
    congruence_lattice, congruence_meet, is_congruence_preserving_extension, quotient_lattice,
    restrict, Congruence, CongruenceError, CpeCertificate, Embedding,
};
use crate::laws::{is_simple, LawError};
use crate::order::{direct_product, interval, lattice_isomorphism, Lattice, OrderError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExtensionError {
    #[error("lattice has {size} element(s); at least 2 are needed")]
    TooSmall { size: usize },
    #[error("no simple extension found: {reason}")]
    StrategyFailed { reason: String },
    #[error("contract violated: {detail}")]
    ContractViolated { detail: String },
    #[error(transparent)]
    Order(#[from] OrderError),
    #[error(transparent)]
    Congruence(#[from] CongruenceError),
    #[error(transparent)]
    Law(#[from] LawError),
}

fn violated(detail: impl Into<String>) -> ExtensionError {
    ExtensionError::ContractViolated {
        detail: detail.into(),
    }
}

/// Whether each coordinate of `(x, y, z)` equals the meet of its joins with
/// the other two.
pub fn is_boolean_triple(k: &Lattice, x: usize, y: usize, z: usize) -> bool {
    let fix = |a: usize, b: usize, c: usize| k.meet(k.join(a, b), k.join(a, c)) == a;
    fix(x, y, z) && fix(y, x, z) && fix(z, x, y)
}

/// The lattice of Boolean triples of `base`, ordered componentwise.
#[derive(Clone, Debug)]
pub struct BooleanTripleLattice {
    pub base: Lattice,
    pub lattice: Lattice,
    /// `triples[i]` is element `i` of `lattice`.
    pub triples: Vec<(usize, usize, usize)>,
    /// Image of `x` under `x ↦ (x, 0, 0)`.
    pub embedding: Vec<usize>,
}

impl BooleanTripleLattice {
    pub fn index_of(&self, t: (usize, usize, usize)) -> Option<usize> {
        self.triples.binary_search(&t).ok()
    }

    /// Componentwise join followed by coordinate repair until stable.
    pub fn closure_join(
        &self,
        a: (usize, usize, usize),
        b: (usize, usize, usize),
    ) -> (usize, usize, usize) {
        let k = &self.base;
        let mut t = (k.join(a.0, b.0), k.join(a.1, b.1), k.join(a.2, b.2));
        loop {
            let (x, y, z) = t;
            let next = (
                k.meet(k.join(x, y), k.join(x, z)),
                k.meet(k.join(y, x), k.join(y, z)),
                k.meet(k.join(z, x), k.join(z, y)),
            );
            if next == t {
                return t;
            }
            t = next;
        }
    }

    pub fn embedding(&self) -> Result<Embedding<'_>, CongruenceError> {
        Embedding::new(&self.base, &self.lattice, self.embedding.clone())
    }

    /// The interval `[(0,0,0), (1,0,0)]`, which is a copy of the base.
    pub fn base_interval(&self) -> Result<Lattice, OrderError> {
        let (b, t) = (self.base.bottom(), self.base.top());
        let lo = self
            .index_of((b, b, b))
            .expect("(0,0,0) is a Boolean triple");
        let hi = self
            .index_of((t, b, b))
            .expect("(1,0,0) is a Boolean triple");
        interval(&self.lattice, lo, hi).map(|(l, _)| l)
    }
}

/// Builds the Boolean triples of `k`, checks that they form a lattice whose
/// joins agree with the repair closure, and checks the embedding
/// `x ↦ (x, 0, 0)`.
pub fn boolean_triples(k: &Lattice, cap: usize) -> Result<BooleanTripleLattice, ExtensionError> {
    let n = k.size();
    let required = n.saturating_mul(n).saturating_mul(n);
    if required > cap {
        return Err(OrderError::SizeLimitExceeded { required, cap }.into());
    }
    let mut triples = Vec::new();
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                if is_boolean_triple(k, x, y, z) {
                    triples.push((x, y, z));
                }
            }
        }
    }
    let lattice = Lattice::from_order_fn(triples.len(), |i, j| {
        let (a, b) = (triples[i], triples[j]);
        k.leq(a.0, b.0) && k.leq(a.1, b.1) && k.leq(a.2, b.2)
    })?;
    let bottom = k.bottom();
    let embedding = (0..n)
        .map(|x| {
            triples
                .binary_search(&(x, bottom, bottom))
                .expect("(x,0,0) is a Boolean triple")
        })
        .collect();
    let fg = BooleanTripleLattice {
        base: k.clone(),
        lattice,
        triples,
        embedding,
    };
    for i in 0..fg.triples.len() {
        for j in i + 1..fg.triples.len() {
            let closed = fg.closure_join(fg.triples[i], fg.triples[j]);
            if fg.triples[fg.lattice.join(i, j)] != closed {
                return Err(violated(format!(
                    "repair closure of {:?} and {:?} is not their least upper bound",
                    fg.triples[i], fg.triples[j]
                )));
            }
        }
    }
    fg.embedding()?;
    Ok(fg)
}

/// Runs the congruence-preserving-extension test on `x ↦ (x, 0, 0)`.
pub fn verify_booleantriples_cpe(
    fg: &BooleanTripleLattice,
) -> Result<CpeCertificate, ExtensionError> {
    let cert = is_congruence_preserving_extension(&fg.embedding()?)?;
    if !cert.holds {
        return Err(violated(format!(
            "Boolean triple embedding is not congruence-preserving: {:?}",
            cert.violation
        )));
    }
    Ok(cert)
}

/// A subdirect factor `K / θ` for a meet-irreducible congruence `θ`.
#[derive(Clone, Debug)]
pub struct SubdirectFactor {
    pub congruence: Congruence,
    pub quotient: Lattice,
    /// Least element of each block, in quotient order.
    pub representatives: Vec<usize>,
}

impl SubdirectFactor {
    /// Quotient element holding `x`.
    pub fn project(&self, x: usize) -> usize {
        let label = self.congruence.label(x);
        self.representatives
            .binary_search(&label)
            .expect("labels are representatives")
    }
}

/// The quotients of `k` by its meet-irreducible congruences.
pub fn subdirect_factors(k: &Lattice) -> Result<Vec<SubdirectFactor>, ExtensionError> {
    if k.size() < 2 {
        return Err(ExtensionError::TooSmall { size: k.size() });
    }
    let con = congruence_lattice(k)?;
    let all = con.materialized().ok_or(LawError::TooManyCongruences)?;
    let mut factors = Vec::new();
    for (i, theta) in all.congruences.iter().enumerate() {
        if all.lattice.poset().upper_covers(i).len() == 1 {
            let (quotient, representatives) = quotient_lattice(k, theta)?;
            factors.push(SubdirectFactor {
                congruence: theta.clone(),
                quotient,
                representatives,
            });
        }
    }
    let meet = factors.iter().fold(Congruence::all(k.size()), |acc, f| {
        congruence_meet(&acc, &f.congruence)
    });
    if !meet.is_identity() {
        return Err(violated(
            "meet-irreducible congruences do not meet to the identity",
        ));
    }
    Ok(factors)
}

/// Largest `m` accepted by [`partition_lattice`].
pub const MAX_PARTITION_SET: usize = 6;

/// Set partitions of `{0, .., m-1}` ordered by refinement; element `i` is
/// the `i`-th partition of [`partitions`].
pub fn partition_lattice(m: usize) -> Result<Lattice, ExtensionError> {
    let parts = partitions(m)?;
    let refines = |a: &[u8], b: &[u8]| (0..m).all(|i| (0..m).all(|j| a[i] != a[j] || b[i] == b[j]));
    Ok(Lattice::from_order_fn(parts.len(), |i, j| {
        refines(&parts[i], &parts[j])
    })?)
}

/// Restricted growth strings of length `m`, lexicographic.
pub fn partitions(m: usize) -> Result<Vec<Vec<u8>>, ExtensionError> {
    if m > MAX_PARTITION_SET {
        return Err(OrderError::SizeLimitExceeded {
            required: m,
            cap: MAX_PARTITION_SET,
        }
        .into());
    }
    let mut out = Vec::new();
    let mut rgs = vec![0u8; m];
    fn rec(i: usize, max: u8, rgs: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if i == rgs.len() {
            out.push(rgs.clone());
            return;
        }
        for v in 0..=max + 1 {
            rgs[i] = v;
            rec(i + 1, max.max(v), rgs, out);
        }
    }
    if m == 0 {
        out.push(Vec::new());
    } else {
        rec(1, 0, &mut rgs, &mut out);
    }
    Ok(out)
}

/// How to find a simple lattice containing a given one.
#[derive(Clone, Debug)]
pub enum SimpleStrategy {
    /// Use the lattice itself, failing unless it is simple.
    IdentityIfSimple,
    /// Search partition lattices `Π_m` for `m = 3..=max_m` for an embedding.
    PartitionSearch { max_m: usize },
    /// Candidate simple lattices with embedding maps; the first that is
    /// simple and whose map embeds the input is used.
    Provided(Vec<(Lattice, Vec<usize>)>),
}

impl Default for SimpleStrategy {
    fn default() -> Self {
        SimpleStrategy::PartitionSearch {
            max_m: MAX_PARTITION_SET,
        }
    }
}

/// A simple lattice with an embedding of the input.
#[derive(Clone, Debug)]
pub struct SimpleExtension {
    pub lattice: Lattice,
    pub map: Vec<usize>,
}

pub fn simple_extension(
    a: &Lattice,
    strategy: &SimpleStrategy,
) -> Result<SimpleExtension, ExtensionError> {
    match strategy {
        SimpleStrategy::IdentityIfSimple => {
            if a.size() >= 2 && is_simple(a)?.holds {
                Ok(SimpleExtension {
                    lattice: a.clone(),
                    map: (0..a.size()).collect(),
                })
            } else {
                Err(ExtensionError::StrategyFailed {
                    reason: "lattice is not simple".into(),
                })
            }
        }
        SimpleStrategy::PartitionSearch { max_m } => {
            for m in 3..=*max_m.min(&MAX_PARTITION_SET) {
                let target = partition_lattice(m)?;
                if let Some(map) = find_embedding(a, &target) {
                    return Ok(SimpleExtension {
                        lattice: target,
                        map,
                    });
                }
            }
            Err(ExtensionError::StrategyFailed {
                reason: format!("no embedding into a partition lattice on at most {max_m} points"),
            })
        }
        SimpleStrategy::Provided(candidates) => {
            for (lattice, map) in candidates {
                if lattice.size() < 2 || Embedding::new(a, lattice, map.clone()).is_err() {
                    continue;
                }
                if is_simple(lattice)?.holds {
                    return Ok(SimpleExtension {
                        lattice: lattice.clone(),
                        map: map.clone(),
                    });
                }
            }
            Err(ExtensionError::StrategyFailed {
                reason: "no provided candidate is a simple lattice embedding the input".into(),
            })
        }
    }
}

/// Backtracking search for a lattice embedding `a → t`, assigning images
/// along a linear extension of `a` and trying targets in index order.
pub fn find_embedding(a: &Lattice, t: &Lattice) -> Option<Vec<usize>> {
    let order = a.poset().linear_extension().to_vec();
    let mut map = vec![usize::MAX; a.size()];
    let mut used = vec![false; t.size()];
    fn rec(
        a: &Lattice,
        t: &Lattice,
        order: &[usize],
        depth: usize,
        map: &mut [usize],
        used: &mut [bool],
    ) -> bool {
        let Some(&x) = order.get(depth) else {
            return true;
        };
        for y in 0..t.size() {
            let above_lower_covers = a
                .poset()
                .lower_covers(x)
                .iter()
                .all(|&c| t.poset().lt(map[c], y));
            if used[y] || !above_lower_covers {
                continue;
            }
            map[x] = y;
            let consistent = order[..depth].iter().all(|&w| {
                let (m, j) = (a.meet(x, w), a.join(x, w));
                map[m] == t.meet(y, map[w]) && (map[j] == usize::MAX || map[j] == t.join(y, map[w]))
            }) && (0..a.size()).all(|u| {
                // pairs whose join is x and both already placed
                map[u] == usize::MAX
                    || (0..a.size()).all(|v| {
                        map[v] == usize::MAX || a.join(u, v) != x || t.join(map[u], map[v]) == y
                    })
            });
            if consistent {
                used[y] = true;
                if rec(a, t, order, depth + 1, map, used) {
                    return true;
                }
                used[y] = false;
            }
            map[x] = usize::MAX;
        }
        false
    }
    rec(a, t, &order, 0, &mut map, &mut used).then_some(map)
}

/// One factor of a cubic extension.
#[derive(Clone, Debug)]
pub struct CubicFactor {
    pub factor: SubdirectFactor,
    pub extension: SimpleExtension,
}

/// `R(K)`: the product of simple extensions of the subdirect factors of `K`.
#[derive(Clone, Debug)]
pub struct CubicExtension {
    pub base: Lattice,
    pub factors: Vec<CubicFactor>,
    pub product: Lattice,
    /// Image of each base element in `product`.
    pub embedding: Vec<usize>,
}

impl CubicExtension {
    pub fn embedding(&self) -> Result<Embedding<'_>, CongruenceError> {
        Embedding::new(&self.base, &self.product, self.embedding.clone())
    }
}

/// Builds `R(K)` and checks that its congruence lattice is Boolean with one
/// atom per factor and that every congruence of `K` extends to it.
pub fn cubic_extension(
    k: &Lattice,
    strategy: &SimpleStrategy,
    cap: usize,
) -> Result<CubicExtension, ExtensionError> {
    let subdirect = subdirect_factors(k)?;
    let mut factors = Vec::with_capacity(subdirect.len());
    for factor in subdirect {
        let extension = simple_extension(&factor.quotient, strategy)?;
        factors.push(CubicFactor { factor, extension });
    }
    let mut product = Lattice::chain(1);
    for f in &factors {
        product = direct_product(&product, &f.extension.lattice, cap)?;
    }
    // Mixed radix in factor order, matching the nesting of `direct_product`.
    let embedding: Vec<usize> = (0..k.size())
        .map(|x| {
            factors.iter().fold(0, |acc, f| {
                acc * f.extension.lattice.size() + f.extension.map[f.factor.project(x)]
            })
        })
        .collect();
    let ext = CubicExtension {
        base: k.clone(),
        factors,
        product,
        embedding,
    };
    let e = ext.embedding()?;

    let con = congruence_lattice(&ext.product)?;
    if con.ji().len() != ext.factors.len() || !con.ji_order().is_antichain() {
        return Err(violated(format!(
            "congruence lattice of the product has {} join-irreducibles, expected an antichain of {}",
            con.ji().len(),
            ext.factors.len()
        )));
    }
    let all = con.materialized().ok_or(LawError::TooManyCongruences)?;
    let reached: HashSet<Congruence> = all.congruences.iter().map(|t| restrict(t, &e)).collect();
    let base_con = congruence_lattice(k)?;
    let base_all = base_con
        .materialized()
        .ok_or(LawError::TooManyCongruences)?;
    if let Some(missing) = base_all.congruences.iter().find(|t| !reached.contains(*t)) {
        return Err(violated(format!(
            "congruence with blocks {:?} has no extension",
            missing.blocks()
        )));
    }
    Ok(ext)
}

/// The interval of `fg(K)` identified with `K`, checked to be isomorphic.
pub fn check_base_interval(fg: &BooleanTripleLattice) -> Result<bool, ExtensionError> {
    let iv = fg.base_interval()?;
    Ok(lattice_isomorphism(&iv, &fg.base).is_some())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laws::is_sectionally_complemented;
    use crate::order::DEFAULT_SIZE_CAP;

    #[test]
    fn triple_predicate() {
        let c2 = Lattice::chain(2);
        assert!(is_boolean_triple(&c2, 0, 0, 0));
        assert!(is_boolean_triple(&c2, 1, 1, 1));
        assert!(!is_boolean_triple(&c2, 1, 1, 0));
        assert!(is_boolean_triple(&c2, 1, 0, 0));
    }

    #[test]
    fn triples_of_two_chain() {
        let fg = boolean_triples(&Lattice::chain(2), DEFAULT_SIZE_CAP).unwrap();
        assert_eq!(
            fg.triples,
            vec![(0, 0, 0), (0, 0, 1), (0, 1, 0), (1, 0, 0), (1, 1, 1)]
        );
        assert!(lattice_isomorphism(&fg.lattice, &Lattice::diamond(3)).is_some());
        assert!(verify_booleantriples_cpe(&fg).unwrap().holds);
    }

    #[test]
    fn triples_of_three_chain_and_singleton() {
        let fg = boolean_triples(&Lattice::chain(3), DEFAULT_SIZE_CAP).unwrap();
        assert!(check_base_interval(&fg).unwrap());
        assert!(verify_booleantriples_cpe(&fg).unwrap().holds);
        let one = boolean_triples(&Lattice::chain(1), DEFAULT_SIZE_CAP).unwrap();
        assert_eq!(one.lattice.size(), 1);
    }

    #[test]
    fn partition_lattices() {
        assert_eq!(partition_lattice(1).unwrap().size(), 1);
        let p3 = partition_lattice(3).unwrap();
        assert!(lattice_isomorphism(&p3, &Lattice::diamond(3)).is_some());
        let p4 = partition_lattice(4).unwrap();
        assert_eq!(p4.size(), 15);
        assert!(is_sectionally_complemented(&p4).holds);
        assert_eq!(partition_lattice(6).unwrap().size(), 203);
        assert!(partition_lattice(7).is_err());
    }

    #[test]
    fn factors() {
        let m3 = Lattice::diamond(3);
        let f = subdirect_factors(&m3).unwrap();
        assert_eq!(f.len(), 1);
        assert!(f[0].congruence.is_identity());

        for k in [Lattice::boolean(2), Lattice::chain(3)] {
            let f = subdirect_factors(&k).unwrap();
            assert_eq!(f.len(), 2);
            for factor in &f {
                assert!(lattice_isomorphism(&factor.quotient, &Lattice::chain(2)).is_some());
            }
        }
        assert!(subdirect_factors(&Lattice::chain(1)).is_err());
    }

    #[test]
    fn simple_extensions() {
        let c2 = Lattice::chain(2);
        let s = simple_extension(&c2, &SimpleStrategy::default()).unwrap();
        assert!(lattice_isomorphism(&s.lattice, &Lattice::diamond(3)).is_some());

        let m3 = Lattice::diamond(3);
        let s = simple_extension(&m3, &SimpleStrategy::IdentityIfSimple).unwrap();
        assert_eq!(s.map, vec![0, 1, 2, 3, 4]);
        assert!(simple_extension(&Lattice::chain(3), &SimpleStrategy::IdentityIfSimple).is_err());

        let c3 = Lattice::chain(3);
        let s = simple_extension(&c3, &SimpleStrategy::default()).unwrap();
        assert!(Embedding::new(&c3, &s.lattice, s.map.clone()).is_ok());

        let provided = SimpleStrategy::Provided(vec![(m3.clone(), vec![0, 4])]);
        assert_eq!(simple_extension(&c2, &provided).unwrap().lattice, m3);
    }

    #[test]
    fn cubic_of_square() {
        let sq = Lattice::boolean(2);
        let r = cubic_extension(&sq, &SimpleStrategy::default(), DEFAULT_SIZE_CAP).unwrap();
        assert_eq!(r.product.size(), 25);
        assert!(is_sectionally_complemented(&r.product).holds);
    }

    #[test]
    fn cubic_of_simple_is_identity() {
        let m3 = Lattice::diamond(3);
        let r = cubic_extension(&m3, &SimpleStrategy::IdentityIfSimple, DEFAULT_SIZE_CAP).unwrap();
        assert!(lattice_isomorphism(&r.product, &m3).is_some());
    }
}
