#![allow(clippy::needless_range_loop)]

use std::collections::BTreeSet;

use conrep::chopped::{
    chopped_congruences, chopped_from_covers, gl_bijection, ideal_lattice, n6_contract, n6_gadget,
    representation_1962, sc_chopped_construction, ChoppedError, ChoppedLattice, N6_COVERS,
};
use conrep::congruence::{congruence_lattice, principal_congruence, Congruence};
use conrep::laws::{is_regular, is_sectionally_complemented};
use conrep::order::{
    downset_lattice, enumerate_lattices, enumerate_posets, join_irreducibles, lattice_isomorphism,
    poset_isomorphism, Lattice, DEFAULT_SIZE_CAP,
};

const CAP: usize = 1 << 20;

fn m0() -> ChoppedLattice {
    chopped_from_covers(4, &[(0, 1), (0, 2), (0, 3)], 0).unwrap()
}

/// Partitions of a chopped lattice with the substitution property for
/// meets and for every defined join.
fn brute_chopped_congruences(m: &ChoppedLattice) -> BTreeSet<Vec<usize>> {
    let n = m.size();
    let mut out = BTreeSet::new();
    fn rec(
        m: &ChoppedLattice,
        i: usize,
        max: usize,
        rgs: &mut Vec<usize>,
        out: &mut BTreeSet<Vec<usize>>,
    ) {
        let n = m.size();
        if i == n {
            let ok = (0..n).all(|a| {
                (0..n).all(|b| {
                    rgs[a] != rgs[b]
                        || (0..n).all(|c| {
                            let joins = match (m.join(a, c), m.join(b, c)) {
                                (Some(x), Some(y)) => rgs[x] == rgs[y],
                                _ => true,
                            };
                            joins && rgs[m.meet(a, c)] == rgs[m.meet(b, c)]
                        })
                })
            });
            if ok {
                out.insert(rgs.clone());
            }
            return;
        }
        for v in 0..=max + 1 {
            rgs[i] = v;
            rec(m, i + 1, max.max(v), rgs, out);
        }
    }
    if n > 0 {
        rec(m, 1, 0, &mut vec![0; n], &mut out);
    }
    out
}

fn rgs_of(theta: &Congruence) -> Vec<usize> {
    let n = theta.size();
    let mut label = vec![usize::MAX; n];
    let mut next = 0;
    let mut out = vec![0; n];
    for a in 0..n {
        let rep = (0..n).find(|&b| theta.related(a, b)).unwrap();
        if label[rep] == usize::MAX {
            label[rep] = next;
            next += 1;
        }
        out[a] = label[rep];
    }
    out
}

/// Nonempty down-sets closed under defined joins, by subset search.
fn brute_ideal_count(m: &ChoppedLattice) -> usize {
    let n = m.size();
    (1u32..1 << n)
        .filter(|&s| {
            let has = |x: usize| s >> x & 1 == 1;
            (0..n).all(|a| !has(a) || (0..n).all(|b| !m.leq(b, a) || has(b)))
                && (0..n)
                    .all(|a| (0..n).all(|b| !(has(a) && has(b)) || m.join(a, b).is_none_or(has)))
        })
        .count()
}

/// Small chopped lattices: every lattice with at most five elements, the
/// three-atom example, and two-block unions sharing an ideal.
fn corpus() -> Vec<ChoppedLattice> {
    let mut out: Vec<ChoppedLattice> = (1..=5)
        .flat_map(|n| enumerate_lattices(n, 8).unwrap())
        .map(|l| ChoppedLattice::from_lattice(&l))
        .collect();
    out.push(m0());
    out.push(chopped_from_covers(3, &[(0, 1), (0, 2)], 0).unwrap());
    // two squares glued along the atom 2
    out.push(
        chopped_from_covers(
            6,
            &[(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (2, 5), (3, 5)],
            0,
        )
        .unwrap(),
    );
    // a chain and a square sharing the bottom
    out.push(chopped_from_covers(6, &[(0, 1), (1, 2), (0, 3), (0, 4), (3, 5), (4, 5)], 0).unwrap());
    for p in (1..=3).flat_map(|n| enumerate_posets(n).unwrap()) {
        out.push(sc_chopped_construction(&p).unwrap().chopped);
    }
    out
}

#[test]
fn three_atoms_have_eight_congruences() {
    let m = m0();
    let cons = chopped_congruences(&m, CAP).unwrap();
    assert_eq!(cons.all.len(), 8);
    assert_eq!(brute_chopped_congruences(&m).len(), 8);
    assert!(lattice_isomorphism(&cons.lattice, &Lattice::boolean(3)).is_some());
    let ideals = ideal_lattice(&m, CAP).unwrap();
    assert!(lattice_isomorphism(&ideals.lattice, &Lattice::boolean(3)).is_some());
}

#[test]
fn chopped_congruences_match_brute_force() {
    for m in corpus().into_iter().filter(|m| m.size() <= 10) {
        let ours: BTreeSet<Vec<usize>> = chopped_congruences(&m, CAP)
            .unwrap()
            .all
            .iter()
            .map(rgs_of)
            .collect();
        assert_eq!(ours, brute_chopped_congruences(&m));
    }
}

#[test]
fn ideal_lattices_match_brute_force() {
    for m in corpus().into_iter().filter(|m| m.size() <= 16) {
        let ideals = ideal_lattice(&m, CAP).unwrap();
        assert_eq!(ideals.lattice.size(), brute_ideal_count(&m));
        for a in 0..m.size() {
            for b in 0..m.size() {
                let (pa, pb) = (ideals.principal[a], ideals.principal[b]);
                assert_eq!(ideals.principal[m.meet(a, b)], ideals.lattice.meet(pa, pb));
                if let Some(j) = m.join(a, b) {
                    assert_eq!(ideals.principal[j], ideals.lattice.join(pa, pb));
                }
            }
        }
    }
}

#[test]
fn gl_bijection_on_corpus() {
    for m in corpus() {
        let cert = gl_bijection(&m, CAP).unwrap();
        assert_eq!(cert.chopped.all.len(), cert.ideal_congruences.len());
        let direct = congruence_lattice(&cert.ideals.lattice).unwrap();
        assert_eq!(direct.len(), Some(cert.chopped.all.len()));
        let distinct: BTreeSet<usize> = cert.extension.iter().copied().collect();
        assert_eq!(distinct.len(), cert.extension.len());
        for (i, &e) in cert.extension.iter().enumerate() {
            let theta = &cert.chopped.all[i];
            let big = &cert.ideal_congruences[e];
            for a in 0..m.size() {
                for b in 0..m.size() {
                    let (pa, pb) = (cert.ideals.principal[a], cert.ideals.principal[b]);
                    assert_eq!(theta.related(a, b), big.related(pa, pb));
                }
            }
        }
    }
}

#[test]
fn lattices_are_chopped_with_identical_congruences() {
    for l in (1..=6).flat_map(|n| enumerate_lattices(n, 8).unwrap()) {
        let m = ChoppedLattice::from_lattice(&l);
        assert!(m.is_lattice());
        let mut ours = chopped_congruences(&m, CAP).unwrap().all;
        let mut theirs = congruence_lattice(&l)
            .unwrap()
            .materialized()
            .unwrap()
            .congruences
            .clone();
        ours.sort();
        theirs.sort();
        assert_eq!(ours, theirs);
    }
}

#[test]
fn chopped_conditions_are_validated() {
    let err =
        chopped_from_covers(5, &[(0, 1), (0, 2), (1, 3), (2, 3), (1, 4), (2, 4)], 0).unwrap_err();
    assert!(matches!(err, ChoppedError::NoJoinForBoundedPair { .. }));
    assert!(matches!(
        chopped_from_covers(3, &[(0, 1)], 0).unwrap_err(),
        ChoppedError::NoBottom { .. }
    ));
}

/// Lattices of the given size admitting atoms that satisfy the gadget
/// contract, and which are sectionally complemented.
fn n6_candidates() -> Vec<Lattice> {
    enumerate_lattices(6, 8)
        .unwrap()
        .into_iter()
        .filter(|l| is_sectionally_complemented(l).holds)
        .filter(|l| {
            let atoms = l.atoms();
            atoms.iter().any(|&p| {
                atoms.iter().any(|&q1| {
                    atoms
                        .iter()
                        .any(|&q2| q1 < q2 && n6_contract(l, p, q1, q2).is_ok())
                })
            })
        })
        .collect()
}

#[test]
fn gadget_is_the_unique_six_element_candidate() {
    let g = n6_gadget(1, 0).unwrap();
    let cp = principal_congruence(&g.lattice, g.p1, 0);
    let cq = principal_congruence(&g.lattice, g.q1, 0);
    assert!(cp.related(g.q1, 0) && cp.related(g.q2, 0));
    assert!(!cq.related(g.p1, 0));
    let found = n6_candidates();
    assert_eq!(found.len(), 1);
    assert!(
        lattice_isomorphism(&found[0], &Lattice::from_covers(6, &N6_COVERS).unwrap()).is_some()
    );
}

#[test]
fn construction_outputs_are_chopped() {
    for p in (0..=4).flat_map(|n| enumerate_posets(n).unwrap()) {
        let sc = sc_chopped_construction(&p).unwrap();
        let m = &sc.chopped;
        assert_eq!(sc.names.len(), m.size());
        // meets are total and bounded pairs have joins
        for a in 0..m.size() {
            for b in 0..m.size() {
                let bounded = (0..m.size()).any(|c| m.leq(a, c) && m.leq(b, c));
                assert_eq!(bounded, m.join(a, b).is_some());
            }
        }
    }
}

#[test]
fn two_antichain_gives_the_square() {
    let p = enumerate_posets(2)
        .unwrap()
        .into_iter()
        .find(|p| p.covers().is_empty())
        .unwrap();
    let d = downset_lattice(&p, CAP).unwrap();
    let r = representation_1962(&d.lattice, DEFAULT_SIZE_CAP).unwrap();
    assert!(lattice_isomorphism(&r.lattice, &Lattice::boolean(2)).is_some());
}

#[test]
fn four_chain_example() {
    let r = representation_1962(&Lattice::chain(4), DEFAULT_SIZE_CAP).unwrap();
    assert!(is_sectionally_complemented(&r.lattice).holds);
    let con = congruence_lattice(&r.lattice).unwrap();
    assert!(
        lattice_isomorphism(&con.materialized().unwrap().lattice, &Lattice::chain(4)).is_some()
    );
}

#[test]
fn representations_for_small_posets() {
    for p in (1..=4).flat_map(|n| enumerate_posets(n).unwrap()) {
        let d = downset_lattice(&p, CAP).unwrap();
        let r = representation_1962(&d.lattice, DEFAULT_SIZE_CAP).unwrap();
        let l = &r.lattice;
        assert!(is_sectionally_complemented(l).holds);
        assert!(is_regular(l).unwrap().holds);
        let con = congruence_lattice(l).unwrap();
        assert!(poset_isomorphism(con.ji_order(), &p).is_some());
        assert!(poset_isomorphism(&join_irreducibles(&d.lattice), &p).is_some());
    }
}
