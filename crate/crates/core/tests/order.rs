#![allow(clippy::needless_range_loop)]

use conrep::order::{
    direct_product, downset_lattice, enumerate_lattices, enumerate_posets, interval,
    join_irreducibles, lattice_isomorphism, poset_isomorphism, Lattice, Poset, DEFAULT_SIZE_CAP,
};
use proptest::prelude::*;

/// Strict order on `0..n` as a matrix, or `None` if `rel` is not one.
fn close(n: usize, rel: &[(usize, usize)]) -> Option<Vec<Vec<bool>>> {
    let mut lt = vec![vec![false; n]; n];
    for &(a, b) in rel {
        lt[a][b] = true;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if lt[i][k] && lt[k][j] {
                    lt[i][j] = true;
                }
            }
        }
    }
    (0..n).all(|i| !lt[i][i]).then_some(lt)
}

/// Whether every pair has a least upper bound and a greatest lower bound.
fn is_lattice(n: usize, le: &dyn Fn(usize, usize) -> bool) -> bool {
    let bound = |a: usize, b: usize, up: bool| {
        let common: Vec<usize> = (0..n)
            .filter(|&x| {
                if up {
                    le(a, x) && le(b, x)
                } else {
                    le(x, a) && le(x, b)
                }
            })
            .collect();
        common
            .iter()
            .filter(|&&c| common.iter().all(|&d| if up { le(c, d) } else { le(d, c) }))
            .count()
            == 1
    };
    (0..n).all(|a| (0..n).all(|b| bound(a, b, true) && bound(a, b, false)))
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(k - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, k - 1);
            out.push(q);
        }
    }
    out
}

fn brute_isomorphic(
    n: usize,
    a: &dyn Fn(usize, usize) -> bool,
    b: &dyn Fn(usize, usize) -> bool,
) -> bool {
    permutations(n)
        .iter()
        .any(|p| (0..n).all(|x| (0..n).all(|y| a(x, y) == b(p[x], p[y]))))
}

/// Lattices on `n ≤ 6` points: bottom 0, top n-1, any order on the rest.
fn brute_force_lattices(n: usize) -> Vec<Vec<Vec<bool>>> {
    if n <= 2 {
        let mut le = vec![vec![false; n]; n];
        for a in 0..n {
            for b in a..n {
                le[a][b] = true;
            }
        }
        return vec![le];
    }
    let inner = n - 2;
    let pairs: Vec<(usize, usize)> = (0..inner)
        .flat_map(|a| (0..inner).filter(move |&b| b != a).map(move |b| (a, b)))
        .collect();
    let mut classes: Vec<Vec<Vec<bool>>> = Vec::new();
    for mask in 0u32..(1 << pairs.len()) {
        let rel: Vec<(usize, usize)> = pairs
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &(a, b))| (a + 1, b + 1))
            .collect();
        let Some(lt) = close(n, &rel) else { continue };
        // keep only transitively closed relations so each order is seen once
        if rel.len() != lt.iter().flatten().filter(|&&x| x).count() {
            continue;
        }
        let mut le = vec![vec![false; n]; n];
        for a in 0..n {
            for b in 0..n {
                le[a][b] = a == b || a == 0 || b == n - 1 || lt[a][b];
            }
        }
        if !is_lattice(n, &|a, b| le[a][b]) {
            continue;
        }
        let new = classes
            .iter()
            .all(|c| !brute_isomorphic(n, &|a, b| c[a][b], &|a, b| le[a][b]));
        if new {
            classes.push(le);
        }
    }
    classes
}

#[test]
fn enumeration_matches_brute_force() {
    for n in 1..=6 {
        let ours = enumerate_lattices(n, 8).unwrap();
        let brute = brute_force_lattices(n);
        assert_eq!(ours.len(), brute.len(), "n = {n}");
        for l in &ours {
            let hits = brute
                .iter()
                .filter(|c| brute_isomorphic(n, &|a, b| l.leq(a, b), &|a, b| c[a][b]))
                .count();
            assert_eq!(hits, 1, "n = {n}");
        }
    }
}

#[test]
fn enumerated_lattices_satisfy_axioms() {
    for n in 1..=7 {
        for l in enumerate_lattices(n, 8).unwrap() {
            assert_eq!(l.check_axioms(), None);
            assert!(is_lattice(n, &|a, b| l.leq(a, b)));
        }
    }
}

#[test]
fn enumerated_classes_are_pairwise_distinct() {
    let ls = enumerate_lattices(7, 8).unwrap();
    assert_eq!(ls.len(), 53);
    for i in 0..ls.len() {
        for j in i + 1..ls.len() {
            assert!(lattice_isomorphism(&ls[i], &ls[j]).is_none());
        }
    }
}

#[test]
fn birkhoff_round_trip() {
    for n in 0..=5 {
        for p in enumerate_posets(n).unwrap() {
            let d = downset_lattice(&p, DEFAULT_SIZE_CAP).unwrap();
            let ji = join_irreducibles(&d.lattice);
            let w = poset_isomorphism(&ji, &p).expect("Ji(Down P) ≅ P");
            assert!(w.is_valid_for(&ji, &p));
        }
    }
}

#[test]
fn poset_enumeration_is_exhaustive_for_four() {
    // every order on 4 labeled points is isomorphic to exactly one class
    let classes = enumerate_posets(4).unwrap();
    let pairs: Vec<(usize, usize)> = (0..4)
        .flat_map(|a| (0..4).filter(move |&b| b != a).map(move |b| (a, b)))
        .collect();
    for mask in 0u32..(1 << pairs.len()) {
        let rel: Vec<(usize, usize)> = pairs
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &p)| p)
            .collect();
        let Some(lt) = close(4, &rel) else { continue };
        let q = Poset::from_order_fn(4, |a, b| a == b || lt[a][b]).unwrap();
        let hits = classes
            .iter()
            .filter(|c| poset_isomorphism(c, &q).is_some())
            .count();
        assert_eq!(hits, 1);
    }
}

#[test]
fn product_cover_counts() {
    let ls: Vec<Lattice> = (1..=5)
        .flat_map(|n| enumerate_lattices(n, 8).unwrap())
        .collect();
    for a in &ls {
        for b in &ls {
            let p = direct_product(a, b, DEFAULT_SIZE_CAP).unwrap();
            assert_eq!(p.size(), a.size() * b.size());
            assert_eq!(
                p.covers().len(),
                a.covers().len() * b.size() + a.size() * b.covers().len()
            );
        }
    }
}

#[test]
fn intervals_are_sublattices() {
    for l in enumerate_lattices(6, 8).unwrap() {
        for lo in 0..l.size() {
            for hi in 0..l.size() {
                if !l.leq(lo, hi) {
                    continue;
                }
                let (iv, map) = interval(&l, lo, hi).unwrap();
                assert_eq!(iv.size(), l.interval_elements(lo, hi).len());
                for a in 0..iv.size() {
                    for b in 0..iv.size() {
                        assert_eq!(map[iv.join(a, b)], l.join(map[a], map[b]));
                        assert_eq!(map[iv.meet(a, b)], l.meet(map[a], map[b]));
                    }
                }
            }
        }
    }
}

fn relabel(l: &Lattice, perm: &[usize]) -> Lattice {
    let n = l.size();
    let covers: Vec<(usize, usize)> = l
        .covers()
        .iter()
        .map(|&(a, b)| (perm[a], perm[b]))
        .collect();
    let out = Lattice::from_covers(n, &covers).unwrap();
    for a in 0..n {
        for b in 0..n {
            assert_eq!(out.leq(perm[a], perm[b]), l.leq(a, b));
        }
    }
    out
}

fn lattice_and_perm() -> impl Strategy<Value = (Lattice, Vec<usize>)> {
    (1usize..=7)
        .prop_flat_map(|n| {
            let count = enumerate_lattices(n, 8).unwrap().len();
            (
                Just(n),
                0..count,
                Just((0..n).collect::<Vec<usize>>()).prop_shuffle(),
            )
        })
        .prop_map(|(n, i, perm)| (enumerate_lattices(n, 8).unwrap().swap_remove(i), perm))
}

proptest! {
    #[test]
    fn isomorphism_is_found_and_symmetric((l, perm) in lattice_and_perm()) {
        let m = relabel(&l, &perm);
        let w = lattice_isomorphism(&l, &m).expect("relabeling is an isomorphism");
        prop_assert!(w.is_valid_for(l.poset(), m.poset()));
        let back = lattice_isomorphism(&m, &l).expect("symmetric");
        prop_assert!(back.is_valid_for(m.poset(), l.poset()));
        prop_assert!(w.inverse().is_valid_for(m.poset(), l.poset()));
    }

    #[test]
    fn meet_and_join_are_bounds((l, _) in lattice_and_perm()) {
        let n = l.size();
        for a in 0..n {
            for b in 0..n {
                let (m, j) = (l.meet(a, b), l.join(a, b));
                prop_assert!(l.leq(m, a) && l.leq(m, b) && l.leq(a, j) && l.leq(b, j));
                for c in 0..n {
                    if l.leq(c, a) && l.leq(c, b) {
                        prop_assert!(l.leq(c, m));
                    }
                    if l.leq(a, c) && l.leq(b, c) {
                        prop_assert!(l.leq(j, c));
                    }
                }
            }
        }
    }
}
