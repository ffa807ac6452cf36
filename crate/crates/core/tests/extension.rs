use conrep::congruence::{congruence_lattice, congruence_meet, restrict, Congruence};
use conrep::extension::{
    boolean_triples, cubic_extension, find_embedding, partition_lattice, partitions,
    simple_extension, subdirect_factors, verify_booleantriples_cpe, SimpleStrategy,
};
use conrep::laws::{is_sectionally_complemented, is_simple};
use conrep::order::{lattice_isomorphism, Lattice, DEFAULT_SIZE_CAP};

fn corpus() -> Vec<(&'static str, Lattice)> {
    vec![
        ("C2", Lattice::chain(2)),
        ("C3", Lattice::chain(3)),
        ("2^2", Lattice::boolean(2)),
        ("N5", Lattice::pentagon()),
        ("M3", Lattice::diamond(3)),
    ]
}

/// Triples fixed by the closure `x ↦ (x∨y)∧(x∨z)` in every coordinate.
fn brute_triples(k: &Lattice) -> Vec<(usize, usize, usize)> {
    let n = k.size();
    let mut out = Vec::new();
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let fixed = x == k.meet(k.join(x, y), k.join(x, z))
                    && y == k.meet(k.join(y, x), k.join(y, z))
                    && z == k.meet(k.join(z, x), k.join(z, y));
                if fixed {
                    out.push((x, y, z));
                }
            }
        }
    }
    out
}

#[test]
fn boolean_triples_on_corpus() {
    for (name, k) in corpus() {
        let fg = boolean_triples(&k, DEFAULT_SIZE_CAP).unwrap();
        let mut ours = fg.triples.clone();
        ours.sort();
        assert_eq!(ours, brute_triples(&k), "{name}");
        assert_eq!(fg.lattice.check_axioms(), None, "{name}");
        let base = fg.base_interval().unwrap();
        assert!(lattice_isomorphism(&base, &k).is_some(), "{name}");
        assert!(verify_booleantriples_cpe(&fg).unwrap().holds, "{name}");
    }
}

#[test]
fn boolean_triples_order_is_componentwise() {
    for (_, k) in corpus() {
        let fg = boolean_triples(&k, DEFAULT_SIZE_CAP).unwrap();
        for (i, &(a, b, c)) in fg.triples.iter().enumerate() {
            for (j, &(x, y, z)) in fg.triples.iter().enumerate() {
                let le = k.leq(a, x) && k.leq(b, y) && k.leq(c, z);
                assert_eq!(fg.lattice.leq(i, j), le);
            }
        }
    }
}

#[test]
fn boolean_triples_of_two_element_chain_is_diamond() {
    let fg = boolean_triples(&Lattice::chain(2), DEFAULT_SIZE_CAP).unwrap();
    assert_eq!(fg.lattice.size(), 5);
    assert!(lattice_isomorphism(&fg.lattice, &Lattice::diamond(3)).is_some());
}

#[test]
fn subdirect_factors_separate_points() {
    for (name, k) in corpus() {
        let factors = subdirect_factors(&k).unwrap();
        let meet = factors.iter().fold(Congruence::all(k.size()), |acc, f| {
            congruence_meet(&acc, &f.congruence)
        });
        assert!(meet.is_identity(), "{name}");
        for f in &factors {
            assert_eq!(f.quotient.size(), f.congruence.block_count());
            // meet-irreducible congruences give subdirectly irreducible quotients
            let con = congruence_lattice(&f.quotient).unwrap();
            let all = con.materialized().unwrap();
            let atoms = all.lattice.atoms();
            assert_eq!(atoms.len(), 1, "{name}");
        }
    }
}

#[test]
fn partition_lattice_sizes() {
    for (m, bell) in [(1, 1), (2, 2), (3, 5), (4, 15), (5, 52)] {
        assert_eq!(partitions(m).unwrap().len(), bell);
        let p = partition_lattice(m).unwrap();
        assert_eq!(p.size(), bell);
        if m >= 2 {
            assert!(is_simple(&p).unwrap().holds);
        }
    }
    assert!(partition_lattice(7).is_err());
}

#[test]
fn simple_extensions_embed() {
    for (name, k) in corpus() {
        let ext = simple_extension(&k, &SimpleStrategy::default()).unwrap();
        assert!(is_simple(&ext.lattice).unwrap().holds, "{name}");
        for a in 0..k.size() {
            for b in 0..k.size() {
                assert_eq!(
                    ext.map[k.meet(a, b)],
                    ext.lattice.meet(ext.map[a], ext.map[b])
                );
                assert_eq!(
                    ext.map[k.join(a, b)],
                    ext.lattice.join(ext.map[a], ext.map[b])
                );
            }
        }
    }
    assert!(simple_extension(&Lattice::chain(3), &SimpleStrategy::IdentityIfSimple).is_err());
    let m3 = Lattice::diamond(3);
    assert!(find_embedding(&Lattice::boolean(3), &m3).is_none());
    assert!(find_embedding(&Lattice::chain(3), &m3).is_some());
}

#[test]
fn cubic_extensions() {
    let bases = [
        ("C2^2", Lattice::boolean(2)),
        ("C3", Lattice::chain(3)),
        ("N5", Lattice::pentagon()),
        ("M3", Lattice::diamond(3)),
    ];
    for (name, k) in bases {
        let r = cubic_extension(&k, &SimpleStrategy::default(), DEFAULT_SIZE_CAP).unwrap();
        let con = congruence_lattice(&r.product).unwrap();
        assert_eq!(con.ji().len(), r.factors.len(), "{name}");
        assert!(con.ji_order().is_antichain(), "{name}");
        // every congruence of K extends, though not necessarily uniquely
        let kcon = congruence_lattice(&k).unwrap();
        let all = con.materialized().unwrap();
        let e = r.embedding().unwrap();
        for theta in &kcon.materialized().unwrap().congruences {
            assert!(
                all.congruences.iter().any(|t| restrict(t, &e) == *theta),
                "{name}"
            );
        }
        if r.factors
            .iter()
            .all(|f| is_sectionally_complemented(&f.extension.lattice).holds)
        {
            assert!(is_sectionally_complemented(&r.product).holds, "{name}");
        }
    }
}
