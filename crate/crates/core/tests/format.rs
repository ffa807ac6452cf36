#![allow(clippy::needless_range_loop)]

use std::collections::BTreeSet;

use conrep::format::{dot, parse, Document, DocumentKind, FormatError};
use conrep::order::{enumerate_lattices, enumerate_posets, lattice_isomorphism, poset_isomorphism};
use proptest::prelude::*;

fn poset_index() -> impl Strategy<Value = (usize, usize)> {
    (0usize..=5).prop_flat_map(|n| (Just(n), 0..enumerate_posets(n).unwrap().len()))
}

fn lattice_index() -> impl Strategy<Value = (usize, usize)> {
    (1usize..=7).prop_flat_map(|n| (Just(n), 0..enumerate_lattices(n, 8).unwrap().len()))
}

proptest! {
    #[test]
    fn poset_documents_round_trip((n, i) in poset_index()) {
        let p = enumerate_posets(n).unwrap().swap_remove(i);
        let doc = Document::from_poset(&p);
        let back = parse(&doc.to_string()).unwrap();
        prop_assert_eq!(&back, &doc);
        let q = back.to_poset().unwrap();
        prop_assert!(poset_isomorphism(&p, &q).is_some());
    }

    #[test]
    fn lattice_documents_round_trip((n, i) in lattice_index(), named in any::<bool>()) {
        let l = enumerate_lattices(n, 8).unwrap().swap_remove(i);
        let mut doc = Document::from_lattice(&l);
        if named {
            doc = doc.with_names((0..n).map(|x| format!("e{x}")).collect());
        }
        let back: Document = doc.to_string().parse().unwrap();
        prop_assert_eq!(&back, &doc);
        prop_assert_eq!(back.kind, DocumentKind::Lattice);
        prop_assert_eq!(back.to_lattice().unwrap(), l);
    }

    #[test]
    fn dot_matches_the_hasse_diagram((n, i) in lattice_index()) {
        let l = enumerate_lattices(n, 8).unwrap().swap_remove(i);
        let labels: Vec<String> = (0..n).map(|x| x.to_string()).collect();
        let text = dot(l.poset(), &labels);
        let (open, close) = (text.starts_with("digraph hasse {"), text.ends_with("}\n"));
        prop_assert!(open && close, "unbalanced output");
        prop_assert_eq!(text.matches("[label=").count(), n);
        let edges: BTreeSet<(usize, usize)> = text
            .lines()
            .filter_map(|line| {
                let (a, b) = line.trim().trim_end_matches(';').split_once(" -> ")?;
                Some((a[1..].parse().unwrap(), b[1..].parse().unwrap()))
            })
            .collect();
        let covers: BTreeSet<(usize, usize)> = l.covers().iter().copied().collect();
        prop_assert_eq!(edges, covers);
        // one rank group per height level, each listing nodes of that height
        let heights = l.poset().heights();
        let groups: Vec<&str> = text.lines().filter(|line| line.contains("rank=same")).collect();
        prop_assert_eq!(groups.len(), l.poset().height());
        for (h, g) in groups.iter().enumerate() {
            for x in 0..n {
                prop_assert_eq!(g.contains(&format!("n{x};")), heights[x] == h);
            }
        }
    }
}

#[test]
fn chopped_documents_round_trip() {
    let doc = parse("chopped\nelements 4\ncover 0 1\ncover 0 2\ncover 0 3\n").unwrap();
    let m = doc.to_chopped().unwrap();
    let again = Document::from_chopped(&m);
    assert_eq!(again.to_chopped().unwrap(), m);
    assert_eq!(parse(&again.to_string()).unwrap(), again);
}

#[test]
fn kinds_are_checked() {
    let doc = parse("poset\nelements 3\ncover 0 1\ncover 0 2\n").unwrap();
    assert!(doc.to_poset().is_ok());
    assert!(matches!(
        doc.to_lattice(),
        Err(FormatError::WrongKind { .. })
    ));
    let l = parse("lattice\nelements 1\n")
        .unwrap()
        .to_lattice()
        .unwrap();
    assert!(lattice_isomorphism(&l, &enumerate_lattices(1, 8).unwrap()[0]).is_some());
}

#[test]
fn malformed_input_is_rejected_with_a_line() {
    for (text, line) in [
        ("", 1),
        ("lattice\nelements 2\nelements 2\n", 3),
        ("lattice\nnames a b\n", 2),
        ("lattice\nelements 2\nnames a a\n", 3),
        ("lattice\nelements 2\ncover 0\n", 3),
        ("lattice\nelements 2\ncover 1 1\n", 3),
    ] {
        match parse(text) {
            Err(FormatError::Syntax { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
            other => panic!("{text:?}: {other:?}"),
        }
    }
}
