//! Family membership against brute-force tree enumeration.

mod common;

use std::collections::BTreeSet;

use circle_reeb::grammar::{enumerate_family, generate, recognize, vertex_count};
use circle_reeb::{Error, Tree};
use common::*;

fn members(max: usize) -> BTreeSet<String> {
    enumerate_family(max)
        .unwrap()
        .iter()
        .map(|(_, p)| tree_code(generate(p).unwrap().adjacency()))
        .collect()
}

#[test]
fn recognition_matches_enumeration_up_to_ten() {
    let family = members(10);
    for adj in all_trees(10) {
        let t = Tree::from_edges(adj.len(), &edges_of(&adj)).unwrap();
        let code = tree_code(&adj);
        match recognize(&t) {
            Ok(cert) => {
                assert!(family.contains(&code), "accepted outside the family: {code}");
                let back = generate(&cert.params).unwrap();
                assert_eq!(tree_code(back.adjacency()), code);
            }
            Err(Error::NotInFamily(_)) => assert!(!family.contains(&code), "member rejected: {code}"),
            Err(e) => panic!("{code}: {e}"),
        }
    }
}

#[test]
fn enumeration_grows_and_counts_vertices() {
    let small = members(8);
    let large = members(12);
    assert!(small.is_subset(&large));
    for (_, p) in enumerate_family(12).unwrap() {
        let t = generate(&p).unwrap();
        assert_eq!(vertex_count(&p), Some(t.len()));
        assert!(t.len() <= 12);
    }
}

#[test]
fn small_non_members() {
    assert!(matches!(recognize(&Tree::star(3)), Err(Error::NotInFamily(_))));
    assert!(recognize(&Tree::single_edge()).is_ok());
    assert!(matches!(recognize(&Tree::star(4)), Err(Error::NotInFamily(_))));
}
