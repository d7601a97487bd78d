use std::collections::BTreeSet;

use condensation::generators::{generate, Family, InstanceSpec};
use condensation::graph::graph_from_labels;
use condensation::{Error, PlaneGraph, VertexId};
use proptest::prelude::*;

fn grid(rows: usize, cols: usize) -> PlaneGraph {
    generate(&InstanceSpec::new(Family::Grid { rows, cols })).unwrap().graph
}

proptest! {
    #[test]
    fn deletion_composes(xs in prop::collection::btree_set(0u32..12, 0..6), ys in prop::collection::btree_set(0u32..12, 0..6)) {
        let g = grid(3, 4);
        let x: BTreeSet<VertexId> = xs.iter().map(|&t| VertexId(t)).collect();
        let y: BTreeSet<VertexId> = ys.iter().map(|&t| VertexId(t)).filter(|v| !x.contains(v)).collect();
        let stepwise = g.delete_vertices(x.iter().copied()).unwrap().delete_vertices(y.iter().copied()).unwrap();
        let at_once = g.delete_vertices(x.union(&y).copied()).unwrap();
        prop_assert_eq!(&stepwise, &at_once);
        // face is the original order restricted to survivors
        let expected: Vec<VertexId> = g.face().iter().copied().filter(|v| !x.contains(v) && !y.contains(v)).collect();
        prop_assert_eq!(at_once.face(), &expected[..]);
    }

    #[test]
    fn cyclic_order_ignores_rotation(pick in prop::collection::btree_set(0usize..10, 1..7), rot in 0usize..7, flip in any::<bool>()) {
        let g = grid(3, 4);
        let face = g.face();
        let mut seq: Vec<VertexId> = pick.iter().map(|&p| face[p]).collect();
        if flip {
            seq.reverse();
        }
        let r = rot % seq.len();
        seq.rotate_left(r);
        prop_assert!(g.validate_cyclic_order(&seq).unwrap());
        if seq.len() >= 4 {
            let mut bad = seq.clone();
            bad.swap(0, 1);
            prop_assert!(!g.validate_cyclic_order(&bad).unwrap());
        }
    }
}

#[test]
fn documented_deletions() {
    let c4 = graph_from_labels(
        &["a", "b", "c", "d"],
        &[("a", "b", 1), ("b", "c", 1), ("c", "d", 1), ("d", "a", 1)],
        &["a", "b", "c", "d"],
    )
    .unwrap();
    let id = |n| c4.id_of(n).unwrap();
    let rest = c4.delete_vertices([id("a"), id("c")]).unwrap();
    assert_eq!(rest.vertex_count(), 2);
    assert_eq!(rest.edge_count(), 0);
    assert_eq!(c4.delete_vertices([]).unwrap(), c4);
    assert!(matches!(c4.delete_vertices([VertexId(99)]), Err(Error::InvalidArgument(_))));

    let g = grid(2, 3);
    let corner = g.id_of("r0c0").unwrap();
    let l_shape = g.delete_vertices([corner]).unwrap();
    assert_eq!(l_shape.vertex_count(), 5);
    assert_eq!(l_shape.edge_count(), 5);
}

#[test]
fn face_order_checks() {
    let c4 = graph_from_labels(
        &["a", "b", "c", "d", "x"],
        &[("a", "b", 1), ("b", "c", 1), ("c", "d", 1), ("d", "a", 1)],
        &["a", "b", "c", "d"],
    )
    .unwrap();
    let ids = |names: &[&str]| names.iter().map(|n| c4.id_of(n).unwrap()).collect::<Vec<_>>();
    assert!(c4.validate_cyclic_order(&ids(&["a", "b", "c", "d"])).unwrap());
    assert!(!c4.validate_cyclic_order(&ids(&["a", "c", "b", "d"])).unwrap());
    assert!(c4.validate_cyclic_order(&ids(&["d", "c", "b", "a"])).unwrap());
    match c4.validate_cyclic_order(&ids(&["a", "x"])) {
        Err(Error::NotOnFace(name)) => assert_eq!(name, "x"),
        other => panic!("expected NotOnFace, got {other:?}"),
    }
}
