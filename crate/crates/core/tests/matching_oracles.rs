mod common;

use common::brute_count;
use condensation::generators::{generate, Family, InstanceSpec};
use condensation::graph::graph_from_labels;
use condensation::matching::{count_matchings, enumerate_matchings, has_unique_matching, Limits};
use condensation::scalar::int;
use condensation::{Error, GraphBuilder, PlaneGraph, Scalar};
use proptest::prelude::*;

fn random_graph(n: usize, edge_bits: u64, weights: &[(i64, i64)]) -> PlaneGraph {
    let mut b = GraphBuilder::new();
    let ids: Vec<_> = (0..n).map(|t| b.vertex(format!("v{t}")).unwrap()).collect();
    let mut slot = 0;
    for i in 0..n {
        for j in i + 1..n {
            if (edge_bits >> (slot % 64)) & 1 == 1 {
                let (p, q) = weights[slot % weights.len()];
                b.edge(ids[i], ids[j], Scalar::new(p.into(), q.into())).unwrap();
            }
            slot += 1;
        }
    }
    b.face(ids.clone()).unwrap();
    b.build()
}

proptest! {
    #[test]
    fn count_matches_edge_subset_oracle(
        n in 0usize..9,
        bits in any::<u64>(),
        weights in prop::collection::vec((1i64..6, 1i64..4), 1..8),
    ) {
        let g = random_graph(n, bits, &weights);
        prop_assume!(g.edge_count() <= 20);
        let limits = Limits::default();
        let counted = count_matchings(&g, &limits).unwrap();
        prop_assert_eq!(&counted, &brute_count(&g));
        let listed = enumerate_matchings(&g, &limits).unwrap();
        let sum: Scalar = listed.iter().map(|m| m.weight().clone()).sum();
        prop_assert_eq!(&sum, &counted);
        let mut sorted = listed.clone();
        sorted.sort();
        sorted.dedup();
        prop_assert_eq!(sorted.len(), listed.len());
        prop_assert_eq!(has_unique_matching(&g, &limits).unwrap(), listed.len() == 1);
    }
}

#[test]
fn documented_counts() {
    let limits = Limits::default();
    let empty = graph_from_labels(&[], &[], &[]).unwrap();
    assert_eq!(count_matchings(&empty, &limits).unwrap(), int(1));
    assert_eq!(enumerate_matchings(&empty, &limits).unwrap().len(), 1);

    let edge = graph_from_labels(&["u", "v"], &[("u", "v", 3)], &[]).unwrap();
    assert_eq!(count_matchings(&edge, &limits).unwrap(), int(3));

    let c4 = generate(&InstanceSpec::new(Family::Cycle { n: 4 })).unwrap().graph;
    assert_eq!(count_matchings(&c4, &limits).unwrap(), brute_count(&c4));
    assert_eq!(count_matchings(&c4, &limits).unwrap(), int(2));
    assert!(!has_unique_matching(&c4, &limits).unwrap());

    let grid = generate(&InstanceSpec::new(Family::Grid { rows: 2, cols: 3 })).unwrap().graph;
    assert_eq!(brute_count(&grid), int(3));
    assert_eq!(count_matchings(&grid, &limits).unwrap(), int(3));

    let p4 = generate(&InstanceSpec::new(Family::Path { n: 4 })).unwrap().graph;
    assert!(has_unique_matching(&p4, &limits).unwrap());

    let p5 = generate(&InstanceSpec::new(Family::Path { n: 5 })).unwrap().graph;
    assert_eq!(count_matchings(&p5, &limits).unwrap(), int(0));
    assert!(enumerate_matchings(&p5, &limits).unwrap().is_empty());
}

#[test]
fn size_guard() {
    let g = generate(&InstanceSpec::new(Family::Grid { rows: 5, cols: 6 })).unwrap().graph;
    assert!(matches!(
        count_matchings(&g, &Limits::default()),
        Err(Error::TooLarge { vertices: 30, cap: 24 })
    ));
    // 5x6 grid: 1183 domino tilings
    assert_eq!(count_matchings(&g, &Limits::with_cap(30)).unwrap(), int(1183));
}
