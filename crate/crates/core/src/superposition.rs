//! Superimposing two matchings and cutting the result apart again.
//!
//! Superimposing a matching of `G - W` on a matching of `G - A - (B \ W)`
//! gives a multigraph in which marked vertices have degree one and every
//! other vertex degree two. Its components are doubled edges, even cycles,
//! and paths joining a vertex of `A` to a vertex of `B`. Conversely such a
//! multigraph splits back into a matching pair in `2^k` ways, `k` being the
//! number of cycles, and the deleted subset is forced by the paths.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::One;

use crate::error::{Error, Result};
use crate::graph::{Edge, PlaneGraph, VertexId};
use crate::matching::Matching;
use crate::scalar::Scalar;

/// A component of the superposition joining a vertex of `A` to one of `B`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SuperposedPath {
    /// Vertex sequence starting at the `A` endpoint.
    pub vertices: Vec<VertexId>,
}

impl SuperposedPath {
    pub fn a_end(&self) -> VertexId {
        self.vertices[0]
    }

    pub fn b_end(&self) -> VertexId {
        *self.vertices.last().expect("non-empty path")
    }

    pub fn len(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_even(&self) -> bool {
        self.len() % 2 == 0
    }

    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.vertices.windows(2).map(|w| Edge::new(w[0], w[1]))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuperpositionDecomposition {
    pub a: BTreeSet<VertexId>,
    pub b: BTreeSet<VertexId>,
    pub doubled_edges: Vec<Edge>,
    /// Each cycle as a vertex sequence; the closing edge is implicit.
    pub cycles: Vec<Vec<VertexId>>,
    pub paths: Vec<SuperposedPath>,
    pub cycle_count: usize,
    /// Product of all edge weights, doubled edges counted twice.
    pub weight: Scalar,
}

impl SuperpositionDecomposition {
    /// The edge multiset of the multigraph, as sorted `(edge, multiplicity)`
    /// pairs. Two decompositions are the same multigraph iff keys agree.
    pub fn key(&self) -> Vec<(Edge, u8)> {
        let mut out: Vec<(Edge, u8)> = self.doubled_edges.iter().map(|&e| (e, 2)).collect();
        for c in &self.cycles {
            out.extend(cycle_edges(c).map(|e| (e, 1)));
        }
        for p in &self.paths {
            out.extend(p.edges().map(|e| (e, 1)));
        }
        out.sort();
        out
    }

    pub fn even_path_count(&self) -> usize {
        self.paths.iter().filter(|p| p.is_even()).count()
    }
}

fn cycle_edges(c: &[VertexId]) -> impl Iterator<Item = Edge> + '_ {
    (0..c.len()).map(move |i| Edge::new(c[i], c[(i + 1) % c.len()]))
}

/// Superimposes `m1` on `m2` inside `host` with marked sets `a` and `b`.
///
/// Fails with [`Error::Malformed`] when the union is not of the expected
/// shape, which means the two matchings did not come from complementary
/// deletions of `host`.
pub fn superpose(
    m1: &Matching,
    m2: &Matching,
    host: &PlaneGraph,
    a: &[VertexId],
    b: &[VertexId],
) -> Result<SuperpositionDecomposition> {
    let a: BTreeSet<VertexId> = a.iter().copied().collect();
    let b: BTreeSet<VertexId> = b.iter().copied().collect();
    if !a.is_disjoint(&b) {
        return Err(Error::InvalidArgument("A and B overlap".into()));
    }

    let mut multiplicity: BTreeMap<Edge, u8> = BTreeMap::new();
    for &e in m1.edges().iter().chain(m2.edges()) {
        if host.weight(e).is_none() {
            let (u, v) = e.endpoints();
            return Err(Error::Malformed(format!(
                "`{}`-`{}` is not an edge of the host",
                host.name(u),
                host.name(v)
            )));
        }
        *multiplicity.entry(e).or_default() += 1;
    }

    let mut degree: BTreeMap<VertexId, usize> = host.vertices().map(|v| (v, 0)).collect();
    let mut single_adj: BTreeMap<VertexId, Vec<VertexId>> = BTreeMap::new();
    let mut doubled_edges = Vec::new();
    let mut weight = Scalar::one();
    for (&e, &m) in &multiplicity {
        let (u, v) = e.endpoints();
        *degree.get_mut(&u).expect("host vertex") += m as usize;
        *degree.get_mut(&v).expect("host vertex") += m as usize;
        let w = host.weight(e).expect("checked above");
        if m == 2 {
            doubled_edges.push(e);
            weight *= w * w;
        } else {
            single_adj.entry(u).or_default().push(v);
            single_adj.entry(v).or_default().push(u);
            weight *= w;
        }
    }
    for (&v, &d) in &degree {
        let want = if a.contains(&v) || b.contains(&v) { 1 } else { 2 };
        if d > 2 {
            return Err(Error::Malformed(format!(
                "`{}` has degree {d} after superposition",
                host.name(v)
            )));
        }
        if d != want {
            return Err(Error::Malformed(format!(
                "`{}` has degree {d}, expected {want}",
                host.name(v)
            )));
        }
    }

    let mut used: BTreeSet<VertexId> = BTreeSet::new();
    let mut paths = Vec::new();
    for &start in &a {
        if !single_adj.contains_key(&start) {
            return Err(Error::Malformed(format!(
                "`{}` is only covered by a doubled edge",
                host.name(start)
            )));
        }
        let walk = trace(&single_adj, start, &mut used);
        let end = *walk.last().expect("walk");
        if !b.contains(&end) {
            return Err(Error::Malformed(format!(
                "path from `{}` ends at `{}`, which is not in B",
                host.name(start),
                host.name(end)
            )));
        }
        paths.push(SuperposedPath { vertices: walk });
    }
    if let Some(&stray) = b.iter().find(|v| !used.contains(v)) {
        return Err(Error::Malformed(format!(
            "`{}` in B is not the end of an A-B path",
            host.name(stray)
        )));
    }

    let mut cycles = Vec::new();
    for &v in single_adj.keys() {
        if used.contains(&v) {
            continue;
        }
        let cycle = trace(&single_adj, v, &mut used);
        if cycle.len() % 2 == 1 {
            return Err(Error::Malformed(format!(
                "odd cycle through `{}`",
                host.name(v)
            )));
        }
        cycles.push(cycle);
    }

    let expected = m1.weight() * m2.weight();
    if expected != weight {
        return Err(Error::Integrity(
            "superposition weight differs from the product of matching weights".into(),
        ));
    }

    Ok(SuperpositionDecomposition {
        a,
        b,
        doubled_edges,
        cycle_count: cycles.len(),
        cycles,
        paths,
        weight,
    })
}

/// Walks single edges from `start` until the walk closes or dead-ends.
fn trace(
    adj: &BTreeMap<VertexId, Vec<VertexId>>,
    start: VertexId,
    used: &mut BTreeSet<VertexId>,
) -> Vec<VertexId> {
    let mut walk = vec![start];
    used.insert(start);
    let mut prev = None;
    let mut cur = start;
    loop {
        let next = adj[&cur]
            .iter()
            .copied()
            .find(|&n| Some(n) != prev && !used.contains(&n));
        match next {
            Some(n) => {
                used.insert(n);
                walk.push(n);
                prev = Some(cur);
                cur = n;
            }
            None => return walk,
        }
    }
}

/// Which pair of subgraphs to split a superposition into.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PartitionScheme {
    /// Matchings of `G - W` and `G - A - (B \ W)`.
    WSide,
    /// Matchings of `G - A1 - Y` and `G - A2 - (B \ Y)`.
    YSide { a1: BTreeSet<VertexId> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionOutcome {
    /// The forced subset `W` or `Y` of `B`.
    pub subset: BTreeSet<VertexId>,
    /// Graphs the two matchings of each pair belong to.
    pub first_graph: PlaneGraph,
    pub second_graph: PlaneGraph,
    pub pairs: Vec<(Matching, Matching)>,
}

/// Every way to split `h` into a matching pair for the chosen side, together
/// with the unique subset of `B` for which that is possible.
pub fn partition_superposition(
    h: &SuperpositionDecomposition,
    host: &PlaneGraph,
    scheme: &PartitionScheme,
) -> Result<PartitionOutcome> {
    let a1 = match scheme {
        PartitionScheme::WSide => BTreeSet::new(),
        PartitionScheme::YSide { a1 } => {
            if !a1.is_subset(&h.a) {
                return Err(Error::InvalidArgument("A1 is not a subset of A".into()));
            }
            a1.clone()
        }
    };
    let is_w_side = matches!(scheme, PartitionScheme::WSide);

    // Whether the path edge at the A end goes into the first matching.
    let first_edge_to_first = |a_end: VertexId| is_w_side || !a1.contains(&a_end);

    let mut subset = BTreeSet::new();
    let mut first_fixed: Vec<Edge> = h.doubled_edges.clone();
    let mut second_fixed: Vec<Edge> = h.doubled_edges.clone();
    for p in &h.paths {
        let to_first = first_edge_to_first(p.a_end());
        for (t, e) in p.edges().enumerate() {
            if (t % 2 == 0) == to_first {
                first_fixed.push(e);
            } else {
                second_fixed.push(e);
            }
        }
        // A B end whose last edge falls in the second matching is missing
        // from the first graph, so it belongs to the forced subset.
        let last_to_first = ((p.len() - 1) % 2 == 0) == to_first;
        if !last_to_first {
            subset.insert(p.b_end());
        }
    }

    let (first_graph, second_graph) = if is_w_side {
        let rest: Vec<VertexId> = h.a.iter().chain(h.b.difference(&subset)).copied().collect();
        (host.delete_vertices(subset.iter().copied())?, host.delete_vertices(rest)?)
    } else {
        let a2: Vec<VertexId> = h.a.difference(&a1).copied().collect();
        let first_del: Vec<VertexId> = a1.iter().chain(subset.iter()).copied().collect();
        let second_del: Vec<VertexId> = a2.into_iter().chain(h.b.difference(&subset).copied()).collect();
        (host.delete_vertices(first_del)?, host.delete_vertices(second_del)?)
    };

    let k = h.cycles.len();
    let mut pairs = Vec::with_capacity(1 << k);
    for choice in 0u64..(1u64 << k) {
        let mut first = first_fixed.clone();
        let mut second = second_fixed.clone();
        for (c, cycle) in h.cycles.iter().enumerate() {
            let flip = (choice >> c) & 1 == 1;
            for (t, e) in cycle_edges(cycle).enumerate() {
                if (t % 2 == 0) != flip {
                    first.push(e);
                } else {
                    second.push(e);
                }
            }
        }
        let m1 = Matching::new(&first_graph, first).map_err(|e| {
            Error::Integrity(format!("first part is not a matching of its graph: {e}"))
        })?;
        let m2 = Matching::new(&second_graph, second).map_err(|e| {
            Error::Integrity(format!("second part is not a matching of its graph: {e}"))
        })?;
        pairs.push((m1, m2));
    }

    Ok(PartitionOutcome {
        subset,
        first_graph,
        second_graph,
        pairs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::graph_from_labels;
    use crate::matching::{enumerate_matchings, Limits};

    fn c4() -> PlaneGraph {
        graph_from_labels(
            &["a", "b", "c", "d"],
            &[("a", "b", 1), ("b", "c", 1), ("c", "d", 1), ("d", "a", 1)],
            &["a", "b", "c", "d"],
        )
        .unwrap()
    }

    #[test]
    fn identical_matchings_double_every_edge() {
        let g = c4();
        let ms = enumerate_matchings(&g, &Limits::default()).unwrap();
        let h = superpose(&ms[0], &ms[0], &g, &[], &[]).unwrap();
        assert_eq!(h.doubled_edges.len(), 2);
        assert_eq!(h.cycle_count, 0);
        assert!(h.paths.is_empty());
        let out = partition_superposition(&h, &g, &PartitionScheme::WSide).unwrap();
        assert_eq!(out.pairs.len(), 1);
    }

    #[test]
    fn distinct_c4_matchings_make_one_cycle() {
        let g = c4();
        let ms = enumerate_matchings(&g, &Limits::default()).unwrap();
        let h = superpose(&ms[0], &ms[1], &g, &[], &[]).unwrap();
        assert_eq!(h.cycle_count, 1);
        assert_eq!(h.cycles[0].len(), 4);
        let out = partition_superposition(&h, &g, &PartitionScheme::WSide).unwrap();
        assert_eq!(out.pairs.len(), 2);
        let mut got: Vec<_> = out.pairs.iter().map(|(x, y)| (x.clone(), y.clone())).collect();
        got.sort();
        assert_eq!(got, vec![(ms[0].clone(), ms[1].clone()), (ms[1].clone(), ms[0].clone())]);
    }

    #[test]
    fn two_by_three_grid_single_path() {
        // a 1 2
        // b 4 5      A = {a}, B = {b}
        let g = graph_from_labels(
            &["a", "1", "2", "b", "4", "5"],
            &[
                ("a", "1", 1),
                ("1", "2", 1),
                ("b", "4", 1),
                ("4", "5", 1),
                ("a", "b", 1),
                ("1", "4", 1),
                ("2", "5", 1),
            ],
            &["a", "1", "2", "5", "4", "b"],
        )
        .unwrap();
        let a = g.id_of("a").unwrap();
        let b = g.id_of("b").unwrap();
        let lim = Limits::default();
        // G - {b} and G - {a} are odd, so the only nonempty pairing for a
        // single marked pair is G against G - {a, b}.
        assert!(enumerate_matchings(&g.delete_vertices([b]).unwrap(), &lim).unwrap().is_empty());
        let full = enumerate_matchings(&g, &lim).unwrap();
        let inner = enumerate_matchings(&g.delete_vertices([a, b]).unwrap(), &lim).unwrap();
        for m1 in &full {
            for m2 in &inner {
                let h = superpose(m1, m2, &g, &[a], &[b]).unwrap();
                assert_eq!(h.paths.len(), 1);
                assert_eq!(h.paths[0].a_end(), a);
                assert_eq!(h.paths[0].b_end(), b);
                assert!(!h.paths[0].is_even());
            }
        }
    }

    #[test]
    fn overfull_union_is_malformed() {
        let g = c4();
        let ms = enumerate_matchings(&g, &Limits::default()).unwrap();
        let a = g.id_of("a").unwrap();
        assert!(matches!(
            superpose(&ms[0], &ms[1], &g, &[a], &[]),
            Err(Error::Malformed(_))
        ));
    }
}
