//! Perfect matchings by explicit enumeration.
//!
//! Everything here is brute force: pick the lowest uncovered vertex, branch
//! over its uncovered neighbours. Counting memoizes on the set of still
//! uncovered vertices, which keeps desk-scale instances instant without
//! changing what is being summed.

use std::collections::{BTreeSet, HashMap};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Edge, PlaneGraph, VertexId};
use crate::scalar::Scalar;

pub const DEFAULT_VERTEX_CAP: usize = 24;

/// The hard ceiling imposed by the bitmask representation.
pub const MAX_VERTEX_CAP: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Limits {
    pub vertex_cap: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            vertex_cap: DEFAULT_VERTEX_CAP,
        }
    }
}

impl Limits {
    pub fn with_cap(vertex_cap: usize) -> Self {
        Limits { vertex_cap }
    }

    fn check(&self, g: &PlaneGraph) -> Result<()> {
        let cap = self.vertex_cap.min(MAX_VERTEX_CAP);
        if g.vertex_count() > cap {
            return Err(Error::TooLarge {
                vertices: g.vertex_count(),
                cap,
            });
        }
        Ok(())
    }
}

/// A perfect matching of some graph, with the product of its edge weights.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matching {
    edges: Vec<Edge>,
    weight: Scalar,
}

impl Matching {
    /// Builds a matching from `edges`, checking that they are edges of `host`
    /// and cover every vertex of `host` exactly once.
    pub fn new(host: &PlaneGraph, edges: impl IntoIterator<Item = Edge>) -> Result<Matching> {
        let mut edges: Vec<Edge> = edges.into_iter().collect();
        edges.sort();
        let mut covered = BTreeSet::new();
        let mut weight = Scalar::one();
        for &e in &edges {
            let w = host.weight(e).ok_or_else(|| {
                let (u, v) = e.endpoints();
                Error::InvalidArgument(format!(
                    "`{}`-`{}` is not an edge of the host graph",
                    host.name(u),
                    host.name(v)
                ))
            })?;
            weight *= w;
            let (u, v) = e.endpoints();
            for x in [u, v] {
                if !covered.insert(x) {
                    return Err(Error::InvalidArgument(format!(
                        "`{}` is covered twice",
                        host.name(x)
                    )));
                }
            }
        }
        if let Some(v) = host.vertices().find(|v| !covered.contains(v)) {
            return Err(Error::InvalidArgument(format!(
                "`{}` is not covered",
                host.name(v)
            )));
        }
        Ok(Matching { edges, weight })
    }

    pub fn empty() -> Matching {
        Matching {
            edges: Vec::new(),
            weight: Scalar::one(),
        }
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn weight(&self) -> &Scalar {
        &self.weight
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn contains(&self, e: Edge) -> bool {
        self.edges.binary_search(&e).is_ok()
    }

    /// The vertex matched to `v`, if `v` is covered.
    pub fn partner(&self, v: VertexId) -> Option<VertexId> {
        self.edges.iter().find_map(|e| e.other(v))
    }

    pub fn covered(&self) -> BTreeSet<VertexId> {
        self.edges
            .iter()
            .flat_map(|e| {
                let (u, v) = e.endpoints();
                [u, v]
            })
            .collect()
    }
}

/// Dense local view of a graph for the recursive searches.
struct Local {
    ids: Vec<VertexId>,
    adj: Vec<Vec<(usize, Edge, Scalar)>>,
}

impl Local {
    fn new(g: &PlaneGraph) -> Local {
        let ids: Vec<VertexId> = g.vertices().collect();
        let index: HashMap<VertexId, usize> = ids.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut adj = vec![Vec::new(); ids.len()];
        for (e, w) in g.edges() {
            let (u, v) = e.endpoints();
            let (iu, iv) = (index[&u], index[&v]);
            adj[iu].push((iv, e, w.clone()));
            adj[iv].push((iu, e, w.clone()));
        }
        for list in &mut adj {
            list.sort_by_key(|&(j, _, _)| j);
        }
        Local { ids, adj }
    }

    fn full(&self) -> u64 {
        if self.ids.len() == 64 {
            u64::MAX
        } else {
            (1u64 << self.ids.len()) - 1
        }
    }
}

/// Every perfect matching of `g`, sorted by edge list.
///
/// The empty graph has exactly one (empty) matching; a graph with an odd
/// number of vertices has none.
pub fn enumerate_matchings(g: &PlaneGraph, limits: &Limits) -> Result<Vec<Matching>> {
    limits.check(g)?;
    if g.vertex_count() % 2 == 1 {
        return Ok(Vec::new());
    }
    let local = Local::new(g);
    let mut out = Vec::new();
    let mut stack = Vec::new();
    enumerate_rec(&local, local.full(), &mut stack, &mut out);
    let mut matchings: Vec<Matching> = out
        .into_iter()
        .map(|picked: Vec<(Edge, Scalar)>| {
            let mut weight = Scalar::one();
            let mut edges = Vec::with_capacity(picked.len());
            for (e, w) in picked {
                weight *= w;
                edges.push(e);
            }
            edges.sort();
            Matching { edges, weight }
        })
        .collect();
    matchings.sort();
    Ok(matchings)
}

fn enumerate_rec(
    local: &Local,
    uncovered: u64,
    stack: &mut Vec<(Edge, Scalar)>,
    out: &mut Vec<Vec<(Edge, Scalar)>>,
) {
    if uncovered == 0 {
        out.push(stack.clone());
        return;
    }
    let i = uncovered.trailing_zeros() as usize;
    for (j, e, w) in &local.adj[i] {
        if uncovered & (1u64 << j) != 0 {
            stack.push((*e, w.clone()));
            enumerate_rec(local, uncovered & !(1u64 << i) & !(1u64 << j), stack, out);
            stack.pop();
        }
    }
}

/// Total weight of all perfect matchings; `1` for the empty graph and `0`
/// whenever the vertex count is odd.
pub fn count_matchings(g: &PlaneGraph, limits: &Limits) -> Result<Scalar> {
    limits.check(g)?;
    if g.vertex_count() % 2 == 1 {
        return Ok(Scalar::zero());
    }
    let local = Local::new(g);
    let mut memo = HashMap::new();
    Ok(count_rec(&local, local.full(), &mut memo))
}

fn count_rec(local: &Local, uncovered: u64, memo: &mut HashMap<u64, Scalar>) -> Scalar {
    if uncovered == 0 {
        return Scalar::one();
    }
    if let Some(x) = memo.get(&uncovered) {
        return x.clone();
    }
    let i = uncovered.trailing_zeros() as usize;
    let mut total = Scalar::zero();
    for (j, _, w) in &local.adj[i] {
        if uncovered & (1u64 << j) != 0 {
            let rest = count_rec(local, uncovered & !(1u64 << i) & !(1u64 << j), memo);
            if !rest.is_zero() {
                total += w * rest;
            }
        }
    }
    memo.insert(uncovered, total.clone());
    total
}

/// Number of perfect matchings ignoring weights, stopping once `stop_at` is
/// reached.
fn count_unweighted_up_to(g: &PlaneGraph, stop_at: usize) -> usize {
    if g.vertex_count() % 2 == 1 {
        return 0;
    }
    fn rec(local: &Local, uncovered: u64, found: &mut usize, stop_at: usize) {
        if *found >= stop_at {
            return;
        }
        if uncovered == 0 {
            *found += 1;
            return;
        }
        let i = uncovered.trailing_zeros() as usize;
        for (j, _, _) in &local.adj[i] {
            if uncovered & (1u64 << j) != 0 {
                rec(local, uncovered & !(1u64 << i) & !(1u64 << j), found, stop_at);
            }
        }
    }
    let local = Local::new(g);
    let mut found = 0;
    rec(&local, local.full(), &mut found, stop_at);
    found
}

/// True iff `g` has exactly one perfect matching (regardless of its weight).
pub fn has_unique_matching(g: &PlaneGraph, limits: &Limits) -> Result<bool> {
    limits.check(g)?;
    Ok(count_unweighted_up_to(g, 2) == 1)
}

/// The unique perfect matching of `g`, if there is exactly one.
pub fn unique_matching(g: &PlaneGraph, limits: &Limits) -> Result<Option<Matching>> {
    if !has_unique_matching(g, limits)? {
        return Ok(None);
    }
    Ok(enumerate_matchings(g, limits)?.pop())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::graph_from_labels;
    use crate::scalar::int;

    fn lim() -> Limits {
        Limits::default()
    }

    fn c4() -> PlaneGraph {
        graph_from_labels(
            &["a", "b", "c", "d"],
            &[("a", "b", 1), ("b", "c", 1), ("c", "d", 1), ("d", "a", 1)],
            &["a", "b", "c", "d"],
        )
        .unwrap()
    }

    #[test]
    fn empty_graph_has_one_empty_matching() {
        let g = graph_from_labels(&[], &[], &[]).unwrap();
        let ms = enumerate_matchings(&g, &lim()).unwrap();
        assert_eq!(ms, vec![Matching::empty()]);
        assert_eq!(count_matchings(&g, &lim()).unwrap(), int(1));
    }

    #[test]
    fn single_weighted_edge() {
        let g = graph_from_labels(&["u", "v"], &[("u", "v", 3)], &["u", "v"]).unwrap();
        let ms = enumerate_matchings(&g, &lim()).unwrap();
        assert_eq!(ms.len(), 1);
        assert_eq!(ms[0].weight(), &int(3));
        assert!(has_unique_matching(&g, &lim()).unwrap());
    }

    #[test]
    fn c4_has_two() {
        let g = c4();
        assert_eq!(enumerate_matchings(&g, &lim()).unwrap().len(), 2);
        assert_eq!(count_matchings(&g, &lim()).unwrap(), int(2));
        assert!(!has_unique_matching(&g, &lim()).unwrap());
    }

    #[test]
    fn odd_graph_has_none() {
        let g = graph_from_labels(&["a", "b", "c"], &[("a", "b", 1), ("b", "c", 1)], &[]).unwrap();
        assert!(enumerate_matchings(&g, &lim()).unwrap().is_empty());
        assert_eq!(count_matchings(&g, &lim()).unwrap(), int(0));
    }

    #[test]
    fn path_on_four_is_unique() {
        let g = graph_from_labels(
            &["1", "2", "3", "4"],
            &[("1", "2", 1), ("2", "3", 1), ("3", "4", 1)],
            &["1", "2", "3", "4"],
        )
        .unwrap();
        let m = unique_matching(&g, &lim()).unwrap().unwrap();
        assert_eq!(m.len(), 2);
        assert!(!m.contains(Edge::new(g.id_of("2").unwrap(), g.id_of("3").unwrap())));
    }

    #[test]
    fn size_guard() {
        let names: Vec<String> = (0..26).map(|i| i.to_string()).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let g = graph_from_labels(&refs, &[], &[]).unwrap();
        assert!(matches!(
            count_matchings(&g, &lim()),
            Err(Error::TooLarge { vertices: 26, cap: 24 })
        ));
        assert!(count_matchings(&g, &Limits::with_cap(30)).is_ok());
    }

    #[test]
    fn matching_new_validates() {
        let g = c4();
        let id = |n| g.id_of(n).unwrap();
        let ok = Matching::new(&g, [Edge::new(id("a"), id("b")), Edge::new(id("c"), id("d"))]);
        assert!(ok.is_ok());
        assert!(Matching::new(&g, [Edge::new(id("a"), id("b"))]).is_err());
        assert!(Matching::new(&g, [Edge::new(id("a"), id("c")), Edge::new(id("b"), id("d"))]).is_err());
    }
}
