//! Alternating paths relative to a uniquely matchable subgraph, nests of
//! such paths, and the surgery that cancels intersecting nests in pairs.
//!
//! Fix marked vertices `a_1, ..., a_n` on the face, split into `A_K` and
//! `A_H`, and let `M_H` be the only perfect matching of `H = G - A_K`. An
//! alternating path from `a_i` to `a_j` uses `M_H` edges and other edges in
//! turn; an endpoint in `A_H` must be left through its `M_H` edge, while an
//! endpoint in `A_K` (uncovered by `M_H`) is left through a non-matching
//! edge. A vertex is in `H` exactly when `M_H` covers it, so the matching
//! alone determines the split.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::Serialize;

use crate::algebra::{enumerate_one_factors, OneFactor};
use crate::error::{Error, Result};
use crate::graph::{Edge, PlaneGraph, VertexId};
use crate::marking::MarkedSelection;
use crate::matching::{count_matchings, has_unique_matching, unique_matching, Limits, Matching};
use crate::scalar::Scalar;

/// Default ceiling on the number of nests a census will materialise.
pub const DEFAULT_NEST_BUDGET: usize = 2_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct AlternatingPath {
    vertices: Vec<VertexId>,
    in_matching: Vec<bool>,
}

impl AlternatingPath {
    fn from_vertices(vertices: Vec<VertexId>, mh: &Matching) -> AlternatingPath {
        let in_matching = vertices
            .windows(2)
            .map(|w| mh.contains(Edge::new(w[0], w[1])))
            .collect();
        AlternatingPath { vertices, in_matching }
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn in_matching_flags(&self) -> &[bool] {
        &self.in_matching
    }

    pub fn start(&self) -> VertexId {
        self.vertices[0]
    }

    pub fn end(&self) -> VertexId {
        *self.vertices.last().expect("path has at least two vertices")
    }

    pub fn endpoints(&self) -> (VertexId, VertexId) {
        (self.start(), self.end())
    }

    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.vertices.windows(2).map(|w| Edge::new(w[0], w[1]))
    }

    pub fn len(&self) -> usize {
        self.in_matching.len()
    }

    pub fn is_empty(&self) -> bool {
        self.in_matching.is_empty()
    }

    pub fn reversed(&self) -> AlternatingPath {
        let mut vertices = self.vertices.clone();
        vertices.reverse();
        let mut in_matching = self.in_matching.clone();
        in_matching.reverse();
        AlternatingPath { vertices, in_matching }
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.vertices.contains(&v)
    }

    pub fn intersects(&self, other: &AlternatingPath) -> bool {
        self.vertices.iter().any(|v| other.contains(*v))
    }
}

/// Whether `path` is a simple path of `g` that alternates with respect to
/// `mh` and respects the endpoint rule (a covered endpoint is left through
/// its matching edge, an uncovered one through a non-matching edge).
pub fn is_alternating_path(g: &PlaneGraph, mh: &Matching, path: &AlternatingPath) -> bool {
    let vs = &path.vertices;
    if vs.len() < 2 || vs.iter().collect::<BTreeSet<_>>().len() != vs.len() {
        return false;
    }
    if vs.iter().any(|&v| !g.contains(v)) || path.edges().any(|e| g.weight(e).is_none()) {
        return false;
    }
    let flags: Vec<bool> = path.edges().map(|e| mh.contains(e)).collect();
    if flags != path.in_matching || flags.windows(2).any(|w| w[0] == w[1]) {
        return false;
    }
    let covered = mh.covered();
    let end_ok = |v: VertexId, flag: bool| covered.contains(&v) == flag;
    if !end_ok(path.start(), flags[0]) || !end_ok(path.end(), flags[flags.len() - 1]) {
        return false;
    }
    // Interior vertices must be in H; alternation then forces them to use
    // their matching edge.
    vs[1..vs.len() - 1].iter().all(|v| covered.contains(v))
}

struct PathSearch<'a> {
    g: &'a PlaneGraph,
    mh: &'a Matching,
    partner: HashMap<VertexId, VertexId>,
    target: VertexId,
}

impl PathSearch<'_> {
    fn run(&self, start: VertexId) -> Vec<AlternatingPath> {
        let mut out = Vec::new();
        let mut stack = vec![start];
        let mut visited = BTreeSet::from([start]);
        let matching_first = self.partner.contains_key(&start);
        self.step(&mut stack, &mut visited, matching_first, &mut out);
        out.sort();
        out
    }

    fn step(
        &self,
        stack: &mut Vec<VertexId>,
        visited: &mut BTreeSet<VertexId>,
        matching_step: bool,
        out: &mut Vec<AlternatingPath>,
    ) {
        let cur = *stack.last().expect("non-empty");
        if matching_step {
            let next = self.partner[&cur];
            if visited.contains(&next) {
                return;
            }
            stack.push(next);
            if next == self.target {
                out.push(AlternatingPath::from_vertices(stack.clone(), self.mh));
            } else {
                visited.insert(next);
                self.step(stack, visited, false, out);
                visited.remove(&next);
            }
            stack.pop();
            return;
        }
        for &next in self.g.neighbors(cur) {
            if visited.contains(&next) || self.mh.contains(Edge::new(cur, next)) {
                continue;
            }
            let covered = self.partner.contains_key(&next);
            if next == self.target {
                if !covered {
                    stack.push(next);
                    out.push(AlternatingPath::from_vertices(stack.clone(), self.mh));
                    stack.pop();
                }
                continue;
            }
            if !covered {
                continue;
            }
            stack.push(next);
            visited.insert(next);
            self.step(stack, visited, true, out);
            visited.remove(&next);
            stack.pop();
        }
    }
}

fn partner_map(mh: &Matching) -> HashMap<VertexId, VertexId> {
    let mut m = HashMap::new();
    for e in mh.edges() {
        let (u, v) = e.endpoints();
        m.insert(u, v);
        m.insert(v, u);
    }
    m
}

fn paths_unchecked(g: &PlaneGraph, mh: &Matching, a: VertexId, b: VertexId) -> Vec<AlternatingPath> {
    PathSearch {
        g,
        mh,
        partner: partner_map(mh),
        target: b,
    }
    .run(a)
}

/// The subgraph `H` on the vertices covered by `mh`, after checking that
/// `mh` is a matching of `g` and the only perfect matching of `H`.
fn checked_host(g: &PlaneGraph, mh: &Matching, limits: &Limits) -> Result<PlaneGraph> {
    let h = g.induced(mh.covered())?;
    Matching::new(&h, mh.edges().iter().copied())
        .map_err(|e| Error::InvalidArgument(format!("M_H is not a matching of the graph: {e}")))?;
    if !has_unique_matching(&h, limits)? {
        return Err(Error::Precondition(
            "M_H is not the unique perfect matching of the subgraph it covers".into(),
        ));
    }
    Ok(h)
}

/// All alternating paths from `a` to `b`, sorted by vertex sequence.
pub fn enumerate_alternating_paths(
    g: &PlaneGraph,
    mh: &Matching,
    a: VertexId,
    b: VertexId,
    limits: &Limits,
) -> Result<Vec<AlternatingPath>> {
    if a == b || !g.contains(a) || !g.contains(b) {
        return Err(Error::InvalidArgument("endpoints must be two distinct vertices of the graph".into()));
    }
    checked_host(g, mh, limits)?;
    Ok(paths_unchecked(g, mh, a, b))
}

/// One alternating path per pair of a one-factor on the marked indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct PathNest {
    pub pairing: OneFactor,
    /// `paths[t]` joins the pair `pairing.pairs()[t]`, oriented from the
    /// smaller index.
    pub paths: Vec<AlternatingPath>,
}

impl PathNest {
    pub fn is_intersecting(&self) -> bool {
        for x in 0..self.paths.len() {
            for y in x + 1..self.paths.len() {
                if self.paths[x].intersects(&self.paths[y]) {
                    return true;
                }
            }
        }
        false
    }

    pub fn sign(&self) -> i8 {
        self.pairing.sign()
    }

    fn from_pairs(mut entries: Vec<((usize, usize), AlternatingPath)>) -> Result<PathNest> {
        entries.sort_by_key(|(p, _)| *p);
        let pairing = OneFactor::new(entries.iter().map(|(p, _)| *p))?;
        Ok(PathNest {
            pairing,
            paths: entries.into_iter().map(|(_, p)| p).collect(),
        })
    }
}

#[derive(Clone, Debug, Default)]
pub struct NestCensus {
    pub non_intersecting: Vec<PathNest>,
    pub intersecting: Vec<PathNest>,
}

impl NestCensus {
    /// `sum over all nests of (-1)^crossings`.
    pub fn signed_total(&self) -> i64 {
        self.non_intersecting
            .iter()
            .chain(&self.intersecting)
            .map(|n| n.sign() as i64)
            .sum()
    }
}

/// Edge colour in the union of two intersecting paths.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Colour {
    /// Only in the first path.
    Red,
    /// Only in the second path.
    Blue,
    /// In both. At a vertex where all three colours meet, the purple edge
    /// is the `M_H` edge.
    Purple,
}

/// Record of one crossing resolution, kept whole so each stage can be
/// inspected.
#[derive(Clone, Debug, Serialize)]
pub struct CrossingResolution {
    pub input: (AlternatingPath, AlternatingPath),
    /// Edge multiset of the two inputs; shared edges have multiplicity two.
    pub union_multiset: Vec<(Edge, u8)>,
    /// Colouring of the simple union graph `R`.
    pub colouring: BTreeMap<Edge, Colour>,
    /// The two components left after deleting purple edges that contain the
    /// four endpoints: the one starting at the first input's start, then the
    /// one starting at its end.
    pub red_blue_paths: (Vec<VertexId>, Vec<VertexId>),
    /// `(P'_ik, P'_jl)` where the first input runs `a_i -> a_j` and the
    /// red-blue path from `a_i` ends at `a_l`.
    pub output: (AlternatingPath, AlternatingPath),
}

impl CrossingResolution {
    /// The endpoint of the second input reached by the red-blue path from
    /// the first input's start.
    pub fn l_end(&self) -> VertexId {
        *self.red_blue_paths.0.last().expect("non-empty")
    }
}

fn walk(adj: &BTreeMap<VertexId, Vec<(VertexId, Edge)>>, start: VertexId) -> (Vec<VertexId>, BTreeSet<Edge>) {
    let mut vertices = vec![start];
    let mut used = BTreeSet::new();
    let mut cur = start;
    loop {
        let next = adj
            .get(&cur)
            .into_iter()
            .flatten()
            .find(|(_, e)| !used.contains(e))
            .copied();
        match next {
            Some((n, e)) => {
                used.insert(e);
                vertices.push(n);
                cur = n;
            }
            None => return (vertices, used),
        }
    }
}

fn adjacency(edges: impl Iterator<Item = Edge>) -> BTreeMap<VertexId, Vec<(VertexId, Edge)>> {
    let mut adj: BTreeMap<VertexId, Vec<(VertexId, Edge)>> = BTreeMap::new();
    for e in edges {
        let (u, v) = e.endpoints();
        adj.entry(u).or_default().push((v, e));
        adj.entry(v).or_default().push((u, e));
    }
    adj
}

/// Re-partitions the union of two intersecting alternating paths.
///
/// `p1` runs from `a_i` to `a_j`. With `a_l` the endpoint of `p2` reached by
/// the red-blue path from `a_i` and `a_k` the other one, the result joins
/// `a_i` to `a_k` and `a_j` to `a_l`, covering every red and blue edge once
/// and every purple edge twice. Any structural surprise (a vertex of degree
/// above three, a junction whose shared edge is outside `M_H`, a red-blue
/// path joining the two
/// ends of the same input, leftover edges forming an alternating cycle) is an
/// [`Error::Integrity`]: it can only happen when `M_H` is not unique.
pub fn resolve_crossing(p1: &AlternatingPath, p2: &AlternatingPath, mh: &Matching) -> Result<CrossingResolution> {
    if !p1.intersects(p2) {
        return Err(Error::InvalidArgument("paths do not intersect".into()));
    }
    let (ai, aj) = p1.endpoints();
    let (x, y) = p2.endpoints();
    if [ai, aj].contains(&x) || [ai, aj].contains(&y) {
        return Err(Error::InvalidArgument("paths share an endpoint".into()));
    }

    let e1: BTreeSet<Edge> = p1.edges().collect();
    let e2: BTreeSet<Edge> = p2.edges().collect();
    let mut colouring = BTreeMap::new();
    for &e in e1.union(&e2) {
        let c = match (e1.contains(&e), e2.contains(&e)) {
            (true, true) => Colour::Purple,
            (true, false) => Colour::Red,
            _ => Colour::Blue,
        };
        colouring.insert(e, c);
    }
    let union_multiset: Vec<(Edge, u8)> = colouring
        .iter()
        .map(|(&e, &c)| (e, if c == Colour::Purple { 2 } else { 1 }))
        .collect();

    let all = adjacency(colouring.keys().copied());
    for (v, incident) in &all {
        let colours: Vec<Colour> = incident.iter().map(|(_, e)| colouring[e]).collect();
        match colours.len() {
            1 | 2 => {}
            3 => {
                let has = |c| colours.contains(&c);
                if !(has(Colour::Red) && has(Colour::Blue) && has(Colour::Purple)) {
                    return Err(Error::Integrity(format!("degree-3 vertex {v} lacks one of each colour")));
                }
                let purple_in_mh = incident
                    .iter()
                    .any(|(_, e)| colouring[e] == Colour::Purple && mh.contains(*e));
                if !purple_in_mh {
                    return Err(Error::Integrity(format!("the shared edge at junction {v} is not in M_H")));
                }
            }
            d => return Err(Error::Integrity(format!("vertex {v} has degree {d} in the union"))),
        }
    }

    let mut colour_of = colouring.clone();
    let red_blue = adjacency(colouring.iter().filter(|(_, &c)| c != Colour::Purple).map(|(&e, _)| e));
    let (from_i, _) = walk(&red_blue, ai);
    let l = *from_i.last().expect("walk");
    if l != x && l != y {
        return Err(Error::Integrity(
            "the red-blue path from a_i does not end at an endpoint of the other path".into(),
        ));
    }
    let k = if l == x { y } else { x };
    let (from_j, swap_edges) = walk(&red_blue, aj);
    if *from_j.last().expect("walk") != k {
        return Err(Error::Integrity("red-blue paths do not pair the four endpoints".into()));
    }
    for e in &swap_edges {
        let c = colour_of.get_mut(e).expect("edge of R");
        *c = match *c {
            Colour::Red => Colour::Blue,
            Colour::Blue => Colour::Red,
            Colour::Purple => Colour::Purple,
        };
    }

    let trace = |keep: Colour, start: VertexId, end: VertexId| -> Result<AlternatingPath> {
        let edges: Vec<Edge> = colour_of
            .iter()
            .filter(|(_, &c)| c == keep || c == Colour::Purple)
            .map(|(&e, _)| e)
            .collect();
        let adj = adjacency(edges.iter().copied());
        let (vertices, used) = walk(&adj, start);
        if *vertices.last().expect("walk") != end {
            return Err(Error::Integrity("re-partitioned path ends at the wrong vertex".into()));
        }
        if used.len() != edges.len() {
            return Err(Error::Integrity(
                "edges left over after re-partition form an M_H-alternating cycle".into(),
            ));
        }
        let path = AlternatingPath::from_vertices(vertices, mh);
        if path.in_matching.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Integrity("re-partitioned path does not alternate".into()));
        }
        Ok(path)
    };
    let p_ik = trace(Colour::Red, ai, k)?;
    let p_jl = trace(Colour::Blue, aj, l)?;

    Ok(CrossingResolution {
        input: (p1.clone(), p2.clone()),
        union_multiset,
        colouring,
        red_blue_paths: (from_i, from_j),
        output: (p_ik, p_jl),
    })
}

/// A validated instance of the Pfaffian setting: marked vertices in face
/// order, the split into `A_K` and `A_H`, and the unique matching of
/// `H = G - A_K`.
#[derive(Clone, Debug)]
pub struct PfaffianSetup {
    graph: PlaneGraph,
    marked: Vec<VertexId>,
    ah: BTreeSet<VertexId>,
    h: PlaneGraph,
    mh: Matching,
    limits: Limits,
}

impl PfaffianSetup {
    /// Uses `sel.a` as `a_1, ..., a_n` and `sel.ah` as `A_H`.
    ///
    /// Errors with [`Error::Hypothesis`] when the marked vertices are not in
    /// cyclic face order or `H` does not have exactly one perfect matching.
    pub fn new(g: &PlaneGraph, sel: &MarkedSelection, limits: &Limits) -> Result<PfaffianSetup> {
        sel.validate(g)?;
        if sel.a.len() % 2 == 1 || sel.a.is_empty() {
            return Err(Error::Hypothesis(format!(
                "need a positive even number of marked vertices, got {}",
                sel.a.len()
            )));
        }
        MarkedSelection::require_cyclic(g, &sel.a)?;
        let h = g.delete_vertices(sel.ak())?;
        let mh = unique_matching(&h, limits)?
            .ok_or_else(|| Error::Hypothesis("H = G - A_K does not have exactly one perfect matching".into()))?;
        Ok(PfaffianSetup {
            graph: g.clone(),
            marked: sel.a.clone(),
            ah: sel.ah.clone(),
            h,
            mh,
            limits: *limits,
        })
    }

    pub fn graph(&self) -> &PlaneGraph {
        &self.graph
    }

    pub fn marked(&self) -> &[VertexId] {
        &self.marked
    }

    pub fn n(&self) -> usize {
        self.marked.len()
    }

    pub fn h(&self) -> &PlaneGraph {
        &self.h
    }

    pub fn mh(&self) -> &Matching {
        &self.mh
    }

    /// `a_i` for 1-based `i`.
    pub fn vertex(&self, i: usize) -> VertexId {
        self.marked[i - 1]
    }

    /// 1-based index of a marked vertex.
    pub fn index_of(&self, v: VertexId) -> Option<usize> {
        self.marked.iter().position(|&m| m == v).map(|p| p + 1)
    }

    /// `K = G - A_H`.
    pub fn k_graph(&self) -> Result<PlaneGraph> {
        self.graph.delete_vertices(self.ah.iter().copied())
    }

    /// `H_ij`: `H` with membership of `a_i` and `a_j` toggled.
    pub fn h_ij(&self, i: usize, j: usize) -> Result<PlaneGraph> {
        let (vi, vj) = (self.vertex(i), self.vertex(j));
        let removed = self.marked.iter().copied().filter(|&v| {
            let in_h = self.ah.contains(&v);
            if v == vi || v == vj {
                in_h
            } else {
                !in_h
            }
        });
        self.graph.delete_vertices(removed.collect::<Vec<_>>())
    }

    /// Alternating paths from `a_i` to `a_j`, oriented from `a_i`.
    pub fn paths(&self, i: usize, j: usize) -> Vec<AlternatingPath> {
        paths_unchecked(&self.graph, &self.mh, self.vertex(i), self.vertex(j))
    }

    pub fn path_table(&self) -> BTreeMap<(usize, usize), Vec<AlternatingPath>> {
        let mut table = BTreeMap::new();
        for i in 1..=self.n() {
            for j in i + 1..=self.n() {
                table.insert((i, j), self.paths(i, j));
            }
        }
        table
    }

    /// `M(H_ij)` for every pair.
    pub fn entry_counts(&self) -> Result<BTreeMap<(usize, usize), Scalar>> {
        let mut out = BTreeMap::new();
        for i in 1..=self.n() {
            for j in i + 1..=self.n() {
                out.insert((i, j), count_matchings(&self.h_ij(i, j)?, &self.limits)?);
            }
        }
        Ok(out)
    }

    /// Every nest, split by whether any two of its paths share a vertex.
    /// No pruning: the intersecting nests are all produced.
    pub fn census(&self, budget: usize) -> Result<NestCensus> {
        let table = self.path_table();
        let factors = enumerate_one_factors(self.n())?;
        let mut total: usize = 0;
        for f in &factors {
            let size = f
                .pairs()
                .iter()
                .try_fold(1usize, |acc, p| acc.checked_mul(table[p].len()));
            total = size.and_then(|s| total.checked_add(s)).unwrap_or(usize::MAX);
        }
        if total > budget {
            return Err(Error::Budget(format!("{total} nests exceed the budget of {budget}")));
        }
        let mut census = NestCensus::default();
        for f in factors {
            let lists: Vec<&Vec<AlternatingPath>> = f.pairs().iter().map(|p| &table[p]).collect();
            if lists.iter().any(|l| l.is_empty()) {
                continue;
            }
            let mut idx = vec![0usize; lists.len()];
            loop {
                let nest = PathNest {
                    pairing: f.clone(),
                    paths: idx.iter().zip(&lists).map(|(&t, l)| l[t].clone()).collect(),
                };
                if nest.is_intersecting() {
                    census.intersecting.push(nest);
                } else {
                    census.non_intersecting.push(nest);
                }
                // odometer
                let mut pos = lists.len();
                loop {
                    if pos == 0 {
                        break;
                    }
                    pos -= 1;
                    idx[pos] += 1;
                    if idx[pos] < lists[pos].len() {
                        break;
                    }
                    idx[pos] = 0;
                    if pos == 0 {
                        pos = usize::MAX;
                        break;
                    }
                }
                if pos == usize::MAX {
                    break;
                }
            }
        }
        Ok(census)
    }

    /// Non-intersecting nests only, found by backtracking that prunes on
    /// vertex reuse.
    pub fn non_intersecting_nests(&self) -> Vec<PathNest> {
        let table = self.path_table();
        let mut out = Vec::new();
        let mut chosen: Vec<((usize, usize), AlternatingPath)> = Vec::new();
        let mut used: BTreeSet<VertexId> = BTreeSet::new();
        let mut free: Vec<usize> = (1..=self.n()).collect();
        fn rec(
            table: &BTreeMap<(usize, usize), Vec<AlternatingPath>>,
            free: &mut Vec<usize>,
            used: &mut BTreeSet<VertexId>,
            chosen: &mut Vec<((usize, usize), AlternatingPath)>,
            out: &mut Vec<PathNest>,
        ) {
            if free.is_empty() {
                out.push(PathNest::from_pairs(chosen.clone()).expect("complete pairing"));
                return;
            }
            let first = free.remove(0);
            for t in 0..free.len() {
                let second = free.remove(t);
                for path in &table[&(first, second)] {
                    if path.vertices().iter().any(|v| used.contains(v)) {
                        continue;
                    }
                    used.extend(path.vertices().iter().copied());
                    chosen.push(((first, second), path.clone()));
                    rec(table, free, used, chosen, out);
                    chosen.pop();
                    for v in path.vertices() {
                        used.remove(v);
                    }
                }
                free.insert(t, second);
            }
            free.insert(0, first);
        }
        rec(&table, &mut free, &mut used, &mut chosen, &mut out);
        out.sort();
        out
    }

    /// The nest paired with `nest` by the cancelling map.
    ///
    /// Take the smallest index `i` lying on a path that meets another path,
    /// follow that path from `a_i` to the first vertex `v` it shares, and
    /// among the other paths through `v` pick the one whose endpoint `a_l`
    /// (reached from `a_i` by a red-blue path) has the smallest `l`. The two
    /// paths are then re-partitioned by [`resolve_crossing`].
    pub fn partner(&self, nest: &PathNest) -> Result<PathNest> {
        let pairs = nest.pairing.pairs();
        let meets: Vec<bool> = (0..nest.paths.len())
            .map(|x| (0..nest.paths.len()).any(|y| x != y && nest.paths[x].intersects(&nest.paths[y])))
            .collect();
        let first = (0..pairs.len())
            .filter(|&t| meets[t])
            .min_by_key(|&t| pairs[t].0)
            .ok_or_else(|| Error::InvalidArgument("nest has no intersecting paths".into()))?;
        let (i, j) = pairs[first];
        let path = &nest.paths[first];

        let shared = path
            .vertices()
            .iter()
            .copied()
            .find(|&v| (0..nest.paths.len()).any(|t| t != first && nest.paths[t].contains(v)))
            .expect("intersecting path has a shared vertex");

        let mut best: Option<(usize, usize, CrossingResolution)> = None;
        for t in (0..nest.paths.len()).filter(|&t| t != first && nest.paths[t].contains(shared)) {
            let res = resolve_crossing(path, &nest.paths[t], &self.mh)?;
            let l = self.index_of(res.l_end()).expect("marked endpoint");
            if best.as_ref().is_none_or(|(bl, _, _)| l < *bl) {
                best = Some((l, t, res));
            }
        }
        let (l, other, res) = best.ok_or_else(|| {
            Error::Integrity("no path through the first shared vertex admits a red-blue path".into())
        })?;
        let k = {
            let (x, y) = pairs[other];
            if x == l {
                y
            } else {
                x
            }
        };

        let orient = |p: AlternatingPath, from: usize, to: usize| {
            if from < to {
                ((from, to), p)
            } else {
                ((to, from), p.reversed())
            }
        };
        let (p_ik, p_jl) = res.output;
        let mut entries: Vec<((usize, usize), AlternatingPath)> = (0..pairs.len())
            .filter(|&t| t != first && t != other)
            .map(|t| (pairs[t], nest.paths[t].clone()))
            .collect();
        entries.push(orient(p_ik, i, k));
        entries.push(orient(p_jl, j, l));
        PathNest::from_pairs(entries)
    }

    /// Pairs up the intersecting nests of a census by [`Self::partner`],
    /// checking that the map is a fixed-point-free involution that flips the
    /// sign. Returns index pairs into `intersecting`.
    pub fn cancelling_involution(&self, intersecting: &[PathNest]) -> Result<Vec<(usize, usize)>> {
        let index: HashMap<&PathNest, usize> = intersecting.iter().enumerate().map(|(t, n)| (n, t)).collect();
        let mut pairs = Vec::new();
        for (t, nest) in intersecting.iter().enumerate() {
            let image = self.partner(nest)?;
            let u = *index
                .get(&image)
                .ok_or_else(|| Error::Integrity("partner nest is not in the census".into()))?;
            if u == t {
                return Err(Error::Integrity("cancelling map has a fixed point".into()));
            }
            if image.sign() == nest.sign() {
                return Err(Error::Integrity("paired nests have the same sign".into()));
            }
            if self.partner(&image)? != *nest {
                return Err(Error::Integrity("cancelling map is not an involution".into()));
            }
            if t < u {
                pairs.push((t, u));
            }
        }
        Ok(pairs)
    }
}

/// Convenience wrapper: census of all nests for a marking.
pub fn enumerate_nests(g: &PlaneGraph, sel: &MarkedSelection, limits: &Limits) -> Result<NestCensus> {
    PfaffianSetup::new(g, sel, limits)?.census(DEFAULT_NEST_BUDGET)
}
