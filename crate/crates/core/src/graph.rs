//! Weighted plane graphs with stable vertex identities and a designated face.
//!
//! A [`PlaneGraph`] never re-embeds itself. The face boundary is trusted as
//! supplied, and deleting vertices simply drops them from the cyclic
//! sequence. All vertex-deleted subgraphs share the label table of the graph
//! they came from, so a [`VertexId`] means the same vertex everywhere.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct VertexId(pub u32);

impl VertexId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// Unordered vertex pair, stored with the smaller id first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Edge(VertexId, VertexId);

impl Edge {
    pub fn new(u: VertexId, v: VertexId) -> Self {
        if u <= v {
            Edge(u, v)
        } else {
            Edge(v, u)
        }
    }

    pub fn endpoints(self) -> (VertexId, VertexId) {
        (self.0, self.1)
    }

    pub fn contains(self, v: VertexId) -> bool {
        self.0 == v || self.1 == v
    }

    /// The endpoint opposite `v`, if `v` is an endpoint.
    pub fn other(self, v: VertexId) -> Option<VertexId> {
        if self.0 == v {
            Some(self.1)
        } else if self.1 == v {
            Some(self.0)
        } else {
            None
        }
    }
}

/// Which side of a bipartition a vertex is on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    U,
    V,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::U => Side::V,
            Side::V => Side::U,
        }
    }
}

#[derive(Clone, Debug)]
pub struct PlaneGraph {
    names: Arc<Vec<String>>,
    vertices: BTreeSet<VertexId>,
    edges: BTreeMap<Edge, Scalar>,
    adjacency: BTreeMap<VertexId, Vec<VertexId>>,
    face: Vec<VertexId>,
}

impl PartialEq for PlaneGraph {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices
            && self.edges == other.edges
            && self.face == other.face
            && self.vertices.iter().all(|&v| self.name(v) == other.name(v))
    }
}

impl Eq for PlaneGraph {}

impl PlaneGraph {
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.vertices.iter().copied()
    }

    pub fn vertex_set(&self) -> &BTreeSet<VertexId> {
        &self.vertices
    }

    pub fn edges(&self) -> impl Iterator<Item = (Edge, &Scalar)> + '_ {
        self.edges.iter().map(|(e, w)| (*e, w))
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.vertices.contains(&v)
    }

    pub fn weight(&self, e: Edge) -> Option<&Scalar> {
        self.edges.get(&e)
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.edges.contains_key(&Edge::new(u, v))
    }

    /// Neighbours of `v` in increasing id order. Empty for absent vertices.
    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        self.adjacency.get(&v).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn face(&self) -> &[VertexId] {
        &self.face
    }

    /// Label of `v`. Works for deleted vertices too, since labels are shared
    /// with the original graph.
    pub fn name(&self, v: VertexId) -> &str {
        self.names.get(v.index()).map(String::as_str).unwrap_or("?")
    }

    /// Looks up a surviving vertex by label.
    pub fn id_of(&self, name: &str) -> Option<VertexId> {
        self.vertices.iter().copied().find(|&v| self.name(v) == name)
    }

    pub fn names(&self, vs: impl IntoIterator<Item = VertexId>) -> Vec<String> {
        vs.into_iter().map(|v| self.name(v).to_string()).collect()
    }

    /// Induced subgraph on the complement of `removed`.
    ///
    /// Surviving vertices keep their ids, every edge with both ends surviving
    /// is kept with its weight, and the face boundary is the original cyclic
    /// sequence restricted to the survivors.
    pub fn delete_vertices<I>(&self, removed: I) -> Result<PlaneGraph>
    where
        I: IntoIterator<Item = VertexId>,
    {
        let removed: BTreeSet<VertexId> = removed.into_iter().collect();
        if let Some(&bad) = removed.iter().find(|v| !self.vertices.contains(v)) {
            return Err(Error::InvalidArgument(format!(
                "cannot delete {}: not a vertex of this graph",
                self.describe(bad)
            )));
        }
        if removed.is_empty() {
            return Ok(self.clone());
        }
        let vertices: BTreeSet<VertexId> = self.vertices.difference(&removed).copied().collect();
        let edges: BTreeMap<Edge, Scalar> = self
            .edges
            .iter()
            .filter(|(e, _)| {
                let (u, v) = e.endpoints();
                !removed.contains(&u) && !removed.contains(&v)
            })
            .map(|(e, w)| (*e, w.clone()))
            .collect();
        let face = self.face.iter().copied().filter(|v| !removed.contains(v)).collect();
        Ok(PlaneGraph::assemble(Arc::clone(&self.names), vertices, edges, face))
    }

    /// Induced subgraph on exactly `keep`.
    pub fn induced<I>(&self, keep: I) -> Result<PlaneGraph>
    where
        I: IntoIterator<Item = VertexId>,
    {
        let keep: BTreeSet<VertexId> = keep.into_iter().collect();
        if let Some(&bad) = keep.iter().find(|v| !self.vertices.contains(v)) {
            return Err(Error::InvalidArgument(format!(
                "cannot keep {}: not a vertex of this graph",
                self.describe(bad)
            )));
        }
        self.delete_vertices(self.vertices.difference(&keep).copied().collect::<Vec<_>>())
    }

    /// Whether `seq` occurs as a cyclic subsequence of the face boundary, in
    /// either orientation.
    ///
    /// Fails with [`Error::NotOnFace`] naming the first vertex of `seq` that
    /// is not on the designated face.
    pub fn validate_cyclic_order(&self, seq: &[VertexId]) -> Result<bool> {
        let position: HashMap<VertexId, usize> =
            self.face.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut positions = Vec::with_capacity(seq.len());
        for &v in seq {
            match position.get(&v) {
                Some(&p) => positions.push(p),
                None => return Err(Error::NotOnFace(self.name(v).to_string())),
            }
        }
        Ok(is_cyclically_increasing(&positions) || {
            positions.reverse();
            is_cyclically_increasing(&positions)
        })
    }

    /// Two-colouring with the smallest vertex of each component on side U,
    /// or `None` when the graph has an odd cycle.
    pub fn bipartition(&self) -> Option<BTreeMap<VertexId, Side>> {
        let mut side: BTreeMap<VertexId, Side> = BTreeMap::new();
        for &root in &self.vertices {
            if side.contains_key(&root) {
                continue;
            }
            side.insert(root, Side::U);
            let mut queue = VecDeque::from([root]);
            while let Some(v) = queue.pop_front() {
                let s = side[&v];
                for &w in self.neighbors(v) {
                    match side.get(&w) {
                        Some(&t) if t == s => return None,
                        Some(_) => {}
                        None => {
                            side.insert(w, s.flip());
                            queue.push_back(w);
                        }
                    }
                }
            }
        }
        Some(side)
    }

    /// Connected components as sorted vertex lists, ordered by smallest id.
    pub fn components(&self) -> Vec<Vec<VertexId>> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for &root in &self.vertices {
            if !seen.insert(root) {
                continue;
            }
            let mut comp = vec![root];
            let mut stack = vec![root];
            while let Some(v) = stack.pop() {
                for &w in self.neighbors(v) {
                    if seen.insert(w) {
                        comp.push(w);
                        stack.push(w);
                    }
                }
            }
            comp.sort();
            out.push(comp);
        }
        out
    }

    fn describe(&self, v: VertexId) -> String {
        match self.names.get(v.index()) {
            Some(n) => format!("`{n}`"),
            None => v.to_string(),
        }
    }

    fn assemble(
        names: Arc<Vec<String>>,
        vertices: BTreeSet<VertexId>,
        edges: BTreeMap<Edge, Scalar>,
        face: Vec<VertexId>,
    ) -> PlaneGraph {
        let mut adjacency: BTreeMap<VertexId, Vec<VertexId>> =
            vertices.iter().map(|&v| (v, Vec::new())).collect();
        for e in edges.keys() {
            let (u, v) = e.endpoints();
            adjacency.get_mut(&u).expect("edge endpoint").push(v);
            adjacency.get_mut(&v).expect("edge endpoint").push(u);
        }
        for list in adjacency.values_mut() {
            list.sort();
        }
        PlaneGraph {
            names,
            vertices,
            edges,
            adjacency,
            face,
        }
    }
}

/// True when the cyclic sequence `p` has at most one descent, i.e. some
/// rotation of it is strictly increasing.
fn is_cyclically_increasing(p: &[usize]) -> bool {
    if p.len() <= 1 {
        return true;
    }
    let distinct: BTreeSet<_> = p.iter().collect();
    if distinct.len() != p.len() {
        return false;
    }
    let descents = (0..p.len()).filter(|&i| p[(i + 1) % p.len()] < p[i]).count();
    descents == 1
}

/// Incremental constructor for [`PlaneGraph`]; rejects loops, parallel edges,
/// zero weights, unknown ids and duplicate labels as they are added.
#[derive(Debug, Default)]
pub struct GraphBuilder {
    names: Vec<String>,
    by_name: HashMap<String, VertexId>,
    edges: BTreeMap<Edge, Scalar>,
    face: Vec<VertexId>,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn vertex(&mut self, name: impl Into<String>) -> Result<VertexId> {
        let name = name.into();
        if self.by_name.contains_key(&name) {
            return Err(Error::InvalidArgument(format!("duplicate vertex `{name}`")));
        }
        let id = VertexId(self.names.len() as u32);
        self.by_name.insert(name.clone(), id);
        self.names.push(name);
        Ok(id)
    }

    pub fn id_of(&self, name: &str) -> Option<VertexId> {
        self.by_name.get(name).copied()
    }

    pub fn edge(&mut self, u: VertexId, v: VertexId, weight: Scalar) -> Result<()> {
        let (nu, nv) = (self.label(u)?, self.label(v)?);
        if u == v {
            return Err(Error::InvalidArgument(format!("loop at `{nu}`")));
        }
        if weight.is_zero() {
            return Err(Error::InvalidArgument(format!("edge `{nu}`-`{nv}` has zero weight")));
        }
        if self.edges.insert(Edge::new(u, v), weight).is_some() {
            return Err(Error::InvalidArgument(format!("duplicate edge `{nu}`-`{nv}`")));
        }
        Ok(())
    }

    pub fn face(&mut self, face: Vec<VertexId>) -> Result<()> {
        let mut seen = BTreeSet::new();
        for &v in &face {
            let name = self.label(v)?;
            if !seen.insert(v) {
                return Err(Error::InvalidArgument(format!("face lists `{name}` twice")));
            }
        }
        self.face = face;
        Ok(())
    }

    pub fn build(self) -> PlaneGraph {
        let vertices = (0..self.names.len() as u32).map(VertexId).collect();
        PlaneGraph::assemble(Arc::new(self.names), vertices, self.edges, self.face)
    }

    fn label(&self, v: VertexId) -> Result<String> {
        self.names
            .get(v.index())
            .cloned()
            .ok_or_else(|| Error::InvalidArgument(format!("unknown vertex {v}")))
    }
}

/// Convenience for tests and small fixtures: labelled vertices, integer
/// weights, face by label.
pub fn graph_from_labels(
    vertices: &[&str],
    edges: &[(&str, &str, i64)],
    face: &[&str],
) -> Result<PlaneGraph> {
    let mut b = GraphBuilder::new();
    for v in vertices {
        b.vertex(*v)?;
    }
    let id = |b: &GraphBuilder, n: &str| {
        b.id_of(n)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown vertex `{n}`")))
    };
    for &(u, v, w) in edges {
        let (u, v) = (id(&b, u)?, id(&b, v)?);
        b.edge(u, v, crate::scalar::int(w))?;
    }
    let face = face.iter().map(|n| id(&b, n)).collect::<Result<Vec<_>>>()?;
    b.face(face)?;
    Ok(b.build())
}
