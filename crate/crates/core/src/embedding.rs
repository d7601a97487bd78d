//! Face tracing for straight-line drawings with integer coordinates.
//!
//! Generators that place vertices on a lattice use this to derive the outer
//! face instead of hard-coding it. Neighbours around each vertex are sorted
//! by exact angle (no floating point), and faces are traced with the usual
//! "turn to the next neighbour clockwise" rule.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::graph::{PlaneGraph, VertexId};

pub type Point = (i64, i64);

fn half(d: Point) -> u8 {
    // 0 for angles in [0, pi), 1 for [pi, 2pi)
    if d.1 > 0 || (d.1 == 0 && d.0 > 0) {
        0
    } else {
        1
    }
}

/// Counter-clockwise angle order of two nonzero direction vectors.
fn angle_cmp(p: Point, q: Point) -> Ordering {
    half(p).cmp(&half(q)).then_with(|| {
        let cross = p.0 * q.1 - p.1 * q.0;
        0.cmp(&cross)
    })
}

/// Neighbours of each vertex in counter-clockwise order.
pub fn rotation_system(g: &PlaneGraph, pos: &BTreeMap<VertexId, Point>) -> Result<BTreeMap<VertexId, Vec<VertexId>>> {
    let mut rot = BTreeMap::new();
    for v in g.vertices() {
        let p = *pos
            .get(&v)
            .ok_or_else(|| Error::InvalidArgument(format!("no position for `{}`", g.name(v))))?;
        let mut around: Vec<VertexId> = g.neighbors(v).to_vec();
        for u in &around {
            if pos.get(u) == Some(&p) {
                return Err(Error::InvalidArgument("two vertices share a position".into()));
            }
        }
        around.sort_by(|a, b| {
            let da = (pos[a].0 - p.0, pos[a].1 - p.1);
            let db = (pos[b].0 - p.0, pos[b].1 - p.1);
            angle_cmp(da, db)
        });
        rot.insert(v, around);
    }
    Ok(rot)
}

/// Every face as a closed walk of vertices (the closing edge is implicit).
/// Vertices may repeat on faces that touch a bridge or cut vertex.
pub fn trace_faces(g: &PlaneGraph, pos: &BTreeMap<VertexId, Point>) -> Result<Vec<Vec<VertexId>>> {
    let rot = rotation_system(g, pos)?;
    let mut unused: BTreeSet<(VertexId, VertexId)> = BTreeSet::new();
    for (e, _) in g.edges() {
        let (u, v) = e.endpoints();
        unused.insert((u, v));
        unused.insert((v, u));
    }
    let mut faces = Vec::new();
    while let Some(&start) = unused.iter().next() {
        let mut face = Vec::new();
        let mut dart = start;
        loop {
            unused.remove(&dart);
            face.push(dart.0);
            let (u, v) = dart;
            let around = &rot[&v];
            let at = around.iter().position(|&w| w == u).expect("dart reversal is in rotation");
            // next neighbour clockwise from u around v
            let w = around[(at + around.len() - 1) % around.len()];
            dart = (v, w);
            if dart == start {
                break;
            }
        }
        faces.push(face);
    }
    Ok(faces)
}

/// Twice the signed area enclosed by a closed walk.
fn doubled_area(face: &[VertexId], pos: &BTreeMap<VertexId, Point>) -> i64 {
    (0..face.len())
        .map(|t| {
            let p = pos[&face[t]];
            let q = pos[&face[(t + 1) % face.len()]];
            p.0 * q.1 - p.1 * q.0
        })
        .sum()
}

/// The unbounded face of a connected drawing, with repeated vertices
/// dropped after their first visit.
pub fn outer_face(g: &PlaneGraph, pos: &BTreeMap<VertexId, Point>) -> Result<Vec<VertexId>> {
    let faces = trace_faces(g, pos)?;
    let outer = faces
        .into_iter()
        .max_by_key(|f| doubled_area(f, pos).abs())
        .ok_or_else(|| Error::InvalidArgument("graph has no edges".into()))?;
    let mut seen = BTreeSet::new();
    Ok(outer.into_iter().filter(|v| seen.insert(*v)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::graph_from_labels;

    #[test]
    fn square_with_diagonal() {
        let g = graph_from_labels(
            &["a", "b", "c", "d"],
            &[("a", "b", 1), ("b", "c", 1), ("c", "d", 1), ("d", "a", 1), ("a", "c", 1)],
            &[],
        )
        .unwrap();
        let id = |n| g.id_of(n).unwrap();
        let pos = BTreeMap::from([(id("a"), (0, 0)), (id("b"), (1, 0)), (id("c"), (1, 1)), (id("d"), (0, 1))]);
        let faces = trace_faces(&g, &pos).unwrap();
        // two triangles and the outer square
        assert_eq!(faces.len(), 3);
        let outer = outer_face(&g, &pos).unwrap();
        let mut sizes: Vec<usize> = faces.iter().map(Vec::len).collect();
        sizes.sort();
        assert_eq!(sizes, vec![3, 3, 4]);
        assert_eq!(outer.len(), 4);
        // a and c are opposite corners on the outer cycle
        let at = |v| outer.iter().position(|&x| x == id(v)).unwrap();
        assert_eq!((at("a") + 2) % 4, at("c"));
    }

    #[test]
    fn angle_order_is_counter_clockwise() {
        let dirs = [(1, 0), (1, 1), (0, 1), (-1, 0), (0, -1), (1, -1)];
        for w in dirs.windows(2) {
            assert_eq!(angle_cmp(w[0], w[1]), Ordering::Less);
        }
    }
}
