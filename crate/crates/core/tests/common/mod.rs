//! Brute-force oracles shared by the integration tests. Nothing here calls
//! the library's counting code.

#![allow(dead_code)]

use std::collections::BTreeSet;

use condensation::{PlaneGraph, Scalar, VertexId};
use num_traits::{One, Zero};

/// Weighted perfect matching count by scanning every edge subset of the
/// right size.
pub fn brute_count(g: &PlaneGraph) -> Scalar {
    let n = g.vertex_count();
    if n % 2 == 1 {
        return Scalar::zero();
    }
    let edges: Vec<_> = g.edges().map(|(e, w)| (e, w.clone())).collect();
    assert!(edges.len() <= 24, "oracle is exponential in the edge count");
    let mut total = Scalar::zero();
    for mask in 0u32..(1u32 << edges.len()) {
        if mask.count_ones() as usize * 2 != n {
            continue;
        }
        let mut covered = BTreeSet::new();
        let mut weight = Scalar::one();
        let mut ok = true;
        for (t, (e, w)) in edges.iter().enumerate() {
            if (mask >> t) & 1 == 1 {
                let (u, v) = e.endpoints();
                if !covered.insert(u) || !covered.insert(v) {
                    ok = false;
                    break;
                }
                weight *= w;
            }
        }
        if ok {
            total += weight;
        }
    }
    total
}

/// `M(G - deleted)` by the brute-force oracle.
pub fn brute_deleted(g: &PlaneGraph, deleted: &[VertexId]) -> Scalar {
    brute_count(&g.delete_vertices(deleted.iter().copied()).unwrap())
}

/// Pfaffian of a dense skew-symmetric matrix (0-based, upper entries used)
/// by the textbook recursion on the last index, independent of the
/// library's first-row expansion.
pub fn brute_pfaffian(a: &[Vec<Scalar>]) -> Scalar {
    fn rec(a: &[Vec<Scalar>], idx: &[usize]) -> Scalar {
        if idx.is_empty() {
            return Scalar::one();
        }
        let last = idx[idx.len() - 1];
        let mut total = Scalar::zero();
        for (p, &k) in idx[..idx.len() - 1].iter().enumerate() {
            let entry = &a[k][last];
            if entry.is_zero() {
                continue;
            }
            let rest: Vec<usize> = idx[..idx.len() - 1].iter().copied().filter(|&x| x != k).collect();
            // moving k next to `last` passes over the indices after it
            let sign_flips = idx.len() - 2 - p;
            let term = entry.clone() * rec(a, &rest);
            if sign_flips % 2 == 0 {
                total += term;
            } else {
                total -= term;
            }
        }
        total
    }
    let idx: Vec<usize> = (0..a.len()).collect();
    rec(a, &idx)
}
