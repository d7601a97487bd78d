use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{PlaneGraph, VertexId};
use crate::io::MarkingSpec;

/// Marked vertices on the designated face.
///
/// `a` and `b` are ordered; `a1` is the first block of a split of `a` used by
/// the partition identities (the second block is the rest of `a`), and `ah`
/// plays the same role for the Pfaffian identities (the rest being `A_K`).
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MarkedSelection {
    pub a: Vec<VertexId>,
    pub b: Vec<VertexId>,
    pub a1: BTreeSet<VertexId>,
    pub ah: BTreeSet<VertexId>,
}

impl MarkedSelection {
    pub fn new(a: Vec<VertexId>, b: Vec<VertexId>) -> MarkedSelection {
        MarkedSelection {
            a,
            b,
            ..Default::default()
        }
    }

    pub fn with_a1(mut self, a1: impl IntoIterator<Item = VertexId>) -> MarkedSelection {
        self.a1 = a1.into_iter().collect();
        self
    }

    pub fn with_ah(mut self, ah: impl IntoIterator<Item = VertexId>) -> MarkedSelection {
        self.ah = ah.into_iter().collect();
        self
    }

    pub fn a2(&self) -> BTreeSet<VertexId> {
        self.a.iter().copied().filter(|v| !self.a1.contains(v)).collect()
    }

    pub fn ak(&self) -> BTreeSet<VertexId> {
        self.a.iter().copied().filter(|v| !self.ah.contains(v)).collect()
    }

    /// `a1, b1, a2, b2, ...`; requires `|a| == |b|`.
    pub fn interleaved(&self) -> Vec<VertexId> {
        self.a.iter().zip(&self.b).flat_map(|(&x, &y)| [x, y]).collect()
    }

    /// `a1, ..., an, bn, ..., b1`.
    pub fn nested(&self) -> Vec<VertexId> {
        self.a.iter().chain(self.b.iter().rev()).copied().collect()
    }

    /// Structural checks: vertices exist, no repeats, `A` and `B` disjoint,
    /// both splits inside `A`.
    pub fn validate(&self, g: &PlaneGraph) -> Result<()> {
        let mut seen = BTreeSet::new();
        for &v in self.a.iter().chain(&self.b) {
            if !g.contains(v) {
                return Err(Error::InvalidArgument(format!("{v} is not a vertex of the graph")));
            }
            if !seen.insert(v) {
                return Err(Error::InvalidArgument(format!(
                    "`{}` is marked more than once",
                    g.name(v)
                )));
            }
        }
        let a: BTreeSet<VertexId> = self.a.iter().copied().collect();
        if !self.a1.is_subset(&a) {
            return Err(Error::InvalidArgument("A1 is not a subset of A".into()));
        }
        if !self.ah.is_subset(&a) {
            return Err(Error::InvalidArgument("A_H is not a subset of A".into()));
        }
        Ok(())
    }

    /// Hypothesis check: `seq` lies on the face in this cyclic order.
    pub fn require_cyclic(g: &PlaneGraph, seq: &[VertexId]) -> Result<()> {
        if g.validate_cyclic_order(seq)? {
            Ok(())
        } else {
            Err(Error::Hypothesis(format!(
                "{} do not appear in this cyclic order on the face",
                g.names(seq.iter().copied()).join(",")
            )))
        }
    }

    pub fn from_spec(g: &PlaneGraph, spec: &MarkingSpec) -> Result<MarkedSelection> {
        let resolve = |names: &[String]| -> Result<Vec<VertexId>> {
            names
                .iter()
                .map(|n| {
                    g.id_of(n)
                        .ok_or_else(|| Error::InvalidArgument(format!("unknown vertex `{n}`")))
                })
                .collect()
        };
        let sel = MarkedSelection {
            a: resolve(&spec.a)?,
            b: resolve(&spec.b)?,
            a1: resolve(&spec.a1)?.into_iter().collect(),
            ah: resolve(&spec.ah)?.into_iter().collect(),
        };
        sel.validate(g)?;
        Ok(sel)
    }

    pub fn to_spec(&self, g: &PlaneGraph, identity: Option<&str>) -> MarkingSpec {
        MarkingSpec {
            identity: identity.map(str::to_string),
            a: g.names(self.a.iter().copied()),
            b: g.names(self.b.iter().copied()),
            a1: g.names(self.a1.iter().copied()),
            ah: g.names(self.ah.iter().copied()),
        }
    }

    /// Human-readable summary such as `A=a,c B=b,d A1=a`.
    pub fn describe(&self, g: &PlaneGraph) -> String {
        let list = |vs: &mut dyn Iterator<Item = VertexId>| g.names(vs).join(",");
        let mut s = format!("A={}", list(&mut self.a.iter().copied()));
        if !self.b.is_empty() {
            s.push_str(&format!(" B={}", list(&mut self.b.iter().copied())));
        }
        if !self.a1.is_empty() {
            s.push_str(&format!(" A1={}", list(&mut self.a1.iter().copied())));
        }
        if !self.ah.is_empty() {
            s.push_str(&format!(" AH={}", list(&mut self.ah.iter().copied())));
        }
        s
    }
}
