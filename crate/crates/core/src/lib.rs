//! Exact perfect-matching counts on plane graphs, and machinery for
//! checking graphical condensation identities against brute force.
//!
//! The crate is organised bottom-up:
//!
//! - [`graph`], [`marking`]: plane graphs with a designated face, and marked
//!   vertices on it.
//! - [`matching`]: enumeration and weighted counting of perfect matchings.
//! - [`superposition`]: superimposing two matchings and splitting them again.
//! - [`algebra`]: one-factors, Pfaffians and determinants over rationals.
//! - [`paths`]: alternating paths, nests and crossing resolution.
//! - [`identities`]: both sides of each identity, with per-term reports.
//! - [`generators`], [`campaign`]: instance families and seeded batch runs.
//! - [`io`], [`report`]: the graph file format and report rendering.

pub mod algebra;
pub mod campaign;
pub mod embedding;
pub mod error;
pub mod generators;
pub mod graph;
pub mod identities;
pub mod io;
pub mod marking;
pub mod matching;
pub mod paths;
pub mod report;
pub mod scalar;
pub mod superposition;

pub use error::{Error, Result};
pub use graph::{Edge, GraphBuilder, PlaneGraph, Side, VertexId};
pub use marking::MarkedSelection;
pub use matching::{count_matchings, enumerate_matchings, has_unique_matching, Limits, Matching};
pub use scalar::Scalar;
