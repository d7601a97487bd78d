//! The graph file format.
//!
//! A graph file is a TOML document:
//!
//! ```toml
//! vertices = ["a", "b", "c", "d"]
//! edges = [
//!   ["a", "b", 1],
//!   ["b", "c", "3/2"],
//!   ["c", "d", 1],
//!   ["d", "a", -2],
//! ]
//! face = ["a", "b", "c", "d"]
//!
//! # optional: a marked selection, used by `verify` when no marking is given
//! # on the command line and by counterexample bundles
//! [marking]
//! identity = "even-partition"
//! a = ["a", "c"]
//! b = ["b", "d"]
//! a1 = ["a"]
//! ah = []
//! ```
//!
//! Vertex labels are nonempty and contain no whitespace, commas or control
//! characters. Weights are TOML integers or strings holding an integer or a
//! `p/q` fraction; zero weights are rejected. Loops, repeated edges (in
//! either orientation), repeated face entries and unknown labels are errors
//! reported with the line they occur on.

use std::fmt;

use serde::Deserialize;
use toml::Spanned;

use crate::graph::{GraphBuilder, PlaneGraph};
use crate::scalar::{format_scalar, parse_scalar, Scalar};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: Option<usize>,
    pub message: String,
}

impl ParseError {
    pub fn new(message: impl Into<String>) -> ParseError {
        ParseError {
            line: None,
            message: message.into(),
        }
    }

    pub fn at(line: usize, message: impl Into<String>) -> ParseError {
        ParseError {
            line: Some(line),
            message: message.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(line) => write!(f, "line {line}: {}", self.message),
            None => write!(f, "{}", self.message),
        }
    }
}

impl std::error::Error for ParseError {}

/// Marked vertices by label, as stored in a graph file.
#[derive(Debug, Clone, Default, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MarkingSpec {
    #[serde(default)]
    pub identity: Option<String>,
    #[serde(default)]
    pub a: Vec<String>,
    #[serde(default)]
    pub b: Vec<String>,
    #[serde(default)]
    pub a1: Vec<String>,
    #[serde(default)]
    pub ah: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphDocument {
    pub graph: PlaneGraph,
    pub marking: Option<MarkingSpec>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDocument {
    vertices: Vec<Spanned<String>>,
    edges: Vec<Spanned<RawEdge>>,
    face: Vec<Spanned<String>>,
    #[serde(default)]
    marking: Option<Spanned<MarkingSpec>>,
}

#[derive(Deserialize)]
struct RawEdge(String, String, RawWeight);

#[derive(Deserialize)]
#[serde(untagged)]
enum RawWeight {
    Int(i64),
    Text(String),
}

fn line_of(text: &str, offset: usize) -> usize {
    text.as_bytes()[..offset.min(text.len())]
        .iter()
        .filter(|&&b| b == b'\n')
        .count()
        + 1
}

pub fn validate_label(label: &str) -> Result<(), ParseError> {
    if label.is_empty() {
        return Err(ParseError::new("empty vertex label"));
    }
    if label.chars().any(|c| c.is_whitespace() || c == ',' || c.is_control()) {
        return Err(ParseError::new(format!(
            "vertex label {label:?} contains whitespace, a comma or a control character"
        )));
    }
    Ok(())
}

/// Parses a graph file. Every error carries the line it was detected on.
pub fn parse_graph_file(text: &str) -> Result<GraphDocument, ParseError> {
    let raw: RawDocument = toml::from_str(text).map_err(|e| {
        let line = e.span().map(|s| line_of(text, s.start));
        ParseError {
            line,
            message: e.message().trim().to_string(),
        }
    })?;

    let mut builder = GraphBuilder::new();
    for v in &raw.vertices {
        let line = line_of(text, v.span().start);
        validate_label(v.get_ref()).map_err(|e| ParseError::at(line, e.message))?;
        builder
            .vertex(v.get_ref().clone())
            .map_err(|e| ParseError::at(line, e.to_string()))?;
    }

    for e in &raw.edges {
        let line = line_of(text, e.span().start);
        let RawEdge(u, v, w) = e.get_ref();
        let lookup = |name: &str| {
            builder
                .id_of(name)
                .ok_or_else(|| ParseError::at(line, format!("edge refers to unknown vertex `{name}`")))
        };
        let (iu, iv) = (lookup(u)?, lookup(v)?);
        let weight: Scalar = match w {
            RawWeight::Int(n) => crate::scalar::int(*n),
            RawWeight::Text(s) => parse_scalar(s).map_err(|err| ParseError::at(line, err.message))?,
        };
        builder
            .edge(iu, iv, weight)
            .map_err(|err| ParseError::at(line, err.to_string()))?;
    }

    let mut face = Vec::with_capacity(raw.face.len());
    for v in &raw.face {
        let line = line_of(text, v.span().start);
        let id = builder
            .id_of(v.get_ref())
            .ok_or_else(|| ParseError::at(line, format!("face refers to unknown vertex `{}`", v.get_ref())))?;
        if face.contains(&id) {
            return Err(ParseError::at(line, format!("face lists `{}` twice", v.get_ref())));
        }
        face.push(id);
    }
    builder
        .face(face)
        .map_err(|e| ParseError::new(e.to_string()))?;
    let graph = builder.build();

    let marking = match raw.marking {
        None => None,
        Some(m) => {
            let line = line_of(text, m.span().start);
            let spec = m.into_inner();
            for label in spec.a.iter().chain(&spec.b).chain(&spec.a1).chain(&spec.ah) {
                if graph.id_of(label).is_none() {
                    return Err(ParseError::at(
                        line,
                        format!("marking refers to unknown vertex `{label}`"),
                    ));
                }
            }
            Some(spec)
        }
    };

    Ok(GraphDocument { graph, marking })
}

/// Parses a comma-separated label list such as `a,b,c`. The empty string is
/// the empty list.
pub fn parse_vertex_list(text: &str) -> Result<Vec<String>, ParseError> {
    if text.is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|item| {
            validate_label(item)?;
            Ok(item.to_string())
        })
        .collect()
}

fn quote(s: &str) -> String {
    // Labels never need escaping beyond quotes and backslashes.
    let escaped = s.replace('\\', "\\\\").replace('"', "\\\"");
    format!("\"{escaped}\"")
}

fn quoted_list<'a>(items: impl IntoIterator<Item = &'a str>) -> String {
    let parts: Vec<String> = items.into_iter().map(quote).collect();
    format!("[{}]", parts.join(", "))
}

fn weight_literal(w: &Scalar) -> String {
    use num_traits::{One, ToPrimitive};
    if w.denom().is_one() {
        if let Some(n) = w.numer().to_i64() {
            return n.to_string();
        }
    }
    quote(&format_scalar(w))
}

/// Serializes a graph (and optional marking) in the format accepted by
/// [`parse_graph_file`]. Output is deterministic.
pub fn write_graph_file(graph: &PlaneGraph, marking: Option<&MarkingSpec>) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "vertices = {}\n",
        quoted_list(graph.vertices().map(|v| graph.name(v)))
    ));
    out.push_str("edges = [\n");
    for (e, w) in graph.edges() {
        let (u, v) = e.endpoints();
        out.push_str(&format!(
            "  [{}, {}, {}],\n",
            quote(graph.name(u)),
            quote(graph.name(v)),
            weight_literal(w)
        ));
    }
    out.push_str("]\n");
    out.push_str(&format!(
        "face = {}\n",
        quoted_list(graph.face().iter().map(|&v| graph.name(v)))
    ));
    if let Some(m) = marking {
        out.push_str("\n[marking]\n");
        if let Some(id) = &m.identity {
            out.push_str(&format!("identity = {}\n", quote(id)));
        }
        for (key, list) in [("a", &m.a), ("b", &m.b), ("a1", &m.a1), ("ah", &m.ah)] {
            out.push_str(&format!("{key} = {}\n", quoted_list(list.iter().map(String::as_str))));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const C4: &str = r#"
vertices = ["a", "b", "c", "d"]
edges = [
  ["a", "b", 1],
  ["b", "c", "3/2"],
  ["c", "d", 1],
  ["d", "a", 2],
]
face = ["a", "b", "c", "d"]
"#;

    #[test]
    fn parses_c4() {
        let doc = parse_graph_file(C4).unwrap();
        assert_eq!(doc.graph.vertex_count(), 4);
        assert_eq!(doc.graph.edge_count(), 4);
        assert!(doc.marking.is_none());
        let b = doc.graph.id_of("b").unwrap();
        let c = doc.graph.id_of("c").unwrap();
        assert_eq!(
            doc.graph.weight(crate::graph::Edge::new(b, c)).unwrap(),
            &parse_scalar("3/2").unwrap()
        );
    }

    #[test]
    fn round_trips() {
        let doc = parse_graph_file(C4).unwrap();
        let marking = MarkingSpec {
            identity: Some("prop4".into()),
            a: vec!["a".into(), "c".into()],
            b: vec!["b".into(), "d".into()],
            a1: vec!["a".into()],
            ah: vec![],
        };
        let text = write_graph_file(&doc.graph, Some(&marking));
        let again = parse_graph_file(&text).unwrap();
        assert_eq!(again.graph, doc.graph);
        assert_eq!(again.marking, Some(marking));
    }

    fn err_line(text: &str) -> Option<usize> {
        parse_graph_file(text).unwrap_err().line
    }

    #[test]
    fn duplicate_edge_reports_line() {
        let text = "vertices = [\"a\", \"b\"]\nedges = [\n  [\"a\", \"b\", 1],\n  [\"b\", \"a\", 2],\n]\nface = []\n";
        assert_eq!(err_line(text), Some(4));
    }

    #[test]
    fn loop_and_unknown_rejected() {
        let text = "vertices = [\"a\"]\nedges = [[\"a\", \"a\", 1]]\nface = []\n";
        assert_eq!(err_line(text), Some(2));
        let text = "vertices = [\"a\"]\nedges = []\nface = [\"a\", \"z\"]\n";
        assert_eq!(err_line(text), Some(3));
        let text = "vertices = [\"a\", \"b\"]\nedges = [[\"a\", \"b\", \"0/3\"]]\nface = []\n";
        assert_eq!(err_line(text), Some(2));
    }

    #[test]
    fn syntax_error_has_line() {
        let text = "vertices = [\"a\"]\nedges = [\nface = []\n";
        assert!(err_line(text).is_some());
        assert!(parse_graph_file("vertices = []\nedges = []\n").is_err());
        assert!(parse_graph_file("vertices = []\nedges = []\nface = []\nextra = 1\n").is_err());
    }

    #[test]
    fn bad_labels() {
        let text = "vertices = [\"a b\"]\nedges = []\nface = []\n";
        assert_eq!(err_line(text), Some(1));
        assert!(parse_vertex_list("a,,b").is_err());
        assert_eq!(parse_vertex_list("").unwrap(), Vec::<String>::new());
        assert_eq!(parse_vertex_list("x,y").unwrap(), vec!["x", "y"]);
    }
}
