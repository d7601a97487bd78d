//! Rendering of identity reports, nest listings and campaign summaries.
//!
//! Two formats: an aligned text table for people, and JSON for machines.
//! Scalars are always strings of the form `p/q` (or a bare integer).

use serde_json::{json, Value};

use crate::graph::PlaneGraph;
use crate::identities::{IdentityReport, Term};
use crate::paths::{AlternatingPath, NestCensus, PathNest, PfaffianSetup};
use crate::scalar::format_scalar;

fn term_json(t: &Term) -> Value {
    json!({
        "label": t.label,
        "sign": t.sign,
        "factors": t.factors.iter().map(|f| json!({
            "graph": f.graph,
            "value": format_scalar(&f.value),
        })).collect::<Vec<_>>(),
        "product": format_scalar(&t.product),
    })
}

pub fn report_json(r: &IdentityReport) -> Value {
    json!({
        "identity": r.identity_name,
        "marking": r.marking,
        "pass": r.pass,
        "lhs": format_scalar(&r.lhs),
        "rhs": format_scalar(&r.rhs),
        "lhs_terms": r.lhs_terms.iter().map(term_json).collect::<Vec<_>>(),
        "rhs_terms": r.rhs_terms.iter().map(term_json).collect::<Vec<_>>(),
        "side_checks": r.side_checks.iter().map(|c| json!({
            "description": c.description,
            "holds": c.holds,
        })).collect::<Vec<_>>(),
        "notes": r.notes,
    })
}

fn term_rows(side: &str, terms: &[Term], rows: &mut Vec<[String; 4]>) {
    for t in terms {
        let sign = if t.sign < 0 { "-" } else { "+" };
        let factors = t
            .factors
            .iter()
            .map(|f| format!("M({}) = {}", f.graph, format_scalar(&f.value)))
            .collect::<Vec<_>>()
            .join("; ");
        rows.push([format!("{side} {sign}"), t.label.clone(), factors, format_scalar(&t.product)]);
    }
}

fn table(header: [&str; 4], rows: &[[String; 4]]) -> String {
    let mut width = header.map(|h| h.chars().count());
    for row in rows {
        for (w, cell) in width.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: [&str; 4]| {
        let padded: Vec<String> = cells
            .iter()
            .zip(width)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect();
        padded.join("  ").trim_end().to_string()
    };
    let mut out = line(header);
    out.push('\n');
    out.push_str(&"-".repeat(width.iter().sum::<usize>() + 6));
    out.push('\n');
    for row in rows {
        out.push_str(&line([&row[0], &row[1], &row[2], &row[3]]));
        out.push('\n');
    }
    out
}

pub fn report_table(r: &IdentityReport) -> String {
    let mut rows = Vec::new();
    term_rows("LHS", &r.lhs_terms, &mut rows);
    term_rows("RHS", &r.rhs_terms, &mut rows);
    let mut out = format!("identity: {}\nmarking:  {}\n\n", r.identity_name, r.marking);
    out.push_str(&table(["side", "term", "factors", "product"], &rows));
    out.push_str(&format!("\nLHS = {}\nRHS = {}\n", format_scalar(&r.lhs), format_scalar(&r.rhs)));
    for c in &r.side_checks {
        out.push_str(&format!("check: {} ... {}\n", c.description, if c.holds { "ok" } else { "FAILED" }));
    }
    for n in &r.notes {
        out.push_str(&format!("note: {n}\n"));
    }
    out.push_str(if r.pass { "result: pass\n" } else { "result: FAIL\n" });
    out
}

fn path_text(g: &PlaneGraph, p: &AlternatingPath) -> String {
    let mut s = g.name(p.start()).to_string();
    for (w, &in_m) in p.vertices().windows(2).zip(p.in_matching_flags()) {
        s.push_str(if in_m { " = " } else { " - " });
        s.push_str(g.name(w[1]));
    }
    s
}

fn path_json(g: &PlaneGraph, p: &AlternatingPath) -> Value {
    json!({
        "vertices": g.names(p.vertices().iter().copied()),
        "in_matching": p.in_matching_flags(),
    })
}

fn nest_json(g: &PlaneGraph, n: &PathNest) -> Value {
    json!({
        "pairing": n.pairing.to_string(),
        "sign": n.sign(),
        "paths": n.paths.iter().map(|p| path_json(g, p)).collect::<Vec<_>>(),
    })
}

/// Alternating paths per marked pair and the nest census, as JSON.
pub fn paths_json(setup: &PfaffianSetup, census: &NestCensus) -> Value {
    let g = setup.graph();
    let pairs: Vec<Value> = setup
        .path_table()
        .into_iter()
        .map(|((i, j), paths)| {
            json!({
                "i": i,
                "j": j,
                "from": g.name(setup.vertex(i)),
                "to": g.name(setup.vertex(j)),
                "paths": paths.iter().map(|p| path_json(g, p)).collect::<Vec<_>>(),
            })
        })
        .collect();
    json!({
        "marked": g.names(setup.marked().iter().copied()),
        "matching_of_h": setup.mh().edges().iter().map(|e| {
            let (u, v) = e.endpoints();
            [g.name(u), g.name(v)]
        }).collect::<Vec<_>>(),
        "pairs": pairs,
        "non_intersecting_nests": census.non_intersecting.iter().map(|n| nest_json(g, n)).collect::<Vec<_>>(),
        "intersecting_nest_count": census.intersecting.len(),
        "signed_total": census.signed_total(),
    })
}

/// Alternating paths per marked pair and the nest census, as text. Matching
/// edges are drawn `=`, other edges `-`.
pub fn paths_text(setup: &PfaffianSetup, census: &NestCensus) -> String {
    let g = setup.graph();
    let mut out = format!("marked: {}\n", g.names(setup.marked().iter().copied()).join(","));
    for ((i, j), paths) in setup.path_table() {
        out.push_str(&format!("paths a{i} -> a{j}: {}\n", paths.len()));
        for p in &paths {
            out.push_str(&format!("  {}\n", path_text(g, p)));
        }
    }
    out.push_str(&format!(
        "non-intersecting nests: {}\nintersecting nests: {}\nsigned total: {}\n",
        census.non_intersecting.len(),
        census.intersecting.len(),
        census.signed_total()
    ));
    for n in &census.non_intersecting {
        let parts: Vec<String> = n.paths.iter().map(|p| path_text(g, p)).collect();
        out.push_str(&format!("  {} sign {:+}: {}\n", n.pairing, n.sign(), parts.join(" | ")));
    }
    out
}
