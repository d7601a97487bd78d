//! Exact verification of condensation identities.
//!
//! Each verifier computes both sides from matching counts of vertex-deleted
//! subgraphs and returns an [`IdentityReport`] with every term. Instances
//! that do not satisfy an identity's hypotheses are rejected with
//! [`Error::Hypothesis`] (or [`Error::NotOnFace`]) rather than reported as
//! failures.

use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_traits::Zero;

use crate::algebra::{
    determinant, enumerate_one_factors, pfaffian, SquareMatrix, TriangularArray, PERMUTATION_SUM_MAX,
};
use crate::error::{Error, Result};
use crate::graph::{PlaneGraph, Side, VertexId};
use crate::marking::MarkedSelection;
use crate::matching::{count_matchings, enumerate_matchings, unique_matching, Limits, Matching};
use crate::paths::PfaffianSetup;
use crate::scalar::{pow2, zero, Scalar};
use crate::superposition::{partition_superposition, superpose, PartitionScheme};

/// Every identity the suite knows, by its command-line name.
pub const IDENTITY_NAMES: &[&str] = &[
    "prop4",
    "even-partition",
    "odd-partition",
    "odd-corollary",
    "bipartite-balanced",
    "bipartite-offset",
    "three-term",
    "pfaffian",
    "determinant",
];

/// One matching count inside a term, e.g. `M(G-{a,c}) = 3`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factor {
    pub graph: String,
    pub value: Scalar,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    /// What indexes the term: a subset, a 1-factor, a permutation.
    pub label: String,
    pub sign: i8,
    pub factors: Vec<Factor>,
    /// `sign` times the product of the factor values.
    pub product: Scalar,
}

impl Term {
    fn new(label: impl Into<String>, sign: i8, factors: Vec<Factor>) -> Term {
        let mut product: Scalar = factors.iter().map(|f| f.value.clone()).product();
        if sign < 0 {
            product = -product;
        }
        Term {
            label: label.into(),
            sign,
            factors,
            product,
        }
    }
}

/// A side condition checked alongside the main equality, such as a family
/// of terms that must vanish.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SideCheck {
    pub description: String,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityReport {
    pub identity_name: String,
    /// The marking, by label.
    pub marking: String,
    pub lhs: Scalar,
    pub rhs: Scalar,
    pub lhs_terms: Vec<Term>,
    pub rhs_terms: Vec<Term>,
    pub side_checks: Vec<SideCheck>,
    pub notes: Vec<String>,
    pub pass: bool,
}

impl IdentityReport {
    fn assemble(
        name: &str,
        marking: String,
        lhs_terms: Vec<Term>,
        rhs_terms: Vec<Term>,
        side_checks: Vec<SideCheck>,
        notes: Vec<String>,
    ) -> IdentityReport {
        let lhs: Scalar = lhs_terms.iter().map(|t| t.product.clone()).sum();
        let rhs: Scalar = rhs_terms.iter().map(|t| t.product.clone()).sum();
        let pass = lhs == rhs && side_checks.iter().all(|c| c.holds);
        IdentityReport {
            identity_name: name.to_string(),
            marking,
            lhs,
            rhs,
            lhs_terms,
            rhs_terms,
            side_checks,
            notes,
            pass,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct VerifyOptions {
    pub limits: Limits,
    /// Accept marked-pair counts `k` outside `2..=n`.
    pub allow_any_k: bool,
}

/// Matching counts of vertex-deleted subgraphs of one graph, memoised on the
/// deleted set.
pub struct DeletionCounter<'g> {
    graph: &'g PlaneGraph,
    limits: Limits,
    cache: RefCell<HashMap<BTreeSet<VertexId>, Scalar>>,
}

impl<'g> DeletionCounter<'g> {
    pub fn new(graph: &'g PlaneGraph, limits: Limits) -> DeletionCounter<'g> {
        DeletionCounter {
            graph,
            limits,
            cache: RefCell::new(HashMap::new()),
        }
    }

    /// `M(G - deleted)`.
    pub fn count(&self, deleted: impl IntoIterator<Item = VertexId>) -> Result<Scalar> {
        let key: BTreeSet<VertexId> = deleted.into_iter().collect();
        if let Some(v) = self.cache.borrow().get(&key) {
            return Ok(v.clone());
        }
        let value = count_matchings(&self.graph.delete_vertices(key.iter().copied())?, &self.limits)?;
        self.cache.borrow_mut().insert(key, value.clone());
        Ok(value)
    }

    /// `M(G - deleted)` as a labelled factor.
    pub fn factor(&self, deleted: impl IntoIterator<Item = VertexId>) -> Result<Factor> {
        let key: BTreeSet<VertexId> = deleted.into_iter().collect();
        let value = self.count(key.iter().copied())?;
        Ok(Factor {
            graph: deletion_label(self.graph, &key),
            value,
        })
    }
}

/// `G`, `G-a` or `G-{a,b,...}`.
pub fn deletion_label(g: &PlaneGraph, deleted: &BTreeSet<VertexId>) -> String {
    match deleted.len() {
        0 => "G".to_string(),
        1 => format!("G-{}", g.name(*deleted.iter().next().expect("one"))),
        _ => format!("G-{{{}}}", g.names(deleted.iter().copied()).join(",")),
    }
}

fn set_label(g: &PlaneGraph, name: &str, s: &BTreeSet<VertexId>) -> String {
    format!("{name}={{{}}}", g.names(s.iter().copied()).join(","))
}

/// Subsets of `b` in lexicographic order of their index bitmask.
fn subsets(b: &[VertexId]) -> impl Iterator<Item = BTreeSet<VertexId>> + '_ {
    (0u64..(1u64 << b.len())).map(move |mask| {
        b.iter()
            .enumerate()
            .filter(|(t, _)| (mask >> t) & 1 == 1)
            .map(|(_, &v)| v)
            .collect()
    })
}

fn union(parts: &[&BTreeSet<VertexId>]) -> BTreeSet<VertexId> {
    parts.iter().flat_map(|s| s.iter().copied()).collect()
}

fn require_parity(g: &PlaneGraph, odd: bool) -> Result<()> {
    if (g.vertex_count() % 2 == 1) != odd {
        return Err(Error::Hypothesis(format!(
            "the identity needs an {} number of vertices, the graph has {}",
            if odd { "odd" } else { "even" },
            g.vertex_count()
        )));
    }
    Ok(())
}

fn require_pairs(sel: &MarkedSelection) -> Result<usize> {
    if sel.a.len() != sel.b.len() {
        return Err(Error::Hypothesis(format!(
            "A and B must have the same size, got {} and {}",
            sel.a.len(),
            sel.b.len()
        )));
    }
    Ok(sel.a.len())
}

fn require_k_range(k: usize, n: usize, opts: &VerifyOptions) -> Result<()> {
    if !opts.allow_any_k && !(2..=n.max(1)).contains(&k) {
        return Err(Error::Hypothesis(format!(
            "k = {k} is outside 2..={n}; pass the override to check it anyway"
        )));
    }
    Ok(())
}

/// The four-vertex identity
/// `M(G)M(G-{a,b,c,d}) + M(G-{a,c})M(G-{b,d}) = M(G-{a,b})M(G-{c,d}) + M(G-{a,d})M(G-{b,c})`
/// for `a, b, c, d` in cyclic order on the face.
pub fn verify_prop_four_vertices(g: &PlaneGraph, abcd: [VertexId; 4], opts: &VerifyOptions) -> Result<IdentityReport> {
    let sel = MarkedSelection::new(vec![abcd[0], abcd[2]], vec![abcd[1], abcd[3]]);
    sel.validate(g)?;
    MarkedSelection::require_cyclic(g, &abcd)?;
    let m = DeletionCounter::new(g, opts.limits);
    let [a, b, c, d] = abcd;
    let pair = |x: &[VertexId], y: &[VertexId]| -> Result<Term> {
        let (fx, fy) = (m.factor(x.iter().copied())?, m.factor(y.iter().copied())?);
        let label = format!("{} * {}", fx.graph, fy.graph);
        Ok(Term::new(label, 1, vec![fx, fy]))
    };
    let lhs = vec![pair(&[], &[a, b, c, d])?, pair(&[a, c], &[b, d])?];
    let rhs = vec![pair(&[a, b], &[c, d])?, pair(&[a, d], &[b, c])?];
    Ok(IdentityReport::assemble(
        "prop4",
        g.names(abcd).join(","),
        lhs,
        rhs,
        vec![],
        vec![],
    ))
}

/// Terms `M(G-W)M(G-A-(B\W))` for every `W` of the given parity.
fn w_terms(g: &PlaneGraph, m: &DeletionCounter, sel: &MarkedSelection, odd: bool) -> Result<Vec<Term>> {
    let a: BTreeSet<VertexId> = sel.a.iter().copied().collect();
    let b: BTreeSet<VertexId> = sel.b.iter().copied().collect();
    let mut out = Vec::new();
    for w in subsets(&sel.b) {
        if (w.len() % 2 == 1) != odd {
            continue;
        }
        let rest: BTreeSet<VertexId> = b.difference(&w).copied().collect();
        let f1 = m.factor(w.iter().copied())?;
        let f2 = m.factor(union(&[&a, &rest]))?;
        out.push(Term::new(set_label(g, "W", &w), 1, vec![f1, f2]));
    }
    Ok(out)
}

/// Terms `M(G-A1-Y)M(G-A2-(B\Y))` for every `Y` accepted by `keep`.
fn y_terms(
    g: &PlaneGraph,
    m: &DeletionCounter,
    sel: &MarkedSelection,
    keep: impl Fn(&BTreeSet<VertexId>) -> bool,
) -> Result<Vec<Term>> {
    let b: BTreeSet<VertexId> = sel.b.iter().copied().collect();
    let a2 = sel.a2();
    let mut out = Vec::new();
    for y in subsets(&sel.b) {
        if !keep(&y) {
            continue;
        }
        let rest: BTreeSet<VertexId> = b.difference(&y).copied().collect();
        let f1 = m.factor(union(&[&sel.a1, &y]))?;
        let f2 = m.factor(union(&[&a2, &rest]))?;
        out.push(Term::new(set_label(g, "Y", &y), 1, vec![f1, f2]));
    }
    Ok(out)
}

fn check_partition_hypotheses(g: &PlaneGraph, sel: &MarkedSelection, odd: bool, opts: &VerifyOptions) -> Result<()> {
    sel.validate(g)?;
    let k = require_pairs(sel)?;
    require_parity(g, odd)?;
    require_k_range(k, g.vertex_count() / 2, opts)?;
    MarkedSelection::require_cyclic(g, &sel.interleaved())
}

/// Sum over even `W ⊆ B` of `M(G-W)M(G-A-(B\W))` against the sum over `Y ⊆ B`
/// with `|Y| ≡ |A1|` of `M(G-A1-Y)M(G-A2-(B\Y))`, for `a_1, b_1, ..., a_k, b_k`
/// in cyclic order on the face of a graph with an even number of vertices.
pub fn verify_even_partition(g: &PlaneGraph, sel: &MarkedSelection, opts: &VerifyOptions) -> Result<IdentityReport> {
    check_partition_hypotheses(g, sel, false, opts)?;
    let m = DeletionCounter::new(g, opts.limits);
    let parity = sel.a1.len() % 2;
    let lhs = w_terms(g, &m, sel, false)?;
    let rhs = y_terms(g, &m, sel, |y| y.len() % 2 == parity)?;
    Ok(IdentityReport::assemble(
        "even-partition",
        sel.describe(g),
        lhs,
        rhs,
        vec![],
        vec![],
    ))
}

/// The odd-vertex analogue: odd `W` against `Y` with `|Y|` of the opposite
/// parity to `|A1|`.
pub fn verify_odd_partition(g: &PlaneGraph, sel: &MarkedSelection, opts: &VerifyOptions) -> Result<IdentityReport> {
    check_partition_hypotheses(g, sel, true, opts)?;
    let m = DeletionCounter::new(g, opts.limits);
    let parity = sel.a1.len() % 2;
    let lhs = w_terms(g, &m, sel, true)?;
    let rhs = y_terms(g, &m, sel, |y| y.len() % 2 != parity)?;
    Ok(IdentityReport::assemble(
        "odd-partition",
        sel.describe(g),
        lhs,
        rhs,
        vec![],
        vec![],
    ))
}

fn two_pairs(sel: &MarkedSelection) -> Result<[VertexId; 4]> {
    if sel.a.len() != 2 || sel.b.len() != 2 {
        return Err(Error::Hypothesis("the identity needs exactly A = {a1,a2} and B = {b1,b2}".into()));
    }
    Ok([sel.a[0], sel.b[0], sel.a[1], sel.b[1]])
}

fn product_term(m: &DeletionCounter, x: &[VertexId], y: &[VertexId]) -> Result<Term> {
    let (fx, fy) = (m.factor(x.iter().copied())?, m.factor(y.iter().copied())?);
    let label = format!("{} * {}", fx.graph, fy.graph);
    Ok(Term::new(label, 1, vec![fx, fy]))
}

/// For a graph with an odd number of vertices and `a1, b1, a2, b2` in cyclic
/// order:
/// `M(G-a1)M(G-{a2,b1,b2}) + M(G-a2)M(G-{a1,b1,b2}) = M(G-b1)M(G-{a1,a2,b2}) + M(G-b2)M(G-{a1,a2,b1})`.
pub fn verify_odd_corollary(g: &PlaneGraph, sel: &MarkedSelection, opts: &VerifyOptions) -> Result<IdentityReport> {
    sel.validate(g)?;
    let [a1, b1, a2, b2] = two_pairs(sel)?;
    require_parity(g, true)?;
    MarkedSelection::require_cyclic(g, &[a1, b1, a2, b2])?;
    let m = DeletionCounter::new(g, opts.limits);
    let lhs = vec![product_term(&m, &[a1], &[a2, b1, b2])?, product_term(&m, &[a2], &[a1, b1, b2])?];
    let rhs = vec![product_term(&m, &[b1], &[a1, a2, b2])?, product_term(&m, &[b2], &[a1, a2, b1])?];
    Ok(IdentityReport::assemble(
        "odd-corollary",
        sel.describe(g),
        lhs,
        rhs,
        vec![],
        vec![],
    ))
}

/// A 2-colouring of `g` with the listed vertices on the listed sides and
/// `|U| - |V| = difference`, choosing the orientation of each connected
/// component. Components are tried keep-first, so the result is
/// deterministic.
pub fn oriented_bipartition(
    g: &PlaneGraph,
    fixed: &[(VertexId, Side)],
    difference: i64,
) -> Result<BTreeMap<VertexId, Side>> {
    let base = g
        .bipartition()
        .ok_or_else(|| Error::InvalidArgument("the graph is not bipartite".into()))?;
    let fixed: BTreeMap<VertexId, Side> = fixed.iter().copied().collect();
    let components = g.components();
    // options[c] = list of (flip, contribution to |U| - |V|)
    let mut options: Vec<Vec<(bool, i64)>> = Vec::with_capacity(components.len());
    for comp in &components {
        let mut opts = Vec::new();
        for flip in [false, true] {
            let side = |v: &VertexId| if flip { base[v].flip() } else { base[v] };
            if comp.iter().any(|v| fixed.get(v).is_some_and(|&s| s != side(v))) {
                continue;
            }
            let d: i64 = comp.iter().map(|v| if side(v) == Side::U { 1 } else { -1 }).sum();
            opts.push((flip, d));
        }
        if opts.is_empty() {
            return Err(Error::InvalidArgument(
                "no 2-colouring puts the marked vertices on the required sides".into(),
            ));
        }
        options.push(opts);
    }
    // reachable[c] maps a running difference to the choice that first reached it
    let mut reachable: Vec<BTreeMap<i64, (i64, bool)>> = vec![BTreeMap::from([(0, (0, false))])];
    for opts in &options {
        let prev = reachable.last().expect("non-empty");
        let mut next: BTreeMap<i64, (i64, bool)> = BTreeMap::new();
        for &d in prev.keys() {
            for &(flip, c) in opts {
                next.entry(d + c).or_insert((d, flip));
            }
        }
        reachable.push(next);
    }
    if !reachable.last().expect("non-empty").contains_key(&difference) {
        return Err(Error::InvalidArgument(format!(
            "no 2-colouring with the marked vertices placed has |U| - |V| = {difference}"
        )));
    }
    let mut flips = vec![false; components.len()];
    let mut d = difference;
    for c in (0..components.len()).rev() {
        let (prev, flip) = reachable[c + 1][&d];
        flips[c] = flip;
        d = prev;
    }
    let mut out = BTreeMap::new();
    for (comp, flip) in components.iter().zip(flips) {
        for v in comp {
            out.insert(*v, if flip { base[v].flip() } else { base[v] });
        }
    }
    Ok(out)
}

fn vanishing(description: impl Into<String>, terms: &[Term]) -> SideCheck {
    SideCheck {
        description: description.into(),
        holds: terms.iter().all(|t| t.product.is_zero()),
    }
}

/// Bipartite `G = (U, V)` with `|U| = |V|`, `A ⊆ U`, `B ⊆ V`:
/// `M(G)M(G-A-B)` against the sum over `|Y| = |A1|`. Also checks that the
/// even-`W` terms with `W` nonempty and the `Y` terms with `|Y| ≠ |A1|` of the
/// general identity all vanish.
pub fn verify_bipartite_balanced(g: &PlaneGraph, sel: &MarkedSelection, opts: &VerifyOptions) -> Result<IdentityReport> {
    check_partition_hypotheses(g, sel, false, opts)?;
    let fixed: Vec<(VertexId, Side)> = sel
        .a
        .iter()
        .map(|&v| (v, Side::U))
        .chain(sel.b.iter().map(|&v| (v, Side::V)))
        .collect();
    oriented_bipartition(g, &fixed, 0)?;
    let m = DeletionCounter::new(g, opts.limits);
    let all: BTreeSet<VertexId> = sel.a.iter().chain(&sel.b).copied().collect();
    let lhs = vec![product_term(&m, &[], &all.iter().copied().collect::<Vec<_>>())?];
    let size = sel.a1.len();
    let rhs = y_terms(g, &m, sel, |y| y.len() == size)?;

    let w_nonempty: Vec<Term> = w_terms(g, &m, sel, false)?.into_iter().filter(|t| t.label != "W={}").collect();
    let y_other = y_terms(g, &m, sel, |y| y.len() != size)?;
    let checks = vec![
        vanishing("even-W terms with W nonempty vanish", &w_nonempty),
        vanishing("Y terms with |Y| != |A1| vanish", &y_other),
    ];
    Ok(IdentityReport::assemble(
        "bipartite-balanced",
        sel.describe(g),
        lhs,
        rhs,
        checks,
        vec![],
    ))
}

/// Bipartite `G = (U, V)` with `|U| = |V| + k` and `A, B ⊆ U`:
/// `M(G-A)M(G-B)` against the sum over `|Y| = k - |A1|`. Also checks that
/// every `W` term other than `W = B` vanishes.
pub fn verify_bipartite_offset(g: &PlaneGraph, sel: &MarkedSelection, opts: &VerifyOptions) -> Result<IdentityReport> {
    sel.validate(g)?;
    let k = require_pairs(sel)?;
    let n = g.vertex_count().saturating_sub(k) / 2;
    require_k_range(k, n, opts)?;
    MarkedSelection::require_cyclic(g, &sel.interleaved())?;
    let fixed: Vec<(VertexId, Side)> = sel.a.iter().chain(&sel.b).map(|&v| (v, Side::U)).collect();
    oriented_bipartition(g, &fixed, k as i64)?;

    let m = DeletionCounter::new(g, opts.limits);
    let lhs = vec![product_term(&m, &sel.a, &sel.b)?];
    let size = k - sel.a1.len();
    let rhs = y_terms(g, &m, sel, |y| y.len() == size)?;

    let odd = g.vertex_count() % 2 == 1;
    let full: BTreeSet<VertexId> = sel.b.iter().copied().collect();
    let full_label = set_label(g, "W", &full);
    let w_other: Vec<Term> = w_terms(g, &m, sel, odd)?
        .into_iter()
        .filter(|t| t.label != full_label)
        .collect();
    let y_other = y_terms(g, &m, sel, |y| y.len() != size)?;
    let checks = vec![
        vanishing("W terms with W != B vanish", &w_other),
        vanishing("Y terms with |A1| + |Y| != k vanish", &y_other),
    ];
    Ok(IdentityReport::assemble(
        "bipartite-offset",
        sel.describe(g),
        lhs,
        rhs,
        checks,
        vec![],
    ))
}

/// Bipartite `G = (U, V)` with `|U| = |V| + 1`, `a1, b1, a2 ∈ U`, `b2 ∈ V`:
/// `M(G-a1)M(G-{a2,b1,b2}) + M(G-a2)M(G-{a1,b1,b2}) = M(G-b1)M(G-{a1,a2,b2})`,
/// with the fourth term `M(G-b2)M(G-{a1,a2,b1})` checked to vanish.
pub fn verify_three_term(g: &PlaneGraph, sel: &MarkedSelection, opts: &VerifyOptions) -> Result<IdentityReport> {
    sel.validate(g)?;
    let [a1, b1, a2, b2] = two_pairs(sel)?;
    MarkedSelection::require_cyclic(g, &[a1, b1, a2, b2])?;
    let fixed = [(a1, Side::U), (b1, Side::U), (a2, Side::U), (b2, Side::V)];
    oriented_bipartition(g, &fixed, 1)?;
    let m = DeletionCounter::new(g, opts.limits);
    let lhs = vec![product_term(&m, &[a1], &[a2, b1, b2])?, product_term(&m, &[a2], &[a1, b1, b2])?];
    let rhs = vec![product_term(&m, &[b1], &[a1, a2, b2])?];
    let fourth = product_term(&m, &[b2], &[a1, a2, b1])?;
    let checks = vec![vanishing(format!("{} vanishes", fourth.label), &[fourth])];
    Ok(IdentityReport::assemble(
        "three-term",
        sel.describe(g),
        lhs,
        rhs,
        checks,
        vec![],
    ))
}

/// Largest dimension for which the Pfaffian and determinant reports list
/// every 1-factor or permutation term.
const TERM_LISTING_MAX: usize = 8;

/// `M(G - A_H)` against the Pfaffian of `M(H_ij)`, for `a_1, ..., a_n` in
/// cyclic order on the face and `H = G - A_K` with exactly one perfect
/// matching of weight 1.
pub fn verify_pfaffian_identity(g: &PlaneGraph, sel: &MarkedSelection, opts: &VerifyOptions) -> Result<IdentityReport> {
    let setup = PfaffianSetup::new(g, sel, &opts.limits)?;
    if *setup.mh().weight() != crate::scalar::one() {
        return Err(Error::Hypothesis(
            "the unique perfect matching of H = G - A_K must have weight 1".into(),
        ));
    }
    let n = setup.n();
    let entries = setup.entry_counts()?;
    let t = TriangularArray::from_fn(n, |i, j| entries[&(i, j)].clone());
    let pf = pfaffian(&t)?;

    let k_count = count_matchings(&setup.k_graph()?, &opts.limits)?;
    let lhs = vec![Term::new(
        "K = G - A_H",
        1,
        vec![Factor {
            graph: deletion_label(g, &sel.ah),
            value: k_count,
        }],
    )];

    let label_of = |i: usize, j: usize| format!("H_{i}{j}");
    let rhs = if n <= TERM_LISTING_MAX {
        enumerate_one_factors(n)?
            .into_iter()
            .map(|f| {
                let factors = f
                    .pairs()
                    .iter()
                    .map(|&(i, j)| Factor {
                        graph: label_of(i, j),
                        value: entries[&(i, j)].clone(),
                    })
                    .collect();
                Term::new(f.to_string(), f.sign(), factors)
            })
            .collect()
    } else {
        vec![Term::new(
            "Pf",
            1,
            vec![Factor {
                graph: "Pf(M(H_ij))".into(),
                value: pf.clone(),
            }],
        )]
    };

    let mut checks = Vec::new();
    let listed: Scalar = rhs.iter().map(|t| t.product.clone()).sum();
    checks.push(SideCheck {
        description: "listed 1-factor terms sum to the Pfaffian".into(),
        holds: listed == pf,
    });

    let mut notes = Vec::new();
    if sel.ah.is_empty() {
        notes.push("A = A_K: H = G - A and H_ij adds a_i, a_j back".into());
    } else if sel.ah.len() == sel.a.len() {
        notes.push("A = A_H: G has one perfect matching and H_ij = G - a_i - a_j".into());
    }
    Ok(IdentityReport::assemble(
        "pfaffian",
        sel.describe(g),
        lhs,
        rhs,
        checks,
        notes,
    ))
}

/// Which corollary shape a determinant instance has.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DeterminantShape {
    /// `A ⊆ U`, `B ⊆ V`: `K = G`.
    AInUBInV,
    /// `A ⊆ V`, `B ⊆ U`: `L = G`.
    AInVBInU,
    Mixed,
}

/// Bipartite setting with `a_1, ..., a_n, b_n, ..., b_1` in cyclic order:
/// `M(K)` against `det[M(L_ij)]`, where `L = G - (A∩U) - (B∩V)` has exactly one
/// perfect matching of weight 1, `K = G - (A∩V) - (B∩U)`, and `L_ij` is `L`
/// with the membership of `a_i` and `b_j` toggled.
pub fn verify_determinant_identity(
    g: &PlaneGraph,
    sel: &MarkedSelection,
    opts: &VerifyOptions,
) -> Result<IdentityReport> {
    sel.validate(g)?;
    let n = require_pairs(sel)?;
    if n == 0 {
        return Err(Error::Hypothesis("need at least one pair a_i, b_i".into()));
    }
    MarkedSelection::require_cyclic(g, &sel.nested())?;
    let sides = g
        .bipartition()
        .ok_or_else(|| Error::InvalidArgument("the graph is not bipartite".into()))?;
    let in_u = |v: &VertexId| sides[v] == Side::U;

    let l_removed: BTreeSet<VertexId> = sel
        .a
        .iter()
        .filter(|v| in_u(v))
        .chain(sel.b.iter().filter(|v| !in_u(v)))
        .copied()
        .collect();
    let k_removed: BTreeSet<VertexId> = sel.a.iter().chain(&sel.b).copied().filter(|v| !l_removed.contains(v)).collect();
    let l = g.delete_vertices(l_removed.iter().copied())?;
    let ml = unique_matching(&l, &opts.limits)?
        .ok_or_else(|| Error::Hypothesis("L does not have exactly one perfect matching".into()))?;
    if *ml.weight() != crate::scalar::one() {
        return Err(Error::Hypothesis("the unique perfect matching of L must have weight 1".into()));
    }

    let m = DeletionCounter::new(g, opts.limits);
    let toggled = |i: usize, j: usize| -> BTreeSet<VertexId> {
        let mut s = l_removed.clone();
        for v in [sel.a[i - 1], sel.b[j - 1]] {
            if !s.remove(&v) {
                s.insert(v);
            }
        }
        s
    };
    let mut cells: BTreeMap<(usize, usize), Factor> = BTreeMap::new();
    for i in 1..=n {
        for j in 1..=n {
            let mut f = m.factor(toggled(i, j))?;
            f.graph = format!("L_{i}{j} = {}", f.graph);
            cells.insert((i, j), f);
        }
    }
    let matrix = SquareMatrix::from_fn(n, |i, j| cells[&(i, j)].value.clone());
    let det = determinant(&matrix)?;

    let lhs = vec![Term::new("K", 1, vec![m.factor(k_removed.iter().copied())?])];
    let rhs = if n <= PERMUTATION_SUM_MAX.min(TERM_LISTING_MAX) {
        permutations(n)
            .into_iter()
            .map(|perm| {
                let sign = crate::algebra::permutation_sign(&perm);
                let factors = perm.iter().enumerate().map(|(i, &j)| cells[&(i + 1, j + 1)].clone()).collect();
                let label = perm.iter().map(|j| (j + 1).to_string()).collect::<Vec<_>>().join(" ");
                Term::new(format!("sigma=({label})"), sign, factors)
            })
            .collect()
    } else {
        vec![Term::new(
            "det",
            1,
            vec![Factor {
                graph: "det[M(L_ij)]".into(),
                value: det.clone(),
            }],
        )]
    };
    let listed: Scalar = rhs.iter().map(|t| t.product.clone()).sum();
    let checks = vec![SideCheck {
        description: "listed permutation terms sum to the determinant".into(),
        holds: listed == det,
    }];
    let notes = match determinant_shape(sel, &sides) {
        DeterminantShape::AInUBInV => vec!["A in U, B in V: K = G, L = G - A - B".to_string()],
        DeterminantShape::AInVBInU => vec!["A in V, B in U: L = G, K = G - A - B".to_string()],
        DeterminantShape::Mixed => vec![],
    };
    Ok(IdentityReport::assemble(
        "determinant",
        sel.describe(g),
        lhs,
        rhs,
        checks,
        notes,
    ))
}

pub fn determinant_shape(sel: &MarkedSelection, sides: &BTreeMap<VertexId, Side>) -> DeterminantShape {
    let all = |vs: &[VertexId], s: Side| vs.iter().all(|v| sides[v] == s);
    if all(&sel.a, Side::U) && all(&sel.b, Side::V) {
        DeterminantShape::AInUBInV
    } else if all(&sel.a, Side::V) && all(&sel.b, Side::U) {
        DeterminantShape::AInVBInU
    } else {
        DeterminantShape::Mixed
    }
}

/// Permutations of `0..n` in lexicographic order.
fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut perm: Vec<usize> = (0..n).collect();
    loop {
        out.push(perm.clone());
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| perm[i] < perm[i + 1]) else {
            return out;
        };
        let j = (i + 1..n).rev().find(|&j| perm[j] > perm[i]).expect("successor exists");
        perm.swap(i, j);
        perm[i + 1..].reverse();
    }
}

/// Runs the named identity on a marking. For `prop4` the four vertices are
/// `a1, b1, a2, b2`.
pub fn verify_named(name: &str, g: &PlaneGraph, sel: &MarkedSelection, opts: &VerifyOptions) -> Result<IdentityReport> {
    match name {
        "prop4" => {
            let [a, b, c, d] = two_pairs(sel)?;
            verify_prop_four_vertices(g, [a, b, c, d], opts)
        }
        "even-partition" => verify_even_partition(g, sel, opts),
        "odd-partition" => verify_odd_partition(g, sel, opts),
        "odd-corollary" => verify_odd_corollary(g, sel, opts),
        "bipartite-balanced" => verify_bipartite_balanced(g, sel, opts),
        "bipartite-offset" => verify_bipartite_offset(g, sel, opts),
        "three-term" => verify_three_term(g, sel, opts),
        "pfaffian" => verify_pfaffian_identity(g, sel, opts),
        "determinant" => verify_determinant_identity(g, sel, opts),
        other => Err(Error::InvalidArgument(format!(
            "unknown identity `{other}`; expected one of {}",
            IDENTITY_NAMES.join(", ")
        ))),
    }
}

/// What the superposition argument says about one instance of the
/// partition identities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuperpositionCensus {
    /// Number of distinct multigraphs `H`.
    pub decompositions: usize,
    /// `sum over H of 2^k(H) w(H)`.
    pub total: Scalar,
    /// Matching pairs counted on the `W` side.
    pub w_pairs: usize,
    /// Matching pairs counted on the `Y` side.
    pub y_pairs: usize,
    pub parity_violations: usize,
    pub partition_size_violations: usize,
    /// Pairs not recovered by splitting their own superposition.
    pub round_trip_failures: usize,
}

impl SuperpositionCensus {
    pub fn consistent(&self) -> bool {
        self.parity_violations == 0
            && self.partition_size_violations == 0
            && self.round_trip_failures == 0
            && self.w_pairs == self.y_pairs
    }
}

/// Superimposes every matching pair counted on the `W` side of the partition
/// identity, collects the distinct multigraphs, and splits each one back on
/// both sides. The parity of `|V(G)|` selects the even or odd identity.
pub fn superposition_census(g: &PlaneGraph, sel: &MarkedSelection, limits: &Limits) -> Result<SuperpositionCensus> {
    sel.validate(g)?;
    require_pairs(sel)?;
    let odd = g.vertex_count() % 2 == 1;
    let a: BTreeSet<VertexId> = sel.a.iter().copied().collect();
    let b: BTreeSet<VertexId> = sel.b.iter().copied().collect();

    let mut seen: BTreeMap<Vec<(crate::graph::Edge, u8)>, Scalar> = BTreeMap::new();
    let mut census = SuperpositionCensus {
        decompositions: 0,
        total: zero(),
        w_pairs: 0,
        y_pairs: 0,
        parity_violations: 0,
        partition_size_violations: 0,
        round_trip_failures: 0,
    };
    let y_parity_ok = |y: &BTreeSet<VertexId>| {
        let same = y.len() % 2 == sel.a1.len() % 2;
        if odd {
            !same
        } else {
            same
        }
    };

    for w in subsets(&sel.b) {
        if (w.len() % 2 == 1) != odd {
            continue;
        }
        let rest: Vec<VertexId> = a.iter().chain(b.difference(&w)).copied().collect();
        let m1s = enumerate_matchings(&g.delete_vertices(w.iter().copied())?, limits)?;
        if m1s.is_empty() {
            continue;
        }
        let m2s = enumerate_matchings(&g.delete_vertices(rest)?, limits)?;
        for m1 in &m1s {
            for m2 in &m2s {
                census.w_pairs += 1;
                let h = superpose(m1, m2, g, &sel.a, &sel.b)?;
                let evens = h.even_path_count();
                if (evens % 2 == 1) != odd {
                    census.parity_violations += 1;
                }
                let key = h.key();
                let w_side = partition_superposition(&h, g, &PartitionScheme::WSide)?;
                if w_side.subset != w || !contains_pair(&w_side.pairs, m1, m2) {
                    census.round_trip_failures += 1;
                }
                if seen.contains_key(&key) {
                    continue;
                }
                let expected = 1usize << h.cycle_count;
                let y_side = partition_superposition(&h, g, &PartitionScheme::YSide { a1: sel.a1.clone() })?;
                if w_side.pairs.len() != expected || y_side.pairs.len() != expected {
                    census.partition_size_violations += 1;
                }
                if !y_parity_ok(&y_side.subset) {
                    census.parity_violations += 1;
                }
                census.y_pairs += y_side.pairs.len();
                let contribution = pow2(h.cycle_count) * h.weight.clone();
                census.total += contribution.clone();
                seen.insert(key, contribution);
            }
        }
    }
    census.decompositions = seen.len();
    Ok(census)
}

fn contains_pair(pairs: &[(Matching, Matching)], m1: &Matching, m2: &Matching) -> bool {
    pairs.iter().any(|(x, y)| x == m1 && y == m2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::graph_from_labels;
    use crate::scalar::int;

    fn c4() -> PlaneGraph {
        graph_from_labels(
            &["a", "b", "c", "d"],
            &[("a", "b", 1), ("b", "c", 1), ("c", "d", 1), ("d", "a", 1)],
            &["a", "b", "c", "d"],
        )
        .unwrap()
    }

    fn ids(g: &PlaneGraph, names: &[&str]) -> Vec<VertexId> {
        names.iter().map(|n| g.id_of(n).unwrap()).collect()
    }

    #[test]
    fn prop4_on_c4() {
        let g = c4();
        let v = ids(&g, &["a", "b", "c", "d"]);
        let r = verify_prop_four_vertices(&g, [v[0], v[1], v[2], v[3]], &VerifyOptions::default()).unwrap();
        assert!(r.pass);
        assert_eq!(r.lhs, int(2));
        assert_eq!(r.rhs, int(2));
        let bad = verify_prop_four_vertices(&g, [v[0], v[2], v[1], v[3]], &VerifyOptions::default());
        assert!(matches!(bad, Err(Error::Hypothesis(_))));
    }

    #[test]
    fn pfaffian_on_c4() {
        let g = c4();
        let sel = MarkedSelection::new(ids(&g, &["a", "b", "c", "d"]), vec![]);
        let r = verify_pfaffian_identity(&g, &sel, &VerifyOptions::default()).unwrap();
        assert!(r.pass);
        assert_eq!(r.rhs, int(2));
        let all_h = sel.clone().with_ah(sel.a.clone());
        assert!(matches!(
            verify_pfaffian_identity(&g, &all_h, &VerifyOptions::default()),
            Err(Error::Hypothesis(_))
        ));
    }

    #[test]
    fn determinant_reflexive_single_pair() {
        let g = graph_from_labels(&["u", "v"], &[("u", "v", 1)], &["u", "v"]).unwrap();
        let sides = g.bipartition().unwrap();
        let (u, v) = (g.id_of("u").unwrap(), g.id_of("v").unwrap());
        let (a, b) = if sides[&u] == Side::U { (u, v) } else { (v, u) };
        let sel = MarkedSelection::new(vec![a], vec![b]);
        let r = verify_determinant_identity(&g, &sel, &VerifyOptions::default()).unwrap();
        assert!(r.pass);
        assert_eq!(r.lhs, int(1));
    }

    #[test]
    fn k_range_is_enforced() {
        let g = graph_from_labels(&["a", "b"], &[("a", "b", 1)], &["a", "b"]).unwrap();
        let sel = MarkedSelection::new(ids(&g, &["a"]), ids(&g, &["b"]));
        assert!(matches!(
            verify_even_partition(&g, &sel, &VerifyOptions::default()),
            Err(Error::Hypothesis(_))
        ));
        let opts = VerifyOptions {
            allow_any_k: true,
            ..Default::default()
        };
        assert!(verify_even_partition(&g, &sel, &opts).unwrap().pass);
    }

    #[test]
    fn permutations_are_complete() {
        assert_eq!(permutations(0).len(), 1);
        assert_eq!(permutations(3).len(), 6);
        assert_eq!(permutations(4)[1], vec![0, 1, 3, 2]);
    }

    #[test]
    fn orientation_search_balances_components() {
        // two disjoint edges; force x and y onto U
        let g = graph_from_labels(&["x", "p", "y", "q"], &[("x", "p", 1), ("y", "q", 1)], &[]).unwrap();
        let x = g.id_of("x").unwrap();
        let y = g.id_of("y").unwrap();
        let s = oriented_bipartition(&g, &[(x, Side::U), (y, Side::U)], 0).unwrap();
        assert_eq!(s[&x], Side::U);
        assert_eq!(s[&y], Side::U);
        assert!(oriented_bipartition(&g, &[(x, Side::U)], 4).is_err());
    }
}
