//! Seeded batches of random instances run through one identity.
//!
//! Trial seeds are drawn up front from the campaign seed, so the outcome of
//! every trial depends only on the configuration, not on scheduling. Trials
//! run on a rayon pool and are reported in trial order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::generators::{generate, Family, Instance, InstanceSpec, MarkingMode, WeightMode};
use crate::identities::{verify_named, VerifyOptions, IDENTITY_NAMES};
use crate::io::write_graph_file;
use crate::matching::Limits;
use crate::scalar::format_scalar;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CampaignConfig {
    pub identity: String,
    pub seed: u64,
    pub trials: usize,
    /// Largest generated graph.
    pub max_vertices: usize,
    pub workers: usize,
    /// `None` picks the identity's default: integers 1..=5, or unit weights
    /// for the Pfaffian and determinant identities.
    pub weights: Option<WeightMode>,
    pub limits: Limits,
    /// Drop every trial after the first counterexample.
    pub stop_on_counterexample: bool,
}

impl CampaignConfig {
    pub fn new(identity: impl Into<String>, seed: u64, trials: usize) -> CampaignConfig {
        CampaignConfig {
            identity: identity.into(),
            seed,
            trials,
            max_vertices: 16,
            workers: 1,
            weights: None,
            limits: Limits::default(),
            stop_on_counterexample: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum TrialOutcome {
    Pass { lhs: String },
    /// No marking satisfying the hypotheses was found, or the verifier
    /// rejected the one drawn.
    HypothesisSkip { reason: String },
    /// The identity failed; `bundle` is a graph file with the marking.
    Counterexample { lhs: String, rhs: String, bundle: String },
    Error { message: String, resource_limit: bool },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TrialRecord {
    pub index: usize,
    pub seed: u64,
    pub family: String,
    pub marking: String,
    pub outcome: TrialOutcome,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CampaignSummary {
    pub identity: String,
    pub seed: u64,
    pub trials: usize,
    pub passes: usize,
    pub hypothesis_skips: usize,
    pub counterexamples: usize,
    pub errors: usize,
    /// Some trial hit a size or budget limit.
    pub resource_limited: bool,
    /// The run stopped early at a counterexample.
    pub truncated: bool,
    pub records: Vec<TrialRecord>,
}

impl CampaignSummary {
    pub fn all_passed(&self) -> bool {
        self.counterexamples == 0 && self.errors == 0
    }
}

fn pick<T: Copy>(rng: &mut ChaCha8Rng, items: &[T]) -> T {
    items[rng.random_range(0..items.len())]
}

/// Grids `rows x cols` with `rows, cols >= 2` and `rows * cols` in range and
/// of the requested parity.
fn grid_choices(max_vertices: usize, odd: bool) -> Vec<Family> {
    let mut out = Vec::new();
    for rows in 2..=max_vertices {
        for cols in rows..=max_vertices {
            let n = rows * cols;
            if n <= max_vertices && (n % 2 == 1) == odd {
                out.push(Family::Grid { rows, cols });
            }
        }
    }
    out
}

fn small_families(max_vertices: usize, odd: bool, bipartite_only: bool) -> Vec<Family> {
    let mut out = grid_choices(max_vertices, odd);
    let sizes = (4..=max_vertices).filter(|n| (n % 2 == 1) == odd);
    for n in sizes {
        out.push(Family::Path { n });
        if !odd {
            out.push(Family::Cycle { n });
            out.push(Family::Ladder { n: n / 2 });
        }
        if !bipartite_only {
            out.push(Family::Fan { n });
            out.push(Family::RandomOuterplanar { n });
        }
    }
    for n in 1..=2 {
        if !odd && 2 * n * (n + 1) <= max_vertices {
            out.push(Family::AztecDiamond { n });
        }
    }
    out.sort_by_key(|f| f.to_string());
    out.dedup();
    out
}

/// Draws one random instance suited to `identity` from `rng`.
pub fn random_instance(
    identity: &str,
    rng: &mut ChaCha8Rng,
    max_vertices: usize,
    weights: WeightMode,
) -> Result<(Family, Instance)> {
    let (odd, bipartite_only, marking) = match identity {
        "prop4" => (false, false, MarkingMode::FourVertex),
        "even-partition" => (false, false, MarkingMode::Interleaved { k: pick(rng, &[2, 3]) }),
        "odd-partition" => (true, false, MarkingMode::Interleaved { k: pick(rng, &[2, 3]) }),
        "odd-corollary" => (true, false, MarkingMode::Interleaved { k: 2 }),
        "bipartite-balanced" => (false, true, MarkingMode::BipartiteBalanced { k: pick(rng, &[2, 3]) }),
        "bipartite-offset" => (false, true, MarkingMode::BipartiteOffset { k: 2 }),
        "three-term" => (false, true, MarkingMode::ThreeTerm),
        "pfaffian" => (false, false, MarkingMode::Pfaffian { size: pick(rng, &[4, 6]) }),
        "determinant" => (false, true, MarkingMode::Determinant { n: pick(rng, &[1, 2, 3]) }),
        other => {
            return Err(Error::InvalidArgument(format!(
                "unknown identity `{other}`; expected one of {}",
                IDENTITY_NAMES.join(", ")
            )))
        }
    };
    let families = small_families(max_vertices, odd, bipartite_only);
    if families.is_empty() {
        return Err(Error::InvalidArgument(format!("no family fits in {max_vertices} vertices")));
    }
    let family = pick(rng, &families);
    let spec = InstanceSpec::new(family)
        .weights(weights)
        .marking(marking)
        .seed(rng.random())
        .marking_cap(16);
    let mut inst = generate(&spec)?;
    if !inst.markings.is_empty() {
        let keep = rng.random_range(0..inst.markings.len());
        inst.markings = vec![inst.markings.swap_remove(keep)];
    }
    Ok((family, inst))
}

pub fn default_weights(identity: &str) -> WeightMode {
    match identity {
        "pfaffian" | "determinant" => WeightMode::Unit,
        _ => WeightMode::small_integers(),
    }
}

fn run_trial(cfg: &CampaignConfig, index: usize, seed: u64) -> TrialRecord {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let weights = cfg.weights.unwrap_or_else(|| default_weights(&cfg.identity));
    let mut record = TrialRecord {
        index,
        seed,
        family: String::new(),
        marking: String::new(),
        outcome: TrialOutcome::HypothesisSkip { reason: String::new() },
    };
    let (family, inst) = match random_instance(&cfg.identity, &mut rng, cfg.max_vertices, weights) {
        Ok(x) => x,
        Err(e) => {
            record.outcome = error_outcome(&e);
            return record;
        }
    };
    record.family = family.to_string();
    let Some(sel) = inst.markings.first() else {
        record.outcome = TrialOutcome::HypothesisSkip {
            reason: "no qualifying marking on this instance".into(),
        };
        return record;
    };
    record.marking = sel.describe(&inst.graph);
    let opts = VerifyOptions {
        limits: cfg.limits,
        allow_any_k: false,
    };
    record.outcome = match verify_named(&cfg.identity, &inst.graph, sel, &opts) {
        Ok(r) if r.pass => TrialOutcome::Pass {
            lhs: format_scalar(&r.lhs),
        },
        Ok(r) => TrialOutcome::Counterexample {
            lhs: format_scalar(&r.lhs),
            rhs: format_scalar(&r.rhs),
            bundle: write_graph_file(&inst.graph, Some(&sel.to_spec(&inst.graph, Some(&cfg.identity)))),
        },
        Err(e) if e.is_hypothesis_failure() => TrialOutcome::HypothesisSkip { reason: e.to_string() },
        Err(e) => error_outcome(&e),
    };
    record
}

fn error_outcome(e: &Error) -> TrialOutcome {
    TrialOutcome::Error {
        message: e.to_string(),
        resource_limit: matches!(e, Error::TooLarge { .. } | Error::Budget(_)),
    }
}

/// Runs the campaign. The summary is identical for identical configurations
/// whatever the worker count.
pub fn run_campaign(cfg: &CampaignConfig) -> Result<CampaignSummary> {
    if !IDENTITY_NAMES.contains(&cfg.identity.as_str()) {
        return Err(Error::InvalidArgument(format!(
            "unknown identity `{}`; expected one of {}",
            cfg.identity,
            IDENTITY_NAMES.join(", ")
        )));
    }
    let mut master = ChaCha8Rng::seed_from_u64(cfg.seed);
    let seeds: Vec<u64> = (0..cfg.trials).map(|_| master.random()).collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers.max(1))
        .build()
        .map_err(|e| Error::InvalidArgument(format!("cannot start worker pool: {e}")))?;
    let mut records: Vec<TrialRecord> = pool.install(|| {
        seeds
            .par_iter()
            .enumerate()
            .map(|(t, &s)| run_trial(cfg, t, s))
            .collect()
    });

    let mut truncated = false;
    if cfg.stop_on_counterexample {
        if let Some(first) = records
            .iter()
            .position(|r| matches!(r.outcome, TrialOutcome::Counterexample { .. }))
        {
            truncated = first + 1 < records.len();
            records.truncate(first + 1);
        }
    }
    let count = |f: fn(&TrialOutcome) -> bool| records.iter().filter(|r| f(&r.outcome)).count();
    let resource_limited = records.iter().any(|r| {
        matches!(
            r.outcome,
            TrialOutcome::Error {
                resource_limit: true,
                ..
            }
        )
    });
    Ok(CampaignSummary {
        identity: cfg.identity.clone(),
        seed: cfg.seed,
        trials: records.len(),
        passes: count(|o| matches!(o, TrialOutcome::Pass { .. })),
        hypothesis_skips: count(|o| matches!(o, TrialOutcome::HypothesisSkip { .. })),
        counterexamples: count(|o| matches!(o, TrialOutcome::Counterexample { .. })),
        errors: count(|o| matches!(o, TrialOutcome::Error { .. })),
        resource_limited,
        truncated,
        records,
    })
}
