use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use condensation::campaign::{run_campaign, CampaignConfig, TrialOutcome};
use condensation::generators::{generate, Family, InstanceSpec, MarkingMode, WeightMode};
use condensation::identities::{verify_named, VerifyOptions, IDENTITY_NAMES};
use condensation::io::{parse_graph_file, parse_vertex_list, write_graph_file, GraphDocument, ParseError};
use condensation::paths::{PfaffianSetup, DEFAULT_NEST_BUDGET};
use condensation::report::{paths_json, paths_text, report_json, report_table};
use condensation::scalar::format_scalar;
use condensation::{count_matchings, Error, Limits, MarkedSelection, PlaneGraph, VertexId};

const EXIT_PASS: u8 = 0;
const EXIT_OTHER: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_HYPOTHESIS: u8 = 3;
const EXIT_IDENTITY_FAILED: u8 = 4;

/// Exact perfect-matching counts and graphical condensation identities on
/// plane graphs.
#[derive(Parser)]
#[command(name = "condense", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Structured,
}

#[derive(Args)]
struct Common {
    /// Largest graph the matching enumerator accepts.
    #[arg(long, default_value_t = 24)]
    vertex_cap: usize,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
}

impl Common {
    fn limits(&self) -> Limits {
        Limits::with_cap(self.vertex_cap)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Print the weighted number of perfect matchings.
    Count {
        file: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Check one identity on one marking and print every term.
    ///
    /// The marking comes from --A/--B/--A1/--AH, from positional vertices,
    /// or from the file's [marking] table, in that order of preference.
    /// Positional vertices are read as a1 b1 a2 b2 ... for the partition
    /// identities and their corollaries, as a1 ... an for pfaffian, and as
    /// a1 ... an bn ... b1 (face order) for determinant.
    Verify {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(IDENTITY_NAMES))]
        identity: String,
        file: PathBuf,
        vertices: Vec<String>,
        #[arg(long = "A")]
        a: Option<String>,
        #[arg(long = "B")]
        b: Option<String>,
        #[arg(long = "A1")]
        a1: Option<String>,
        #[arg(long = "AH")]
        ah: Option<String>,
        /// Accept a number of marked pairs outside 2..=n.
        #[arg(long)]
        any_k: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Run an identity over seeded random instances.
    Campaign {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(IDENTITY_NAMES))]
        identity: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        /// Largest generated graph.
        #[arg(long, default_value_t = 16)]
        max_vertices: usize,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        /// `unit`, `int:LO..HI` or `rational:P/Q`; defaults per identity.
        #[arg(long)]
        weights: Option<String>,
        /// Write each counterexample as a replayable graph file here.
        #[arg(long)]
        bundle_dir: Option<PathBuf>,
        /// Report every trial instead of stopping at the first counterexample.
        #[arg(long)]
        keep_going: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Emit a generated instance as a graph file.
    ///
    /// Families: grid:RxC, cycle:N, path:N, ladder:N, aztec:N, fan:N,
    /// outerplanar:N. Markings: none, four-vertex, interleaved:K,
    /// balanced:K, offset:K, three-term, pfaffian:SIZE, determinant:N.
    Gen {
        family: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "unit")]
        weights: String,
        #[arg(long, default_value = "none")]
        marking: String,
        /// Which of the generated markings to attach.
        #[arg(long, default_value_t = 0)]
        index: usize,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Dump the alternating paths and nests of a Pfaffian marking.
    Paths {
        file: PathBuf,
        #[arg(long = "A")]
        a: Option<String>,
        #[arg(long = "AH")]
        ah: Option<String>,
        /// Give up when more nests than this would be listed.
        #[arg(long, default_value_t = DEFAULT_NEST_BUDGET)]
        budget: usize,
        #[command(flatten)]
        common: Common,
    },
}

fn load(path: &Path) -> anyhow::Result<GraphDocument> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    parse_graph_file(&text).map_err(|e| anyhow!(e).context(format!("{}", path.display())))
}

fn resolve(g: &PlaneGraph, labels: &[String]) -> anyhow::Result<Vec<VertexId>> {
    labels
        .iter()
        .map(|l| {
            g.id_of(l)
                .ok_or_else(|| anyhow!(ParseError::new(format!("unknown vertex `{l}`"))))
        })
        .collect()
}

fn resolve_list(g: &PlaneGraph, text: &Option<String>) -> anyhow::Result<Vec<VertexId>> {
    match text {
        None => Ok(Vec::new()),
        Some(t) => resolve(g, &parse_vertex_list(t)?),
    }
}

struct MarkingArgs<'a> {
    identity: &'a str,
    vertices: &'a [String],
    a: &'a Option<String>,
    b: &'a Option<String>,
    a1: &'a Option<String>,
    ah: &'a Option<String>,
}

fn marking_from_args(doc: &GraphDocument, m: &MarkingArgs) -> anyhow::Result<MarkedSelection> {
    let g = &doc.graph;
    let flags_given = m.a.is_some() || m.b.is_some();
    if flags_given && !m.vertices.is_empty() {
        bail!(ParseError::new("give the marking either positionally or with --A/--B, not both"));
    }
    let mut sel = if flags_given {
        MarkedSelection::new(resolve_list(g, m.a)?, resolve_list(g, m.b)?)
    } else if !m.vertices.is_empty() {
        let vs = resolve(g, m.vertices)?;
        match m.identity {
            "pfaffian" => MarkedSelection::new(vs, vec![]),
            "determinant" => {
                if vs.len() % 2 == 1 {
                    bail!(ParseError::new("determinant needs a1 ... an bn ... b1"));
                }
                let n = vs.len() / 2;
                MarkedSelection::new(vs[..n].to_vec(), vs[n..].iter().rev().copied().collect())
            }
            _ => {
                if vs.len() % 2 == 1 {
                    bail!(ParseError::new("positional vertices come in pairs a1 b1 a2 b2 ..."));
                }
                let a = vs.iter().step_by(2).copied().collect();
                let b = vs.iter().skip(1).step_by(2).copied().collect();
                MarkedSelection::new(a, b)
            }
        }
    } else if let Some(spec) = &doc.marking {
        MarkedSelection::from_spec(g, spec)?
    } else {
        bail!(ParseError::new("no marking given and the file has no [marking] table"));
    };
    if m.a1.is_some() {
        sel.a1 = resolve_list(g, m.a1)?.into_iter().collect();
    }
    if m.ah.is_some() {
        sel.ah = resolve_list(g, m.ah)?.into_iter().collect();
    }
    sel.validate(g)?;
    Ok(sel)
}

fn parse_weights(text: &str) -> anyhow::Result<WeightMode> {
    let bad = || anyhow!(ParseError::new(format!("bad weight mode `{text}`")));
    if text == "unit" {
        return Ok(WeightMode::Unit);
    }
    if let Some(range) = text.strip_prefix("int:") {
        let (lo, hi) = range.split_once("..").ok_or_else(bad)?;
        let (lo, hi) = (lo.parse().map_err(|_| bad())?, hi.parse().map_err(|_| bad())?);
        if lo > hi {
            return Err(bad());
        }
        return Ok(WeightMode::RandomInteger { lo, hi });
    }
    if let Some(frac) = text.strip_prefix("rational:") {
        let (p, q) = frac.split_once('/').ok_or_else(bad)?;
        let (p, q) = (p.parse().map_err(|_| bad())?, q.parse().map_err(|_| bad())?);
        if p < 1 || q < 1 {
            return Err(bad());
        }
        return Ok(WeightMode::RandomRational {
            max_numerator: p,
            max_denominator: q,
        });
    }
    Err(bad())
}

fn parse_family(text: &str) -> anyhow::Result<Family> {
    let bad = || anyhow!(ParseError::new(format!("bad family `{text}`")));
    let (name, size) = text.split_once(':').ok_or_else(bad)?;
    if name == "grid" {
        let (r, c) = size.split_once('x').ok_or_else(bad)?;
        return Ok(Family::Grid {
            rows: r.parse().map_err(|_| bad())?,
            cols: c.parse().map_err(|_| bad())?,
        });
    }
    let n: usize = size.parse().map_err(|_| bad())?;
    Ok(match name {
        "cycle" => Family::Cycle { n },
        "path" => Family::Path { n },
        "ladder" => Family::Ladder { n },
        "aztec" => Family::AztecDiamond { n },
        "fan" => Family::Fan { n },
        "outerplanar" => Family::RandomOuterplanar { n },
        _ => return Err(bad()),
    })
}

/// The marking mode and the identity its markings are meant for.
fn parse_marking(text: &str) -> anyhow::Result<(MarkingMode, Option<&'static str>)> {
    let bad = || anyhow!(ParseError::new(format!("bad marking mode `{text}`")));
    let (name, arg) = match text.split_once(':') {
        Some((n, a)) => (n, Some(a.parse::<usize>().map_err(|_| bad())?)),
        None => (text, None),
    };
    Ok(match (name, arg) {
        ("none", None) => (MarkingMode::None, None),
        ("four-vertex", None) => (MarkingMode::FourVertex, Some("prop4")),
        ("interleaved", Some(k)) => (MarkingMode::Interleaved { k }, Some("even-partition")),
        ("balanced", Some(k)) => (MarkingMode::BipartiteBalanced { k }, Some("bipartite-balanced")),
        ("offset", Some(k)) => (MarkingMode::BipartiteOffset { k }, Some("bipartite-offset")),
        ("three-term", None) => (MarkingMode::ThreeTerm, Some("three-term")),
        ("pfaffian", Some(size)) => (MarkingMode::Pfaffian { size }, Some("pfaffian")),
        ("determinant", Some(n)) => (MarkingMode::Determinant { n }, Some("determinant")),
        _ => return Err(bad()),
    })
}

/// Writes to stdout; a reader that closed the pipe early is not an error.
fn emit(text: &str) -> anyhow::Result<()> {
    let mut out = std::io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|()| out.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn print_json(value: &serde_json::Value) -> anyhow::Result<()> {
    emit(&format!("{}\n", serde_json::to_string_pretty(value)?))
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    match cli.command {
        Command::Count { file, common } => {
            let doc = load(&file)?;
            let m = count_matchings(&doc.graph, &common.limits())?;
            match common.format {
                Format::Table => emit(&format!("{}\n", format_scalar(&m)))?,
                Format::Structured => print_json(&serde_json::json!({ "count": format_scalar(&m) }))?,
            }
            Ok(EXIT_PASS)
        }
        Command::Verify {
            identity,
            file,
            vertices,
            a,
            b,
            a1,
            ah,
            any_k,
            common,
        } => {
            let doc = load(&file)?;
            let args = MarkingArgs {
                identity: &identity,
                vertices: &vertices,
                a: &a,
                b: &b,
                a1: &a1,
                ah: &ah,
            };
            let sel = marking_from_args(&doc, &args)?;
            let opts = VerifyOptions {
                limits: common.limits(),
                allow_any_k: any_k,
            };
            let report = verify_named(&identity, &doc.graph, &sel, &opts)?;
            match common.format {
                Format::Table => emit(&report_table(&report))?,
                Format::Structured => print_json(&report_json(&report))?,
            }
            Ok(if report.pass { EXIT_PASS } else { EXIT_IDENTITY_FAILED })
        }
        Command::Campaign {
            identity,
            seed,
            trials,
            max_vertices,
            workers,
            weights,
            bundle_dir,
            keep_going,
            common,
        } => {
            let mut cfg = CampaignConfig::new(identity, seed, trials);
            cfg.max_vertices = max_vertices;
            cfg.workers = workers;
            cfg.weights = weights.as_deref().map(parse_weights).transpose()?;
            cfg.limits = common.limits();
            cfg.stop_on_counterexample = !keep_going;
            let summary = run_campaign(&cfg)?;
            if let Some(dir) = &bundle_dir {
                fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
                for r in &summary.records {
                    if let TrialOutcome::Counterexample { bundle, .. } = &r.outcome {
                        let path = dir.join(format!("trial-{}.graph", r.index));
                        fs::write(&path, bundle).with_context(|| format!("cannot write {}", path.display()))?;
                    }
                }
            }
            match common.format {
                Format::Structured => print_json(&serde_json::to_value(&summary)?)?,
                Format::Table => {
                    let mut text = String::new();
                    for r in &summary.records {
                        let status = match &r.outcome {
                            TrialOutcome::Pass { lhs } => format!("pass  {lhs}"),
                            TrialOutcome::HypothesisSkip { reason } => format!("skip  {reason}"),
                            TrialOutcome::Counterexample { lhs, rhs, .. } => format!("FAIL  {lhs} != {rhs}"),
                            TrialOutcome::Error { message, .. } => format!("error {message}"),
                        };
                        text.push_str(&format!("{:>5}  {:<24} {:<32} {status}\n", r.index, r.family, r.marking));
                    }
                    text.push_str(&format!(
                        "identity {} seed {}: {} trials, {} passes, {} hypothesis skips, {} counterexamples, {} errors\n",
                        summary.identity,
                        summary.seed,
                        summary.trials,
                        summary.passes,
                        summary.hypothesis_skips,
                        summary.counterexamples,
                        summary.errors
                    ));
                    if summary.truncated {
                        text.push_str("stopped after the first counterexample\n");
                    }
                    if summary.resource_limited {
                        text.push_str("partial: some trials hit a size or budget limit\n");
                    }
                    emit(&text)?;
                }
            }
            Ok(if summary.counterexamples > 0 {
                EXIT_IDENTITY_FAILED
            } else if summary.errors > 0 {
                EXIT_OTHER
            } else {
                EXIT_PASS
            })
        }
        Command::Gen {
            family,
            seed,
            weights,
            marking,
            index,
            output,
        } => {
            let family = parse_family(&family)?;
            let (mode, identity) = parse_marking(&marking)?;
            let spec = InstanceSpec::new(family)
                .weights(parse_weights(&weights)?)
                .marking(mode)
                .seed(seed);
            let inst = generate(&spec)?;
            let chosen = match mode {
                MarkingMode::None => None,
                _ => Some(inst.markings.get(index).ok_or_else(|| {
                    Error::Hypothesis(format!(
                        "{family} has {} qualifying markings, none at index {index}",
                        inst.markings.len()
                    ))
                })?),
            };
            let text = write_graph_file(&inst.graph, chosen.map(|s| s.to_spec(&inst.graph, identity)).as_ref());
            match output {
                Some(path) => fs::write(&path, text).with_context(|| format!("cannot write {}", path.display()))?,
                None => emit(&text)?,
            }
            Ok(EXIT_PASS)
        }
        Command::Paths {
            file,
            a,
            ah,
            budget,
            common,
        } => {
            let doc = load(&file)?;
            let args = MarkingArgs {
                identity: "pfaffian",
                vertices: &[],
                a: &a,
                b: &None,
                a1: &None,
                ah: &ah,
            };
            let sel = marking_from_args(&doc, &args)?;
            let setup = PfaffianSetup::new(&doc.graph, &sel, &common.limits())?;
            let census = setup.census(budget)?;
            match common.format {
                Format::Table => emit(&paths_text(&setup, &census))?,
                Format::Structured => print_json(&paths_json(&setup, &census))?,
            }
            Ok(EXIT_PASS)
        }
    }
}

fn exit_code(e: &anyhow::Error) -> u8 {
    if let Some(err) = e.downcast_ref::<Error>() {
        return match err {
            Error::Parse(_) => EXIT_PARSE,
            err if err.is_hypothesis_failure() => EXIT_HYPOTHESIS,
            _ => EXIT_OTHER,
        };
    }
    if e.downcast_ref::<ParseError>().is_some() {
        return EXIT_PARSE;
    }
    EXIT_OTHER
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_and_marking_syntax() {
        assert_eq!(parse_family("grid:3x4").unwrap(), Family::Grid { rows: 3, cols: 4 });
        assert_eq!(parse_family("aztec:2").unwrap(), Family::AztecDiamond { n: 2 });
        assert!(parse_family("grid:3").is_err());
        assert!(parse_family("blob:3").is_err());
        assert_eq!(parse_marking("interleaved:3").unwrap().0, MarkingMode::Interleaved { k: 3 });
        assert!(parse_marking("interleaved").is_err());
        assert_eq!(parse_weights("int:1..5").unwrap(), WeightMode::small_integers());
        assert!(parse_weights("int:5..1").is_err());
    }
}
