//! One function per subcommand. Each returns the text and JSON forms of its result
//! together with the exit status.

use crate::input::{self, InputError, Result};
use crate::{BuildKind, Classifier, Cli, Command, Status};
use serde_json::{json, Value};
use shadow_core::dynamics::{chain_from_family, chain_from_family_and_tail, default_extensions, validate_chain};
use shadow_core::enumeration::{f_set, nk, rank, unrank};
use shadow_core::graph::{print_graph, SinkCheck};
use shadow_core::metric::distance;
use shadow_core::shadowing::{
    check_fpc_instance, check_ipc1_instance, check_ipc2_instance, classify_ecifs, classify_wandering, decide_shadowing,
    expected_verdicts, find_attractor, fpc_slots, search_shadow_point, verify_certificate, Answer, AttractorResult,
    Certificate, EcifsVerdict, ExpectedVerdict, FailureReport, FpcResult, IpcResult, PeriodicFamily, Rule,
    SearchBounds, ShadowSearch, Verdict, WanderingVerdict,
};
use shadow_core::{
    Chain, ChainValidity, Error, FinitePath, GraphPresentation, InfinitePath, Path, PathFamily, Rank, Threshold,
};

pub struct Output {
    pub status: Status,
    pub text: String,
    pub json: Value,
}

impl Output {
    fn new(status: Status, text: impl Into<String>, json: Value) -> Self {
        Output {
            status,
            text: text.into(),
            json,
        }
    }
}

pub fn run(cli: &Cli) -> Result<Output> {
    let sinks = cli.allow_undecided_sinks;
    let load = |arg: &str| input::graph(arg, sinks);
    let bounds = || input::bounds(cli.bounds.as_deref());
    match &cli.command {
        Command::Parse { graph } => parse(&load(graph)?),
        Command::Print { graph } => {
            let text = print_graph(&load(graph)?);
            Ok(Output::new(Status::Yes, text.clone(), json!({ "graph": text })))
        }
        Command::Validate { graph } => validate(graph),
        Command::Enumerate { graph, count, start } => enumerate(&load(graph)?, *count, start),
        Command::Rank { graph, path } => {
            let g = load(graph)?;
            let p: FinitePath = path.parse()?;
            let r = rank(&g, &p)?;
            Ok(Output::new(
                Status::Yes,
                format!("{r}\n"),
                json!({ "path": p.to_string(), "rank": r.to_string() }),
            ))
        }
        Command::Entry { graph, rank } => {
            let p = unrank(&load(graph)?, rank)?;
            Ok(Output::new(
                Status::Yes,
                format!("{p}\n"),
                json!({ "rank": rank.to_string(), "entry": p.to_string() }),
            ))
        }
        Command::Nk { graph, k } => {
            let v = nk(&load(graph)?, *k)?;
            Ok(Output::new(
                Status::Yes,
                format!("N({k}) = {v}\n"),
                json!({ "k": k, "nk": v.to_string() }),
            ))
        }
        Command::Fset { graph, t } => {
            let edges = f_set(&load(graph)?, t)?;
            let names: Vec<String> = edges.iter().map(|e| format!("e{e}")).collect();
            let text = format!("F(t={t}) = {{{}}}\n", names.join(", "));
            Ok(Output::new(
                Status::Yes,
                text,
                json!({ "t": t.to_string(), "edges": edges }),
            ))
        }
        Command::Distance { graph, x, y } => {
            let g = load(graph)?;
            let (px, py): (Path, Path) = (x.parse()?, y.parse()?);
            let d = distance(&g, &px, &py)?;
            Ok(Output::new(
                Status::Yes,
                format!("{d}\n"),
                json!({ "distance": d.to_string(), "exponent": d.exponent().map(ToString::to_string) }),
            ))
        }
        Command::ChainValidate {
            graph,
            chain,
            delta_exp,
        } => {
            let g = load(graph)?;
            let c = Chain::parse(&input::literal(chain)?, delta_exp.clone())?;
            chain_validate(&g, &c)
        }
        Command::ChainBuild { kind } => chain_build(kind, sinks),
        Command::ShadowSearch {
            graph,
            chain,
            delta_exp,
            eps_exp,
            max_len,
            reps,
        } => {
            let g = load(graph)?;
            let c = Chain::parse(&input::literal(chain)?, delta_exp.clone())?;
            let mut b = bounds()?;
            b.max_path_len = max_len.unwrap_or(b.max_path_len);
            b.max_family_reps = reps.unwrap_or(b.max_family_reps);
            shadow_search(&g, c, eps_exp, &b)
        }
        Command::Fpc {
            graph,
            eps_exp,
            delta_exp,
            family,
        } => {
            let g = load(graph)?;
            let fam = PathFamily::parse(&input::literal(family)?)?;
            fpc(&g, eps_exp, delta_exp, fam, &bounds()?)
        }
        Command::Ipc1 {
            graph,
            eps_exp,
            delta_exp,
            family,
        } => {
            let g = load(graph)?;
            let fam = PeriodicFamily::parse(&input::literal(family)?)?;
            let r = check_ipc1_instance(&g, eps_exp, delta_exp, &fam, &bounds()?)?;
            Ok(ipc_output(&g, r, json!({ "family": fam.literal() })))
        }
        Command::Ipc2 {
            graph,
            eps_exp,
            delta_exp,
            family,
            gamma,
        } => {
            let g = load(graph)?;
            let fam = PathFamily::parse(&input::literal(family)?)?;
            let gamma: InfinitePath = gamma.parse()?;
            let r = check_ipc2_instance(&g, eps_exp, delta_exp, &fam, &gamma, &bounds()?)?;
            Ok(ipc_output(
                &g,
                r,
                json!({ "family": fam.literal(), "gamma": gamma.to_string() }),
            ))
        }
        Command::Classify { which } => classify(which, sinks, &bounds()?),
        Command::Decide { graph } => decide(&load(graph)?, &bounds()?),
        Command::Examples { only } => examples(only.as_deref(), &bounds()?),
        Command::Verify { certfile, graph } => verify(certfile, graph.as_deref(), sinks),
    }
}

fn name_of<T: serde::Serialize>(v: &T) -> String {
    match serde_json::to_value(v) {
        Ok(Value::String(s)) => s,
        Ok(other) => other.get("kind").and_then(Value::as_str).unwrap_or("?").to_string(),
        Err(_) => "?".into(),
    }
}

fn status_of(a: Answer) -> Status {
    match a {
        Answer::Yes => Status::Yes,
        Answer::No => Status::No,
        Answer::Unknown => Status::Unknown,
    }
}

fn parse(g: &GraphPresentation) -> Result<Output> {
    let size = match g.max_index() {
        Some(m) => format!("finite, {m} edges"),
        None => "infinite".to_string(),
    };
    let text = format!(
        "graph {}: {} exceptional edges, {} families, {size}\n",
        g.name(),
        g.exceptional_edges().len(),
        g.families().len()
    );
    let json = json!({
        "name": g.name(),
        "exceptional_edges": g.exceptional_edges().len(),
        "families": g.families().len(),
        "max_index": g.max_index(),
    });
    Ok(Output::new(Status::Yes, text, json))
}

fn validate(arg: &str) -> Result<Output> {
    let g = match input::graph(arg, true) {
        Ok(g) => g,
        Err(InputError::Core(Error::Sink(v))) => {
            return Ok(Output::new(
                Status::No,
                format!("invalid: {v} is a sink\n"),
                json!({ "valid": false, "sink": v }),
            ))
        }
        Err(e) => return Err(e),
    };
    Ok(match g.validate_no_sinks() {
        SinkCheck::Valid => Output::new(Status::Yes, "valid: no sinks\n", json!({ "valid": true })),
        SinkCheck::Invalid(v) => Output::new(
            Status::No,
            format!("invalid: {v} is a sink\n"),
            json!({ "valid": false, "sink": v.to_string() }),
        ),
        SinkCheck::Unknown(why) => Output::new(
            Status::Unknown,
            format!("undecided: {why}\n"),
            json!({ "valid": Value::Null, "reason": why }),
        ),
    })
}

fn enumerate(g: &GraphPresentation, count: usize, start: &Rank) -> Result<Output> {
    let mut text = String::new();
    let mut rows = Vec::with_capacity(count);
    let mut r = start.clone();
    for _ in 0..count {
        let p = unrank(g, &r)?;
        text.push_str(&format!("{r}\t{p}\n"));
        rows.push(json!({ "rank": r.to_string(), "entry": p.to_string() }));
        r += 1u32;
    }
    Ok(Output::new(Status::Yes, text, Value::Array(rows)))
}

fn chain_validate(g: &GraphPresentation, c: &Chain) -> Result<Output> {
    let t = &c.threshold;
    Ok(match validate_chain(g, c)? {
        ChainValidity::Valid => Output::new(
            Status::Yes,
            format!("valid chain at 2^-{t}\n"),
            json!({ "valid": true, "delta_exp": t.to_string() }),
        ),
        ChainValidity::FirstViolation { position, distance } => Output::new(
            Status::No,
            format!(
                "not a chain: d(shift(x^{position}), x^{}) = {distance} is not below 2^-{t}\n",
                position + 1
            ),
            json!({
                "valid": false,
                "delta_exp": t.to_string(),
                "position": position,
                "distance": distance.to_string(),
            }),
        ),
    })
}

fn chain_build(kind: &BuildKind, sinks: bool) -> Result<Output> {
    let c = match kind {
        BuildKind::Family {
            graph,
            family,
            delta_exp,
        } => {
            let g = input::graph(graph, sinks)?;
            let fam = PathFamily::parse(&input::literal(family)?)?;
            let ext = default_extensions(&g, &fam)?;
            chain_from_family(&g, &fam, &ext, delta_exp)?
        }
        BuildKind::FamilyTail {
            graph,
            family,
            gamma,
            delta_exp,
        } => {
            let g = input::graph(graph, sinks)?;
            let fam = PathFamily::parse(&input::literal(family)?)?;
            let gamma: InfinitePath = gamma.parse()?;
            let ext = default_extensions(&g, &fam)?;
            chain_from_family_and_tail(&g, &fam, &gamma, &ext, delta_exp)?
        }
    };
    let lit = c.literal();
    Ok(Output::new(
        Status::Yes,
        format!("{lit}\n"),
        json!({ "chain": lit, "delta_exp": c.threshold.to_string(), "elements": c.elements.len() }),
    ))
}

/// Certificate-form JSON for a verdict, with the graph embedded so `verify` needs no
/// other input.
fn verdict_json(g: &GraphPresentation, v: &Verdict) -> Value {
    let mut j = v.to_json();
    j["graph"] = Value::String(print_graph(g));
    j
}

fn describe(v: &Verdict) -> String {
    let exhaustive = v.to_json()["exhaustive"].as_bool().unwrap_or(false);
    format!(
        "{} (rule {}, certificate {}{})",
        name_of(&v.answer),
        name_of(&v.rule),
        name_of(&v.certificate),
        if exhaustive { ", exhaustive" } else { "" }
    )
}

fn shadow_search(g: &GraphPresentation, chain: Chain, eps_exp: &Threshold, b: &SearchBounds) -> Result<Output> {
    let eps = eps_exp.clone();
    Ok(match search_shadow_point(g, &chain, eps_exp, b)? {
        ShadowSearch::Witness(point) => {
            let text = format!("shadowing point: {point}\n");
            let v = Verdict {
                answer: Answer::Yes,
                rule: Rule::InstanceOnly,
                certificate: Certificate::ShadowWitness {
                    eps_exp: eps,
                    chain,
                    point,
                },
            };
            Output::new(Status::Yes, text, verdict_json(g, &v))
        }
        ShadowSearch::NoWitnessWithin { bounds, exhaustive } => {
            let text = if exhaustive {
                "no shadowing point exists (search exhaustive)\n".to_string()
            } else {
                format!(
                    "no shadowing point within bounds (max_path_len {}, max_family_reps {})\n",
                    bounds.max_path_len, bounds.max_family_reps
                )
            };
            let v = Verdict {
                answer: if exhaustive { Answer::No } else { Answer::Unknown },
                rule: Rule::InstanceOnly,
                certificate: Certificate::NoWitnessWithin {
                    eps_exp: eps,
                    chain,
                    bounds,
                    exhaustive,
                },
            };
            Output::new(Status::Unknown, text, verdict_json(g, &v))
        }
    })
}

fn failure_text(r: &FailureReport) -> String {
    format!(
        "no witness path ({}): {}; junctions compatible: {}\n",
        if r.exhaustive { "exhaustive" } else { "within bounds" },
        r.reason,
        r.junctions_compatible
    )
}

fn fpc(
    g: &GraphPresentation,
    eps_exp: &Threshold,
    delta_exp: &Threshold,
    family: PathFamily,
    b: &SearchBounds,
) -> Result<Output> {
    Ok(match check_fpc_instance(g, eps_exp, delta_exp, &family, b)? {
        FpcResult::WitnessPath(p) => Output::new(
            Status::Yes,
            format!("witness path: {p}\n"),
            json!({ "result": "WitnessPath", "path": p.to_string(), "family": family.literal() }),
        ),
        FpcResult::Failure(report) => {
            let status = if report.exhaustive { Status::No } else { Status::Unknown };
            let text = failure_text(&report);
            let certificate = Certificate::FpcInstanceFailure {
                eps_exp: eps_exp.clone(),
                delta_exp: delta_exp.clone(),
                slots: fpc_slots(g, &family, eps_exp)?,
                family,
                report,
            };
            let json = json!({ "result": "Failure", "certificate": certificate, "graph": print_graph(g) });
            Output::new(status, text, json)
        }
    })
}

fn ipc_output(g: &GraphPresentation, r: IpcResult, mut json: Value) -> Output {
    match r {
        IpcResult::WitnessPath(x) => {
            json["result"] = json!("WitnessPath");
            json["path"] = json!(x.to_string());
            Output::new(Status::Yes, format!("witness path: {x}\n"), json)
        }
        IpcResult::Failure(report) => {
            let status = if report.exhaustive { Status::No } else { Status::Unknown };
            let text = failure_text(&report);
            json["result"] = json!("Failure");
            json["report"] = json!(report);
            json["graph"] = json!(print_graph(g));
            Output::new(status, text, json)
        }
    }
}

fn classify(which: &Classifier, sinks: bool, b: &SearchBounds) -> Result<Output> {
    Ok(match which {
        Classifier::Wandering { graph } => match classify_wandering(&input::graph(graph, sinks)?, b)? {
            WanderingVerdict::Yes => Output::new(Status::Yes, "wandering: Yes\n", json!({ "wandering": "Yes" })),
            WanderingVerdict::No(ce) => {
                let samples: Vec<String> = ce
                    .samples
                    .iter()
                    .map(|p| FinitePath::Edges(p.clone()).to_string())
                    .collect();
                let text = format!(
                    "wandering: No (paths leaving every F_delta and ending in F_eps for eps = 2^-{}: {})\n",
                    ce.eps_exp,
                    samples.join("; ")
                );
                Output::new(Status::No, text, json!({ "wandering": "No", "counterexample": ce }))
            }
            WanderingVerdict::Unknown(why) => Output::new(
                Status::Unknown,
                format!("wandering: Unknown ({why})\n"),
                json!({ "wandering": "Unknown", "reason": why }),
            ),
        },
        Classifier::Ecifs { graph } => match classify_ecifs(&input::graph(graph, sinks)?)? {
            EcifsVerdict::Yes(ev) => Output::new(
                Status::Yes,
                format!("ECIFS: Yes with k = {}\n", ev.k),
                json!({ "ecifs": "Yes", "evidence": ev }),
            ),
            EcifsVerdict::No(w) => {
                let pairs: Vec<String> = w.pairs.iter().map(|(j, l)| format!("(e{j}, e{l})")).collect();
                let text = format!("ECIFS: No ({}; follower pairs {})\n", w.reason, pairs.join(", "));
                Output::new(Status::No, text, json!({ "ecifs": "No", "witness": w }))
            }
        },
        Classifier::Attractor { graph } => match find_attractor(&input::graph(graph, sinks)?, b)? {
            AttractorResult::Found {
                edges,
                threshold,
                ranking,
            } => {
                let names: Vec<String> = edges.iter().map(|e| format!("e{e}")).collect();
                let text = format!("attractor: F(t={threshold}) = {{{}}}\n", names.join(", "));
                let json = json!({
                    "attractor": "Found",
                    "edges": edges,
                    "threshold": threshold.to_string(),
                    "ranking": ranking,
                });
                Output::new(Status::Yes, text, json)
            }
            AttractorResult::NotFoundWithin { bounds } => Output::new(
                Status::Unknown,
                format!("attractor: none for t <= {}\n", bounds.max_threshold_exp),
                json!({ "attractor": "NotFoundWithin", "bounds": bounds }),
            ),
        },
    })
}

fn decide(g: &GraphPresentation, b: &SearchBounds) -> Result<Output> {
    let (finite, full) = decide_shadowing(g, b)?;
    let text = format!(
        "finite shadowing: {}\nshadowing: {}\n",
        describe(&finite),
        describe(&full)
    );
    let json = json!({
        "graph": print_graph(g),
        "finite_shadowing": finite.to_json(),
        "shadowing": full.to_json(),
    });
    Ok(Output::new(status_of(full.answer), text, json))
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum RowStatus {
    Match,
    Unknown,
    Mismatch,
}

fn check_row(g: &GraphPresentation, row: &ExpectedVerdict, finite: &Verdict, full: &Verdict) -> Result<RowStatus> {
    let mut certified = true;
    for v in [finite, full] {
        if v.answer != Answer::Unknown {
            certified &= verify_certificate(g, &v.certificate)?;
        }
    }
    let rule_ok = row
        .rule
        .is_none_or(|r| r == full.rule || full.answer == Answer::Unknown);
    let pairs = [(finite.answer, row.finite), (full.answer, row.shadowing)];
    if !certified || !rule_ok || pairs.iter().any(|&(got, want)| got != want && got != Answer::Unknown) {
        return Ok(RowStatus::Mismatch);
    }
    if pairs.iter().any(|&(got, want)| got != want) {
        return Ok(RowStatus::Unknown);
    }
    Ok(RowStatus::Match)
}

fn examples(only: Option<&str>, b: &SearchBounds) -> Result<Output> {
    let rows: Vec<ExpectedVerdict> = expected_verdicts()
        .into_iter()
        .filter(|r| only.is_none_or(|n| n == r.name))
        .collect();
    if rows.is_empty() {
        return Err(InputError::Usage(format!(
            "no builtin named `{}`",
            only.unwrap_or_default()
        )));
    }
    let mut text = format!(
        "{:<10} {:<8} {:<8} {:<8} {:<8} {:<20} {}\n",
        "graph", "finite", "expect", "shadow", "expect", "rule", "status"
    );
    let mut json_rows = Vec::new();
    let (mut matched, mut unknown, mut mismatched) = (0, 0, 0);
    for row in &rows {
        let g = shadow_core::graph::builtin(row.name)?;
        let (finite, full) = decide_shadowing(&g, b)?;
        let status = check_row(&g, row, &finite, &full)?;
        let label = match status {
            RowStatus::Match => {
                matched += 1;
                "ok"
            }
            RowStatus::Unknown => {
                unknown += 1;
                "UNKNOWN"
            }
            RowStatus::Mismatch => {
                mismatched += 1;
                "MISMATCH"
            }
        };
        text.push_str(&format!(
            "{:<10} {:<8} {:<8} {:<8} {:<8} {:<20} {}\n",
            row.name,
            name_of(&finite.answer),
            name_of(&row.finite),
            name_of(&full.answer),
            name_of(&row.shadowing),
            name_of(&full.rule),
            label
        ));
        json_rows.push(json!({
            "graph": row.name,
            "finite_shadowing": finite.to_json(),
            "shadowing": full.to_json(),
            "expected": { "finite_shadowing": row.finite, "shadowing": row.shadowing },
            "status": label,
        }));
    }
    text.push_str(&format!("{matched}/{} match\n", rows.len()));
    let status = if mismatched > 0 {
        Status::No
    } else if unknown > 0 {
        Status::Unknown
    } else {
        Status::Yes
    };
    let json = json!({ "rows": json_rows, "matched": matched, "total": rows.len() });
    Ok(Output::new(status, text, json))
}

fn verify(certfile: &std::path::Path, graph: Option<&str>, sinks: bool) -> Result<Output> {
    let v = input::json_file(certfile)?;
    let g = match (graph, v.get("graph").and_then(Value::as_str)) {
        (Some(arg), _) => input::graph(arg, sinks)?,
        (None, Some(text)) => shadow_core::graph::parse_graph_with(
            text,
            shadow_core::graph::ParseOptions {
                allow_undecided_sinks: sinks,
            },
        )?,
        (None, None) => return Err(InputError::Usage("the certificate names no graph; pass --graph".into())),
    };
    let certificate = |c: &Value| -> Result<Certificate> {
        serde_json::from_value(c.clone()).map_err(|e| Error::Certificate(e.to_string()).into())
    };
    let mut labelled = Vec::new();
    if let (Some(f), Some(s)) = (v.get("finite_shadowing"), v.get("shadowing")) {
        labelled.push(("finite shadowing", Verdict::from_json(f)?.certificate));
        labelled.push(("shadowing", Verdict::from_json(s)?.certificate));
    } else if v.get("verdict").is_some() {
        labelled.push(("verdict", Verdict::from_json(&v)?.certificate));
    } else if let Some(c) = v.get("certificate") {
        labelled.push(("certificate", certificate(c)?));
    } else {
        return Err(InputError::Usage("no certificate found in the file".into()));
    }
    let mut text = String::new();
    let mut results = Vec::new();
    let mut all = true;
    for (label, c) in &labelled {
        let ok = verify_certificate(&g, c)?;
        all &= ok;
        text.push_str(&format!(
            "{label}: {} {}\n",
            name_of(c),
            if ok { "accepted" } else { "rejected" }
        ));
        results.push(json!({ "certificate": label, "kind": name_of(c), "accepted": ok }));
    }
    let status = if all { Status::Yes } else { Status::No };
    Ok(Output::new(
        status,
        text,
        json!({ "accepted": all, "results": results }),
    ))
}
