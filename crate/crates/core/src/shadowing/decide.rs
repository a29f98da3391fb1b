//! The decision cascade for finite shadowing and shadowing, and certificate checking.

use super::candidates::Slot;
use super::classify::{
    classify_ecifs, classify_wandering, find_attractor, verify_wandering_counterexample, AttractorResult,
    EcifsEvidence, EcifsVerdict, EcifsWitness, WanderingCounterexample, WanderingVerdict,
};
use super::conditions::{
    check_fpc_instance, check_ipc1_instance, fpc_slots, FailureReport, FpcResult, IpcResult, PeriodicFamily,
};
use super::search::{search_shadow_point, ShadowSearch};
use super::symbolic::{verify_ranking, RankingEvidence};
use super::SearchBounds;
use crate::dynamics::{check_shadowing, junction_compatible, Chain, PathFamily};
use crate::enumeration::{edge_rank, f_bound, Threshold};
use crate::error::{Error, Result};
use crate::graph::{identify_builtin, GraphPresentation, Vertex, VertexTerm};
use crate::path::InfinitePath;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Answer {
    Yes,
    No,
    Unknown,
}

/// Which argument a verdict rests on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Rule {
    FiniteGraph,
    Wandering,
    #[serde(rename = "ECIFS")]
    Ecifs,
    #[serde(rename = "AttractorNotECIFS")]
    AttractorNotEcifs,
    #[serde(rename = "FPCFailureInstance")]
    FpcFailureInstance,
    InstanceOnly,
    Inconclusive,
}

/// Classifier output that backs a verdict.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "evidence")]
pub enum Evidence {
    /// The presentation has finitely many edges.
    FiniteGraph {
        edges: u64,
    },
    /// The wandering classifier answered yes.
    Wandering,
    Ecifs(EcifsEvidence),
    /// `F_t` meets every infinite path, the follower sets are not eventually bounded, and
    /// a periodic family built from two late edges has no tail path avoiding `F_t`.
    AttractorNotEcifs {
        attractor: RankingEvidence,
        ecifs: EcifsWitness,
        #[serde(with = "crate::enumeration::decimal")]
        eps_exp: Threshold,
        #[serde(with = "crate::enumeration::decimal")]
        delta_exp: Threshold,
        family: PeriodicFamily,
        report: FailureReport,
    },
    /// Every edge is a loop at one vertex, so every sequence of edges is a path.
    SingleVertex {
        vertex: Vertex,
    },
    /// Every descending path in this example graph is forced, so each finite chain is
    /// followed by its first symbols and a descending completion.
    DescendingBuiltin {
        name: String,
    },
    /// Nothing was established; the notes record what each classifier reported.
    Inconclusive {
        notes: Vec<String>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Certificate {
    ShadowWitness {
        #[serde(with = "crate::enumeration::decimal")]
        eps_exp: Threshold,
        chain: Chain,
        point: InfinitePath,
    },
    NoWitnessWithin {
        #[serde(with = "crate::enumeration::decimal")]
        eps_exp: Threshold,
        chain: Chain,
        bounds: SearchBounds,
        exhaustive: bool,
    },
    #[serde(rename = "FPCInstanceFailure")]
    FpcInstanceFailure {
        #[serde(with = "crate::enumeration::decimal")]
        eps_exp: Threshold,
        #[serde(with = "crate::enumeration::decimal")]
        delta_exp: Threshold,
        family: PathFamily,
        slots: Vec<Slot>,
        report: FailureReport,
    },
    ClassifierEvidence {
        #[serde(flatten)]
        evidence: Evidence,
    },
}

impl Certificate {
    fn parameters(&self) -> (Option<&Threshold>, Option<&Threshold>) {
        match self {
            Certificate::ShadowWitness { eps_exp, chain, .. } | Certificate::NoWitnessWithin { eps_exp, chain, .. } => {
                (Some(eps_exp), Some(&chain.threshold))
            }
            Certificate::FpcInstanceFailure { eps_exp, delta_exp, .. } => (Some(eps_exp), Some(delta_exp)),
            Certificate::ClassifierEvidence { evidence } => match evidence {
                Evidence::AttractorNotEcifs { eps_exp, delta_exp, .. } => (Some(eps_exp), Some(delta_exp)),
                _ => (None, None),
            },
        }
    }

    fn exhaustive(&self) -> bool {
        match self {
            Certificate::ShadowWitness { .. } => true,
            Certificate::NoWitnessWithin { exhaustive, .. } => *exhaustive,
            Certificate::FpcInstanceFailure { report, .. } => report.exhaustive,
            Certificate::ClassifierEvidence { evidence } => match evidence {
                Evidence::AttractorNotEcifs { report, .. } => report.exhaustive,
                Evidence::Inconclusive { .. } => false,
                _ => true,
            },
        }
    }

    fn bounds(&self) -> Option<&SearchBounds> {
        match self {
            Certificate::NoWitnessWithin { bounds, .. } => Some(bounds),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub answer: Answer,
    pub rule: Rule,
    pub certificate: Certificate,
}

impl Verdict {
    fn new(answer: Answer, rule: Rule, evidence: Evidence) -> Self {
        Verdict {
            answer,
            rule,
            certificate: Certificate::ClassifierEvidence { evidence },
        }
    }

    /// Canonical JSON form with keys in sorted order.
    pub fn to_json(&self) -> Value {
        let (eps, delta) = self.certificate.parameters();
        json!({
            "verdict": self.answer,
            "rule": self.rule,
            "parameters": {
                "eps_exp": eps.map(ToString::to_string),
                "delta_exp": delta.map(ToString::to_string),
            },
            "witness": self.certificate,
            "bounds": self.certificate.bounds(),
            "exhaustive": self.certificate.exhaustive(),
        })
    }

    /// Read the form written by [`Verdict::to_json`].
    pub fn from_json(v: &Value) -> Result<Self> {
        let field = |k: &str| {
            v.get(k)
                .cloned()
                .ok_or_else(|| Error::Certificate(format!("missing field {k}")))
        };
        let parse = |e: serde_json::Error| Error::Certificate(e.to_string());
        Ok(Verdict {
            answer: serde_json::from_value(field("verdict")?).map_err(parse)?,
            rule: serde_json::from_value(field("rule")?).map_err(parse)?,
            certificate: serde_json::from_value(field("witness")?).map_err(parse)?,
        })
    }
}

fn single_vertex(g: &GraphPresentation) -> Option<Vertex> {
    let fixed = g.fixed_vertices();
    let indexed = g
        .families()
        .iter()
        .any(|f| matches!(f.source, VertexTerm::Indexed { .. }) || matches!(f.range, VertexTerm::Indexed { .. }));
    (fixed.len() == 1 && !indexed).then(|| fixed.into_iter().next().expect("one vertex"))
}

/// Decide finite shadowing and shadowing, in that order.
///
/// The cascade tries, in order: finitely many edges; wandering; ECIFS; an attractor `F_t`
/// without ECIFS, which refutes shadowing; then rules for recognised example graphs,
/// which rest on explicit instances. Anything left is `Unknown`.
pub fn decide_shadowing(g: &GraphPresentation, bounds: &SearchBounds) -> Result<(Verdict, Verdict)> {
    bounds.validate()?;
    if g.is_finite() {
        let v = Verdict::new(
            Answer::Yes,
            Rule::FiniteGraph,
            Evidence::FiniteGraph {
                edges: g.max_index().unwrap_or(0),
            },
        );
        return Ok((v.clone(), v));
    }
    let mut notes = Vec::new();
    match classify_wandering(g, bounds)? {
        WanderingVerdict::Yes => {
            let v = Verdict::new(Answer::Yes, Rule::Wandering, Evidence::Wandering);
            return Ok((v.clone(), v));
        }
        WanderingVerdict::No(c) => notes.push(format!("not wandering: {:?}", c.shape)),
        WanderingVerdict::Unknown(why) => notes.push(format!("wandering undecided: {why}")),
    }
    let ecifs = classify_ecifs(g)?;
    let ecifs_witness = match ecifs {
        EcifsVerdict::Yes(ev) => {
            let v = Verdict::new(Answer::Yes, Rule::Ecifs, Evidence::Ecifs(ev));
            return Ok((v.clone(), v));
        }
        EcifsVerdict::No(w) => {
            notes.push(format!("not ECIFS: {}", w.reason));
            w
        }
    };
    let mut shadowing = None;
    match find_attractor(g, bounds)? {
        AttractorResult::Found { threshold, ranking, .. } => match attractor_instance(g, &threshold, bounds)? {
            Some((delta_exp, family, report)) => {
                shadowing = Some(Verdict::new(
                    Answer::No,
                    Rule::AttractorNotEcifs,
                    Evidence::AttractorNotEcifs {
                        attractor: ranking,
                        ecifs: ecifs_witness,
                        eps_exp: threshold,
                        delta_exp,
                        family,
                        report,
                    },
                ));
            }
            None => notes.push("attractor found, but no failing two-edge periodic family".into()),
        },
        AttractorResult::NotFoundWithin { .. } => notes.push("no attractor F_t within the bounds".into()),
    }
    let finite = builtin_rule(g, bounds, &mut notes)?;
    let inconclusive = |notes: &Vec<String>| {
        Verdict::new(
            Answer::Unknown,
            Rule::Inconclusive,
            Evidence::Inconclusive { notes: notes.clone() },
        )
    };
    match (finite, shadowing) {
        (Some(f), Some(s)) => Ok((f, s)),
        (Some(f), None) => {
            let single = f.answer == Answer::Yes && f.rule == Rule::InstanceOnly && single_vertex(g).is_some();
            let s = if single || f.answer == Answer::No {
                f.clone()
            } else {
                inconclusive(&notes)
            };
            Ok((f, s))
        }
        (None, Some(s)) => Ok((inconclusive(&notes), s)),
        (None, None) => Ok((inconclusive(&notes), inconclusive(&notes))),
    }
}

/// Finite-shadowing verdicts for recognised example graphs.
fn builtin_rule(g: &GraphPresentation, bounds: &SearchBounds, notes: &mut Vec<String>) -> Result<Option<Verdict>> {
    if let Some(vertex) = single_vertex(g) {
        return Ok(Some(Verdict::new(
            Answer::Yes,
            Rule::InstanceOnly,
            Evidence::SingleVertex { vertex },
        )));
    }
    let instance = match identify_builtin(g) {
        Some("ef") => {
            return Ok(Some(Verdict::new(
                Answer::Yes,
                Rule::InstanceOnly,
                Evidence::DescendingBuiltin { name: "ef".into() },
            )))
        }
        Some("e2") => {
            let t_eps = edge_rank(g, 4)?;
            let n = (f_bound(g, &t_eps)? + 2) / 2 + 1;
            Some((t_eps.clone(), t_eps, vec![vec![3, 2 * n - 1], vec![2 * n, 4]]))
        }
        Some("e1var") => Some((
            Threshold::from(2u32),
            edge_rank(g, 3)?,
            vec![vec![1, 2, 4], vec![5, 3, 1]],
        )),
        _ => None,
    };
    let Some((eps_exp, delta_exp, paths)) = instance else {
        return Ok(None);
    };
    let family = PathFamily::new(paths);
    match check_fpc_instance(g, &eps_exp, &delta_exp, &family, bounds)? {
        FpcResult::Failure(report) if report.exhaustive => {
            let slots = fpc_slots(g, &family, &eps_exp)?;
            Ok(Some(Verdict {
                answer: Answer::No,
                rule: Rule::FpcFailureInstance,
                certificate: Certificate::FpcInstanceFailure {
                    eps_exp,
                    delta_exp,
                    family,
                    slots,
                    report,
                },
            }))
        }
        other => {
            notes.push(format!("prepared finite instance did not fail exhaustively: {other:?}"));
            Ok(None)
        }
    }
}

/// A constant periodic family `lambda^n = e_j e_l` with `e_l` following `e_j`, both
/// outside `F_delta` and starting at vertices of rank above `delta`, whose single
/// instance of the first infinite path condition fails at `eps`.
fn attractor_instance(
    g: &GraphPresentation,
    t_eps: &Threshold,
    bounds: &SearchBounds,
) -> Result<Option<(Threshold, PeriodicFamily, FailureReport)>> {
    let t_delta = t_eps.clone();
    let m = f_bound(g, &t_delta)?;
    for j in m + 1..=m + 256 {
        for l in g.followers(j)?.iter(g).filter(|&l| l > m).take(8) {
            if !junction_compatible(g, l, j, &t_delta)? {
                continue;
            }
            let family = PeriodicFamily {
                prefix: vec![],
                period: vec![vec![j, l]],
            };
            if let IpcResult::Failure(report) = check_ipc1_instance(g, t_eps, &t_delta, &family, bounds)? {
                if report.exhaustive {
                    return Ok(Some((t_delta, family, report)));
                }
            }
        }
    }
    Ok(None)
}

/// Re-check a certificate against the presentation.
///
/// Witnesses are checked exactly; structural evidence is rebuilt from the presentation
/// and compared; failure reports are reproduced by re-running the instance check they
/// describe.
pub fn verify_certificate(g: &GraphPresentation, cert: &Certificate) -> Result<bool> {
    match cert {
        Certificate::ShadowWitness { eps_exp, chain, point } => {
            if point.validate(g).is_err() || chain.validate_paths(g).is_err() {
                return Ok(false);
            }
            Ok(check_shadowing(g, point, chain, eps_exp)?.holds())
        }
        Certificate::NoWitnessWithin {
            eps_exp,
            chain,
            bounds,
            exhaustive,
        } => Ok(matches!(
            search_shadow_point(g, chain, eps_exp, bounds)?,
            ShadowSearch::NoWitnessWithin { exhaustive: e, .. } if e == *exhaustive
        )),
        Certificate::FpcInstanceFailure {
            eps_exp,
            delta_exp,
            family,
            slots,
            report,
        } => {
            if fpc_slots(g, family, eps_exp).ok().as_ref() != Some(slots) {
                return Ok(false);
            }
            let bounds = SearchBounds::default();
            Ok(match check_fpc_instance(g, eps_exp, delta_exp, family, &bounds) {
                Ok(FpcResult::Failure(r)) => {
                    r.exhaustive == report.exhaustive && r.junctions_compatible == report.junctions_compatible
                }
                _ => false,
            })
        }
        Certificate::ClassifierEvidence { evidence } => verify_evidence(g, evidence),
    }
}

fn verify_evidence(g: &GraphPresentation, evidence: &Evidence) -> Result<bool> {
    let bounds = SearchBounds::default();
    Ok(match evidence {
        Evidence::FiniteGraph { edges } => g.is_finite() && g.max_index() == Some(*edges),
        Evidence::Wandering => classify_wandering(g, &bounds)? == WanderingVerdict::Yes,
        Evidence::Ecifs(ev) => classify_ecifs(g)? == EcifsVerdict::Yes(ev.clone()),
        Evidence::AttractorNotEcifs {
            attractor,
            ecifs,
            eps_exp,
            delta_exp,
            family,
            report,
        } => {
            let ecifs_ok = match classify_ecifs(g)? {
                EcifsVerdict::No(w) => w == *ecifs && verify_ecifs_witness(g, ecifs)?,
                EcifsVerdict::Yes(_) => false,
            };
            let attractor_ok = f_bound(g, eps_exp)? == attractor.above && verify_ranking(g, attractor);
            let instance_ok = match check_ipc1_instance(g, eps_exp, delta_exp, family, &bounds) {
                Ok(IpcResult::Failure(r)) => r.exhaustive && r == *report,
                _ => false,
            };
            ecifs_ok && attractor_ok && instance_ok
        }
        Evidence::SingleVertex { vertex } => single_vertex(g).as_ref() == Some(vertex),
        Evidence::DescendingBuiltin { name } => identify_builtin(g) == Some(name.as_str()),
        Evidence::Inconclusive { .. } => true,
    })
}

fn verify_ecifs_witness(g: &GraphPresentation, w: &EcifsWitness) -> Result<bool> {
    if w.pairs.len() < 2 {
        return Ok(false);
    }
    for (a, b) in w.pairs.iter().zip(&w.pairs[1..]) {
        if b.0 <= a.0 || b.1 <= a.1 {
            return Ok(false);
        }
    }
    for &(j, l) in &w.pairs {
        if !g.followers(j)?.contains(g, l) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Re-check a wandering counterexample.
pub fn verify_wandering(g: &GraphPresentation, c: &WanderingCounterexample) -> Result<bool> {
    verify_wandering_counterexample(g, c)
}

/// The verdict pair a builtin is known to have.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExpectedVerdict {
    pub name: &'static str,
    pub finite: Answer,
    pub shadowing: Answer,
    /// The rule the shadowing verdict must rest on, when one is pinned.
    pub rule: Option<Rule>,
}

/// Known verdicts for every builtin, in [`crate::graph::builtin_names`] order.
pub fn expected_verdicts() -> Vec<ExpectedVerdict> {
    use Answer::*;
    let row = |name, finite, shadowing, rule| ExpectedVerdict {
        name,
        finite,
        shadowing,
        rule,
    };
    vec![
        row("rose", Yes, Yes, None),
        row("line", Yes, Yes, Some(Rule::Wandering)),
        row("renewal", Unknown, No, Some(Rule::AttractorNotEcifs)),
        row("follower", Yes, Yes, Some(Rule::Ecifs)),
        row("e2", No, No, Some(Rule::FpcFailureInstance)),
        row("ef", Yes, No, Some(Rule::AttractorNotEcifs)),
        row("e1var", No, No, Some(Rule::FpcFailureInstance)),
    ]
}
