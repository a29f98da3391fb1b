//! Structural classifiers: wandering, eventually constant in-finite sets of followers
//! (ECIFS), and attractors of the form `F_t`.

use super::symbolic::{no_infinite_path_above, series_acyclic_backwards, RankingEvidence};
use super::SearchBounds;
use crate::enumeration::{edge_rank, f_bound, Threshold};
use crate::error::Result;
use crate::graph::{GraphPresentation, VertexTerm};
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

/// Generator of paths `gamma` with first edge leaving every `F_delta` and last edge in a
/// fixed `F_eps`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum WitnessShape {
    /// `gamma(n) = F(n) e_end`: an infinite family all of whose edges end at one vertex.
    FixedRange { family: usize, end_edge: u64 },
    /// `gamma(q) = F(n0 + q*step) ... F(n0 + step) F(n0) e_end`: a family that descends
    /// inside one series and chains with itself.
    SelfChaining {
        family: usize,
        start: u64,
        step: u64,
        end_edge: u64,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WanderingCounterexample {
    #[serde(with = "crate::enumeration::decimal")]
    pub eps_exp: Threshold,
    pub shape: WitnessShape,
    /// The first few generated paths, with strictly increasing first edges.
    pub samples: Vec<Vec<u64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum WanderingVerdict {
    Yes,
    No(WanderingCounterexample),
    Unknown(String),
}

/// Decide whether only finitely many paths end at each edge, in the sense that for every
/// `eps` some `delta` makes every finite path starting outside `F_delta` end outside
/// `F_eps`.
///
/// `Yes` requires finite in-degrees (no infinite family with a constant range) and no
/// cycle through a series node once in-series edges that raise or keep the index are
/// dropped. `No` comes with a generator of violating paths.
pub fn classify_wandering(g: &GraphPresentation, bounds: &SearchBounds) -> Result<WanderingVerdict> {
    bounds.validate()?;
    if g.is_finite() {
        return Ok(WanderingVerdict::Yes);
    }
    let samples = bounds.max_family_reps.max(3);
    for (fi, fam) in g.families().iter().enumerate() {
        if let (true, VertexTerm::Fixed(w)) = (fam.is_infinite(), &fam.range) {
            let end = g.min_out_edge(w).expect("presentations have no sinks");
            let shape = WitnessShape::FixedRange {
                family: fi,
                end_edge: end,
            };
            return Ok(WanderingVerdict::No(counterexample(g, shape, samples)?));
        }
    }
    if series_acyclic_backwards(g) {
        return Ok(WanderingVerdict::Yes);
    }
    for fi in 0..g.families().len() {
        if let Some(shape) = self_chaining(g, fi) {
            return Ok(WanderingVerdict::No(counterexample(g, shape, samples)?));
        }
    }
    Ok(WanderingVerdict::Unknown(
        "a cycle through a series node does not reduce to a self-chaining family".into(),
    ))
}

fn self_chaining(g: &GraphPresentation, fi: usize) -> Option<WitnessShape> {
    let fam = &g.families()[fi];
    if !fam.is_infinite() {
        return None;
    }
    match (&fam.source, &fam.range) {
        (VertexTerm::Indexed { series: s, index: a }, VertexTerm::Indexed { series: r, index: b })
            if s == r && a.a == b.a && a.b > b.b && (a.b - b.b) % a.a == 0 =>
        {
            let start = fam.lower;
            let end = g.min_out_edge(&fam.range.at(start))?;
            Some(WitnessShape::SelfChaining {
                family: fi,
                start,
                step: ((a.b - b.b) / a.a) as u64,
                end_edge: end,
            })
        }
        _ => None,
    }
}

fn generate(g: &GraphPresentation, shape: &WitnessShape, q: usize) -> Vec<u64> {
    match *shape {
        WitnessShape::FixedRange { family, end_edge } => {
            let fam = &g.families()[family];
            vec![fam.index_at(fam.lower + q as u64), end_edge]
        }
        WitnessShape::SelfChaining {
            family,
            start,
            step,
            end_edge,
        } => {
            let fam = &g.families()[family];
            let mut out: Vec<u64> = (0..=q as u64).rev().map(|j| fam.index_at(start + j * step)).collect();
            out.push(end_edge);
            out
        }
    }
}

fn counterexample(g: &GraphPresentation, shape: WitnessShape, samples: usize) -> Result<WanderingCounterexample> {
    let end = match shape {
        WitnessShape::FixedRange { end_edge, .. } | WitnessShape::SelfChaining { end_edge, .. } => end_edge,
    };
    Ok(WanderingCounterexample {
        eps_exp: edge_rank(g, end)?,
        samples: (0..samples).map(|q| generate(g, &shape, q)).collect(),
        shape,
    })
}

/// Re-check a wandering counterexample: the generator is rebuilt from the presentation,
/// every sample is a path ending in `F_eps`, and first edges strictly increase.
pub(crate) fn verify_wandering_counterexample(g: &GraphPresentation, c: &WanderingCounterexample) -> Result<bool> {
    let rebuilt = match c.shape {
        WitnessShape::FixedRange { family, end_edge } => {
            let Some(fam) = g.families().get(family) else {
                return Ok(false);
            };
            let VertexTerm::Fixed(w) = &fam.range else {
                return Ok(false);
            };
            fam.is_infinite() && g.out_edges(w).contains(g, end_edge)
        }
        WitnessShape::SelfChaining { family, .. } => {
            family < g.families().len() && self_chaining(g, family).as_ref() == Some(&c.shape)
        }
    };
    if !rebuilt || c.samples.is_empty() {
        return Ok(false);
    }
    let m = f_bound(g, &c.eps_exp)?;
    let mut prev = 0;
    for (q, s) in c.samples.iter().enumerate() {
        if *s != generate(g, &c.shape, q) || g.is_path(s).is_err() {
            return Ok(false);
        }
        if *s.last().expect("non-empty") > m || s[0] <= prev {
            return Ok(false);
        }
        prev = s[0];
    }
    Ok(true)
}

/// Data from which the ECIFS constant is recomputed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EcifsEvidence {
    pub k: u64,
    /// Above this index every edge is a generic member of an infinite family.
    pub horizon: u64,
    /// Largest follower of any edge past the horizon.
    pub tail_bound: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EcifsWitness {
    pub reason: String,
    /// Pairs `(j, l)` with `e_l` following `e_j`, both coordinates increasing.
    pub pairs: Vec<(u64, u64)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum EcifsVerdict {
    Yes(EcifsEvidence),
    No(EcifsWitness),
}

/// Decide whether some `k` makes every follower of every edge `e_j` with `j > k` lie in
/// `{e_1, ..., e_k}`.
pub fn classify_ecifs(g: &GraphPresentation) -> Result<EcifsVerdict> {
    let mut tail_bound = 0u64;
    for fam in g.families().iter().filter(|f| f.is_infinite()) {
        match &fam.range {
            VertexTerm::Indexed { .. } => {
                let pairs = increasing_pairs((0..64).map(|q| {
                    let n = fam.lower + q;
                    (fam.index_at(n), g.min_out_edge(&fam.range.at(n)).expect("no sinks"))
                }));
                return Ok(EcifsVerdict::No(EcifsWitness {
                    reason: format!(
                        "edges e[{}] end at distinct vertices {}, whose out-edges are all distinct",
                        fam.edge_index.render(&fam.var),
                        fam.range.render(&fam.var)
                    ),
                    pairs,
                }));
            }
            VertexTerm::Fixed(w) => {
                let out = g.out_edges(w);
                match out.max_index(g) {
                    Some(b) if out.is_finite() => tail_bound = tail_bound.max(b),
                    _ => {
                        let pairs = increasing_pairs(
                            out.iter(g)
                                .take(4)
                                .enumerate()
                                .map(|(q, l)| (fam.index_at(fam.lower + q as u64), l)),
                        );
                        return Ok(EcifsVerdict::No(EcifsWitness {
                            reason: format!(
                                "edges e[{}] end at {w}, which has infinitely many out-edges",
                                fam.edge_index.render(&fam.var)
                            ),
                            pairs,
                        }));
                    }
                }
            }
        }
    }
    let horizon = g.structural_horizon();
    let mut follower_max = Vec::with_capacity(horizon as usize);
    for j in 1..=horizon {
        let f = g.followers(j)?;
        follower_max.push(if f.is_finite() { f.max_index(g) } else { None });
    }
    let k = (1..=horizon.max(tail_bound).max(1))
        .find(|&k| tail_bound <= k && (k + 1..=horizon).all(|j| follower_max[(j - 1) as usize].is_some_and(|m| m <= k)))
        .expect("k = max(horizon, tail bound) always qualifies");
    Ok(EcifsVerdict::Yes(EcifsEvidence { k, horizon, tail_bound }))
}

/// The first four pairs of a sequence that increase in both coordinates.
fn increasing_pairs(pairs: impl Iterator<Item = (u64, u64)>) -> Vec<(u64, u64)> {
    let mut out: Vec<(u64, u64)> = Vec::new();
    for (j, l) in pairs {
        if out.last().is_none_or(|&(a, b)| j > a && l > b) {
            out.push((j, l));
            if out.len() == 4 {
                break;
            }
        }
    }
    out
}

/// Outcome of [`find_attractor`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum AttractorResult {
    /// `F_threshold = {e_1, ..., e_(ranking.above)}` meets every infinite path.
    Found {
        edges: Vec<u64>,
        #[serde(with = "crate::enumeration::decimal")]
        threshold: Threshold,
        ranking: RankingEvidence,
    },
    NotFoundWithin {
        bounds: SearchBounds,
    },
}

/// Smallest `F_t` (scanning `t = 1, 2, ...`) that every infinite path meets, certified by
/// a ranking of the graph without `F_t`.
pub fn find_attractor(g: &GraphPresentation, bounds: &SearchBounds) -> Result<AttractorResult> {
    bounds.validate()?;
    let top = bounds.max_threshold_exp.to_u64().unwrap_or(u64::MAX);
    let mut last = None;
    let mut t = 1u64;
    while t <= top {
        let th = Threshold::from(t);
        let m = f_bound(g, &th)?;
        if m > 0 && last != Some(m) {
            if let Some(ranking) = no_infinite_path_above(g, m)? {
                return Ok(AttractorResult::Found {
                    edges: (1..=m).collect(),
                    threshold: th,
                    ranking,
                });
            }
            last = Some(m);
        }
        if g.max_index().is_some_and(|top_edge| m >= top_edge) {
            break;
        }
        t += 1;
    }
    Ok(AttractorResult::NotFoundWithin { bounds: bounds.clone() })
}
