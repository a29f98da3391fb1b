//! Checkers for single instances of the finite and infinite path conditions.
//!
//! An instance fixes `eps`, `delta` and a family of paths. The family prescribes, position
//! by position, either an exact edge of `F_eps` or "some edge outside `F_eps`"; a witness
//! is a path meeting every prescription.

use super::candidates::{Candidates, Slot};
use super::symbolic::{no_infinite_path_above, RankingEvidence};
use super::{SearchBounds, NODE_BUDGET};
use crate::dynamics::{check_family_conditions, f_index, first_incompatible_junction, FamilyKind, PathFamily};
use crate::enumeration::{f_bound, Threshold};
use crate::error::{Error, Result};
use crate::graph::{GraphPresentation, Vertex};
use crate::path::{FinitePath, InfinitePath};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

/// Why an instance has no witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FailureReport {
    /// Every candidate class was covered, so no witness exists at all.
    pub exhaustive: bool,
    pub reason: String,
    /// Whether the family's junctions are compatible at `delta`; an incompatible family
    /// still defines an instance but does not come from a `delta`-chain.
    pub junctions_compatible: bool,
    /// Present when failure follows from the graph without `F_eps` having no infinite path.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ranking: Option<RankingEvidence>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FpcResult {
    WitnessPath(FinitePath),
    Failure(FailureReport),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum IpcResult {
    WitnessPath(InfinitePath),
    Failure(FailureReport),
}

impl FpcResult {
    pub fn is_witness(&self) -> bool {
        matches!(self, FpcResult::WitnessPath(_))
    }
}

impl IpcResult {
    pub fn is_witness(&self) -> bool {
        matches!(self, IpcResult::WitnessPath(_))
    }
}

/// The periodic family `prefix, period, period, ...`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodicFamily {
    pub prefix: Vec<Vec<u64>>,
    pub period: Vec<Vec<u64>>,
}

impl PeriodicFamily {
    /// Parse `<prefix paths> | period: <period paths>`, each side a family literal.
    pub fn parse(text: &str) -> Result<PeriodicFamily> {
        let (head, tail) = text
            .split_once('|')
            .ok_or_else(|| Error::literal(text, "expected `| period:`"))?;
        let tail = tail.trim();
        let body = tail
            .strip_prefix("period:")
            .ok_or_else(|| Error::literal(tail, "expected `period:`"))?;
        let period = PathFamily::parse(body)?.paths;
        if period.is_empty() {
            return Err(Error::literal(text, "the period needs at least one path"));
        }
        Ok(PeriodicFamily {
            prefix: PathFamily::parse(head)?.paths,
            period,
        })
    }

    /// The literal accepted by [`PeriodicFamily::parse`].
    pub fn literal(&self) -> String {
        let side = |ps: &[Vec<u64>]| PathFamily::new(ps.to_vec()).literal();
        format!("{} | period: {}", side(&self.prefix), side(&self.period))
            .trim_start()
            .to_string()
    }

    /// The prefix followed by two copies of the period, which exposes every junction.
    pub fn unrolled(&self) -> PathFamily {
        PathFamily::new(
            self.prefix
                .iter()
                .chain(&self.period)
                .chain(&self.period)
                .cloned()
                .collect(),
        )
    }
}

fn slot_of(e: u64, m: u64) -> Slot {
    if e <= m {
        Slot::Exact(e)
    } else {
        Slot::Wild
    }
}

/// Prescriptions `lambda_(f(i,n))` for a finite family, one per position.
pub fn fpc_slots(g: &GraphPresentation, family: &PathFamily, t_eps: &Threshold) -> Result<Vec<Slot>> {
    let m = f_bound(g, t_eps)?;
    let lengths = family.lengths();
    let total = f_index(&lengths, lengths.len(), *lengths.last().expect("non-empty"))?;
    let mut out = Vec::with_capacity(total);
    for (i, p) in family.paths.iter().enumerate() {
        let upto = if i + 1 == family.len() { p.len() } else { p.len() - 1 };
        out.extend(p[..upto].iter().map(|&e| slot_of(e, m)));
    }
    debug_assert_eq!(out.len(), total);
    Ok(out)
}

/// Prescriptions for the positions `f(i, n)` with `n < |lambda^i|` of a family followed by
/// a tail.
fn tail_family_slots(family: &[Vec<u64>], m: u64) -> Vec<Slot> {
    family
        .iter()
        .flat_map(|p| p[..p.len() - 1].iter().map(move |&e| slot_of(e, m)))
        .collect()
}

fn check_order(t_eps: &Threshold, t_delta: &Threshold) -> Result<()> {
    if t_delta < t_eps {
        return Err(Error::precondition(
            "delta must not exceed eps: t_delta >= t_eps is required",
        ));
    }
    Ok(())
}

/// One instance of the finite path condition: is there a finite path `lambda` with
/// `lambda_(f(i,n)) = lambda^i_n` whenever `lambda^i_n` lies in `F_eps`, and
/// `lambda_(f(i,n))` outside `F_eps` otherwise?
pub fn check_fpc_instance(
    g: &GraphPresentation,
    t_eps: &Threshold,
    t_delta: &Threshold,
    family: &PathFamily,
    bounds: &SearchBounds,
) -> Result<FpcResult> {
    bounds.validate()?;
    check_order(t_eps, t_delta)?;
    check_family_conditions(g, family, t_delta, FamilyKind::Finite)?;
    let m = f_bound(g, t_eps)?;
    let slots = fpc_slots(g, family, t_eps)?;
    let junctions_compatible = first_incompatible_junction(g, family, None, t_delta)?.is_none();
    let cand = Candidates::new(g, m, BTreeSet::new(), bounds.max_family_reps);
    let mut walk = Walk::new(g, &cand);
    let mut x = Vec::new();
    if walk.finite(&slots, &mut x)? {
        return Ok(FpcResult::WitnessPath(FinitePath::Edges(x)));
    }
    Ok(FpcResult::Failure(FailureReport {
        exhaustive: walk.exhaustive && !walk.capped,
        reason: format!(
            "no path of length {} meets the prescriptions {}",
            slots.len(),
            render_slots(&slots)
        ),
        junctions_compatible,
        ranking: None,
    }))
}

/// One instance of the first infinite path condition for a periodic family.
pub fn check_ipc1_instance(
    g: &GraphPresentation,
    t_eps: &Threshold,
    t_delta: &Threshold,
    family: &PeriodicFamily,
    bounds: &SearchBounds,
) -> Result<IpcResult> {
    bounds.validate()?;
    check_order(t_eps, t_delta)?;
    if family.period.is_empty() {
        return Err(Error::precondition("the periodic block must be non-empty"));
    }
    let unrolled = family.unrolled();
    check_family_conditions(g, &unrolled, t_delta, FamilyKind::WithTail)?;
    let junctions_compatible = first_incompatible_junction(g, &unrolled, None, t_delta)?.is_none();
    let m = f_bound(g, t_eps)?;
    let prefix = tail_family_slots(&family.prefix, m);
    let period = tail_family_slots(&family.period, m);
    lasso_instance(g, m, prefix, period, junctions_compatible, bounds)
}

/// One instance of the second infinite path condition: a finite family followed by the
/// eventually periodic tail `gamma`. An empty family leaves only the tail's prescriptions.
pub fn check_ipc2_instance(
    g: &GraphPresentation,
    t_eps: &Threshold,
    t_delta: &Threshold,
    family: &PathFamily,
    gamma: &InfinitePath,
    bounds: &SearchBounds,
) -> Result<IpcResult> {
    bounds.validate()?;
    check_order(t_eps, t_delta)?;
    gamma.validate(g)?;
    let m_delta = f_bound(g, t_delta)?;
    if gamma.first() <= m_delta {
        return Err(Error::precondition(format!(
            "gamma_1 = e{} lies in F_delta",
            gamma.first()
        )));
    }
    let mut junctions_compatible = true;
    if !family.is_empty() {
        check_family_conditions(g, family, t_delta, FamilyKind::WithTail)?;
        junctions_compatible = first_incompatible_junction(g, family, Some(gamma.first()), t_delta)?.is_none();
    }
    let m = f_bound(g, t_eps)?;
    let mut prefix = tail_family_slots(&family.paths, m);
    prefix.extend(gamma.prefix().iter().map(|&e| slot_of(e, m)));
    let period = if gamma.drift() == 0 {
        gamma.cycle().iter().map(|&e| slot_of(e, m)).collect()
    } else {
        let mut rep: Vec<u64> = gamma.cycle().to_vec();
        while rep.iter().any(|&e| e <= m) {
            prefix.extend(rep.iter().map(|&e| slot_of(e, m)));
            rep.iter_mut().for_each(|e| *e += gamma.drift());
        }
        vec![Slot::Wild; rep.len()]
    };
    lasso_instance(g, m, prefix, period, junctions_compatible, bounds)
}

fn lasso_instance(
    g: &GraphPresentation,
    m: u64,
    prefix: Vec<Slot>,
    period: Vec<Slot>,
    junctions_compatible: bool,
    bounds: &SearchBounds,
) -> Result<IpcResult> {
    if period.iter().all(|s| *s == Slot::Wild) {
        if let Some(ranking) = no_infinite_path_above(g, m)? {
            return Ok(IpcResult::Failure(FailureReport {
                exhaustive: true,
                reason: format!(
                    "the tail must avoid e1..e{m} forever, but the graph without those edges has no infinite path"
                ),
                junctions_compatible,
                ranking: Some(ranking),
            }));
        }
    }
    let cand = Candidates::new(g, m, BTreeSet::new(), bounds.max_family_reps);
    let mut walk = Walk::new(g, &cand);
    let q = period.len();
    let rounds = 4usize.max((2 * bounds.max_path_len).div_ceil(q));
    let mut lasso = Lasso {
        prefix: &prefix,
        period: &period,
        max_len: prefix.len() + rounds * q,
        reached_one_round: false,
    };
    let mut x = Vec::new();
    if let Some(p) = walk.lasso(&mut lasso, &mut x)? {
        return Ok(IpcResult::WitnessPath(p));
    }
    let exhaustive = walk.exhaustive && !walk.capped && !lasso.reached_one_round;
    let reason = if lasso.reached_one_round {
        format!(
            "paths meet the prescriptions {} | ({})* for a while, but none closes into a cycle or drift within {} positions",
            render_slots(&prefix),
            render_slots(&period),
            lasso.max_len
        )
    } else {
        format!(
            "no path meets the prescriptions {} followed by one round of ({})",
            render_slots(&prefix),
            render_slots(&period)
        )
    };
    Ok(IpcResult::Failure(FailureReport {
        exhaustive,
        reason,
        junctions_compatible,
        ranking: None,
    }))
}

pub(crate) fn render_slots(slots: &[Slot]) -> String {
    let items: Vec<String> = slots
        .iter()
        .map(|s| match s {
            Slot::Exact(e) => format!("e{e}"),
            Slot::Wild => "*".to_string(),
            Slot::Any => "?".to_string(),
        })
        .collect();
    items.join(" ")
}

struct Lasso<'s> {
    prefix: &'s [Slot],
    period: &'s [Slot],
    max_len: usize,
    reached_one_round: bool,
}

impl Lasso<'_> {
    fn slot(&self, pos: usize) -> Slot {
        if pos < self.prefix.len() {
            self.prefix[pos]
        } else {
            self.period[(pos - self.prefix.len()) % self.period.len()]
        }
    }
}

struct Walk<'a> {
    g: &'a GraphPresentation,
    cand: &'a Candidates<'a>,
    exhaustive: bool,
    capped: bool,
    nodes: usize,
}

impl<'a> Walk<'a> {
    fn new(g: &'a GraphPresentation, cand: &'a Candidates<'a>) -> Self {
        Walk {
            g,
            cand,
            exhaustive: true,
            capped: false,
            nodes: 0,
        }
    }

    fn options(&mut self, x: &[u64], slot: Slot) -> Result<Vec<u64>> {
        let current = match x.last() {
            Some(&e) => Some(self.g.range(e)?),
            None => None,
        };
        let (opts, complete) = self.cand.at(current.as_ref(), slot)?;
        self.exhaustive &= complete;
        Ok(opts)
    }

    fn tick(&mut self) -> bool {
        self.nodes += 1;
        if self.nodes > NODE_BUDGET {
            self.capped = true;
        }
        !self.capped
    }

    /// Depth-first search for a finite path meeting every slot.
    fn finite(&mut self, slots: &[Slot], x: &mut Vec<u64>) -> Result<bool> {
        if !self.tick() {
            return Ok(false);
        }
        if x.len() == slots.len() {
            return Ok(true);
        }
        for e in self.options(x, slots[x.len()])? {
            x.push(e);
            if self.finite(slots, x)? {
                return Ok(true);
            }
            x.pop();
        }
        Ok(false)
    }

    /// Depth-first search for an eventually periodic or drifting path meeting the
    /// prescriptions, closing only at boundaries between rounds of the period.
    fn lasso(&mut self, l: &mut Lasso<'_>, x: &mut Vec<u64>) -> Result<Option<InfinitePath>> {
        if !self.tick() {
            return Ok(None);
        }
        let p = l.prefix.len();
        let q = l.period.len();
        if x.len() >= p + q && (x.len() - p).is_multiple_of(q) {
            l.reached_one_round = true;
            if let Some(found) = self.close(x, p, q)? {
                return Ok(Some(found));
            }
        }
        if x.len() >= l.max_len {
            self.capped = true;
            return Ok(None);
        }
        for e in self.options(x, l.slot(x.len()))? {
            x.push(e);
            let found = self.lasso(l, x)?;
            x.pop();
            if found.is_some() {
                return Ok(found);
            }
        }
        Ok(None)
    }

    fn vertex_at(&self, x: &[u64], pos: usize) -> Result<Vertex> {
        if pos == 0 {
            self.g.source(x[0])
        } else {
            self.g.range(x[pos - 1])
        }
    }

    /// Close the walk at its last round boundary into a cycle or a drift, if possible.
    fn close(&self, x: &[u64], p: usize, q: usize) -> Result<Option<InfinitePath>> {
        let j = (x.len() - p) / q;
        let end = self.vertex_at(x, x.len())?;
        for i in (0..j).rev() {
            let b = p + i * q;
            if self.vertex_at(x, b)? == end {
                let cand = InfinitePath::periodic(x[..b].to_vec(), x[b..].to_vec())?;
                if cand.validate(self.g).is_ok() {
                    return Ok(Some(cand));
                }
            }
        }
        for i in (0..j).rev() {
            if !(j - i).is_multiple_of(2) {
                continue;
            }
            let r = (j - i) / 2;
            let a = &x[p + i * q..p + (i + r) * q];
            let bseg = &x[p + (i + r) * q..x.len()];
            if bseg[0] <= a[0] {
                continue;
            }
            let d = bseg[0] - a[0];
            if a.iter().zip(bseg).all(|(&u, &v)| v == u + d) {
                let cand = InfinitePath::new(x[..p + i * q].to_vec(), a.to_vec(), d)?;
                if cand.validate(self.g).is_ok() {
                    return Ok(Some(cand));
                }
            }
        }
        Ok(None)
    }
}
