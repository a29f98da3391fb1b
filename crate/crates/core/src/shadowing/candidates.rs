//! Candidate edges for one position of a constrained search.
//!
//! Two edges with the same source and range that both lie outside `F_eps` are
//! interchangeable in every witness, so a wildcard position only needs one representative
//! per (source, range) class plus any edge whose identity matters elsewhere. A family slice
//! whose members all share source and range is one class; a slice with a moving endpoint
//! has infinitely many classes and is sampled, which makes the search non-exhaustive.

use crate::error::Result;
use crate::graph::{GraphPresentation, Vertex, VertexTerm};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

/// Constraint on one position of a searched path.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Slot {
    /// Exactly this edge.
    Exact(u64),
    /// Any edge outside `F_eps`.
    Wild,
    /// Any edge at all.
    Any,
}

/// Slices with at most this many members are listed in full.
const FULL_LISTING: u64 = 64;

pub(crate) struct Candidates<'g> {
    g: &'g GraphPresentation,
    /// `F_eps = {e_1, ..., e_m}`.
    m: u64,
    /// Edges above `m` whose identity matters to the caller.
    mentioned: BTreeSet<u64>,
    reps: usize,
}

impl<'g> Candidates<'g> {
    pub(crate) fn new(g: &'g GraphPresentation, m: u64, mentioned: BTreeSet<u64>, reps: usize) -> Self {
        Candidates {
            g,
            m,
            mentioned: mentioned.into_iter().filter(|&e| e > m).collect(),
            reps: reps.max(1),
        }
    }

    /// Candidates in increasing index order and whether they cover every class.
    pub(crate) fn at(&self, current: Option<&Vertex>, slot: Slot) -> Result<(Vec<u64>, bool)> {
        match slot {
            Slot::Exact(e) => {
                let ok = match current {
                    None => self.g.resolve_edge(e).is_ok(),
                    Some(v) => self.g.resolve_edge(e).map(|x| &x.source == v).unwrap_or(false),
                };
                Ok((if ok { vec![e] } else { vec![] }, true))
            }
            Slot::Wild => self.wild(current),
            Slot::Any => {
                let (mut out, exhaustive) = self.wild(current)?;
                match current {
                    None => out.extend(1..=self.g.max_index().map_or(self.m, |t| t.min(self.m))),
                    Some(v) => out.extend(self.g.out_edges(v).indices_up_to(self.g, self.m)),
                }
                out.sort_unstable();
                out.dedup();
                Ok((out, exhaustive))
            }
        }
    }

    fn wild(&self, current: Option<&Vertex>) -> Result<(Vec<u64>, bool)> {
        let g = self.g;
        let mut out = BTreeSet::new();
        let mut exhaustive = true;
        match current {
            Some(v) => {
                let set = g.out_edges(v);
                out.extend(set.exceptional.iter().copied().filter(|&k| k > self.m));
                for s in &set.slices {
                    let fam = &g.families()[s.family];
                    let lo = s.lower.max(fam.first_param_above(self.m));
                    if s.upper.is_some_and(|u| u < lo) {
                        continue;
                    }
                    let one_class = matches!(fam.range, VertexTerm::Fixed(_)) || s.upper == Some(lo);
                    exhaustive &= self.take_slice(fam, lo, s.upper, one_class, &mut out);
                }
                for &e in &self.mentioned {
                    if g.source(e).map(|s| &s == v).unwrap_or(false) {
                        out.insert(e);
                    }
                }
            }
            None => {
                out.extend(g.exceptional_edges().iter().map(|e| e.index).filter(|&k| k > self.m));
                for fam in g.families() {
                    let lo = fam.lower.max(fam.first_param_above(self.m));
                    if fam.upper.is_some_and(|u| u < lo) {
                        continue;
                    }
                    let one_class =
                        matches!(fam.source, VertexTerm::Fixed(_)) && matches!(fam.range, VertexTerm::Fixed(_));
                    exhaustive &= self.take_slice(fam, lo, fam.upper, one_class, &mut out);
                }
                for &e in &self.mentioned {
                    if g.resolve_edge(e).is_ok() {
                        out.insert(e);
                    }
                }
            }
        }
        Ok((out.into_iter().collect(), exhaustive))
    }

    /// Add representatives of members `lo..=hi` of a family; returns whether they cover
    /// every (source, range) class of the slice.
    fn take_slice(
        &self,
        fam: &crate::graph::EdgeFamily,
        lo: u64,
        hi: Option<u64>,
        one_class: bool,
        out: &mut BTreeSet<u64>,
    ) -> bool {
        let mut n = lo;
        if one_class {
            loop {
                if hi.is_some_and(|h| n > h) {
                    return true;
                }
                let k = fam.index_at(n);
                if !self.mentioned.contains(&k) {
                    out.insert(k);
                    return true;
                }
                n += 1;
            }
        }
        if let Some(h) = hi {
            if h - lo < FULL_LISTING {
                for p in lo..=h {
                    out.insert(fam.index_at(p));
                }
                return true;
            }
        }
        for p in lo..lo + self.reps as u64 {
            if hi.is_some_and(|h| p > h) {
                break;
            }
            out.insert(fam.index_at(p));
        }
        false
    }
}
