//! Bounded search for a point that shadows a finite chain.

use super::candidates::{Candidates, Slot};
use super::{SearchBounds, NODE_BUDGET};
use crate::dynamics::{check_shadowing, complete_path, Chain};
use crate::enumeration::{f_bound, long_path_length, rank, vertex_within, Threshold};
use crate::error::{Error, Result};
use crate::graph::{GraphPresentation, Vertex};
use crate::path::{FinitePath, InfinitePath};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, HashMap};

/// Outcome of [`search_shadow_point`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ShadowSearch {
    /// A point whose shadowing of the chain has been checked exactly.
    Witness(InfinitePath),
    /// No point exists within the bounds. `exhaustive` means every class of candidate
    /// edges was covered and no depth or node limit was reached, so no point exists at all.
    NoWitnessWithin { bounds: SearchBounds, exhaustive: bool },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Status {
    Holds,
    Fails,
    Open,
}

struct Search<'a> {
    g: &'a GraphPresentation,
    t: &'a Threshold,
    /// `F_t = {e_1, ..., e_m}`.
    m: u64,
    /// Agreement on this many positions decides a comparison.
    window: usize,
    /// Leading symbols of each chain element.
    targets: Vec<Vec<u64>>,
    target_sources: Vec<Vertex>,
    cand: Candidates<'a>,
    above_t: HashMap<Vec<u64>, bool>,
    max_depth: usize,
    capped: bool,
    exhaustive: bool,
    nodes: usize,
}

/// Search for `x` with `d(shift^(i-1)(x), x^i) < 2^-t_eps` for every element of a finite
/// chain.
///
/// Comparison `i` is settled once `x_i .. x_(i+W-1)` is known, where every path of length
/// above `W` has rank above `t_eps`, so the search explores `x_1 .. x_(m+W-1)` depth first.
/// Edges outside `F_eps` are grouped into interchangeable classes; the edges of the chain
/// itself are always tried individually. A settled prefix is completed along least edges
/// and the completed point is re-checked exactly.
pub fn search_shadow_point(
    g: &GraphPresentation,
    c: &Chain,
    t_eps: &Threshold,
    bounds: &SearchBounds,
) -> Result<ShadowSearch> {
    bounds.validate()?;
    if !c.is_finite() || c.elements.is_empty() {
        return Err(Error::precondition("a non-empty finite chain is required"));
    }
    c.validate_paths(g)?;
    let m = f_bound(g, t_eps)?;
    let window = long_path_length(g, t_eps)?.saturating_sub(1);
    let targets: Vec<Vec<u64>> = c.elements.iter().map(|x| x.take(window.max(1))).collect();
    let target_sources = c.elements.iter().map(|x| x.source(g)).collect::<Result<Vec<_>>>()?;
    let mentioned: BTreeSet<u64> = targets.iter().flatten().copied().collect();
    let needed = c.elements.len() + window.saturating_sub(1);
    let max_depth = needed.min(c.elements.len() + bounds.max_path_len).max(1);
    let mut s = Search {
        g,
        t: t_eps,
        m,
        window,
        targets,
        target_sources,
        cand: Candidates::new(g, m, mentioned, bounds.max_family_reps),
        above_t: HashMap::new(),
        max_depth,
        capped: false,
        exhaustive: true,
        nodes: 0,
    };
    let mut x = Vec::new();
    if let Some(p) = s.dfs(&mut x, c)? {
        return Ok(ShadowSearch::Witness(p));
    }
    Ok(ShadowSearch::NoWitnessWithin {
        bounds: bounds.clone(),
        exhaustive: s.exhaustive && !s.capped,
    })
}

impl<'a> Search<'a> {
    fn dfs(&mut self, x: &mut Vec<u64>, c: &Chain) -> Result<Option<InfinitePath>> {
        self.nodes += 1;
        if self.nodes > NODE_BUDGET {
            self.capped = true;
            return Ok(None);
        }
        let mut all_hold = !x.is_empty();
        for i in 1..=self.targets.len().min(x.len()) {
            match self.status(i, x)? {
                Status::Fails => return Ok(None),
                Status::Open => all_hold = false,
                Status::Holds => {}
            }
        }
        if all_hold && x.len() >= self.targets.len() {
            let p = complete_path(self.g, x, None)?;
            if check_shadowing(self.g, &p, c, self.t)?.holds() {
                return Ok(Some(p));
            }
        }
        if x.len() >= self.max_depth {
            self.capped = true;
            return Ok(None);
        }
        let current = match x.last() {
            Some(&e) => Some(self.g.range(e)?),
            None => None,
        };
        let (options, complete) = self.cand.at(current.as_ref(), Slot::Any)?;
        self.exhaustive &= complete;
        for e in options {
            x.push(e);
            let found = self.dfs(x, c)?;
            x.pop();
            if found.is_some() {
                return Ok(found);
            }
        }
        Ok(None)
    }

    /// Whether `d(shift^(i-1)(x), x^i) < 2^-t` is settled by the known prefix of `x`.
    fn status(&mut self, i: usize, x: &[u64]) -> Result<Status> {
        let a = &x[i - 1..];
        let sa = self.g.source(a[0])?;
        let sb = &self.target_sources[i - 1];
        if &sa != sb {
            let far = !vertex_within(self.g, &sa, self.t)? && !vertex_within(self.g, sb, self.t)?;
            return Ok(if far { Status::Holds } else { Status::Fails });
        }
        let b = self.targets[i - 1].clone();
        for q in 0..a.len().min(b.len()) {
            if a[q] != b[q] {
                let far = self.above(&a[..=q])? && self.above(&b[..=q])?;
                return Ok(if far { Status::Holds } else { Status::Fails });
            }
        }
        if a.len() >= self.window {
            Ok(Status::Holds)
        } else {
            Ok(Status::Open)
        }
    }

    /// Whether the path has rank above `t`.
    fn above(&mut self, p: &[u64]) -> Result<bool> {
        if p.iter().any(|&e| e > self.m) {
            return Ok(true);
        }
        if let Some(&v) = self.above_t.get(p) {
            return Ok(v);
        }
        let v = &rank(self.g, &FinitePath::Edges(p.to_vec()))? > self.t;
        self.above_t.insert(p.to_vec(), v);
        Ok(v)
    }
}
