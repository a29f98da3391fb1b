//! Finite paths and eventually periodic infinite paths.
//!
//! An infinite path is stored as `prefix . (cycle)^omega` where each repetition of the
//! cycle adds `drift` to every edge index. With `drift = 0` this is the usual eventually
//! periodic word; a positive drift describes paths such as `e1 e2 e3 ...` that climb an
//! infinite ladder. The literal syntax is `e1.e2:(e3.e4)` and `e1:(e2)+1` for a drift.

use crate::affine::lcm;
use crate::error::{Error, Result};
use crate::graph::{GraphPresentation, Vertex};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// A finite path: a single vertex (length 0) or a non-empty edge sequence.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FinitePath {
    Vertex(Vertex),
    Edges(Vec<u64>),
}

impl FinitePath {
    pub fn len(&self) -> usize {
        match self {
            FinitePath::Vertex(_) => 0,
            FinitePath::Edges(e) => e.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn edges(&self) -> &[u64] {
        match self {
            FinitePath::Vertex(_) => &[],
            FinitePath::Edges(e) => e,
        }
    }

    pub fn first(&self) -> Option<u64> {
        self.edges().first().copied()
    }

    pub fn last(&self) -> Option<u64> {
        self.edges().last().copied()
    }

    /// Largest edge index occurring in the path; zero for a vertex.
    pub fn max_index(&self) -> u64 {
        self.edges().iter().copied().max().unwrap_or(0)
    }

    pub fn source(&self, g: &GraphPresentation) -> Result<Vertex> {
        match self {
            FinitePath::Vertex(v) => Ok(v.clone()),
            FinitePath::Edges(e) => g.source(e[0]),
        }
    }

    pub fn terminal(&self, g: &GraphPresentation) -> Result<Vertex> {
        match self {
            FinitePath::Vertex(v) => Ok(v.clone()),
            FinitePath::Edges(e) => g.range(*e.last().expect("non-empty")),
        }
    }

    /// Check that the path exists in `g`; a vertex must be the source of some edge.
    pub fn validate(&self, g: &GraphPresentation) -> Result<()> {
        match self {
            FinitePath::Vertex(v) => {
                if g.min_out_edge(v).is_none() {
                    return Err(Error::InvalidPath(format!("{v} is not a vertex with outgoing edges")));
                }
                Ok(())
            }
            FinitePath::Edges(e) => {
                if e.is_empty() {
                    return Err(Error::InvalidPath("empty edge sequence".into()));
                }
                g.is_path(e)
            }
        }
    }
}

impl fmt::Display for FinitePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FinitePath::Vertex(v) => write!(f, "{v}"),
            FinitePath::Edges(e) => f.write_str(&join_edges(e)),
        }
    }
}

impl FromStr for FinitePath {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if looks_like_edges(s) {
            return Ok(FinitePath::Edges(parse_edges(s)?));
        }
        Ok(FinitePath::Vertex(s.parse()?))
    }
}

/// An infinite path `prefix . cycle . (cycle + drift) . (cycle + 2 drift) ...`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct InfinitePath {
    prefix: Vec<u64>,
    cycle: Vec<u64>,
    drift: u64,
}

impl InfinitePath {
    /// Build and canonicalise; fails only on an empty cycle or a zero index.
    pub fn new(prefix: Vec<u64>, cycle: Vec<u64>, drift: u64) -> Result<Self> {
        if cycle.is_empty() {
            return Err(Error::InvalidPath("the periodic part must be non-empty".into()));
        }
        if prefix.iter().chain(&cycle).any(|&k| k == 0) {
            return Err(Error::InvalidPath("edge indices start at 1".into()));
        }
        let mut p = InfinitePath { prefix, cycle, drift };
        p.canonicalise();
        Ok(p)
    }

    pub fn periodic(prefix: Vec<u64>, cycle: Vec<u64>) -> Result<Self> {
        Self::new(prefix, cycle, 0)
    }

    pub fn prefix(&self) -> &[u64] {
        &self.prefix
    }

    pub fn cycle(&self) -> &[u64] {
        &self.cycle
    }

    pub fn drift(&self) -> u64 {
        self.drift
    }

    /// Edge at 1-based position `p`.
    pub fn at(&self, p: usize) -> u64 {
        assert!(p >= 1, "positions are 1-based");
        if p <= self.prefix.len() {
            return self.prefix[p - 1];
        }
        let q = p - self.prefix.len() - 1;
        let rep = (q / self.cycle.len()) as u64;
        self.cycle[q % self.cycle.len()] + rep * self.drift
    }

    pub fn first(&self) -> u64 {
        self.at(1)
    }

    /// The first `n` edges.
    pub fn take(&self, n: usize) -> Vec<u64> {
        (1..=n).map(|p| self.at(p)).collect()
    }

    /// Shift by one position. Canonical forms are preserved.
    pub fn shift(&self) -> InfinitePath {
        let mut p = self.clone();
        if !p.prefix.is_empty() {
            p.prefix.remove(0);
        } else {
            let first = p.cycle.remove(0);
            p.cycle.push(first + p.drift);
        }
        p.canonicalise();
        p
    }

    pub fn shift_by(&self, n: usize) -> InfinitePath {
        let mut p = self.clone();
        let drop = n.min(p.prefix.len());
        p.prefix.drain(..drop);
        let rest = n - drop;
        let len = p.cycle.len();
        let reps = (rest / len) as u64;
        for c in &mut p.cycle {
            *c += reps * p.drift;
        }
        for _ in 0..rest % len {
            let first = p.cycle.remove(0);
            p.cycle.push(first + p.drift);
        }
        p.canonicalise();
        p
    }

    /// Prepend a finite edge sequence.
    pub fn prepend(&self, edges: &[u64]) -> InfinitePath {
        let mut prefix = edges.to_vec();
        prefix.extend_from_slice(&self.prefix);
        let mut p = InfinitePath {
            prefix,
            cycle: self.cycle.clone(),
            drift: self.drift,
        };
        p.canonicalise();
        p
    }

    /// Number of positions after which the tail is a pure shifted cycle.
    pub fn preperiod(&self) -> usize {
        self.prefix.len()
    }

    pub fn period(&self) -> usize {
        self.cycle.len()
    }

    /// Positions that decide every comparison against a path with the given shape.
    pub(crate) fn horizon_with(&self, other_prefix: usize, other_period: usize) -> usize {
        self.prefix.len().max(other_prefix) + 2 * lcm(self.cycle.len() as u64, other_period as u64) as usize
    }

    pub fn source(&self, g: &GraphPresentation) -> Result<Vertex> {
        g.source(self.first())
    }

    /// Least position `p` with `x_p > k`; every path with positive drift has one.
    pub fn escape_index(&self, k: u64) -> Option<usize> {
        if let Some(i) = self.prefix.iter().position(|&e| e > k) {
            return Some(i + 1);
        }
        let base = self.prefix.len();
        let len = self.cycle.len();
        let mut best: Option<usize> = None;
        for (i, &c) in self.cycle.iter().enumerate() {
            let rep = if c > k {
                0
            } else {
                let Some(steps) = (k - c).checked_div(self.drift) else {
                    continue;
                };
                steps + 1
            };
            let pos = base + rep as usize * len + i + 1;
            best = Some(best.map_or(pos, |b| b.min(pos)));
        }
        best
    }

    /// Check that every pair of consecutive edges meets in `g`.
    ///
    /// Membership of the shifted cycle edges in the families becomes periodic in the
    /// repetition count once all of them pass the structural horizon, and on each residue
    /// class the endpoint subscripts are affine; two repetitions per class therefore
    /// decide all of them.
    pub fn validate(&self, g: &GraphPresentation) -> Result<()> {
        let reps = self.repetitions_to_check(g)?;
        let len = self.prefix.len() + (reps as usize + 1) * self.cycle.len() + 1;
        let edges = self.take(len);
        g.is_path(&edges)
    }

    fn repetitions_to_check(&self, g: &GraphPresentation) -> Result<u64> {
        if self.drift == 0 {
            return Ok(2);
        }
        if let Some(m) = g.max_index() {
            return Err(Error::InvalidPath(format!(
                "a drifting path leaves the finite edge set e1..e{m}"
            )));
        }
        let horizon = g.structural_horizon();
        let low = *self.cycle.iter().min().expect("non-empty");
        let stable = if low > horizon {
            0
        } else {
            (horizon - low) / self.drift + 1
        };
        Ok(stable + 2 * g.family_period() + 1)
    }

    fn canonicalise(&mut self) {
        let len = self.cycle.len();
        for r in 1..len {
            if !len.is_multiple_of(r) {
                continue;
            }
            let m = (len / r) as u64;
            if !self.drift.is_multiple_of(m) {
                continue;
            }
            let step = self.drift / m;
            if (0..len - r).all(|i| self.cycle[i + r] == self.cycle[i] + step) {
                self.cycle.truncate(r);
                self.drift = step;
                break;
            }
        }
        while let Some(&last) = self.prefix.last() {
            let tail = *self.cycle.last().expect("non-empty");
            if tail < self.drift || last != tail - self.drift {
                break;
            }
            self.prefix.pop();
            self.cycle.pop();
            self.cycle.insert(0, last);
        }
    }
}

impl fmt::Display for InfinitePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:({})", join_edges(&self.prefix), join_edges(&self.cycle))?;
        if self.drift > 0 {
            write!(f, "+{}", self.drift)?;
        }
        Ok(())
    }
}

impl FromStr for InfinitePath {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (head, tail) = s
            .split_once(':')
            .ok_or_else(|| Error::literal(s, "expected `prefix:(cycle)`"))?;
        let prefix = if head.trim().is_empty() {
            Vec::new()
        } else {
            parse_edges(head.trim())?
        };
        let tail = tail.trim();
        let open = tail
            .strip_prefix('(')
            .ok_or_else(|| Error::literal(s, "cycle must be parenthesised"))?;
        let (body, after) = open.split_once(')').ok_or_else(|| Error::literal(s, "missing `)`"))?;
        let cycle = parse_edges(body.trim())?;
        let after = after.trim();
        let drift = if after.is_empty() {
            0
        } else {
            after
                .strip_prefix('+')
                .and_then(|d| d.trim().parse::<u64>().ok())
                .ok_or_else(|| Error::literal(s, "drift must be written `+N`"))?
        };
        InfinitePath::new(prefix, cycle, drift)
    }
}

/// Either kind of path, as accepted by the metric.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Path {
    Finite(FinitePath),
    Infinite(InfinitePath),
}

impl Path {
    pub fn source(&self, g: &GraphPresentation) -> Result<Vertex> {
        match self {
            Path::Finite(p) => p.source(g),
            Path::Infinite(p) => p.source(g),
        }
    }

    /// Edge at 1-based position `p`, if the path is that long.
    pub fn at(&self, p: usize) -> Option<u64> {
        match self {
            Path::Finite(f) => f.edges().get(p - 1).copied(),
            Path::Infinite(x) => Some(x.at(p)),
        }
    }

    pub fn finite_len(&self) -> Option<usize> {
        match self {
            Path::Finite(f) => Some(f.len()),
            Path::Infinite(_) => None,
        }
    }

    /// The length-`i` prefix as a finite path; `i = 0` gives the source vertex.
    pub fn prefix(&self, g: &GraphPresentation, i: usize) -> Result<Option<FinitePath>> {
        if i == 0 {
            return Ok(Some(FinitePath::Vertex(self.source(g)?)));
        }
        Ok(match self {
            Path::Finite(f) => (f.len() >= i).then(|| FinitePath::Edges(f.edges()[..i].to_vec())),
            Path::Infinite(x) => Some(FinitePath::Edges(x.take(i))),
        })
    }

    pub fn validate(&self, g: &GraphPresentation) -> Result<()> {
        match self {
            Path::Finite(p) => p.validate(g),
            Path::Infinite(p) => p.validate(g),
        }
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Path::Finite(p) => p.fmt(f),
            Path::Infinite(p) => p.fmt(f),
        }
    }
}

impl FromStr for Path {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.contains(':') {
            Ok(Path::Infinite(s.parse()?))
        } else {
            Ok(Path::Finite(s.parse()?))
        }
    }
}

impl From<FinitePath> for Path {
    fn from(p: FinitePath) -> Self {
        Path::Finite(p)
    }
}

impl From<InfinitePath> for Path {
    fn from(p: InfinitePath) -> Self {
        Path::Infinite(p)
    }
}

fn join_edges(e: &[u64]) -> String {
    e.iter().map(|k| format!("e{k}")).collect::<Vec<_>>().join(".")
}

fn looks_like_edges(s: &str) -> bool {
    !s.is_empty()
        && s.split('.').all(|t| {
            let t = t.trim();
            t.len() > 1 && t.starts_with('e') && t[1..].chars().all(|c| c.is_ascii_digit())
        })
}

fn parse_edges(s: &str) -> Result<Vec<u64>> {
    s.split('.')
        .map(|t| {
            let t = t.trim();
            t.strip_prefix('e')
                .and_then(|d| d.parse::<u64>().ok())
                .filter(|&k| k >= 1)
                .ok_or_else(|| Error::literal(s, format!("`{t}` is not an edge")))
        })
        .collect()
}
