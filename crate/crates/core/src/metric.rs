//! The edge-ordered ultrametric on paths.
//!
//! For paths `x != y`, `d(x, y) = 2^-m` where `m` is the least rank of a finite path that
//! is an initial segment of exactly one of them. When both share the source vertex, those
//! initial segments are the length-`i` prefixes at the first disagreement position `i`, and
//! shorter prefixes are shared. When the sources differ the source vertices themselves
//! already separate the paths.

use crate::enumeration::{rank, vertex_rank, Rank, Threshold};
use crate::error::Result;
use crate::graph::GraphPresentation;
use crate::path::{InfinitePath, Path};
use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::fmt;

/// Where two paths first differ.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Disagreement {
    Equal,
    /// The paths start at different vertices.
    SourceMismatch,
    /// First differing position (1-based); `|x| + 1` when finite `x` is a prefix of `y`.
    At(usize),
}

/// An exact distance `0` or `2^-m`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Distance {
    Zero,
    Dyadic(#[serde(with = "crate::enumeration::decimal")] Rank),
}

impl Distance {
    /// Whether the distance is strictly below `2^-t`.
    pub fn below(&self, t: &Threshold) -> bool {
        match self {
            Distance::Zero => true,
            Distance::Dyadic(m) => m > t,
        }
    }

    pub fn exponent(&self) -> Option<&Rank> {
        match self {
            Distance::Zero => None,
            Distance::Dyadic(m) => Some(m),
        }
    }
}

impl Ord for Distance {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Distance::Zero, Distance::Zero) => Ordering::Equal,
            (Distance::Zero, _) => Ordering::Less,
            (_, Distance::Zero) => Ordering::Greater,
            (Distance::Dyadic(a), Distance::Dyadic(b)) => b.cmp(a),
        }
    }
}

impl PartialOrd for Distance {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distance::Zero => f.write_str("0"),
            Distance::Dyadic(m) => write!(f, "2^-{m}"),
        }
    }
}

pub fn first_disagreement(g: &GraphPresentation, x: &Path, y: &Path) -> Result<Disagreement> {
    if x.source(g)? != y.source(g)? {
        return Ok(Disagreement::SourceMismatch);
    }
    let horizon = match (x, y) {
        (Path::Infinite(a), Path::Infinite(b)) => a.horizon_with(b.preperiod(), b.period()),
        _ => x
            .finite_len()
            .unwrap_or(usize::MAX)
            .min(y.finite_len().unwrap_or(usize::MAX)),
    };
    for p in 1..=horizon {
        if x.at(p) != y.at(p) {
            return Ok(Disagreement::At(p));
        }
    }
    Ok(match (x.finite_len(), y.finite_len()) {
        (Some(a), Some(b)) if a == b => Disagreement::Equal,
        (Some(a), Some(b)) => Disagreement::At(a.min(b) + 1),
        (Some(a), None) | (None, Some(a)) => Disagreement::At(a + 1),
        (None, None) => Disagreement::Equal,
    })
}

pub fn distance(g: &GraphPresentation, x: &Path, y: &Path) -> Result<Distance> {
    x.validate(g)?;
    y.validate(g)?;
    distance_unchecked(g, x, y)
}

/// Distance between paths already known to be valid.
pub(crate) fn distance_unchecked(g: &GraphPresentation, x: &Path, y: &Path) -> Result<Distance> {
    match first_disagreement(g, x, y)? {
        Disagreement::Equal => Ok(Distance::Zero),
        Disagreement::SourceMismatch => {
            let a = vertex_rank(g, &x.source(g)?)?;
            let b = vertex_rank(g, &y.source(g)?)?;
            Ok(Distance::Dyadic(a.min(b)))
        }
        Disagreement::At(i) => {
            let mut best: Option<BigUint> = None;
            for p in [x, y] {
                if let Some(prefix) = p.prefix(g, i)? {
                    let r = rank(g, &prefix)?;
                    best = Some(best.map_or(r.clone(), |b| b.min(r)));
                }
            }
            Ok(Distance::Dyadic(best.expect("one side has a length-i prefix")))
        }
    }
}

pub fn distance_infinite(g: &GraphPresentation, x: &InfinitePath, y: &InfinitePath) -> Result<Distance> {
    distance_unchecked(g, &Path::Infinite(x.clone()), &Path::Infinite(y.clone()))
}

/// Least position holding an edge with index above `k`.
pub fn escape_index(x: &Path, k: u64) -> Option<usize> {
    match x {
        Path::Finite(p) => p.edges().iter().position(|&e| e > k).map(|i| i + 1),
        Path::Infinite(p) => p.escape_index(k),
    }
}

/// Combinatorial test for `d(x, y) < 2^-N(k)` on infinite paths.
///
/// With a common source this holds exactly when the paths agree on their first `k` edges,
/// or both leave `e_1..e_k` at the same position no later than the first disagreement.
/// With different sources it holds exactly when neither source vertex is the source of an
/// edge among `e_1..e_k`, since the vertex ranks then exceed `N(k)`.
pub fn below_nk_threshold(g: &GraphPresentation, x: &InfinitePath, y: &InfinitePath, k: u64) -> Result<bool> {
    let px = Path::Infinite(x.clone());
    let py = Path::Infinite(y.clone());
    Ok(match first_disagreement(g, &px, &py)? {
        Disagreement::Equal => true,
        Disagreement::SourceMismatch => {
            let late = |p: &InfinitePath| -> Result<bool> {
                let v = p.source(g)?;
                Ok(g.min_out_edge(&v).is_none_or(|b| b > k))
            };
            late(x)? && late(y)?
        }
        Disagreement::At(i) => {
            let ex = x.escape_index(k);
            let ey = y.escape_index(k);
            i as u64 > k || (ex.is_some() && ex == ey && ex.expect("checked") <= i)
        }
    })
}
