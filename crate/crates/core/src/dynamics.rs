//! The shift map, chains (pseudo-orbits), chains built from path families, and the
//! construction of shadowing points for chains at the scales `2^-N(k)`.

use crate::affine::lcm;
use crate::enumeration::{f_bound, nk, vertex_within, Threshold};
use crate::error::{Error, Result};
use crate::graph::{GraphPresentation, Vertex};
use crate::metric::{distance_infinite, Distance};
use crate::path::{FinitePath, InfinitePath};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, HashMap};

/// Steps of the least-edge walk tried before giving up on closing a completion.
const COMPLETION_STEPS: usize = 512;

/// Longest drifting period recognised by [`complete_path`].
const MAX_DRIFT_PERIOD: usize = 6;

pub fn shift(x: &InfinitePath) -> InfinitePath {
    x.shift()
}

/// A sequence of infinite paths with `d(shift(x^n), x^(n+1)) < 2^-threshold` for all `n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Chain {
    pub elements: Vec<InfinitePath>,
    pub tail: Option<ChainTail>,
    #[serde(with = "crate::enumeration::decimal")]
    pub threshold: Threshold,
}

/// How an infinite chain continues after its explicit elements.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ChainTail {
    /// The orbit `gamma, shift(gamma), shift^2(gamma), ...`.
    Orbit(InfinitePath),
    /// The listed elements repeated forever.
    Cycle(Vec<InfinitePath>),
}

impl Chain {
    pub fn finite(elements: Vec<InfinitePath>, threshold: Threshold) -> Self {
        Chain {
            elements,
            tail: None,
            threshold,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.tail.is_none()
    }

    /// Element `n >= 1`; `None` past the end of a finite chain.
    pub fn element(&self, n: usize) -> Option<InfinitePath> {
        assert!(n >= 1, "chain positions are 1-based");
        if n <= self.elements.len() {
            return Some(self.elements[n - 1].clone());
        }
        let s = n - self.elements.len();
        match &self.tail {
            None => None,
            Some(ChainTail::Orbit(g)) => Some(g.shift_by(s - 1)),
            Some(ChainTail::Cycle(block)) => Some(block[(s - 1) % block.len()].clone()),
        }
    }

    /// Consecutive pairs `(n, x^n, x^(n+1))` that together decide validity of the chain.
    fn deciding_pairs(&self) -> Vec<(usize, InfinitePath, InfinitePath)> {
        let m = self.elements.len();
        let mut out = Vec::new();
        for n in 1..m {
            out.push((n, self.elements[n - 1].clone(), self.elements[n].clone()));
        }
        match &self.tail {
            None => {}
            Some(ChainTail::Orbit(g)) => {
                if m > 0 {
                    out.push((m, self.elements[m - 1].clone(), g.clone()));
                }
            }
            Some(ChainTail::Cycle(block)) => {
                if m > 0 {
                    out.push((m, self.elements[m - 1].clone(), block[0].clone()));
                }
                for i in 0..block.len() {
                    let next = &block[(i + 1) % block.len()];
                    out.push((m + i + 1, block[i].clone(), next.clone()));
                }
            }
        }
        out
    }

    /// First-symbol linkage: `x^n_2 = x^(n+1)_1` for every `n`.
    pub fn is_linked(&self) -> bool {
        self.deciding_pairs().iter().all(|(_, a, b)| a.at(2) == b.first())
    }

    pub fn validate_paths(&self, g: &GraphPresentation) -> Result<()> {
        for x in &self.elements {
            x.validate(g)?;
        }
        match &self.tail {
            None => Ok(()),
            Some(ChainTail::Orbit(gm)) => gm.validate(g),
            Some(ChainTail::Cycle(block)) => {
                if block.is_empty() {
                    return Err(Error::precondition("a periodic tail needs at least one element"));
                }
                block.iter().try_for_each(|x| x.validate(g))
            }
        }
    }
}

impl Chain {
    /// Parse a chain literal: `;`-separated infinite paths, optionally followed by
    /// `| tail: orbit <path>` or `| tail: cycle <path>; <path>; ...`.
    pub fn parse(text: &str, threshold: Threshold) -> Result<Chain> {
        let (head, tail) = match text.split_once('|') {
            Some((h, t)) => (h, Some(t.trim())),
            None => (text, None),
        };
        let elements = parse_path_list::<InfinitePath>(head)?;
        let tail = match tail {
            None => None,
            Some(t) => {
                let body = t
                    .strip_prefix("tail:")
                    .ok_or_else(|| Error::literal(t, "expected `tail:`"))?
                    .trim();
                if let Some(rest) = body.strip_prefix("orbit") {
                    Some(ChainTail::Orbit(rest.trim().parse()?))
                } else if let Some(rest) = body.strip_prefix("cycle") {
                    let block = parse_path_list::<InfinitePath>(rest)?;
                    if block.is_empty() {
                        return Err(Error::literal(t, "a cycle tail needs at least one path"));
                    }
                    Some(ChainTail::Cycle(block))
                } else {
                    return Err(Error::literal(t, "expected `orbit` or `cycle`"));
                }
            }
        };
        if elements.is_empty() && tail.is_none() {
            return Err(Error::literal(text, "a chain needs at least one element"));
        }
        Ok(Chain {
            elements,
            tail,
            threshold,
        })
    }

    /// The literal accepted by [`Chain::parse`].
    pub fn literal(&self) -> String {
        let join = |xs: &[InfinitePath]| xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ");
        let mut out = join(&self.elements);
        match &self.tail {
            None => {}
            Some(ChainTail::Orbit(g)) => out.push_str(&format!(" | tail: orbit {g}")),
            Some(ChainTail::Cycle(block)) => out.push_str(&format!(" | tail: cycle {}", join(block))),
        }
        out.trim_start().to_string()
    }
}

/// Parse a `;`-separated list of path literals; blank input gives an empty list.
pub(crate) fn parse_path_list<T: std::str::FromStr<Err = Error>>(text: &str) -> Result<Vec<T>> {
    text.split(';')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(str::parse)
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ChainValidity {
    Valid,
    /// `d(shift(x^position), x^(position+1))` is not below the threshold.
    FirstViolation {
        position: usize,
        distance: Distance,
    },
}

impl ChainValidity {
    pub fn is_valid(&self) -> bool {
        matches!(self, ChainValidity::Valid)
    }
}

/// Check every pair of the chain against its own threshold.
pub fn validate_chain(g: &GraphPresentation, c: &Chain) -> Result<ChainValidity> {
    validate_chain_at(g, c, &c.threshold)
}

/// Check every pair of the chain against the scale `2^-t`.
pub fn validate_chain_at(g: &GraphPresentation, c: &Chain, t: &Threshold) -> Result<ChainValidity> {
    c.validate_paths(g)?;
    for (n, a, b) in c.deciding_pairs() {
        let d = distance_infinite(g, &a.shift(), &b)?;
        if !d.below(t) {
            return Ok(ChainValidity::FirstViolation {
                position: n,
                distance: d,
            });
        }
    }
    Ok(ChainValidity::Valid)
}

/// A family `lambda^1, ..., lambda^l` of finite paths, each a non-empty edge sequence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathFamily {
    pub paths: Vec<Vec<u64>>,
}

impl PathFamily {
    pub fn new(paths: Vec<Vec<u64>>) -> Self {
        PathFamily { paths }
    }

    /// Parse `;`-separated finite path literals, e.g. `e3.e1; e2.e4`.
    pub fn parse(text: &str) -> Result<PathFamily> {
        let paths: Vec<FinitePath> = parse_path_list(text)?;
        paths
            .into_iter()
            .map(|p| match p {
                FinitePath::Edges(e) => Ok(e),
                FinitePath::Vertex(v) => Err(Error::literal(text, format!("family paths need edges, got vertex {v}"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(PathFamily::new)
    }

    /// The literal accepted by [`PathFamily::parse`].
    pub fn literal(&self) -> String {
        self.paths
            .iter()
            .map(|p| FinitePath::Edges(p.clone()).to_string())
            .collect::<Vec<_>>()
            .join("; ")
    }

    pub fn lengths(&self) -> Vec<usize> {
        self.paths.iter().map(Vec::len).collect()
    }

    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    pub fn validate(&self, g: &GraphPresentation) -> Result<()> {
        if self.paths.is_empty() {
            return Err(Error::precondition("the family must contain at least one path"));
        }
        for p in &self.paths {
            if p.is_empty() {
                return Err(Error::precondition("family paths must be non-empty"));
            }
            g.is_path(p)?;
        }
        Ok(())
    }
}

/// Position `f(i, n) = sum_{j<i} |lambda^j| + n - i + 1` of entry `lambda^i_n`.
///
/// The domain is `1 <= n < |lambda^i|` for `i < l`, and `1 <= n <= |lambda^l|` for `i = l`.
pub fn f_index(lengths: &[usize], i: usize, n: usize) -> Result<usize> {
    let l = lengths.len();
    if i == 0 || i > l || n == 0 {
        return Err(Error::precondition(format!("({i}, {n}) is outside the domain of f")));
    }
    let top = if i == l {
        lengths[i - 1]
    } else {
        lengths[i - 1].saturating_sub(1)
    };
    if n > top {
        return Err(Error::precondition(format!("({i}, {n}) is outside the domain of f")));
    }
    let before: usize = lengths[..i - 1].iter().sum();
    Ok(before + n + 1 - i)
}

/// Inverse of [`f_index`] on `1..=f(l, |lambda^l|)`.
pub fn f_inverse(lengths: &[usize], j: usize) -> Result<(usize, usize)> {
    let l = lengths.len();
    if j == 0 {
        return Err(Error::precondition("positions start at 1"));
    }
    let mut offset = 0usize;
    for (idx, &len) in lengths.iter().enumerate() {
        let i = idx + 1;
        let span = if i == l { len } else { len.saturating_sub(1) };
        if j <= offset + span {
            return Ok((i, j - offset));
        }
        offset += span;
    }
    Err(Error::precondition(format!(
        "position {j} exceeds f(l, |lambda^l|) = {offset}"
    )))
}

/// Which form of the non-`F_delta` condition to check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilyKind {
    /// Finite families: last entries of `lambda^1..lambda^(l-1)` only.
    Finite,
    /// Families followed by a tail path: last entries of every `lambda^i`.
    WithTail,
}

/// Check the length and non-`F_delta` conditions on a family.
pub fn check_family_conditions(
    g: &GraphPresentation,
    family: &PathFamily,
    t_delta: &Threshold,
    kind: FamilyKind,
) -> Result<()> {
    family.validate(g)?;
    if let Some(i) = family.paths.iter().position(|p| p.len() < 2) {
        return Err(Error::precondition(format!("lambda^{} has length below 2", i + 1)));
    }
    let m = f_bound(g, t_delta)?;
    let l = family.len();
    let lhs: BTreeSet<u64> = family
        .paths
        .iter()
        .enumerate()
        .flat_map(|(i, p)| p.iter().enumerate().map(move |(j, &e)| ((i, j), e)))
        .filter(|&(pos, e)| pos != (0, 0) && e > m)
        .map(|(_, e)| e)
        .collect();
    let mut rhs: BTreeSet<u64> = family.paths[1..].iter().map(|p| p[0]).collect();
    let last_count = match kind {
        FamilyKind::Finite => l - 1,
        FamilyKind::WithTail => l,
    };
    rhs.extend(family.paths[..last_count].iter().map(|p| *p.last().expect("non-empty")));
    if lhs != rhs {
        return Err(Error::precondition(format!(
            "edges outside F_delta {} differ from the junction edges {}",
            render_set(&lhs),
            render_set(&rhs)
        )));
    }
    Ok(())
}

fn render_set(s: &BTreeSet<u64>) -> String {
    let items: Vec<String> = s.iter().map(|k| format!("e{k}")).collect();
    format!("{{{}}}", items.join(", "))
}

/// Whether the edges meeting at a junction start at the same vertex or at two vertices
/// of rank above `t`. This is what keeps the junction pair of the chain within `2^-t`.
pub fn junction_compatible(g: &GraphPresentation, left: u64, right: u64, t: &Threshold) -> Result<bool> {
    let a = g.source(left)?;
    let b = g.source(right)?;
    if a == b {
        return Ok(true);
    }
    Ok(!vertex_within(g, &a, t)? && !vertex_within(g, &b, t)?)
}

/// First incompatible junction `(i, left edge, right edge)`; `i = l` refers to the tail.
pub fn first_incompatible_junction(
    g: &GraphPresentation,
    family: &PathFamily,
    tail_start: Option<u64>,
    t: &Threshold,
) -> Result<Option<(usize, u64, u64)>> {
    let l = family.len();
    for i in 0..l {
        let left = *family.paths[i].last().expect("non-empty");
        let right = if i + 1 < l {
            family.paths[i + 1][0]
        } else {
            match tail_start {
                Some(r) => r,
                None => break,
            }
        };
        if !junction_compatible(g, left, right, t)? {
            return Ok(Some((i + 1, left, right)));
        }
    }
    Ok(None)
}

fn check_extensions(g: &GraphPresentation, family: &PathFamily, ext: &[InfinitePath]) -> Result<()> {
    if ext.len() != family.len() {
        return Err(Error::precondition(format!(
            "{} extensions given for {} paths",
            ext.len(),
            family.len()
        )));
    }
    for (i, (p, y)) in family.paths.iter().zip(ext).enumerate() {
        if y.take(p.len()) != *p {
            return Err(Error::precondition(format!(
                "extension {} does not start with lambda^{}",
                i + 1,
                i + 1
            )));
        }
        y.validate(g)?;
    }
    Ok(())
}

/// Extend each family path by the least-edge walk from its end.
pub fn default_extensions(g: &GraphPresentation, family: &PathFamily) -> Result<Vec<InfinitePath>> {
    family.paths.iter().map(|p| complete_path(g, p, None)).collect()
}

/// The chain `x^(f(i,n)) = shift^(n-1)(y^i)` of a finite family.
pub fn chain_from_family(
    g: &GraphPresentation,
    family: &PathFamily,
    extensions: &[InfinitePath],
    t_delta: &Threshold,
) -> Result<Chain> {
    check_family_conditions(g, family, t_delta, FamilyKind::Finite)?;
    check_extensions(g, family, extensions)?;
    if let Some((i, a, b)) = first_incompatible_junction(g, family, None, t_delta)? {
        return Err(Error::precondition(format!(
            "junction {i}: e{a} and e{b} start at different vertices of rank at most {t_delta}"
        )));
    }
    let lengths = family.lengths();
    let total = f_index(&lengths, lengths.len(), *lengths.last().expect("non-empty"))?;
    let mut elements = Vec::with_capacity(total);
    for j in 1..=total {
        let (i, n) = f_inverse(&lengths, j)?;
        elements.push(extensions[i - 1].shift_by(n - 1));
    }
    Ok(Chain::finite(elements, t_delta.clone()))
}

/// The chain of a family followed by the orbit of `gamma`.
pub fn chain_from_family_and_tail(
    g: &GraphPresentation,
    family: &PathFamily,
    gamma: &InfinitePath,
    extensions: &[InfinitePath],
    t_delta: &Threshold,
) -> Result<Chain> {
    check_family_conditions(g, family, t_delta, FamilyKind::WithTail)?;
    check_extensions(g, family, extensions)?;
    gamma.validate(g)?;
    if gamma.first() <= f_bound(g, t_delta)? {
        return Err(Error::precondition(format!(
            "gamma_1 = e{} lies in F_delta",
            gamma.first()
        )));
    }
    if let Some((i, a, b)) = first_incompatible_junction(g, family, Some(gamma.first()), t_delta)? {
        return Err(Error::precondition(format!(
            "junction {i}: e{a} and e{b} start at different vertices of rank at most {t_delta}"
        )));
    }
    let mut elements = Vec::new();
    for (i, y) in extensions.iter().enumerate() {
        for n in 1..family.paths[i].len() {
            elements.push(y.shift_by(n - 1));
        }
    }
    Ok(Chain {
        elements,
        tail: Some(ChainTail::Orbit(gamma.clone())),
        threshold: t_delta.clone(),
    })
}

/// The chain of the periodic family `prefix, period, period, ...` whose elements repeat.
pub fn chain_from_periodic_family(
    g: &GraphPresentation,
    prefix: &PathFamily,
    period: &PathFamily,
    prefix_ext: &[InfinitePath],
    period_ext: &[InfinitePath],
    t_delta: &Threshold,
) -> Result<Chain> {
    if period.is_empty() {
        return Err(Error::precondition("the periodic block must be non-empty"));
    }
    let unrolled = PathFamily::new(
        prefix
            .paths
            .iter()
            .chain(&period.paths)
            .chain(&period.paths)
            .cloned()
            .collect(),
    );
    check_family_conditions(g, &unrolled, t_delta, FamilyKind::WithTail)?;
    if !prefix.is_empty() {
        check_extensions(g, prefix, prefix_ext)?;
    }
    check_extensions(g, period, period_ext)?;
    if let Some((i, a, b)) = first_incompatible_junction(g, &unrolled, None, t_delta)? {
        return Err(Error::precondition(format!(
            "junction {i}: e{a} and e{b} start at different vertices of rank at most {t_delta}"
        )));
    }
    let expand = |fam: &PathFamily, ext: &[InfinitePath]| -> Vec<InfinitePath> {
        let mut out = Vec::new();
        for (p, y) in fam.paths.iter().zip(ext) {
            for n in 1..p.len() {
                out.push(y.shift_by(n - 1));
            }
        }
        out
    };
    Ok(Chain {
        elements: expand(prefix, prefix_ext),
        tail: Some(ChainTail::Cycle(expand(period, period_ext))),
        threshold: t_delta.clone(),
    })
}

/// Extend a finite walk (or the vertex `start` when the walk is empty) to an infinite path
/// by repeatedly taking the least outgoing edge, closing on a repeated vertex or on a
/// recognised drifting pattern.
pub fn complete_path(g: &GraphPresentation, walk: &[u64], start: Option<&Vertex>) -> Result<InfinitePath> {
    let mut edges = walk.to_vec();
    let mut v = match (walk.last(), start) {
        (Some(&e), _) => g.range(e)?,
        (None, Some(v)) => v.clone(),
        (None, None) => return Err(Error::precondition("nothing to complete")),
    };
    if !walk.is_empty() {
        g.is_path(walk)?;
    }
    let fixed = walk.len();
    let mut seen: HashMap<Vertex, usize> = HashMap::new();
    for _ in 0..COMPLETION_STEPS {
        if let Some(&p) = seen.get(&v) {
            return InfinitePath::periodic(edges[..p].to_vec(), edges[p..].to_vec());
        }
        seen.insert(v.clone(), edges.len());
        let e = g.min_out_edge(&v).ok_or_else(|| Error::Sink(v.to_string()))?;
        edges.push(e);
        v = g.range(e)?;
        if let Some(x) = detect_drift(g, &edges, fixed)? {
            return Ok(x);
        }
    }
    Err(Error::Budget(format!(
        "least-edge completion did not close within {COMPLETION_STEPS} steps"
    )))
}

/// Look for `edges[p..]` of the form `c, c + d, c + 2d` (three repetitions) with `d > 0`.
fn detect_drift(g: &GraphPresentation, edges: &[u64], fixed: usize) -> Result<Option<InfinitePath>> {
    for len in 1..=MAX_DRIFT_PERIOD {
        if edges.len() < fixed + 3 * len {
            break;
        }
        let p = edges.len() - 3 * len;
        let c = &edges[p..p + len];
        let c1 = &edges[p + len..p + 2 * len];
        let c2 = &edges[p + 2 * len..];
        if c1[0] <= c[0] {
            continue;
        }
        let d = c1[0] - c[0];
        let steady = (0..len).all(|i| c1[i] == c[i] + d && c2[i] == c1[i] + d);
        if !steady {
            continue;
        }
        let candidate = InfinitePath::new(edges[..p].to_vec(), c.to_vec(), d)?;
        if candidate.validate(g).is_ok() {
            return Ok(Some(candidate));
        }
    }
    Ok(None)
}

/// Shadowing point for a finite first-symbol-linked chain at scale `2^-N(k)`.
///
/// The point follows the first symbols of the chain, then copies `x^m_2 .. x^m_(k+1)`
/// when `x^m_1` lies in `F_(2^-N(k))`, then continues along least edges.
pub fn construct_shadow_finite(g: &GraphPresentation, c: &Chain, k: u64) -> Result<InfinitePath> {
    if !c.is_finite() || c.elements.is_empty() {
        return Err(Error::precondition("a non-empty finite chain is required"));
    }
    let t = nk(g, k)?;
    require_linked_chain(g, c, &t)?;
    let m = c.elements.len();
    let mut walk: Vec<u64> = c.elements.iter().map(InfinitePath::first).collect();
    let last = &c.elements[m - 1];
    if last.first() <= f_bound(g, &t)? {
        walk.extend((2..=k as usize + 1).map(|j| last.at(j)));
    }
    complete_path(g, &walk, None)
}

/// Shadowing point `x_n = x^n_1` for an eventually periodic linked chain at scale `2^-N(k)`.
pub fn construct_shadow_infinite(g: &GraphPresentation, c: &Chain, k: u64) -> Result<InfinitePath> {
    let t = nk(g, k)?;
    require_linked_chain(g, c, &t)?;
    let firsts: Vec<u64> = c.elements.iter().map(InfinitePath::first).collect();
    match &c.tail {
        None => Err(Error::precondition("an infinite chain is required")),
        Some(ChainTail::Orbit(gm)) => Ok(gm.prepend(&firsts)),
        Some(ChainTail::Cycle(block)) => {
            let cycle: Vec<u64> = block.iter().map(InfinitePath::first).collect();
            InfinitePath::periodic(firsts, cycle)
        }
    }
}

fn require_linked_chain(g: &GraphPresentation, c: &Chain, t: &Threshold) -> Result<()> {
    if !c.is_linked() {
        return Err(Error::precondition("chain is not first-symbol linked"));
    }
    match validate_chain_at(g, c, t)? {
        ChainValidity::Valid => Ok(()),
        ChainValidity::FirstViolation { position, distance } => Err(Error::precondition(format!(
            "not a 2^-{t} chain: pair {position} is at distance {distance}"
        ))),
    }
}

/// Result of checking `d(shift^(n-1)(x), x^n) < 2^-t` for every element.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ShadowCheck {
    Shadows,
    FailsAt {
        position: usize,
        distance: Distance,
    },
    /// The tail comparison involves drifting paths that do not coincide.
    Undecided(String),
}

impl ShadowCheck {
    pub fn holds(&self) -> bool {
        matches!(self, ShadowCheck::Shadows)
    }
}

/// Exact elementwise shadowing check of a chain by `x` at scale `2^-t`.
pub fn check_shadowing(g: &GraphPresentation, x: &InfinitePath, c: &Chain, t: &Threshold) -> Result<ShadowCheck> {
    x.validate(g)?;
    c.validate_paths(g)?;
    let m = c.elements.len();
    let mut cur = x.clone();
    for (n, e) in c.elements.iter().enumerate() {
        let d = distance_infinite(g, &cur, e)?;
        if !d.below(t) {
            return Ok(ShadowCheck::FailsAt {
                position: n + 1,
                distance: d,
            });
        }
        cur = cur.shift();
    }
    match &c.tail {
        None => Ok(ShadowCheck::Shadows),
        Some(ChainTail::Orbit(gm)) => {
            if &cur == gm {
                return Ok(ShadowCheck::Shadows);
            }
            if cur.drift() > 0 || gm.drift() > 0 {
                return Ok(ShadowCheck::Undecided(
                    "tail comparison between distinct drifting paths".into(),
                ));
            }
            let span = cur.preperiod().max(gm.preperiod()) + lcm(cur.period() as u64, gm.period() as u64) as usize + 1;
            let mut a = cur;
            let mut b = gm.clone();
            for s in 0..span {
                let d = distance_infinite(g, &a, &b)?;
                if !d.below(t) {
                    return Ok(ShadowCheck::FailsAt {
                        position: m + s + 1,
                        distance: d,
                    });
                }
                a = a.shift();
                b = b.shift();
            }
            Ok(ShadowCheck::Shadows)
        }
        Some(ChainTail::Cycle(block)) => {
            if cur.drift() > 0 {
                return Ok(ShadowCheck::Undecided("drifting point against a periodic tail".into()));
            }
            let b = block.len();
            let rounds = cur.preperiod() / b + 1 + lcm(b as u64, cur.period() as u64) as usize / b;
            let mut a = cur;
            for q in 0..rounds {
                for (r, e) in block.iter().enumerate() {
                    let d = distance_infinite(g, &a, e)?;
                    if !d.below(t) {
                        return Ok(ShadowCheck::FailsAt {
                            position: m + q * b + r + 1,
                            distance: d,
                        });
                    }
                    a = a.shift();
                }
            }
            Ok(ShadowCheck::Shadows)
        }
    }
}

#[cfg(test)]
mod tests;
