//! Finite presentations of infinite directed graphs with indexed edges.

mod builtins;
mod dsl;

pub(crate) use builtins::identify as identify_builtin;
pub use builtins::{builtin, builtin_names};
pub use dsl::{parse_graph, parse_graph_with, print_graph, ParseOptions};

use crate::affine::{lcm, AffineForm};
use crate::enumeration::EnumCache;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap};
use std::fmt;
use std::str::FromStr;

/// Largest index window scanned when validating coverage and disjointness.
const VALIDATION_WINDOW: u64 = 5_000_000;

/// A vertex: a series name with an optional non-negative subscript (`v1`, `u`).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Vertex {
    pub name: String,
    pub index: Option<u64>,
}

impl Vertex {
    pub fn new(name: &str, index: Option<u64>) -> Self {
        Vertex {
            name: name.to_string(),
            index,
        }
    }

    pub fn indexed(name: &str, index: u64) -> Self {
        Vertex::new(name, Some(index))
    }

    pub fn plain(name: &str) -> Self {
        Vertex::new(name, None)
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.index {
            Some(i) => write!(f, "{}{}", self.name, i),
            None => f.write_str(&self.name),
        }
    }
}

impl FromStr for Vertex {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let split = s.find(|c: char| c.is_ascii_digit()).unwrap_or(s.len());
        let (name, digits) = s.split_at(split);
        if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphabetic() || c == '_') {
            return Err(Error::literal(s, "vertex names are letters or underscores"));
        }
        if digits.is_empty() {
            return Ok(Vertex::plain(name));
        }
        let index = digits
            .parse::<u64>()
            .map_err(|_| Error::literal(s, "vertex subscript must be a non-negative integer"))?;
        Ok(Vertex::indexed(name, index))
    }
}

/// Source or range term of an edge family.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum VertexTerm {
    /// The same vertex for every member.
    Fixed(Vertex),
    /// `series[a*n + b]`; the coefficient `a` is never zero after normalisation.
    Indexed { series: String, index: AffineForm },
}

impl VertexTerm {
    /// Build a term, folding constant subscripts into [`VertexTerm::Fixed`].
    pub fn indexed(series: &str, index: AffineForm) -> Self {
        if index.is_constant() && index.b >= 0 {
            VertexTerm::Fixed(Vertex::indexed(series, index.b as u64))
        } else {
            VertexTerm::Indexed {
                series: series.to_string(),
                index,
            }
        }
    }

    pub fn at(&self, n: u64) -> Vertex {
        match self {
            VertexTerm::Fixed(v) => v.clone(),
            VertexTerm::Indexed { series, index } => {
                let value = index.eval(n);
                Vertex::indexed(series, value.max(0) as u64)
            }
        }
    }

    /// Parameters `n` at which this term evaluates to `v`: all of them, or at most one.
    pub(crate) fn matches(&self, v: &Vertex) -> TermMatch {
        match self {
            VertexTerm::Fixed(w) => {
                if w == v {
                    TermMatch::All
                } else {
                    TermMatch::None
                }
            }
            VertexTerm::Indexed { series, index } => match v.index {
                Some(i) if &v.name == series => match index.solve(i as i128) {
                    Some(n) => TermMatch::One(n),
                    None => TermMatch::None,
                },
                _ => TermMatch::None,
            },
        }
    }

    pub fn render(&self, var: &str) -> String {
        match self {
            VertexTerm::Fixed(v) => v.to_string(),
            VertexTerm::Indexed { series, index } => format!("{}[{}]", series, index.render(var)),
        }
    }
}

pub(crate) enum TermMatch {
    None,
    One(u64),
    All,
}

/// A concrete edge `e_index : source -> range`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub index: u64,
    pub source: Vertex,
    pub range: Vertex,
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}: {} -> {}", self.index, self.source, self.range)
    }
}

/// The family `{ e[edge_index(n)] : source(n) -> range(n) | lower <= n <= upper }`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EdgeFamily {
    pub var: String,
    pub lower: u64,
    pub upper: Option<u64>,
    pub edge_index: AffineForm,
    pub source: VertexTerm,
    pub range: VertexTerm,
}

impl EdgeFamily {
    pub fn is_infinite(&self) -> bool {
        self.upper.is_none()
    }

    pub fn index_at(&self, n: u64) -> u64 {
        self.edge_index.eval(n) as u64
    }

    pub fn first_index(&self) -> u64 {
        self.index_at(self.lower)
    }

    pub fn last_index(&self) -> Option<u64> {
        self.upper.map(|u| self.index_at(u))
    }

    pub fn contains_param(&self, n: u64) -> bool {
        n >= self.lower && self.upper.is_none_or(|u| n <= u)
    }

    /// Parameter of edge `e_k` in this family, if it belongs here.
    pub fn param_of(&self, k: u64) -> Option<u64> {
        let n = self.edge_index.solve(k as i128)?;
        self.contains_param(n).then_some(n)
    }

    pub fn edge_at(&self, n: u64) -> Edge {
        Edge {
            index: self.index_at(n),
            source: self.source.at(n),
            range: self.range.at(n),
        }
    }

    /// Smallest parameter whose edge index exceeds `bound`.
    pub(crate) fn first_param_above(&self, bound: u64) -> u64 {
        let a = self.edge_index.a as i128;
        let need = bound as i128 + 1 - self.edge_index.b as i128;
        let n = if need <= 0 { 0 } else { (need + a - 1) / a };
        (n.max(0) as u64).max(self.lower)
    }
}

/// A set of edges described by exceptional indices and parameter slices of families.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EdgeSet {
    pub exceptional: Vec<u64>,
    pub slices: Vec<FamilySlice>,
}

/// Members `lower..=upper` of family number `family` (unbounded when `upper` is `None`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FamilySlice {
    pub family: usize,
    pub lower: u64,
    pub upper: Option<u64>,
}

impl EdgeSet {
    pub fn is_empty(&self) -> bool {
        self.exceptional.is_empty() && self.slices.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.slices.iter().all(|s| s.upper.is_some())
    }

    pub fn contains(&self, g: &GraphPresentation, k: u64) -> bool {
        self.exceptional.contains(&k)
            || self.slices.iter().any(|s| {
                g.families[s.family]
                    .param_of(k)
                    .is_some_and(|n| n >= s.lower && s.upper.is_none_or(|u| n <= u))
            })
    }

    pub fn min_index(&self, g: &GraphPresentation) -> Option<u64> {
        self.iter(g).next()
    }

    pub fn max_index(&self, g: &GraphPresentation) -> Option<u64> {
        if !self.is_finite() {
            return None;
        }
        let fam = self
            .slices
            .iter()
            .filter_map(|s| s.upper.map(|u| g.families[s.family].index_at(u)));
        self.exceptional.iter().copied().chain(fam).max()
    }

    /// Indices in increasing order; infinite when some slice is unbounded.
    pub fn iter<'g>(&self, g: &'g GraphPresentation) -> EdgeSetIter<'g> {
        let mut heap = BinaryHeap::new();
        for &k in &self.exceptional {
            heap.push(Reverse((k, usize::MAX, 0u64)));
        }
        for (i, s) in self.slices.iter().enumerate() {
            let fam = &g.families[s.family];
            if s.upper.is_none_or(|u| s.lower <= u) {
                heap.push(Reverse((fam.index_at(s.lower), i, s.lower)));
            }
        }
        EdgeSetIter {
            g,
            slices: self.slices.clone(),
            heap,
        }
    }

    /// All indices not exceeding `bound`, ascending.
    pub fn indices_up_to(&self, g: &GraphPresentation, bound: u64) -> Vec<u64> {
        self.iter(g).take_while(|&k| k <= bound).collect()
    }
}

pub struct EdgeSetIter<'g> {
    g: &'g GraphPresentation,
    slices: Vec<FamilySlice>,
    heap: BinaryHeap<Reverse<(u64, usize, u64)>>,
}

impl Iterator for EdgeSetIter<'_> {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        let Reverse((k, slice, n)) = self.heap.pop()?;
        if slice != usize::MAX {
            let s = self.slices[slice];
            let next = n + 1;
            if s.upper.is_none_or(|u| next <= u) {
                let fam = &self.g.families[s.family];
                self.heap.push(Reverse((fam.index_at(next), slice, next)));
            }
        }
        Some(k)
    }
}

/// Outcome of the no-sink check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SinkCheck {
    Valid,
    Invalid(Vertex),
    Unknown(String),
}

/// The finite subgraph spanned by `e_1, ..., e_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Truncation {
    pub edges: Vec<Edge>,
    pub vertices: Vec<Vertex>,
}

/// A validated finite presentation together with memoised enumeration data.
#[derive(Debug)]
pub struct GraphPresentation {
    pub(crate) name: String,
    pub(crate) exceptional: BTreeMap<u64, (Vertex, Vertex)>,
    pub(crate) families: Vec<EdgeFamily>,
    pub(crate) cache: EnumCache,
}

impl Clone for GraphPresentation {
    fn clone(&self) -> Self {
        GraphPresentation {
            name: self.name.clone(),
            exceptional: self.exceptional.clone(),
            families: self.families.clone(),
            cache: EnumCache::default(),
        }
    }
}

impl PartialEq for GraphPresentation {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && self.same_structure(other)
    }
}

impl Eq for GraphPresentation {}

impl GraphPresentation {
    /// Validate and build a presentation, rejecting sinks and undecided sink checks.
    pub fn new(name: &str, exceptional: Vec<Edge>, families: Vec<EdgeFamily>) -> Result<Self> {
        Self::build(name, exceptional, families, false)
    }

    pub(crate) fn build(
        name: &str,
        exceptional: Vec<Edge>,
        mut families: Vec<EdgeFamily>,
        allow_undecided_sinks: bool,
    ) -> Result<Self> {
        let mut map = BTreeMap::new();
        for e in exceptional {
            if e.index == 0 {
                return Err(Error::Presentation("edge indices start at 1".into()));
            }
            if map.insert(e.index, (e.source, e.range)).is_some() {
                return Err(Error::Overlap(e.index));
            }
        }
        for f in &mut families {
            f.source = normalise_term(&f.source);
            f.range = normalise_term(&f.range);
        }
        families
            .sort_by(|x, y| (x.first_index(), x.edge_index, x.lower).cmp(&(y.first_index(), y.edge_index, y.lower)));
        let g = GraphPresentation {
            name: name.to_string(),
            exceptional: map,
            families,
            cache: EnumCache::default(),
        };
        g.check_families()?;
        g.check_partition()?;
        match g.validate_no_sinks() {
            SinkCheck::Valid => {}
            SinkCheck::Invalid(v) => return Err(Error::Sink(v.to_string())),
            SinkCheck::Unknown(why) => {
                if !allow_undecided_sinks {
                    return Err(Error::SinkUndecided(why));
                }
            }
        }
        Ok(g)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn exceptional_edges(&self) -> Vec<Edge> {
        self.exceptional
            .iter()
            .map(|(&index, (s, r))| Edge {
                index,
                source: s.clone(),
                range: r.clone(),
            })
            .collect()
    }

    pub fn families(&self) -> &[EdgeFamily] {
        &self.families
    }

    /// Structural equality ignoring the graph name.
    pub fn same_structure(&self, other: &Self) -> bool {
        self.exceptional == other.exceptional && self.families == other.families
    }

    /// Largest edge index, or `None` when the edge set is infinite.
    pub fn max_index(&self) -> Option<u64> {
        if self.families.iter().any(EdgeFamily::is_infinite) {
            return None;
        }
        let fam = self.families.iter().filter_map(EdgeFamily::last_index);
        self.exceptional.keys().copied().chain(fam).max().or(Some(0))
    }

    pub fn is_finite(&self) -> bool {
        self.max_index().is_some()
    }

    pub fn resolve_edge(&self, k: u64) -> Result<Edge> {
        if let Some((s, r)) = self.exceptional.get(&k) {
            return Ok(Edge {
                index: k,
                source: s.clone(),
                range: r.clone(),
            });
        }
        for f in &self.families {
            if let Some(n) = f.param_of(k) {
                return Ok(f.edge_at(n));
            }
        }
        Err(Error::UncoveredIndex(k))
    }

    pub fn source(&self, k: u64) -> Result<Vertex> {
        Ok(self.resolve_edge(k)?.source)
    }

    pub fn range(&self, k: u64) -> Result<Vertex> {
        Ok(self.resolve_edge(k)?.range)
    }

    pub fn out_edges(&self, v: &Vertex) -> EdgeSet {
        let exceptional = self
            .exceptional
            .iter()
            .filter(|(_, (s, _))| s == v)
            .map(|(&k, _)| k)
            .collect();
        let mut slices = Vec::new();
        for (i, f) in self.families.iter().enumerate() {
            match f.source.matches(v) {
                TermMatch::None => {}
                TermMatch::All => slices.push(FamilySlice {
                    family: i,
                    lower: f.lower,
                    upper: f.upper,
                }),
                TermMatch::One(n) => {
                    if f.contains_param(n) {
                        slices.push(FamilySlice {
                            family: i,
                            lower: n,
                            upper: Some(n),
                        });
                    }
                }
            }
        }
        EdgeSet { exceptional, slices }
    }

    /// Edges ending at `v`, described the same way as [`Self::out_edges`].
    pub fn in_edges(&self, v: &Vertex) -> EdgeSet {
        let exceptional = self
            .exceptional
            .iter()
            .filter(|(_, (_, r))| r == v)
            .map(|(&k, _)| k)
            .collect();
        let mut slices = Vec::new();
        for (i, f) in self.families.iter().enumerate() {
            match f.range.matches(v) {
                TermMatch::None => {}
                TermMatch::All => slices.push(FamilySlice {
                    family: i,
                    lower: f.lower,
                    upper: f.upper,
                }),
                TermMatch::One(n) => {
                    if f.contains_param(n) {
                        slices.push(FamilySlice {
                            family: i,
                            lower: n,
                            upper: Some(n),
                        });
                    }
                }
            }
        }
        EdgeSet { exceptional, slices }
    }

    /// The follower set `F^1(e_k)`: edges that may follow `e_k` in a path.
    pub fn followers(&self, k: u64) -> Result<EdgeSet> {
        let r = self.range(k)?;
        Ok(self.out_edges(&r))
    }

    /// Least index of an edge leaving `v`, the block in which `v` is enumerated.
    pub fn min_out_edge(&self, v: &Vertex) -> Option<u64> {
        self.out_edges(v).min_index(self)
    }

    pub fn truncate(&self, k: u64) -> Result<Truncation> {
        let top = self.max_index().map_or(k, |m| m.min(k));
        let mut edges = Vec::with_capacity(top as usize);
        let mut vertices = Vec::new();
        let mut seen = BTreeSet::new();
        for i in 1..=top {
            let e = self.resolve_edge(i)?;
            for v in [&e.source, &e.range] {
                if seen.insert(v.clone()) {
                    vertices.push(v.clone());
                }
            }
            edges.push(e);
        }
        Ok(Truncation { edges, vertices })
    }

    /// Check that consecutive edges meet, `r(e_{k_i}) = s(e_{k_{i+1}})`.
    pub fn is_path(&self, edges: &[u64]) -> Result<()> {
        let mut prev: Option<Edge> = None;
        for (pos, &k) in edges.iter().enumerate() {
            let e = self.resolve_edge(k)?;
            if let Some(p) = &prev {
                if p.range != e.source {
                    return Err(Error::InvalidPath(format!(
                        "e{} ends at {} but e{} at position {} starts at {}",
                        p.index,
                        p.range,
                        k,
                        pos + 1,
                        e.source
                    )));
                }
            }
            prev = Some(e);
        }
        Ok(())
    }

    fn check_families(&self) -> Result<()> {
        for f in &self.families {
            let label = format!("family e[{}]", f.edge_index.render(&f.var));
            if f.edge_index.a < 1 {
                return Err(Error::Presentation(format!(
                    "{label}: edge index coefficient must be at least 1"
                )));
            }
            if f.edge_index.eval(f.lower) < 1 {
                return Err(Error::Presentation(format!("{label}: edge indices must be positive")));
            }
            if let Some(u) = f.upper {
                if u < f.lower {
                    return Err(Error::Presentation(format!("{label}: empty parameter range")));
                }
            }
            for term in [&f.source, &f.range] {
                if let VertexTerm::Indexed { index, .. } = term {
                    if index.a < 0 && f.upper.is_none() {
                        return Err(Error::Presentation(format!(
                            "{label}: vertex subscripts of an infinite family must not decrease"
                        )));
                    }
                    let ends = [Some(f.lower), f.upper];
                    if ends.iter().flatten().any(|&n| index.eval(n) < 0) {
                        return Err(Error::Presentation(format!(
                            "{label}: vertex subscripts must be non-negative"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Coverage and disjointness of the index partition.
    fn check_partition(&self) -> Result<()> {
        for &k in self.exceptional.keys() {
            if self.families.iter().any(|f| f.param_of(k).is_some()) {
                return Err(Error::Overlap(k));
            }
        }
        for (i, f) in self.families.iter().enumerate() {
            for g in &self.families[i + 1..] {
                if let Some(k) = family_overlap(f, g)? {
                    return Err(Error::Overlap(k));
                }
            }
        }
        let period = self
            .families
            .iter()
            .filter(|f| f.is_infinite())
            .fold(1u64, |acc, f| lcm(acc, f.edge_index.a as u64));
        let horizon = match self.max_index() {
            Some(m) => m,
            None => {
                let fixed = self
                    .families
                    .iter()
                    .map(|f| f.last_index().unwrap_or_else(|| f.first_index()))
                    .chain(self.exceptional.keys().copied())
                    .max()
                    .unwrap_or(0);
                fixed + period
            }
        };
        if horizon > VALIDATION_WINDOW {
            return Err(Error::Presentation(format!(
                "index window {horizon} too large to validate"
            )));
        }
        for k in 1..=horizon {
            if !self.exceptional.contains_key(&k) && !self.families.iter().any(|f| f.param_of(k).is_some()) {
                return Err(Error::UncoveredIndex(k));
            }
        }
        Ok(())
    }

    /// Decide whether every range vertex has an outgoing edge.
    pub fn validate_no_sinks(&self) -> SinkCheck {
        let mut checked = BTreeSet::new();
        let mut check = |v: Vertex| -> Option<Vertex> {
            if checked.contains(&v) {
                return None;
            }
            let bad = self.out_edges(&v).is_empty();
            checked.insert(v.clone());
            bad.then_some(v)
        };
        for (_, r) in self.exceptional.values() {
            if let Some(v) = check(r.clone()) {
                return SinkCheck::Invalid(v);
            }
        }
        for f in &self.families {
            let (series, index) = match &f.range {
                VertexTerm::Fixed(v) => {
                    if let Some(v) = check(v.clone()) {
                        return SinkCheck::Invalid(v);
                    }
                    continue;
                }
                VertexTerm::Indexed { series, index } => (series, index),
            };
            let last = match f.upper {
                Some(u) => u,
                None => {
                    let (threshold, period) = self.source_structure(series);
                    let a = index.a as i128;
                    let need = threshold as i128 + 1 - index.b as i128;
                    let n0 = if need <= 0 { 0 } else { ((need + a - 1) / a) as u64 };
                    n0.max(f.lower) + period
                }
            };
            if last - f.lower > VALIDATION_WINDOW {
                return SinkCheck::Unknown(format!("range series {series} needs {} checks", last - f.lower));
            }
            for n in f.lower..=last {
                if let Some(v) = check(f.range.at(n)) {
                    return SinkCheck::Invalid(v);
                }
            }
        }
        SinkCheck::Valid
    }

    /// Largest subscript below which the sources of series `name` are irregular, and the
    /// period with which they repeat above it.
    fn source_structure(&self, name: &str) -> (u64, u64) {
        let mut threshold = 0u64;
        let mut period = 1u64;
        for (s, _) in self.exceptional.values() {
            if s.name == name {
                threshold = threshold.max(s.index.unwrap_or(0));
            }
        }
        for f in &self.families {
            match &f.source {
                VertexTerm::Fixed(v) if v.name == name => {
                    threshold = threshold.max(v.index.unwrap_or(0));
                }
                VertexTerm::Indexed { series, index } if series == name => {
                    let start = index.eval(f.lower).max(0) as u64;
                    let end = f.upper.map(|u| index.eval(u).max(0) as u64);
                    threshold = threshold.max(end.unwrap_or(start));
                    if f.upper.is_none() {
                        period = lcm(period, index.a.unsigned_abs());
                    }
                }
                _ => {}
            }
        }
        (threshold, period)
    }

    /// Every vertex that occurs explicitly in the presentation.
    pub(crate) fn fixed_vertices(&self) -> BTreeSet<Vertex> {
        let mut out = BTreeSet::new();
        for (s, r) in self.exceptional.values() {
            out.insert(s.clone());
            out.insert(r.clone());
        }
        for f in &self.families {
            for t in [&f.source, &f.range] {
                if let VertexTerm::Fixed(v) = t {
                    out.insert(v.clone());
                }
            }
        }
        out
    }

    /// Least common multiple of the edge index coefficients of infinite families.
    pub(crate) fn family_period(&self) -> u64 {
        self.families
            .iter()
            .filter(|f| f.is_infinite())
            .fold(1u64, |acc, f| lcm(acc, f.edge_index.a as u64))
    }

    /// Index above which every edge belongs to an infinite family at a generic parameter.
    pub(crate) fn structural_horizon(&self) -> u64 {
        self.families
            .iter()
            .map(|f| f.last_index().unwrap_or_else(|| f.first_index()))
            .chain(self.exceptional.keys().copied())
            .max()
            .unwrap_or(0)
    }
}

fn normalise_term(t: &VertexTerm) -> VertexTerm {
    match t {
        VertexTerm::Indexed { series, index } => VertexTerm::indexed(series, *index),
        fixed => fixed.clone(),
    }
}

/// Smallest index shared by two families, scanning one joint period.
fn family_overlap(f: &EdgeFamily, g: &EdgeFamily) -> Result<Option<u64>> {
    let start = f.first_index().max(g.first_index());
    let end_f = f.last_index().unwrap_or(u64::MAX);
    let end_g = g.last_index().unwrap_or(u64::MAX);
    let period = lcm(f.edge_index.a as u64, g.edge_index.a as u64);
    let end = end_f.min(end_g).min(start.saturating_add(period));
    if end < start {
        return Ok(None);
    }
    if (end - start) / f.edge_index.a as u64 > VALIDATION_WINDOW {
        return Err(Error::Presentation("family overlap window too large".into()));
    }
    let mut n = f.first_param_above(start.saturating_sub(1));
    loop {
        let k = f.index_at(n);
        if k > end {
            return Ok(None);
        }
        if g.param_of(k).is_some() {
            return Ok(Some(k));
        }
        n += 1;
    }
}

#[cfg(test)]
mod tests;
