//! A finite abstraction of a presentation above a given index.
//!
//! Every vertex named explicitly in the presentation is its own node; all other members of
//! a series `w` are collapsed into one series node. Each family contributes one generic
//! edge between the nodes of its source and range terms, plus concrete edges for the
//! parameters at which a term hits an explicitly named vertex. The generic edges
//! over-approximate the family, which keeps every certificate derived here sound.

use crate::error::Result;
use crate::graph::{GraphPresentation, TermMatch, Vertex, VertexTerm};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Node {
    Fixed(Vertex),
    Series(String),
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Node::Fixed(v) => write!(f, "{v}"),
            Node::Series(s) => write!(f, "{s}[*]"),
        }
    }
}

/// How the series index changes along an edge that stays inside one series.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Trend {
    Down,
    Flat,
    Up,
    Mixed,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbstractEdge {
    pub from: Node,
    pub to: Node,
    /// Set for edges from a series node to itself.
    pub trend: Option<Trend>,
    /// Whether the edge stands for infinitely many edges.
    pub infinite: bool,
    /// The family it comes from, if any.
    pub family: Option<usize>,
    /// The edge index when the abstract edge stands for a single edge.
    pub index: Option<u64>,
}

impl AbstractEdge {
    fn is_self_with(&self, trends: &[Trend]) -> bool {
        self.from == self.to && self.trend.is_some_and(|t| trends.contains(&t))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbstractGraph {
    pub nodes: Vec<Node>,
    pub edges: Vec<AbstractEdge>,
}

/// Proof that the graph without `e_1..e_above` has no infinite path: every remaining
/// abstract edge either lowers the level or stays in one series while lowering its index.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankingEvidence {
    pub above: u64,
    pub levels: Vec<(Node, usize)>,
}

fn node_of(v: &Vertex, fixed: &BTreeSet<Vertex>) -> Node {
    if fixed.contains(v) || v.index.is_none() {
        Node::Fixed(v.clone())
    } else {
        Node::Series(v.name.clone())
    }
}

fn term_node(t: &VertexTerm) -> Node {
    match t {
        VertexTerm::Fixed(v) => Node::Fixed(v.clone()),
        VertexTerm::Indexed { series, .. } => Node::Series(series.clone()),
    }
}

fn concrete_trend(from: &Vertex, to: &Vertex) -> Trend {
    match to.index.cmp(&from.index) {
        std::cmp::Ordering::Less => Trend::Down,
        std::cmp::Ordering::Equal => Trend::Flat,
        std::cmp::Ordering::Greater => Trend::Up,
    }
}

/// Abstraction of the edges with index above `above`.
pub fn abstract_graph(g: &GraphPresentation, above: u64) -> AbstractGraph {
    let fixed = g.fixed_vertices();
    let mut nodes: BTreeSet<Node> = fixed.iter().map(|v| Node::Fixed(v.clone())).collect();
    let mut edges = Vec::new();
    let concrete = |e: crate::graph::Edge, family: Option<usize>, edges: &mut Vec<AbstractEdge>| {
        let from = node_of(&e.source, &fixed);
        let to = node_of(&e.range, &fixed);
        let trend = (from == to && matches!(from, Node::Series(_))).then(|| concrete_trend(&e.source, &e.range));
        edges.push(AbstractEdge {
            from,
            to,
            trend,
            infinite: false,
            family,
            index: Some(e.index),
        });
    };
    for e in g.exceptional_edges() {
        if e.index > above {
            concrete(e, None, &mut edges);
        }
    }
    for (fi, fam) in g.families().iter().enumerate() {
        let lo = fam.lower.max(fam.first_param_above(above));
        if fam.upper.is_some_and(|u| u < lo) {
            continue;
        }
        let mut special = BTreeSet::new();
        for w in &fixed {
            for t in [&fam.source, &fam.range] {
                if let (VertexTerm::Indexed { .. }, TermMatch::One(n)) = (t, t.matches(w)) {
                    if n >= lo && fam.upper.is_none_or(|u| n <= u) {
                        special.insert(n);
                    }
                }
            }
        }
        for &n in &special {
            concrete(fam.edge_at(n), Some(fi), &mut edges);
        }
        let from = term_node(&fam.source);
        let to = term_node(&fam.range);
        let trend = match (&fam.source, &fam.range) {
            (VertexTerm::Indexed { series: s, index: a }, VertexTerm::Indexed { series: r, index: b }) if s == r => {
                let diff = |n: u64| b.eval(n) - a.eval(n);
                let first = diff(lo);
                let slope = (b.a - a.a) as i128;
                let last = match fam.upper {
                    Some(u) => diff(u),
                    None if slope == 0 => first,
                    None => slope,
                };
                Some(if first < 0 && last < 0 {
                    Trend::Down
                } else if first > 0 && last > 0 {
                    Trend::Up
                } else if first == 0 && last == 0 {
                    Trend::Flat
                } else {
                    Trend::Mixed
                })
            }
            _ => None,
        };
        nodes.insert(from.clone());
        nodes.insert(to.clone());
        edges.push(AbstractEdge {
            from,
            to,
            trend,
            infinite: fam.is_infinite(),
            family: Some(fi),
            index: None,
        });
    }
    for e in &edges {
        nodes.insert(e.from.clone());
        nodes.insert(e.to.clone());
    }
    AbstractGraph {
        nodes: nodes.into_iter().collect(),
        edges,
    }
}

/// Levels making every kept edge strictly decreasing, or `None` when the kept edges
/// contain a cycle.
fn levels(nodes: &[Node], edges: &[&AbstractEdge]) -> Option<BTreeMap<Node, usize>> {
    let mut succ: BTreeMap<&Node, Vec<&Node>> = BTreeMap::new();
    for e in edges {
        succ.entry(&e.from).or_default().push(&e.to);
    }
    let mut level: BTreeMap<Node, usize> = BTreeMap::new();
    let mut on_stack: BTreeSet<Node> = BTreeSet::new();
    fn visit<'n>(
        v: &'n Node,
        succ: &BTreeMap<&'n Node, Vec<&'n Node>>,
        level: &mut BTreeMap<Node, usize>,
        on_stack: &mut BTreeSet<Node>,
    ) -> bool {
        if level.contains_key(v) {
            return true;
        }
        if !on_stack.insert(v.clone()) {
            return false;
        }
        let mut lv = 0;
        for w in succ.get(v).map(Vec::as_slice).unwrap_or(&[]) {
            if !visit(w, succ, level, on_stack) {
                return false;
            }
            lv = lv.max(level[*w] + 1);
        }
        on_stack.remove(v);
        level.insert(v.clone(), lv);
        true
    }
    for v in nodes {
        if !visit(v, &succ, &mut level, &mut on_stack) {
            return None;
        }
    }
    Some(level)
}

/// A ranking showing that no infinite path avoids `e_1..e_above`, if the abstraction
/// admits one.
pub(crate) fn no_infinite_path_above(g: &GraphPresentation, above: u64) -> Result<Option<RankingEvidence>> {
    let ag = abstract_graph(g, above);
    let kept: Vec<&AbstractEdge> = ag.edges.iter().filter(|e| !e.is_self_with(&[Trend::Down])).collect();
    Ok(levels(&ag.nodes, &kept).map(|lv| RankingEvidence {
        above,
        levels: lv.into_iter().collect(),
    }))
}

/// Re-check a ranking against a freshly built abstraction.
pub(crate) fn verify_ranking(g: &GraphPresentation, r: &RankingEvidence) -> bool {
    let ag = abstract_graph(g, r.above);
    let lv: BTreeMap<&Node, usize> = r.levels.iter().map(|(n, l)| (n, *l)).collect();
    ag.edges.iter().all(|e| {
        e.is_self_with(&[Trend::Down]) || matches!((lv.get(&e.from), lv.get(&e.to)), (Some(a), Some(b)) if a > b)
    })
}

/// Whether every series node lies on no cycle once edges that raise or keep the index
/// inside a series are dropped. Together with finite in-degrees this bounds the set of
/// paths ending at any edge.
pub(crate) fn series_acyclic_backwards(g: &GraphPresentation) -> bool {
    let ag = abstract_graph(g, 0);
    let kept: Vec<&AbstractEdge> = ag
        .edges
        .iter()
        .filter(|e| !e.is_self_with(&[Trend::Up, Trend::Flat]))
        .collect();
    let comp = components(&ag.nodes, &kept);
    kept.iter().all(|e| {
        let on_series = matches!(e.from, Node::Series(_)) || matches!(e.to, Node::Series(_));
        !on_series || comp[&e.from] != comp[&e.to]
    })
}

/// Strongly connected component ids.
fn components(nodes: &[Node], edges: &[&AbstractEdge]) -> BTreeMap<Node, usize> {
    let mut reach: BTreeMap<&Node, BTreeSet<&Node>> = BTreeMap::new();
    for v in nodes {
        let mut seen = BTreeSet::new();
        let mut stack = vec![v];
        while let Some(u) = stack.pop() {
            for e in edges.iter().filter(|e| &e.from == u) {
                if seen.insert(&e.to) {
                    stack.push(&e.to);
                }
            }
        }
        reach.insert(v, seen);
    }
    let mut comp = BTreeMap::new();
    let mut next = 0;
    for v in nodes {
        if comp.contains_key(v) {
            continue;
        }
        for w in nodes {
            if w == v || (reach[v].contains(w) && reach[w].contains(v)) {
                comp.insert(w.clone(), next);
            }
        }
        next += 1;
    }
    comp
}
