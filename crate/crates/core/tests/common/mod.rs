//! Random presentations, paths and chains shared by the integration suites.
#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use shadow_core::dynamics::{complete_path, Chain};
use shadow_core::enumeration::Threshold;
use shadow_core::graph::parse_graph;
use shadow_core::metric::distance_infinite;
use shadow_core::{GraphPresentation, InfinitePath, Vertex};

/// Render `a*k + b` in the presentation syntax.
fn affine(a: u64, b: i64) -> String {
    let head = if a == 1 { "k".to_string() } else { format!("{a}k") };
    match b.cmp(&0) {
        std::cmp::Ordering::Equal => head,
        std::cmp::Ordering::Greater => format!("{head}+{b}"),
        std::cmp::Ordering::Less => format!("{head}{b}"),
    }
}

fn random_term<R: Rng>(rng: &mut R, fixed: &[&str]) -> String {
    match rng.gen_range(0..10) {
        0..=2 => fixed.choose(rng).expect("non-empty").to_string(),
        3..=8 => format!("u[{}]", affine(1, rng.gen_range(0..=2))),
        _ => format!("w[{}]", affine(1, rng.gen_range(0..=1))),
    }
}

/// A random presentation with infinitely many edges: up to two exceptional edges between
/// fixed vertices, then one family per residue class of the edge index.
pub fn random_affine<R: Rng>(rng: &mut R) -> GraphPresentation {
    let fixed = ["a", "b"];
    loop {
        let p = rng.gen_range(1..=3u64);
        let x = rng.gen_range(0..=2u64);
        let mut text = String::from("graph random\n");
        for i in 1..=x {
            let s = fixed.choose(rng).expect("non-empty");
            let r = fixed.choose(rng).expect("non-empty");
            text.push_str(&format!("edge e{i} from {s} to {r}\n"));
        }
        for r in 1..=p {
            let src = random_term(rng, &fixed);
            let dst = random_term(rng, &fixed);
            let idx = affine(p, r as i64 - p as i64 + x as i64);
            text.push_str(&format!("family k >= 1: edge e[{idx}] from {src} to {dst}\n"));
        }
        if let Ok(g) = parse_graph(&text) {
            return g;
        }
    }
}

/// A random finite presentation without sinks on at most `max_edges` edges.
pub fn random_finite<R: Rng>(rng: &mut R, max_edges: usize) -> GraphPresentation {
    let n = rng.gen_range(1..=3usize.min(max_edges));
    let count = rng.gen_range(n..=max_edges);
    let mut pairs: Vec<(usize, usize)> = (1..=n).map(|v| (v, rng.gen_range(1..=n))).collect();
    while pairs.len() < count {
        pairs.push((rng.gen_range(1..=n), rng.gen_range(1..=n)));
    }
    pairs.shuffle(rng);
    let mut text = String::from("graph finite\n");
    for (i, (s, r)) in pairs.iter().enumerate() {
        text.push_str(&format!("edge e{} from v{s} to v{r}\n", i + 1));
    }
    parse_graph(&text).expect("every vertex has an out-edge")
}

/// A random walk of `len` edges from `v`, choosing among the first `cap` out-edges with
/// index at most `max_edge`; stops early when no such edge exists.
pub fn walk<R: Rng>(g: &GraphPresentation, rng: &mut R, v: &Vertex, len: usize, cap: usize, max_edge: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut v = v.clone();
    for _ in 0..len {
        let opts: Vec<u64> = g
            .out_edges(&v)
            .iter(g)
            .take_while(|&e| e <= max_edge)
            .take(cap)
            .collect();
        let Some(&e) = opts.choose(rng) else { break };
        out.push(e);
        v = g.range(e).expect("edge exists");
    }
    out
}

/// A random eventually periodic path: a random prefix, then a random cycle back to the
/// prefix end if one is found among edges up to `max_edge`, else the least-edge completion.
pub fn random_path<R: Rng>(
    g: &GraphPresentation,
    rng: &mut R,
    max_prefix: usize,
    max_cycle: usize,
    max_edge: u64,
) -> InfinitePath {
    let top = g.max_index().map_or(max_edge, |m| m.min(max_edge));
    let start = g.source(rng.gen_range(1..=top)).expect("edge exists");
    let len = rng.gen_range(0..=max_prefix);
    let prefix = walk(g, rng, &start, len, 6, max_edge);
    let end = match prefix.last() {
        Some(&e) => g.range(e).expect("edge exists"),
        None => start.clone(),
    };
    for _ in 0..30 {
        let len = rng.gen_range(1..=max_cycle);
        let c = walk(g, rng, &end, len, 6, max_edge);
        if !c.is_empty() && g.range(*c.last().expect("non-empty")).expect("edge exists") == end {
            return InfinitePath::periodic(prefix, c).expect("closed cycle");
        }
    }
    complete_path(g, &prefix, Some(&start)).expect("no sinks")
}

/// Continue `head` by a short random walk and the least-edge completion.
pub fn extend<R: Rng>(g: &GraphPresentation, rng: &mut R, head: &[u64], cap: usize) -> InfinitePath {
    let v = g.range(*head.last().expect("non-empty")).expect("edge exists");
    let mut w = head.to_vec();
    let len = rng.gen_range(0..=4);
    w.extend(walk(g, rng, &v, len, cap, u64::MAX));
    complete_path(g, &w, None).expect("no sinks")
}

/// A finite chain at threshold `t` whose element `n+1` keeps the first `keep(n)` symbols
/// of `shift(x^n)` and then wanders; `None` when no valid continuation was drawn.
pub fn random_chain<R: Rng>(
    g: &GraphPresentation,
    rng: &mut R,
    m: usize,
    t: &Threshold,
    min_keep: usize,
    max_keep: usize,
) -> Option<Chain> {
    let e1 = rng.gen_range(1..=g.max_index().unwrap_or(4).min(4));
    let first = extend(g, rng, &[e1], 4);
    let mut elements = vec![first];
    while elements.len() < m {
        let s = elements.last().expect("non-empty").shift();
        let mut next = None;
        for _ in 0..20 {
            let keep = rng.gen_range(min_keep..=max_keep);
            let y = extend(g, rng, &s.take(keep), 4);
            if distance_infinite(g, &s, &y).expect("valid").below(t) {
                next = Some(y);
                break;
            }
        }
        elements.push(next?);
    }
    Some(Chain::finite(elements, t.clone()))
}
