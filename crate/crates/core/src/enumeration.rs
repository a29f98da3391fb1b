//! The block enumeration of finite paths, `N(k)`, rank and unrank.
//!
//! Block `b` lists, in order: the vertex `s(e_b)` if no earlier edge starts there, then for
//! each length `L = 1..=b` the paths of length `L` that use only `e_1..e_b` and are new in
//! this block, in lexicographic order of their index sequences. For `L < b` a path is new
//! exactly when it contains `e_b`; all paths of length `b` over `e_1..e_b` are new because
//! no earlier block lists that length. `N(k)` is the position of the last entry of block `k`.
//!
//! Counts come from walk-count tables: `W_k(v, n)` is the number of length-`n` paths from
//! `v` using edges `e_1..e_k`.

use crate::error::{Error, Result};
use crate::graph::{GraphPresentation, Vertex};
use crate::path::FinitePath;
use num_bigint::BigUint;
use num_traits::{One, Zero};
use std::collections::{HashMap, HashSet};
use std::rc::Rc;
use std::sync::Mutex;

/// Position of a finite path in the enumeration, starting at 1.
pub type Rank = BigUint;

/// Exponent `t` of a dyadic scale `2^-t`; `F_t` is the set of edges of rank at most `t`.
pub type Threshold = BigUint;

/// Number of cached truncation tables kept before older ones are dropped.
const TABLE_CAPACITY: usize = 48;

#[derive(Debug, Default)]
pub(crate) struct EnumCache {
    state: Mutex<CacheState>,
}

#[derive(Debug, Default)]
struct CacheState {
    seen_sources: HashSet<Vertex>,
    new_source: Vec<bool>,
    distinct: Vec<u64>,
    nk: Vec<BigUint>,
    tables: HashMap<u64, Table>,
}

/// Walk counts over the truncation `e_1..e_k`.
#[derive(Debug)]
struct Table {
    vertex_ids: HashMap<Vertex, usize>,
    /// `(index, source id, range id)` in index order.
    edges: Vec<(u64, usize, usize)>,
    /// Outgoing `(index, range id)` per vertex, in index order.
    out: Vec<Vec<(u64, usize)>>,
    /// `walks[n][v]`.
    walks: Vec<Vec<BigUint>>,
    /// `counts[n] = sum_v walks[n][v]`.
    counts: Vec<BigUint>,
}

impl Table {
    fn build(g: &GraphPresentation, k: u64) -> Result<Table> {
        let t = g.truncate(k)?;
        let vertex_ids: HashMap<Vertex, usize> = t.vertices.iter().enumerate().map(|(i, v)| (v.clone(), i)).collect();
        let mut out = vec![Vec::new(); t.vertices.len()];
        let mut edges = Vec::with_capacity(t.edges.len());
        for e in &t.edges {
            let s = vertex_ids[&e.source];
            let r = vertex_ids[&e.range];
            out[s].push((e.index, r));
            edges.push((e.index, s, r));
        }
        let ones = vec![BigUint::one(); t.vertices.len()];
        Ok(Table {
            vertex_ids,
            edges,
            out,
            walks: vec![ones],
            counts: vec![BigUint::from(t.vertices.len())],
        })
    }

    fn ensure_len(&mut self, n: usize) {
        while self.walks.len() <= n {
            let prev = self.walks.last().expect("walks[0] exists");
            let next: Vec<BigUint> = self
                .out
                .iter()
                .map(|outs| outs.iter().map(|&(_, r)| &prev[r]).sum())
                .collect();
            self.counts.push(next.iter().sum());
            self.walks.push(next);
        }
    }

    fn walk(&self, v: usize, n: usize) -> &BigUint {
        &self.walks[n][v]
    }

    /// Paths of length `edges.len()` over this truncation that precede `edges` lexicographically.
    fn lex_less(&self, g: &GraphPresentation, edges: &[u64]) -> Result<BigUint> {
        let len = edges.len();
        let mut total = BigUint::zero();
        let mut current: Option<usize> = None;
        for (i, &p) in edges.iter().enumerate() {
            let rest = len - i - 1;
            match current {
                None => {
                    for &(idx, _, r) in &self.edges {
                        if idx >= p {
                            break;
                        }
                        total += self.walk(r, rest);
                    }
                }
                Some(v) => {
                    for &(idx, r) in &self.out[v] {
                        if idx >= p {
                            break;
                        }
                        total += self.walk(r, rest);
                    }
                }
            }
            if i + 1 == len {
                break;
            }
            if p as usize > self.edges.len() {
                break;
            }
            let r = g.range(p)?;
            current = Some(self.vertex_ids[&r]);
        }
        Ok(total)
    }
}

impl CacheState {
    fn effective(g: &GraphPresentation, k: u64) -> u64 {
        g.max_index().map_or(k, |m| m.min(k))
    }

    fn ensure_sources(&mut self, g: &GraphPresentation, k: u64) -> Result<()> {
        let k = Self::effective(g, k);
        if self.distinct.is_empty() {
            self.distinct.push(0);
        }
        while (self.new_source.len() as u64) < k {
            let idx = self.new_source.len() as u64 + 1;
            let s = g.source(idx)?;
            let fresh = self.seen_sources.insert(s);
            self.new_source.push(fresh);
            let last = *self.distinct.last().expect("non-empty");
            self.distinct.push(last + fresh as u64);
        }
        Ok(())
    }

    fn distinct_sources(&mut self, g: &GraphPresentation, k: u64) -> Result<u64> {
        self.ensure_sources(g, k)?;
        Ok(self.distinct[Self::effective(g, k) as usize])
    }

    /// Whether block `b` opens with a vertex.
    fn block_has_vertex(&mut self, g: &GraphPresentation, b: u64) -> Result<bool> {
        if g.max_index().is_some_and(|m| b > m) {
            return Ok(false);
        }
        self.ensure_sources(g, b)?;
        Ok(self.new_source[b as usize - 1])
    }

    fn table(&mut self, g: &GraphPresentation, k: u64, len: usize) -> Result<&mut Table> {
        let k = Self::effective(g, k);
        if !self.tables.contains_key(&k) {
            if self.tables.len() >= TABLE_CAPACITY {
                self.tables.retain(|&key, _| key + 1 == k || key == k + 1);
            }
            let t = Table::build(g, k)?;
            self.tables.insert(k, t);
        }
        let t = self.tables.get_mut(&k).expect("inserted");
        t.ensure_len(len);
        Ok(t)
    }

    /// Paths of length `len >= 1` over `e_1..e_k`.
    fn count(&mut self, g: &GraphPresentation, k: u64, len: usize) -> Result<BigUint> {
        if k == 0 {
            return Ok(BigUint::zero());
        }
        Ok(self.table(g, k, len)?.counts[len].clone())
    }

    /// Paths of length `len` that are new in block `b`.
    fn new_count(&mut self, g: &GraphPresentation, b: u64, len: usize) -> Result<BigUint> {
        let here = self.count(g, b, len)?;
        if len as u64 >= b {
            return Ok(here);
        }
        let before = self.count(g, b - 1, len)?;
        Ok(here - before)
    }

    /// Position of the last entry of block `b`; zero for `b = 0`.
    fn nk_ext(&mut self, g: &GraphPresentation, b: u64) -> Result<BigUint> {
        if self.nk.is_empty() {
            self.nk.push(BigUint::zero());
        }
        while (self.nk.len() as u64) <= b {
            let block = self.nk.len() as u64;
            let mut total = BigUint::from(self.distinct_sources(g, block)?);
            for len in 1..=block as usize {
                total += self.count(g, block, len)?;
            }
            self.nk.push(total);
        }
        Ok(self.nk[b as usize].clone())
    }

    fn vertex_rank(&mut self, g: &GraphPresentation, v: &Vertex) -> Result<BigUint> {
        let b = g
            .min_out_edge(v)
            .ok_or_else(|| Error::InvalidPath(format!("{v} has no outgoing edge")))?;
        Ok(self.nk_ext(g, b - 1)? + 1u32)
    }

    fn path_rank(&mut self, g: &GraphPresentation, edges: &[u64]) -> Result<BigUint> {
        g.is_path(edges)?;
        let len = edges.len();
        let b = edges.iter().copied().max().expect("non-empty").max(len as u64);
        let mut r = self.nk_ext(g, b - 1)?;
        if self.block_has_vertex(g, b)? {
            r += 1u32;
        }
        for l in 1..len {
            r += self.new_count(g, b, l)?;
        }
        r += 1u32;
        let less = self.table(g, b, len)?.lex_less(g, edges)?;
        if (len as u64) < b {
            let old = self.table(g, b - 1, len)?.lex_less(g, edges)?;
            r += less - old;
        } else {
            r += less;
        }
        Ok(r)
    }

    fn unrank(&mut self, g: &GraphPresentation, i: &BigUint) -> Result<FinitePath> {
        if i.is_zero() {
            return Err(Error::OutOfRange("ranks start at 1".into()));
        }
        let mut b = 1u64;
        while &self.nk_ext(g, b)? < i {
            b += 1;
        }
        let mut offset = i - self.nk_ext(g, b - 1)?;
        if self.block_has_vertex(g, b)? {
            if offset.is_one() {
                return Ok(FinitePath::Vertex(g.source(b)?));
            }
            offset -= 1u32;
        }
        for len in 1..=b as usize {
            let n = self.new_count(g, b, len)?;
            if offset <= n {
                return self.unrank_in_block(g, b, len, offset).map(FinitePath::Edges);
            }
            offset -= n;
        }
        Err(Error::OutOfRange(format!("rank {i} not located")))
    }

    /// The `offset`-th (1-based) new path of length `len` in block `b`.
    fn unrank_in_block(&mut self, g: &GraphPresentation, b: u64, len: usize, mut offset: BigUint) -> Result<Vec<u64>> {
        let all_new = len as u64 >= b;
        if !all_new {
            self.table(g, b - 1, len)?;
        }
        self.table(g, b, len)?;
        let kb = Self::effective(g, b);
        let cur_t = &self.tables[&kb];
        let prev_t = if all_new {
            None
        } else {
            Some(&self.tables[&Self::effective(g, b - 1)])
        };
        let mut path = Vec::with_capacity(len);
        let mut has_b = false;
        let mut current: Option<usize> = None;
        for pos in 0..len {
            let rest = len - pos - 1;
            let candidates: Vec<(u64, usize)> = match current {
                None => cur_t.edges.iter().map(|&(k, _, r)| (k, r)).collect(),
                Some(v) => cur_t.out[v].clone(),
            };
            let mut chosen = None;
            for (k, r) in candidates {
                let full = cur_t.walk(r, rest).clone();
                let cnt = if all_new || has_b || k == b {
                    full
                } else {
                    let prev = prev_t.expect("present when not all new");
                    let rv = g.range(k)?;
                    full - prev.walk(prev.vertex_ids[&rv], rest)
                };
                if offset <= cnt {
                    chosen = Some((k, r));
                    break;
                }
                offset -= cnt;
            }
            let (k, r) = chosen.ok_or_else(|| Error::OutOfRange("unrank overflow".into()))?;
            has_b |= k == b;
            path.push(k);
            current = Some(r);
        }
        Ok(path)
    }
}

impl EnumCache {
    fn with<T>(&self, f: impl FnOnce(&mut CacheState) -> Result<T>) -> Result<T> {
        let mut guard = self.state.lock().unwrap_or_else(|e| e.into_inner());
        f(&mut guard)
    }
}

/// `N(k)`: the rank of the last path in block `k`. Finite graphs require `k <= |E|`.
pub fn nk(g: &GraphPresentation, k: u64) -> Result<BigUint> {
    if k == 0 {
        return Err(Error::OutOfRange("N(k) is defined for k >= 1".into()));
    }
    if let Some(m) = g.max_index() {
        if k > m {
            return Err(Error::OutOfRange(format!("k = {k} exceeds the {m} edges")));
        }
    }
    g.cache.with(|s| s.nk_ext(g, k))
}

/// `N(k)` extended to every block, including blocks past the last edge of a finite graph.
pub fn block_end(g: &GraphPresentation, b: u64) -> Result<BigUint> {
    g.cache.with(|s| s.nk_ext(g, b))
}

/// Position of `p` in the enumeration.
pub fn rank(g: &GraphPresentation, p: &FinitePath) -> Result<Rank> {
    match p {
        FinitePath::Vertex(v) => g.cache.with(|s| s.vertex_rank(g, v)),
        FinitePath::Edges(e) => {
            if e.is_empty() {
                return Err(Error::InvalidPath("empty edge sequence".into()));
            }
            g.cache.with(|s| s.path_rank(g, e))
        }
    }
}

pub fn vertex_rank(g: &GraphPresentation, v: &Vertex) -> Result<Rank> {
    g.cache.with(|s| s.vertex_rank(g, v))
}

pub fn edge_rank(g: &GraphPresentation, k: u64) -> Result<Rank> {
    rank(g, &FinitePath::Edges(vec![k]))
}

/// The path at position `i`.
pub fn unrank(g: &GraphPresentation, i: &Rank) -> Result<FinitePath> {
    g.cache.with(|s| s.unrank(g, i))
}

/// Number of paths of length `len` over `e_1..e_k` (`len = 0` counts source vertices).
pub fn count_paths(g: &GraphPresentation, k: u64, len: usize) -> Result<BigUint> {
    g.cache.with(|s| {
        if len == 0 {
            Ok(BigUint::from(s.distinct_sources(g, k)?))
        } else {
            s.count(g, k, len)
        }
    })
}

/// Largest index `m` with `F_t = {e_1, ..., e_m}`; zero when `F_t` is empty.
///
/// Edge ranks increase with the index, so `F_t` is always an initial segment.
pub fn f_bound(g: &GraphPresentation, t: &Threshold) -> Result<u64> {
    g.cache.with(|s| {
        let top = g.max_index();
        let mut m = 0u64;
        loop {
            let k = m + 1;
            if top.is_some_and(|top| k > top) {
                return Ok(m);
            }
            let mut r = s.nk_ext(g, k - 1)? + 1u32;
            if s.block_has_vertex(g, k)? {
                r += 1u32;
            }
            if &r > t {
                return Ok(m);
            }
            m = k;
        }
    })
}

/// The edges of `F_t`, listed by index.
pub fn f_set(g: &GraphPresentation, t: &Threshold) -> Result<Vec<u64>> {
    Ok((1..=f_bound(g, t)?).collect())
}

/// Whether the vertex has rank at most `t`.
pub(crate) fn vertex_within(g: &GraphPresentation, v: &Vertex, t: &Threshold) -> Result<bool> {
    Ok(&vertex_rank(g, v)? <= t)
}

/// Shortest length `L` such that every path of length at least `L` has rank above `t`.
pub(crate) fn long_path_length(g: &GraphPresentation, t: &Threshold) -> Result<usize> {
    let mut l = 1u64;
    while &block_end(g, l - 1)? < t {
        l += 1;
    }
    Ok(l as usize)
}

/// Lazy stream of the enumeration, starting at rank 1.
pub fn enumerate(g: &GraphPresentation) -> Enumeration<'_> {
    Enumeration {
        g,
        block: 0,
        pending: Vec::new(),
    }
}

pub struct Enumeration<'g> {
    g: &'g GraphPresentation,
    block: u64,
    pending: Vec<BlockStage>,
}

enum BlockStage {
    Vertex(Vertex),
    Paths(PathWalker),
}

/// The truncation `e_1..e_b` with completion tables for the paths of block `b`.
struct BlockGraph {
    block: u64,
    edges: Vec<(u64, usize)>,
    out: Vec<Vec<(u64, usize)>>,
    /// `live[n][v]`: some path of length `n` starts at `v`.
    live: Vec<Vec<bool>>,
    /// `live_new[n][v]`: some path of length `n` starting at `v` uses `e_b`.
    live_new: Vec<Vec<bool>>,
}

impl BlockGraph {
    fn new(block: u64, edges: Vec<(u64, usize)>, out: Vec<Vec<(u64, usize)>>) -> Self {
        let n_vertices = out.len();
        let mut live = vec![vec![true; n_vertices]];
        let mut live_new = vec![vec![false; n_vertices]];
        for n in 1..block as usize {
            let (prev, prev_new) = (&live[n - 1], &live_new[n - 1]);
            let next: Vec<bool> = out.iter().map(|o| o.iter().any(|&(_, r)| prev[r])).collect();
            let next_new: Vec<bool> = out
                .iter()
                .map(|o| o.iter().any(|&(k, r)| prev_new[r] || (k == block && prev[r])))
                .collect();
            live.push(next);
            live_new.push(next_new);
        }
        BlockGraph {
            block,
            edges,
            out,
            live,
            live_new,
        }
    }

    /// Whether taking `(k, r)` with `rest` edges still to place can finish a listed path.
    fn completes(&self, k: u64, r: usize, rest: usize, need_new: bool) -> bool {
        if need_new && k != self.block {
            self.live_new[rest][r]
        } else {
            self.live[rest][r]
        }
    }
}

/// Lexicographic generator of the new paths of one length in one block. Only branches
/// that complete to a listed path are entered.
struct PathWalker {
    graph: Rc<BlockGraph>,
    len: usize,
    require_block_edge: bool,
    /// Per depth: the vertex whose out-list is being scanned (`None` at depth 0), the
    /// position in that list, and whether `e_b` is still missing after this choice.
    stack: Vec<(Option<usize>, usize, bool)>,
    started: bool,
}

impl PathWalker {
    fn options(&self, from: Option<usize>) -> &[(u64, usize)] {
        match from {
            None => &self.graph.edges,
            Some(v) => &self.graph.out[v],
        }
    }

    fn chosen(&self, depth: usize) -> (u64, usize) {
        let (from, idx, _) = self.stack[depth];
        self.options(from)[idx]
    }

    /// The first admissible option at or after `start` for the next depth.
    fn seek(&self, from: Option<usize>, start: usize, need_new: bool) -> Option<(usize, bool)> {
        let rest = self.len - self.stack.len() - 1;
        let opts = self.options(from);
        (start..opts.len()).find_map(|i| {
            let (k, r) = opts[i];
            self.graph
                .completes(k, r, rest, need_new)
                .then_some((i, need_new && k != self.graph.block))
        })
    }

    fn missing(&self) -> bool {
        self.stack.last().map_or(self.require_block_edge, |&(_, _, m)| m)
    }

    /// Extend the stack with first admissible choices.
    fn fill(&mut self) -> bool {
        while self.stack.len() < self.len {
            let from = match self.stack.len() {
                0 => None,
                d => Some(self.chosen(d - 1).1),
            };
            let Some((i, missing)) = self.seek(from, 0, self.missing()) else {
                return false;
            };
            self.stack.push((from, i, missing));
        }
        true
    }

    /// Move the deepest level to its next admissible option, popping exhausted levels.
    fn bump(&mut self) -> bool {
        while let Some((from, idx, _)) = self.stack.pop() {
            if let Some((i, missing)) = self.seek(from, idx + 1, self.missing()) {
                self.stack.push((from, i, missing));
                return true;
            }
        }
        false
    }

    fn advance(&mut self) -> bool {
        if !self.started {
            self.started = true;
            return self.fill();
        }
        self.bump() && self.fill()
    }
}

impl Iterator for PathWalker {
    type Item = Vec<u64>;

    fn next(&mut self) -> Option<Vec<u64>> {
        self.advance()
            .then(|| (0..self.len).map(|d| self.chosen(d).0).collect())
    }
}

impl Enumeration<'_> {
    fn open_block(&mut self) -> Result<()> {
        self.block += 1;
        let b = self.block;
        let g = self.g;
        let t = g.truncate(b)?;
        let ids: HashMap<&Vertex, usize> = t.vertices.iter().enumerate().map(|(i, v)| (v, i)).collect();
        let mut out = vec![Vec::new(); t.vertices.len()];
        let mut edges = Vec::new();
        for e in &t.edges {
            out[ids[&e.source]].push((e.index, ids[&e.range]));
            edges.push((e.index, ids[&e.range]));
        }
        let has_vertex = g.cache.with(|s| s.block_has_vertex(g, b))?;
        let mut stages = Vec::new();
        if has_vertex {
            stages.push(BlockStage::Vertex(g.source(b)?));
        }
        let graph = Rc::new(BlockGraph::new(b, edges, out));
        for len in 1..=b as usize {
            stages.push(BlockStage::Paths(PathWalker {
                graph: Rc::clone(&graph),
                len,
                require_block_edge: (len as u64) < b,
                stack: Vec::new(),
                started: false,
            }));
        }
        stages.reverse();
        self.pending = stages;
        Ok(())
    }
}

impl Iterator for Enumeration<'_> {
    type Item = FinitePath;

    fn next(&mut self) -> Option<FinitePath> {
        loop {
            if self.pending.is_empty() {
                self.open_block().ok()?;
            }
            match self.pending.last_mut()? {
                BlockStage::Vertex(v) => {
                    let v = v.clone();
                    self.pending.pop();
                    return Some(FinitePath::Vertex(v));
                }
                BlockStage::Paths(w) => {
                    if let Some(p) = w.next() {
                        return Some(FinitePath::Edges(p));
                    }
                    self.pending.pop();
                }
            }
        }
    }
}

/// Serde adapter that writes ranks and thresholds as decimal strings, so certificates
/// stay exact and readable. Plain JSON integers are accepted on input.
pub mod decimal {
    use num_bigint::BigUint;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_str_radix(10))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Text(String),
            Number(u64),
        }
        match Repr::deserialize(d)? {
            Repr::Number(n) => Ok(BigUint::from(n)),
            Repr::Text(t) => BigUint::parse_bytes(t.as_bytes(), 10)
                .ok_or_else(|| serde::de::Error::custom(format!("`{t}` is not a decimal integer"))),
        }
    }
}
