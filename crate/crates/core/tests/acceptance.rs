//! Acceptance suite: one test per criterion, each printing a single PASS/FAIL line with
//! its pinned tolerance. Lines go straight to stderr so they survive output capture.

mod common;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use shadow_core::dynamics::{
    chain_from_family, chain_from_family_and_tail, check_shadowing, complete_path, construct_shadow_finite,
    construct_shadow_infinite, default_extensions, f_index, f_inverse, validate_chain, Chain, ChainTail, ChainValidity,
    PathFamily,
};
use shadow_core::enumeration::{enumerate, f_bound, nk, Threshold};
use shadow_core::graph::{builtin, builtin_names, print_graph};
use shadow_core::metric::{below_nk_threshold, distance_infinite, Distance};
use shadow_core::shadowing::{
    check_ipc1_instance, classify_wandering, decide_shadowing, search_shadow_point, verify_certificate, Answer,
    Certificate, Evidence, IpcResult, Rule, SearchBounds, ShadowSearch, WanderingVerdict,
};
use shadow_core::{FinitePath, GraphPresentation, InfinitePath, Vertex};
use std::collections::{BTreeSet, HashMap};
use std::io::Write;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

fn report(id: u32, title: &str, pass: bool, detail: &str) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    let line = format!("[acceptance] criterion {id} {title}: {verdict} ({detail})\n");
    let _ = std::io::stderr().write_all(line.as_bytes());
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn builtins() -> Vec<GraphPresentation> {
    builtin_names().into_iter().map(|n| builtin(n).unwrap()).collect()
}

const ROSE_LISTING: [&str; 40] = [
    "v1", "e1", "e2", "e1.e1", "e1.e2", "e2.e1", "e2.e2", "e3", "e1.e3", "e2.e3", "e3.e1", "e3.e2", "e3.e3",
    "e1.e1.e1", "e1.e1.e2", "e1.e1.e3", "e1.e2.e1", "e1.e2.e2", "e1.e2.e3", "e1.e3.e1", "e1.e3.e2", "e1.e3.e3",
    "e2.e1.e1", "e2.e1.e2", "e2.e1.e3", "e2.e2.e1", "e2.e2.e2", "e2.e2.e3", "e2.e3.e1", "e2.e3.e2", "e2.e3.e3",
    "e3.e1.e1", "e3.e1.e2", "e3.e1.e3", "e3.e2.e1", "e3.e2.e2", "e3.e2.e3", "e3.e3.e1", "e3.e3.e2", "e3.e3.e3",
];

#[test]
fn criterion_1_golden_enumeration() {
    let start = Instant::now();
    let g = builtin("rose").unwrap();
    let got: Vec<String> = enumerate(&g).take(40).map(|p| p.to_string()).collect();
    let mismatches = got.iter().zip(ROSE_LISTING).filter(|(a, b)| a.as_str() != *b).count();
    let n2 = nk(&g, 2).unwrap();
    let n3 = nk(&g, 3).unwrap();
    let elapsed = start.elapsed();
    let pass = mismatches == 0 && n2 == 7u32.into() && n3 == 40u32.into() && elapsed < Duration::from_secs(1);
    report(
        1,
        "golden rose enumeration",
        pass,
        &format!("{mismatches} mismatches in 40 entries, N(2)={n2}, N(3)={n3}, {elapsed:.2?} < 1s"),
    );
    assert!(pass);
}

/// Positions of the first entries of the enumeration.
struct Stream {
    vertices: HashMap<Vertex, u64>,
    paths: HashMap<Vec<u64>, u64>,
    max_len: usize,
}

impl Stream {
    fn new(g: &GraphPresentation, cap: usize) -> Self {
        let mut stream = Stream {
            vertices: HashMap::new(),
            paths: HashMap::new(),
            max_len: 0,
        };
        for (i, p) in enumerate(g).take(cap).enumerate() {
            let pos = i as u64 + 1;
            match p {
                FinitePath::Vertex(v) => {
                    stream.vertices.insert(v, pos);
                }
                FinitePath::Edges(e) => {
                    stream.max_len = stream.max_len.max(e.len());
                    stream.paths.insert(e, pos);
                }
            }
        }
        stream
    }

    /// The first entry that is an initial segment of exactly one of the paths, or `None`
    /// when no such entry lies within the stored part of the stream. Initial segments
    /// shorter than the first disagreement are shared and so never qualify.
    fn distance(&self, g: &GraphPresentation, x: &InfinitePath, y: &InfinitePath) -> Option<Distance> {
        if x == y {
            return Some(Distance::Zero);
        }
        let (sx, sy) = (x.source(g).unwrap(), y.source(g).unwrap());
        let mut hits = Vec::new();
        if sx != sy {
            hits.extend(self.vertices.get(&sx));
            hits.extend(self.vertices.get(&sy));
        }
        let (xs, ys) = (x.take(self.max_len), y.take(self.max_len));
        let split = xs
            .iter()
            .zip(&ys)
            .position(|(a, b)| a != b)
            .map_or(self.max_len + 1, |p| p + 1);
        for q in split..=self.max_len {
            hits.extend(self.paths.get(&xs[..q]));
            hits.extend(self.paths.get(&ys[..q]));
        }
        hits.into_iter().min().map(|&r| Distance::Dyadic(r.into()))
    }
}

/// Random pairs whose distance the stored stream can settle, with the brute-force value.
fn oracle_sample(
    g: &GraphPresentation,
    stream: &Stream,
    seed: u64,
    want: usize,
) -> Vec<(InfinitePath, InfinitePath, Distance)> {
    let mut r = rng(seed);
    let mut out = Vec::new();
    let mut tries = 0;
    while out.len() < want && tries < 20 * want {
        tries += 1;
        let x = common::random_path(g, &mut r, 6, 4, 6);
        let y = if r.gen_bool(0.3) {
            let keep = r.gen_range(1..=6);
            common::extend(g, &mut r, &x.take(keep), 6)
        } else {
            common::random_path(g, &mut r, 6, 4, 6)
        };
        if let Some(d) = stream.distance(g, &x, &y) {
            out.push((x, y, d));
        }
    }
    out
}

type Sample = Vec<(InfinitePath, InfinitePath, Distance)>;

/// Stream entries stored per builtin. Sampled paths use edges up to `e_6` before any
/// drift, so their distances are settled well inside this prefix of the stream.
const STREAM_CAP: usize = 30_000;

/// Oracle samples per builtin, shared by the metric criteria.
fn oracle_samples() -> &'static [(GraphPresentation, Sample)] {
    static SAMPLES: OnceLock<Vec<(GraphPresentation, Sample)>> = OnceLock::new();
    SAMPLES.get_or_init(|| {
        builtins()
            .into_iter()
            .enumerate()
            .map(|(i, g)| {
                let stream = Stream::new(&g, STREAM_CAP);
                let sample = oracle_sample(&g, &stream, 1000 + i as u64, 1000);
                (g, sample)
            })
            .collect()
    })
}

#[test]
fn criterion_2_metric_oracle() {
    let start = Instant::now();
    let mut pairs = 0;
    let mut mismatches = 0;
    let mut short = Vec::new();
    for (g, sample) in oracle_samples() {
        if sample.len() < 1000 {
            short.push(g.name().to_string());
        }
        for (x, y, d) in sample {
            pairs += 1;
            if distance_infinite(g, x, y).unwrap() != *d {
                mismatches += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    let pass = mismatches == 0 && short.is_empty() && elapsed < Duration::from_secs(30);
    report(
        2,
        "metric oracle equivalence",
        pass,
        &format!("{mismatches} mismatches over {pairs} pairs, short samples {short:?}, {elapsed:.2?} < 30s"),
    );
    assert!(pass);
}

fn first_disagreement(x: &InfinitePath, y: &InfinitePath) -> usize {
    (1..).find(|&p| x.at(p) != y.at(p)).expect("distinct paths")
}

#[test]
fn criterion_3_threshold_predicate() {
    let mut checks = 0;
    let mut mismatches = 0;
    let mut condition3 = 0;
    let mut remark_misses = 0;
    let mut split_sources = 0;
    for (g, sample) in oracle_samples() {
        for (x, y, d) in sample {
            split_sources += (x.source(g).unwrap() != y.source(g).unwrap()) as usize;
            for k in 1..=3u64 {
                checks += 1;
                let exact = d.below(&nk(g, k).unwrap());
                if below_nk_threshold(g, x, y, k).unwrap() != exact {
                    mismatches += 1;
                }
                if exact || x == y {
                    continue;
                }
                let ixy = first_disagreement(x, y);
                let (ix, iy) = (x.escape_index(k), y.escape_index(k));
                let c1 = ix.is_none() || iy.is_none();
                let c2 = matches!((ix, iy), (Some(a), Some(b)) if a > ixy || b > ixy);
                let c3 = matches!((ix, iy), (Some(a), Some(b)) if a <= ixy && b <= ixy && a != b);
                condition3 += c3 as usize;
                let common_source = x.source(g).unwrap() == y.source(g).unwrap();
                if common_source && !(ixy <= k as usize && (c1 || c2)) {
                    remark_misses += 1;
                }
            }
        }
    }
    let pass = mismatches == 0 && condition3 == 0 && remark_misses == 0;
    report(
        3,
        "threshold predicate for k in {1,2,3}",
        pass,
        &format!("{mismatches} mismatches over {checks} checks, condition 3 seen {condition3} times, {remark_misses} common-source misses, {split_sources} pairs with distinct sources"),
    );
    assert!(pass);
}

#[test]
fn criterion_4_position_bijection() {
    let mut vectors = 0;
    let mut failures = 0;
    let mut stack: Vec<Vec<usize>> = (1..=6).map(|l| vec![l]).collect();
    while let Some(lengths) = stack.pop() {
        if lengths.len() < 6 {
            for l in 1..=6 {
                let mut next = lengths.clone();
                next.push(l);
                stack.push(next);
            }
        }
        vectors += 1;
        let total = lengths.iter().sum::<usize>() + 1 - lengths.len();
        let mut image = BTreeSet::new();
        let mut ok = true;
        for (i, &len) in lengths.iter().enumerate() {
            let top = if i + 1 == lengths.len() { len } else { len - 1 };
            for n in 1..=top {
                let j = f_index(&lengths, i + 1, n).unwrap();
                ok &= image.insert(j) && f_inverse(&lengths, j).unwrap() == (i + 1, n);
            }
        }
        ok &= image == (1..=total).collect::<BTreeSet<_>>();
        failures += !ok as usize;
    }
    let pass = failures == 0;
    report(
        4,
        "position map bijection",
        pass,
        &format!("{failures} failing vectors out of {vectors} (l <= 6, lengths <= 6)"),
    );
    assert!(pass);
}

/// An admissible finite family on the rose at `F_delta = {e_1..e_k}`.
fn rose_family<R: Rng>(r: &mut R, k: u64, with_tail: bool) -> PathFamily {
    let l = r.gen_range(1..=4);
    let late = |r: &mut R| r.gen_range(k + 1..=k + 10);
    let mut paths = Vec::new();
    for i in 0..l {
        let len = r.gen_range(2..=5);
        let mut p = Vec::with_capacity(len);
        p.push(if i == 0 { r.gen_range(1..=k + 5) } else { late(r) });
        for _ in 1..len - 1 {
            p.push(r.gen_range(1..=k));
        }
        p.push(if i + 1 < l || with_tail {
            late(r)
        } else {
            r.gen_range(1..=k)
        });
        paths.push(p);
    }
    PathFamily::new(paths)
}

/// An admissible finite family on the descending graph at `F_delta = {e_1..e_k}`.
fn ef_family<R: Rng>(r: &mut R, k: u64, with_tail: bool) -> PathFamily {
    let l = r.gen_range(1..=4);
    let mut paths: Vec<Vec<u64>> = (0..l)
        .map(|_| {
            let b = r.gen_range(k + 2..=k + 8);
            vec![b, b - 1]
        })
        .collect();
    if !with_tail {
        let len = r.gen_range(2..=k as usize + 2);
        let last: Vec<u64> = (0..len).map(|j| (k + 1).saturating_sub(j as u64).max(1)).collect();
        *paths.last_mut().unwrap() = last;
    }
    PathFamily::new(paths)
}

#[test]
fn criterion_5_family_chains() {
    let mut r = rng(5);
    let rose = builtin("rose").unwrap();
    let ef = builtin("ef").unwrap();
    let mut finite = (0, 0);
    let mut tails = (0, 0);
    for i in 0..200 {
        let k = r.gen_range(1..=3);
        let (g, fam) = if i % 2 == 0 {
            (&rose, rose_family(&mut r, k, false))
        } else {
            (&ef, ef_family(&mut r, k, false))
        };
        let t = nk(g, k).unwrap();
        let ext = default_extensions(g, &fam).unwrap();
        finite.0 += 1;
        if let Ok(c) = chain_from_family(g, &fam, &ext, &t) {
            finite.1 += (validate_chain(g, &c).unwrap() == ChainValidity::Valid) as usize;
        }
    }
    for i in 0..50 {
        let k = r.gen_range(1..=3);
        let (g, fam, gamma) = if i % 2 == 0 {
            let cycle: Vec<u64> = (0..r.gen_range(1..=3)).map(|_| r.gen_range(1..=6)).collect();
            let gamma = InfinitePath::periodic(vec![r.gen_range(k + 1..=k + 8)], cycle).unwrap();
            (&rose, rose_family(&mut r, k, true), gamma)
        } else {
            let gamma = complete_path(&ef, &[r.gen_range(k + 1..=k + 8)], None).unwrap();
            (&ef, ef_family(&mut r, k, true), gamma)
        };
        let t = nk(g, k).unwrap();
        let ext = default_extensions(g, &fam).unwrap();
        tails.0 += 1;
        if let Ok(c) = chain_from_family_and_tail(g, &fam, &gamma, &ext, &t) {
            tails.1 += (validate_chain(g, &c).unwrap() == ChainValidity::Valid) as usize;
        }
    }
    let pass = finite.0 == finite.1 && tails.0 == tails.1;
    report(
        5,
        "chains from admissible families",
        pass,
        &format!(
            "{}/{} finite-family chains valid, {}/{} family+tail chains valid",
            finite.1, finite.0, tails.1, tails.0
        ),
    );
    assert!(pass);
}

/// A first-symbol-linked chain at `2^-N(k)` with `m` elements and, when `tail` is set, an
/// orbit tail.
fn linked_chain<R: Rng>(g: &GraphPresentation, r: &mut R, k: u64, m: usize, tail: bool) -> Option<Chain> {
    let t = nk(g, k).unwrap();
    let c = common::random_chain(g, r, m + tail as usize, &t, 1, k as usize + 2)?;
    let mut elements = c.elements;
    let tail = tail.then(|| ChainTail::Orbit(elements.pop().expect("m + 1 elements")));
    Some(Chain {
        elements,
        tail,
        threshold: t,
    })
}

#[test]
fn criterion_6_linked_chain_shadows() {
    let mut r = rng(6);
    let mut built = 0;
    let mut shadowed = 0;
    let mut short = Vec::new();
    for g in builtins() {
        let mut count = 0;
        let mut attempts = 0;
        while count < 100 && attempts < 2000 {
            attempts += 1;
            let k = 1 + (count % 3) as u64;
            let m = 1 + (count % 6);
            let tail = count % 2 == 1;
            let Some(c) = linked_chain(&g, &mut r, k, m, tail) else {
                continue;
            };
            count += 1;
            built += 1;
            let x = if tail {
                construct_shadow_infinite(&g, &c, k)
            } else {
                construct_shadow_finite(&g, &c, k)
            };
            if let Ok(x) = x {
                if check_shadowing(&g, &x, &c, &nk(&g, k).unwrap()).unwrap().holds() {
                    shadowed += 1;
                }
            }
        }
        if count < 100 {
            short.push(g.name().to_string());
        }
    }
    let pass = built == shadowed && short.is_empty();
    report(
        6,
        "constructed points shadow linked chains",
        pass,
        &format!("{shadowed}/{built} chains shadowed (k <= 3, m <= 6), short samples {short:?}"),
    );
    assert!(pass);
}

#[test]
fn criterion_7_finite_graphs() {
    let start = Instant::now();
    let mut r = rng(7);
    let bounds = SearchBounds::default();
    let mut total = 0;
    let mut witnesses = 0;
    for _ in 0..50 {
        let g = common::random_finite(&mut r, 6);
        let k0 = g.max_index().unwrap();
        let t = nk(&g, k0).unwrap();
        let mut count = 0;
        while count < 100 {
            let m = r.gen_range(1..=8);
            let Some(c) = common::random_chain(&g, &mut r, m, &t, k0 as usize, k0 as usize + 3) else {
                continue;
            };
            count += 1;
            total += 1;
            if let ShadowSearch::Witness(x) = search_shadow_point(&g, &c, &t, &bounds).unwrap() {
                witnesses += check_shadowing(&g, &x, &c, &t).unwrap().holds() as usize;
            }
        }
    }
    let elapsed = start.elapsed();
    let pass = witnesses == total && elapsed < Duration::from_secs(120);
    report(
        7,
        "finite graphs are shadowed",
        pass,
        &format!("{witnesses}/{total} chains with a witness on 50 graphs, {elapsed:.2?} < 120s"),
    );
    assert!(pass);
}

#[test]
fn criterion_8_verdict_table() {
    use Answer::*;
    let start = Instant::now();
    let bounds = SearchBounds::default();
    let table = [
        ("rose", Yes, Yes, None),
        ("line", Yes, Yes, Some(Rule::Wandering)),
        ("follower", Yes, Yes, Some(Rule::Ecifs)),
        ("renewal", Unknown, No, Some(Rule::AttractorNotEcifs)),
        ("e2", No, No, Some(Rule::FpcFailureInstance)),
        ("ef", Yes, No, Some(Rule::AttractorNotEcifs)),
        ("e1var", No, No, Some(Rule::FpcFailureInstance)),
    ];
    let mut matches = 0;
    let mut notes = Vec::new();
    for (name, finite, full, rule) in table {
        let g = builtin(name).unwrap();
        let (f, s) = decide_shadowing(&g, &bounds).unwrap();
        let mut ok = (f.answer, s.answer) == (finite, full);
        ok &= rule.is_none_or(|r| s.rule == r);
        for v in [&f, &s] {
            ok &= v.answer == Unknown || verify_certificate(&g, &v.certificate).unwrap();
        }
        if let Certificate::ClassifierEvidence {
            evidence: Evidence::Ecifs(ev),
        } = &f.certificate
        {
            ok &= ev.k == 1;
        }
        if let Certificate::FpcInstanceFailure { report, eps_exp, .. } = &f.certificate {
            if name == "e2" {
                ok &= f_bound(&g, eps_exp).unwrap() == 4 && report.exhaustive;
                if !report.junctions_compatible {
                    notes.push("e2 instance has an incompatible junction".to_string());
                }
            }
        }
        if let Certificate::ClassifierEvidence {
            evidence:
                Evidence::AttractorNotEcifs {
                    eps_exp,
                    delta_exp,
                    family,
                    ..
                },
        } = &s.certificate
        {
            let again = check_ipc1_instance(&g, eps_exp, delta_exp, family, &bounds).unwrap();
            ok &= matches!(again, IpcResult::Failure(r) if r.exhaustive);
        }
        if ok {
            matches += 1;
        } else {
            notes.push(format!("{name}: got ({:?}, {:?}) via {:?}", f.answer, s.answer, s.rule));
        }
    }
    let elapsed = start.elapsed();
    let pass = matches == 7 && elapsed < Duration::from_secs(60);
    report(
        8,
        "verdict table",
        pass,
        &format!("{matches}/7 rows match with verified certificates, {elapsed:.2?} < 60s, notes {notes:?}"),
    );
    assert!(pass);
}

/// Direct bounded check of the wandering definition: for every `t_eps <= 20` some
/// `t_delta <= 20` leaves no path of length at most 10 in the first 50 edges that starts
/// outside `F_delta` and ends in `F_eps`. A failure reports `(t_eps, m_eps, e)` where `e` is
/// the largest edge starting such a path and `F_20 = {e_1..e_m}` does not contain it.
fn bounded_wandering(g: &GraphPresentation) -> std::result::Result<(), (u64, u64, u64)> {
    let edges = g.truncate(50).unwrap().edges;
    let bounds: Vec<u64> = (1..=20u64).map(|t| f_bound(g, &Threshold::from(t)).unwrap()).collect();
    let widest = *bounds.last().expect("twenty thresholds");
    for (t, &m_eps) in (1..).zip(&bounds) {
        let mut reach: BTreeSet<u64> = edges.iter().map(|e| e.index).filter(|&i| i <= m_eps).collect();
        let mut frontier = reach.clone();
        for _ in 1..10 {
            let next: BTreeSet<u64> = edges
                .iter()
                .filter(|e| !reach.contains(&e.index))
                .filter(|e| frontier.iter().any(|&f| edges[f as usize - 1].source == e.range))
                .map(|e| e.index)
                .collect();
            if next.is_empty() {
                break;
            }
            reach.extend(&next);
            frontier = next;
        }
        let top = reach.iter().max().copied().unwrap_or(0);
        if top > widest {
            return Err((t, m_eps, top));
        }
    }
    Ok(())
}

#[test]
fn criterion_9_wandering_agreement() {
    let bounds = SearchBounds::default();
    let mut r = rng(9);
    let mut graphs = builtins();
    graphs.extend((0..50).map(|_| common::random_affine(&mut r)));
    let (mut compared, mut unknown) = (0, 0);
    let mut disagreements = Vec::new();
    for g in &graphs {
        let verdict = match classify_wandering(g, &bounds).unwrap() {
            WanderingVerdict::Yes => true,
            WanderingVerdict::No(_) => false,
            WanderingVerdict::Unknown(_) => {
                unknown += 1;
                continue;
            }
        };
        compared += 1;
        let bounded = bounded_wandering(g);
        if verdict != bounded.is_ok() {
            let why = match bounded {
                Ok(()) => "bounded check holds".to_string(),
                Err((t, m, e)) => format!("t_eps={t} (F_eps up to e{m}) is reached from e{e} outside F_20"),
            };
            disagreements.push(format!("{} [{why}]", print_graph(g).replace('\n', "; ")));
        }
    }
    let pass = disagreements.is_empty();
    report(
        9,
        "wandering classifier vs bounded check",
        pass,
        &format!(
            "{} disagreements over {compared} decided graphs ({unknown} unknown), t <= 20, length <= 10, first 50 edges{}",
            disagreements.len(),
            disagreements.first().map(|d| format!(", first: {d}")).unwrap_or_default()
        ),
    );
    assert!(pass);
}
