//! Random graph generators: uniform regular and degree-sequence samplers,
//! edge-disjoint unions, two-Hamilton-cycle boards, binomial graphs, and the
//! analytic probability evaluators that accompany them (`bounds`).
//!
//! Sampling strategy: the pairing construction with full rejection gives
//! exactly uniform samples whenever the acceptance probability is workable
//! (roughly maximum degree 7 and below); beyond that the sampler repairs the
//! pairing by degree-preserving edge switches, which is the standard
//! asymptotically uniform fallback. Every consumer that measures
//! distributional properties in tests operates in the exactly uniform regime.

pub mod bounds;

use std::collections::{HashMap, HashSet};

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha12Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::stream;

/// Attempt cap for the full-rejection sampler.
pub const REJECTION_CAP: usize = 1_000_000;

/// Resample cap when conditioning a second sample on edge-disjointness.
pub const DISJOINT_RESAMPLE_CAP: usize = 1_000_000;

/// Fresh pairings tried before the switching repair gives up.
const REPAIR_RESTARTS: usize = 8;

/// Rejection is used while `gamma + gamma^2` (the exponent of the inverse
/// acceptance probability) stays below this, keeping expected retries under
/// about 10^5.
const REJECTION_EXPONENT_CAP: f64 = 11.5;

/// A validated graphic degree sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeSequence {
    degrees: Vec<usize>,
}

impl DegreeSequence {
    /// Validates that `degrees` is graphic: even sum, every degree below the
    /// vertex count, and the Erdős–Gallai inequalities.
    pub fn new(degrees: Vec<usize>) -> Result<Self> {
        let n = degrees.len();
        if n == 0 {
            return Err(Error::InvalidParameter("empty degree sequence".into()));
        }
        let sum: usize = degrees.iter().sum();
        if sum % 2 != 0 {
            return Err(Error::NotGraphic(format!("odd degree sum {sum}")));
        }
        if let Some(&d) = degrees.iter().find(|&&d| d >= n) {
            return Err(Error::NotGraphic(format!(
                "degree {d} needs at least {} vertices, have {n}",
                d + 1
            )));
        }
        let mut sorted = degrees.clone();
        sorted.sort_unstable_by(|a, b| b.cmp(a));
        let mut prefix = vec![0usize; n + 1];
        for (i, &d) in sorted.iter().enumerate() {
            prefix[i + 1] = prefix[i] + d;
        }
        for k in 1..=n {
            // First index in [k, n) whose degree drops below k; entries
            // before it contribute k to the right side, the rest contribute
            // themselves.
            let split = k + sorted[k..].partition_point(|&d| d >= k);
            let rhs = k * (k - 1) + k * (split - k) + (prefix[n] - prefix[split]);
            if prefix[k] > rhs {
                return Err(Error::NotGraphic(format!(
                    "Erdős–Gallai fails at k = {k}: {} > {rhs}",
                    prefix[k]
                )));
            }
        }
        Ok(DegreeSequence { degrees })
    }

    /// The constant sequence of a `d`-regular graph.
    pub fn regular(n: usize, d: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("empty degree sequence".into()));
        }
        if d >= n.max(1) {
            return Err(Error::NotGraphic(format!("degree {d} on {n} vertices")));
        }
        if n * d % 2 != 0 {
            return Err(Error::NotGraphic(format!(
                "odd degree sum: n = {n}, d = {d}"
            )));
        }
        Ok(DegreeSequence {
            degrees: vec![d; n],
        })
    }

    pub fn n(&self) -> usize {
        self.degrees.len()
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn degree(&self, v: u32) -> usize {
        self.degrees[v as usize]
    }

    /// Sum of all degrees (twice the edge count of any realization).
    pub fn total(&self) -> usize {
        self.degrees.iter().sum()
    }

    /// Average degree.
    pub fn dbar(&self) -> f64 {
        self.total() as f64 / self.n() as f64
    }

    /// Maximum degree.
    pub fn dmax(&self) -> usize {
        self.degrees.iter().copied().max().unwrap_or(0)
    }
}

/// Model tag plus parameters for one generator invocation.
#[derive(Debug, Clone, PartialEq)]
pub enum GenModel {
    Regular { n: usize, d: usize },
    DegreeSequence { degrees: Vec<usize> },
    Union { n: usize, d1: usize, d2: usize },
    TwoHam { n: usize },
    Binomial { n: usize, p: f64 },
}

/// A reproducible generation request: model plus seed.
#[derive(Debug, Clone, PartialEq)]
pub struct GenSpec {
    pub model: GenModel,
    pub seed: u64,
}

/// What a generator produced: either a single graph, or a decomposition
/// whose union is the graph of interest.
#[derive(Debug, Clone)]
pub enum GenOutput {
    Single(Graph),
    Decomposed {
        part1: Graph,
        part2: Graph,
        union: Graph,
    },
}

impl GenOutput {
    /// The primary artifact (the union for decomposed outputs).
    pub fn graph(&self) -> &Graph {
        match self {
            GenOutput::Single(g) => g,
            GenOutput::Decomposed { union, .. } => union,
        }
    }
}

impl GenSpec {
    pub fn validate(&self) -> Result<()> {
        match &self.model {
            GenModel::Regular { n, d } => {
                DegreeSequence::regular(*n, *d).map(|_| ())
            }
            GenModel::DegreeSequence { degrees } => {
                DegreeSequence::new(degrees.clone()).map(|_| ())
            }
            GenModel::Union { n, d1, d2 } => validate_union(*n, *d1, *d2),
            GenModel::TwoHam { n } => {
                if *n < 5 {
                    Err(Error::InvalidParameter(format!(
                        "two edge-disjoint spanning cycles need n >= 5, got {n}"
                    )))
                } else {
                    Ok(())
                }
            }
            GenModel::Binomial { n: _, p } => validate_probability(*p),
        }
    }

    pub fn generate(&self) -> Result<GenOutput> {
        self.validate()?;
        match &self.model {
            GenModel::Regular { n, d } => Ok(GenOutput::Single(gen_regular(*n, *d, self.seed)?)),
            GenModel::DegreeSequence { degrees } => {
                let dseq = DegreeSequence::new(degrees.clone())?;
                Ok(GenOutput::Single(gen_degree_sequence(&dseq, self.seed)?))
            }
            GenModel::Union { n, d1, d2 } => {
                let (part1, part2, union) = gen_union(*n, *d1, *d2, self.seed)?;
                Ok(GenOutput::Decomposed {
                    part1,
                    part2,
                    union,
                })
            }
            GenModel::TwoHam { n } => {
                let (c1, c2, union) = gen_two_hamilton_cycles(*n, self.seed)?;
                Ok(GenOutput::Decomposed {
                    part1: cycle_graph(*n, &c1)?,
                    part2: cycle_graph(*n, &c2)?,
                    union,
                })
            }
            GenModel::Binomial { n, p } => {
                Ok(GenOutput::Single(gen_binomial(*n, *p, self.seed)?))
            }
        }
    }
}

fn validate_probability(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) || !p.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "probability out of range: {p}"
        )));
    }
    Ok(())
}

fn validate_union(n: usize, d1: usize, d2: usize) -> Result<()> {
    if d1 < 3 || d2 < 3 {
        return Err(Error::InvalidParameter(format!(
            "union parts need degree >= 3, got {d1} and {d2}"
        )));
    }
    DegreeSequence::regular(n, d1)?;
    DegreeSequence::regular(n, d2)?;
    if d1 + d2 >= n {
        return Err(Error::InvalidParameter(format!(
            "union degree {} does not fit on {n} vertices",
            d1 + d2
        )));
    }
    Ok(())
}

fn norm(u: u32, v: u32) -> (u32, u32) {
    if u <= v {
        (u, v)
    } else {
        (v, u)
    }
}

/// One pass of the pairing construction: stubs shuffled and matched up.
/// Output pairs are normalized but may contain loops and duplicates.
fn pair_once(degrees: &[usize], rng: &mut ChaCha12Rng) -> Vec<(u32, u32)> {
    let mut stubs: Vec<u32> = Vec::with_capacity(degrees.iter().sum());
    for (v, &d) in degrees.iter().enumerate() {
        stubs.extend(std::iter::repeat(v as u32).take(d));
    }
    stubs.shuffle(rng);
    stubs
        .chunks_exact(2)
        .map(|c| norm(c[0], c[1]))
        .collect()
}

/// True when `edges` (normalized) has no loop, no duplicate, and no member
/// of `forbidden`.
fn is_clean(edges: &[(u32, u32)], forbidden: Option<&Graph>) -> bool {
    let mut seen = HashSet::with_capacity(edges.len() * 2);
    edges.iter().all(|&(u, v)| {
        u != v && seen.insert((u, v)) && forbidden.is_none_or(|f| !f.has_edge(u, v))
    })
}

/// Degree-preserving switching repair: while a defect (loop, duplicate, or
/// forbidden edge) remains, swap it with a random clean partner edge when
/// the swap introduces no new defect.
fn repair(edges: &mut [(u32, u32)], forbidden: Option<&Graph>, rng: &mut ChaCha12Rng) -> bool {
    let m = edges.len();
    if m < 2 {
        return is_clean(edges, forbidden);
    }
    let mut count: HashMap<(u32, u32), u32> = HashMap::with_capacity(m * 2);
    for &e in edges.iter() {
        *count.entry(e).or_insert(0) += 1;
    }
    let bad = |e: (u32, u32), count: &HashMap<(u32, u32), u32>| {
        e.0 == e.1
            || count.get(&e).copied().unwrap_or(0) > 1
            || forbidden.is_some_and(|f| f.has_edge(e.0, e.1))
    };
    let mut stack: Vec<usize> = (0..m).filter(|&i| bad(edges[i], &count)).collect();
    let budget = 100_000 + 256 * m;
    let mut attempts = 0usize;
    while let Some(&i) = stack.last() {
        let e = edges[i];
        if !bad(e, &count) {
            // A sibling swap already cleaned this entry.
            stack.pop();
            continue;
        }
        attempts += 1;
        if attempts > budget {
            return false;
        }
        let j = rng.random_range(0..m);
        if j == i || bad(edges[j], &count) {
            continue;
        }
        let (mut x, mut y) = edges[j];
        if rng.random_bool(0.5) {
            std::mem::swap(&mut x, &mut y);
        }
        let a = norm(e.0, x);
        let b = norm(e.1, y);
        if a.0 == a.1 || b.0 == b.1 || a == b {
            continue;
        }
        if count.get(&a).copied().unwrap_or(0) > 0 || count.get(&b).copied().unwrap_or(0) > 0 {
            continue;
        }
        if forbidden.is_some_and(|f| f.has_edge(a.0, a.1) || f.has_edge(b.0, b.1)) {
            continue;
        }
        *count.get_mut(&e).expect("edge present") -= 1;
        *count.get_mut(&edges[j]).expect("edge present") -= 1;
        *count.entry(a).or_insert(0) += 1;
        *count.entry(b).or_insert(0) += 1;
        edges[i] = a;
        edges[j] = b;
        stack.pop();
    }
    true
}

/// Core sampler over a fixed degree multiset, optionally avoiding the edges
/// of `forbidden`. Exactly uniform in the rejection regime.
fn sample_with_degrees(
    degrees: &[usize],
    forbidden: Option<&Graph>,
    rng: &mut ChaCha12Rng,
    what: &str,
) -> Result<Graph> {
    let n = degrees.len();
    if let Some(f) = forbidden {
        if f.n() != n {
            return Err(Error::SizeMismatch(f.n(), n));
        }
    }
    let total: usize = degrees.iter().sum();
    if total == 0 {
        return Ok(Graph::empty(n));
    }
    let gamma =
        degrees.iter().map(|&d| (d * d.saturating_sub(1)) as f64).sum::<f64>() / (2.0 * total as f64);
    if forbidden.is_none() && gamma + gamma * gamma <= REJECTION_EXPONENT_CAP {
        for _ in 0..REJECTION_CAP {
            let edges = pair_once(degrees, rng);
            if is_clean(&edges, None) {
                return Graph::from_edges(n, &edges);
            }
        }
        return Err(Error::GenerationExhausted {
            what: format!("{what}: rejection sampling"),
            attempts: REJECTION_CAP,
        });
    }
    for _ in 0..REPAIR_RESTARTS {
        let mut edges = pair_once(degrees, rng);
        if repair(&mut edges, forbidden, rng) {
            return Graph::from_edges(n, &edges);
        }
    }
    Err(Error::GenerationExhausted {
        what: format!("{what}: switching repair"),
        attempts: REPAIR_RESTARTS,
    })
}

fn sample_regular(
    n: usize,
    d: usize,
    forbidden: Option<&Graph>,
    rng: &mut ChaCha12Rng,
) -> Result<Graph> {
    if d == 0 {
        return Ok(Graph::empty(n));
    }
    // Complementation is a uniformity-preserving bijection between d-regular
    // and (n-1-d)-regular graphs; sample whichever side is sparser.
    if forbidden.is_none() && 2 * d > n - 1 {
        let g = sample_regular(n, n - 1 - d, None, rng)?;
        return Ok(g.complement());
    }
    sample_with_degrees(&vec![d; n], forbidden, rng, "regular generator")
}

/// A uniformly random simple `d`-regular graph on `n` vertices.
pub fn gen_regular(n: usize, d: usize, seed: u64) -> Result<Graph> {
    DegreeSequence::regular(n, d)?;
    let mut rng = stream::stream(seed, "gen/regular");
    sample_regular(n, d, None, &mut rng)
}

/// A random simple `d`-regular graph avoiding every edge of `forbidden`
/// (switching-conditioned; used to assemble edge-disjoint decompositions
/// whose parts are too dense for resampling).
pub fn gen_regular_avoiding(n: usize, d: usize, forbidden: &Graph, seed: u64) -> Result<Graph> {
    DegreeSequence::regular(n, d)?;
    let mut rng = stream::stream(seed, "gen/regular-avoiding");
    sample_regular(n, d, Some(forbidden), &mut rng)
}

/// A uniform sample with the given degree sequence (maximum degree 64).
pub fn gen_degree_sequence(dseq: &DegreeSequence, seed: u64) -> Result<Graph> {
    if dseq.dmax() > 64 {
        return Err(Error::InvalidParameter(format!(
            "degree-sequence sampler caps the maximum degree at 64, got {}",
            dseq.dmax()
        )));
    }
    let mut rng = stream::stream(seed, "gen/degree-sequence");
    sample_with_degrees(dseq.degrees(), None, &mut rng, "degree-sequence generator")
}

/// Two independent regular samples conditioned on edge-disjointness, plus
/// their union: `(G1, G2, G1 ∪ G2)`. For sparse parts the conditioning is
/// realized exactly by resampling the second part; dense parts fall back to
/// switching-conditioned generation.
pub fn gen_union(n: usize, d1: usize, d2: usize, seed: u64) -> Result<(Graph, Graph, Graph)> {
    validate_union(n, d1, d2)?;
    let mut rng = stream::stream(seed, "gen/union");
    let g1 = sample_regular(n, d1, None, &mut rng)?;
    // Expected collisions between independent samples is about d1*d2/2, so
    // resampling succeeds at rate exp(-d1*d2/2).
    let g2 = if (d1 * d2) as f64 / 2.0 <= REJECTION_EXPONENT_CAP {
        let mut found = None;
        for _ in 0..DISJOINT_RESAMPLE_CAP {
            let cand = sample_regular(n, d2, None, &mut rng)?;
            if cand.edges().all(|(u, v)| !g1.has_edge(u, v)) {
                found = Some(cand);
                break;
            }
        }
        found.ok_or(Error::GenerationExhausted {
            what: "edge-disjoint union: resampling second part".into(),
            attempts: DISJOINT_RESAMPLE_CAP,
        })?
    } else {
        sample_regular(n, d2, Some(&g1), &mut rng)?
    };
    let union = g1.union_disjoint(&g2)?;
    Ok((g1, g2, union))
}

fn random_cycle_order(n: usize, rng: &mut ChaCha12Rng) -> Vec<u32> {
    let mut order: Vec<u32> = (0..n as u32).collect();
    order.shuffle(rng);
    order
}

fn cycle_edge_set(order: &[u32]) -> Vec<(u32, u32)> {
    (0..order.len())
        .map(|i| norm(order[i], order[(i + 1) % order.len()]))
        .collect()
}

fn cycle_graph(n: usize, order: &[u32]) -> Result<Graph> {
    Graph::from_edges(n, &cycle_edge_set(order))
}

/// Two uniform spanning cycles resampled until edge-disjoint; returns both
/// cycles as vertex orders together with their 4-regular union.
pub fn gen_two_hamilton_cycles(n: usize, seed: u64) -> Result<(Vec<u32>, Vec<u32>, Graph)> {
    if n < 5 {
        return Err(Error::InvalidParameter(format!(
            "two edge-disjoint spanning cycles need n >= 5, got {n}"
        )));
    }
    let mut rng = stream::stream(seed, "gen/two-ham");
    let c1 = random_cycle_order(n, &mut rng);
    let e1: HashSet<(u32, u32)> = cycle_edge_set(&c1).into_iter().collect();
    for _ in 0..DISJOINT_RESAMPLE_CAP {
        let c2 = random_cycle_order(n, &mut rng);
        let e2 = cycle_edge_set(&c2);
        if e2.iter().all(|e| !e1.contains(e)) {
            let mut all: Vec<(u32, u32)> = e1.iter().copied().collect();
            all.extend(e2);
            let union = Graph::from_edges(n, &all)?;
            return Ok((c1, c2, union));
        }
    }
    Err(Error::GenerationExhausted {
        what: "edge-disjoint spanning cycles".into(),
        attempts: DISJOINT_RESAMPLE_CAP,
    })
}

/// Binomial random graph: every pair an edge independently with
/// probability `p`.
pub fn gen_binomial(n: usize, p: f64, seed: u64) -> Result<Graph> {
    validate_probability(p)?;
    let mut rng = stream::stream(seed, "gen/binomial");
    let mut edges = Vec::new();
    for u in 0..n as u32 {
        for v in u + 1..n as u32 {
            if rng.random_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, &edges)
}

/// A random subgraph of `g`: edges are visited in random order, kept with
/// probability `rate`, and an edge is dropped outright when either endpoint
/// already has `max_degree` kept edges. The result always satisfies
/// `max degree <= max_degree`.
pub fn random_bounded_subgraph(g: &Graph, max_degree: usize, rate: f64, seed: u64) -> Result<Graph> {
    validate_probability(rate)?;
    let mut rng = stream::stream(seed, "subgraph/degree-bounded");
    let mut edges: Vec<(u32, u32)> = g.edges().collect();
    edges.shuffle(&mut rng);
    let mut deg = vec![0usize; g.n()];
    let mut kept = Vec::new();
    for (u, v) in edges {
        if deg[u as usize] < max_degree && deg[v as usize] < max_degree && rng.random_bool(rate) {
            deg[u as usize] += 1;
            deg[v as usize] += 1;
            kept.push((u, v));
        }
    }
    Graph::from_edges(g.n(), &kept)
}
