//! Maker strategies.
//!
//! [`StagedMaker`] plays a decomposed board in two stages. While building, it
//! mirrors the opponent: a claim inside the reserved cycle pair is answered
//! by Lehman's spanning-tree pairing, a claim inside the degree part by a
//! danger-greedy response, and anything else by progress in whichever
//! subgame is unfinished, connectivity first. Once Maker's graph is
//! spanning-connected and every vertex has reached its degree target, the
//! booster stage claims edges of the reserved booster part that visibly
//! lengthen a maintained witness path, until the path closes into a spanning
//! cycle.

use std::collections::{BTreeMap, BTreeSet};

use rand_chacha::ChaCha12Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::hamilton::{endpoint_expansion, longest_path_heuristic, PosaState};
use crate::random::{gen_regular_avoiding, gen_two_hamilton_cycles};
use crate::stream;

use super::{norm, GameState, MakerStrategy, Phase};

/// Divisor turning the degree part's minimum degree into the target `k`.
///
/// The danger-greedy subgame is winnable whenever its board has minimum
/// degree at least `4k`; dividing by five instead of four keeps that margin
/// whenever the minimum degree is sixteen or more.
pub const DEGREE_DIVISOR: usize = 5;

/// Restarts for the one-off path search seeding the booster stage.
const ENGINE_RESTARTS: usize = 16;

/// Chord candidates scored per fallback move of the booster stage.
const FALLBACK_CANDIDATES: usize = 64;

/// Connectivity subgame state: two spanning trees paired so that Maker owns
/// exactly their intersection.
///
/// Both trees always span the vertex set and consist of Maker-owned and
/// unclaimed edges only; the owned edges are precisely the shared ones. Each
/// response banks one more owned edge, so the subgame ends after exactly
/// `n - 1` Maker moves with an owned spanning tree.
#[derive(Debug, Clone)]
pub struct LehmanConn {
    n: usize,
    t1: BTreeSet<(u32, u32)>,
    t2: BTreeSet<(u32, u32)>,
    owned: BTreeSet<(u32, u32)>,
    moves: usize,
}

impl LehmanConn {
    pub fn from_trees(n: usize, t1: &[(u32, u32)], t2: &[(u32, u32)]) -> Result<Self> {
        let t1: BTreeSet<(u32, u32)> = t1.iter().map(|&(u, v)| norm(u, v)).collect();
        let t2: BTreeSet<(u32, u32)> = t2.iter().map(|&(u, v)| norm(u, v)).collect();
        for (t, name) in [(&t1, "first"), (&t2, "second")] {
            let edges: Vec<(u32, u32)> = t.iter().copied().collect();
            let g = Graph::from_edges(n, &edges)?;
            if g.m() + 1 != n || !g.is_connected() {
                return Err(Error::InvalidParameter(format!(
                    "{name} edge set is not a spanning tree on {n} vertices"
                )));
            }
        }
        if let Some(e) = t1.intersection(&t2).next() {
            return Err(Error::InvalidParameter(format!(
                "trees are not edge-disjoint: both contain {e:?}"
            )));
        }
        Ok(LehmanConn { n, t1, t2, owned: BTreeSet::new(), moves: 0 })
    }

    /// Maker owns a spanning tree.
    pub fn won(&self) -> bool {
        self.owned.len() + 1 == self.n
    }

    pub fn moves_made(&self) -> usize {
        self.moves
    }

    /// Edges Maker has claimed in this subgame.
    pub fn maker_edges(&self) -> Vec<(u32, u32)> {
        self.owned.iter().copied().collect()
    }

    /// Current trees, for introspection.
    pub fn trees(&self) -> (Vec<(u32, u32)>, Vec<(u32, u32)>) {
        (self.t1.iter().copied().collect(), self.t2.iter().copied().collect())
    }

    /// Whether an opposing claim of `e` damages a live tree.
    pub fn hits(&self, e: (u32, u32)) -> bool {
        let e = norm(e.0, e.1);
        !self.owned.contains(&e) && (self.t1.contains(&e) || self.t2.contains(&e))
    }

    /// One Maker response: repair the tree the opponent hit, or bank a tree
    /// edge on a miss. `claimed` reports the position including the
    /// opponent's move. Returns `None` once the subgame is won.
    pub fn respond<F>(&mut self, claimed: &F, hit: Option<(u32, u32)>) -> Option<(u32, u32)>
    where
        F: Fn(u32, u32) -> bool,
    {
        if self.won() {
            return None;
        }
        let hit = hit.map(|(u, v)| norm(u, v));
        let mv = match hit {
            Some(e) if self.t1.contains(&e) && !self.owned.contains(&e) => {
                self.repair(true, e, claimed)
            }
            Some(e) if self.t2.contains(&e) && !self.owned.contains(&e) => {
                self.repair(false, e, claimed)
            }
            _ => self.bank(claimed),
        };
        self.moves += 1;
        Some(mv)
    }

    /// The opponent took `e` from one tree: claim the other tree's edge
    /// across the cut this opened and patch it into the damaged tree.
    fn repair<F>(&mut self, first: bool, e: (u32, u32), claimed: &F) -> (u32, u32)
    where
        F: Fn(u32, u32) -> bool,
    {
        let (damaged, intact) =
            if first { (&mut self.t1, &self.t2) } else { (&mut self.t2, &self.t1) };
        damaged.remove(&e);
        let side = component_sides(self.n, damaged, e.0);
        // Every intact-tree edge across the cut is unclaimed: shared edges
        // are owned, and the damaged tree's only crossing edge was e itself.
        let f = intact
            .iter()
            .copied()
            .filter(|&(a, b)| side[a as usize] != side[b as usize])
            .min()
            .expect("tree pairing invariant: the intact tree crosses every cut of the other");
        assert!(
            !claimed(f.0, f.1),
            "tree pairing invariant: crossing edge {f:?} is already claimed"
        );
        damaged.insert(f);
        self.owned.insert(f);
        f
    }

    /// The opponent's move missed both trees: claim any unowned tree edge,
    /// then thread it into the other tree by evicting an unowned edge from
    /// the cycle it closes there, keeping ownership equal to the trees'
    /// intersection.
    fn bank<F>(&mut self, claimed: &F) -> (u32, u32)
    where
        F: Fn(u32, u32) -> bool,
    {
        let f = self
            .t1
            .iter()
            .chain(self.t2.iter())
            .copied()
            .filter(|e| !self.owned.contains(e))
            .min()
            .expect("an unowned tree edge exists until the subgame is won");
        debug_assert!(!claimed(f.0, f.1), "unowned tree edges stay unclaimed");
        let into_second = self.t1.contains(&f);
        let other = if into_second { &mut self.t2 } else { &mut self.t1 };
        let cycle = tree_path(self.n, other, f.0, f.1);
        // An all-owned path plus f would be a cycle inside the tree that
        // already holds f, so some path edge is still unowned.
        let evict = cycle
            .iter()
            .copied()
            .filter(|e| !self.owned.contains(e))
            .min()
            .expect("the fundamental cycle keeps an unowned edge");
        other.remove(&evict);
        other.insert(f);
        self.owned.insert(f);
        f
    }
}

/// Side labels of the two components of a tree with one edge removed.
fn component_sides(n: usize, tree: &BTreeSet<(u32, u32)>, root: u32) -> Vec<bool> {
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in tree {
        adj[u as usize].push(v);
        adj[v as usize].push(u);
    }
    let mut side = vec![false; n];
    side[root as usize] = true;
    let mut queue = vec![root];
    while let Some(v) = queue.pop() {
        for &w in &adj[v as usize] {
            if !side[w as usize] {
                side[w as usize] = true;
                queue.push(w);
            }
        }
    }
    side
}

/// Edges of the unique tree path between `a` and `b`.
fn tree_path(n: usize, tree: &BTreeSet<(u32, u32)>, a: u32, b: u32) -> Vec<(u32, u32)> {
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in tree {
        adj[u as usize].push(v);
        adj[v as usize].push(u);
    }
    let mut parent: Vec<Option<u32>> = vec![None; n];
    parent[a as usize] = Some(a);
    let mut queue = std::collections::VecDeque::from([a]);
    while let Some(v) = queue.pop_front() {
        if v == b {
            break;
        }
        for &w in &adj[v as usize] {
            if parent[w as usize].is_none() {
                parent[w as usize] = Some(v);
                queue.push_back(w);
            }
        }
    }
    let mut path = Vec::new();
    let mut cur = b;
    while cur != a {
        let p = parent[cur as usize].expect("a tree connects every vertex pair");
        path.push(norm(p, cur));
        cur = p;
    }
    path
}

/// Minimum-degree subgame: raise every vertex of the degree part to Maker
/// degree `k` by always answering at the most endangered deficient vertex.
#[derive(Debug, Clone)]
struct DegreeGame {
    g12: Graph,
    k: usize,
    moves: usize,
    failure: Option<String>,
}

impl DegreeGame {
    fn new(g12: Graph, k: usize) -> Self {
        DegreeGame { g12, k, moves: 0, failure: None }
    }

    fn maker_deg(&self, st: &GameState, v: u32) -> usize {
        self.g12.neighbors(v).iter().filter(|&&u| st.maker_graph().has_edge(v, u)).count()
    }

    fn breaker_deg(&self, st: &GameState, v: u32) -> usize {
        self.g12.neighbors(v).iter().filter(|&&u| st.breaker_graph().has_edge(v, u)).count()
    }

    /// Opposing claims hurt twice as much as own claims help, since two
    /// Breaker edges at a vertex cancel one potential Maker edge there.
    fn danger(&self, st: &GameState, v: u32) -> i64 {
        self.breaker_deg(st, v) as i64 - 2 * self.maker_deg(st, v) as i64
    }

    fn won(&self, st: &GameState) -> bool {
        (0..self.g12.n() as u32).all(|v| self.maker_deg(st, v) >= self.k)
    }

    fn respond(&mut self, st: &GameState) -> Option<(u32, u32)> {
        let mut order: Vec<(i64, u32)> = (0..self.g12.n() as u32)
            .filter(|&v| self.maker_deg(st, v) < self.k)
            .map(|v| (-self.danger(st, v), v))
            .collect();
        order.sort_unstable();
        for &(_, v) in &order {
            let mut best: Option<(i64, u32)> = None;
            for &u in self.g12.neighbors(v) {
                if !st.is_claimed(v, u) {
                    let cand = (-self.danger(st, u), u);
                    if best.is_none_or(|b| cand < b) {
                        best = Some(cand);
                    }
                }
            }
            if let Some((_, u)) = best {
                self.moves += 1;
                return Some(norm(v, u));
            }
        }
        self.failure = Some(match order.first() {
            Some(&(_, v)) => format!(
                "degree subgame starved: vertex {v} is below target {} with no unclaimed edges",
                self.k
            ),
            None => "degree subgame asked to move after completion".into(),
        });
        None
    }
}

/// How claiming a candidate pair advances the witness path.
enum Claimed {
    /// The stored order becomes a spanning cycle once the pair is claimed.
    Win(Vec<u32>),
    /// The stored order becomes a strictly longer path once the pair is
    /// claimed.
    Grow(Vec<u32>),
}

/// Booster stage: maintain one witness path in Maker's graph and claim pool
/// edges that provably lengthen or close it.
#[derive(Debug)]
struct BoosterEngine {
    pool: Graph,
    path: Vec<u32>,
    witness: Option<Vec<u32>>,
    booster_claims: usize,
    fallback_claims: usize,
    /// Witnessed path length (in edges) after each booster claim; a closing
    /// claim records `n`.
    booster_lens: Vec<usize>,
    seed: u64,
    seeded: bool,
}

impl BoosterEngine {
    fn new(pool: Graph, seed: u64) -> Self {
        BoosterEngine {
            pool,
            path: Vec::new(),
            witness: None,
            booster_claims: 0,
            fallback_claims: 0,
            booster_lens: Vec::new(),
            seed,
            seeded: false,
        }
    }

    fn choose(&mut self, st: &GameState) -> Option<(u32, u32)> {
        let m = st.maker_graph();
        if !self.seeded {
            self.seeded = true;
            self.path = longest_path_heuristic(m, ENGINE_RESTARTS, self.seed)
                .expect("the board has at least one vertex")
                .path()
                .to_vec();
        }
        let (path, cycle) = grow(m, std::mem::take(&mut self.path));
        self.path = path;
        if let Some(c) = cycle {
            self.witness = Some(c);
            return self.filler(st);
        }
        let (cands, ends) = booster_moves(m, &self.path);
        for (&e, how) in &cands {
            if self.pool.has_edge(e.0, e.1) && !st.is_claimed(e.0, e.1) {
                self.booster_claims += 1;
                match how {
                    Claimed::Win(cycle) => {
                        self.witness = Some(cycle.clone());
                        self.booster_lens.push(m.n());
                    }
                    Claimed::Grow(np) => {
                        debug_assert_eq!(np.len(), self.path.len() + 1);
                        self.path = np.clone();
                        self.booster_lens.push(self.path.len() - 1);
                    }
                }
                return Some(e);
            }
        }
        // No claimable booster: take a chord at a rotation-reachable
        // endpoint, preferring the one opening the most endpoints.
        self.fallback_claims += 1;
        let cands: Vec<(u32, u32)> = self
            .pool
            .edges()
            .filter(|&(u, v)| {
                !st.is_claimed(u, v) && (ends.contains(&u) || ends.contains(&v))
            })
            .take(FALLBACK_CANDIDATES)
            .collect();
        let mut best: Option<(usize, (u32, u32))> = None;
        for &(u, v) in &cands {
            let with = m.with_edge(u, v).expect("board pairs are in range");
            let score = PosaState::new(&with, self.path.clone())
                .and_then(|ps| endpoint_expansion(&with, &ps))
                .map(|ee| ee.endpoints().len())
                .unwrap_or(0);
            if best.is_none_or(|(s, _)| score > s) {
                best = Some((score, (u, v)));
            }
        }
        if let Some((_, e)) = best {
            return Some(e);
        }
        self.filler(st)
    }

    /// Any legal claim, preferring the pool.
    fn filler(&self, st: &GameState) -> Option<(u32, u32)> {
        self.pool
            .edges()
            .find(|&(u, v)| !st.is_claimed(u, v))
            .or_else(|| st.unclaimed().first().copied())
    }
}

/// Extends and rotates `path` to a stable maximum in `g`. Returns the final
/// path and, when it spans the graph and some reachable endpoint closes with
/// an existing edge, the spanning cycle.
fn grow(g: &Graph, mut path: Vec<u32>) -> (Vec<u32>, Option<Vec<u32>>) {
    let n = g.n();
    if path.is_empty() {
        path.push(0);
    }
    let mut on_path = vec![false; n];
    for &v in &path {
        on_path[v as usize] = true;
    }
    loop {
        extend_max(g, &mut path, &mut on_path);
        let spanning = path.len() == n && n >= 3;
        if spanning && g.has_edge(path[0], *path.last().expect("nonempty")) {
            let cycle = path.clone();
            return (path, Some(cycle));
        }
        let mut improved = false;
        for flip in [false, true] {
            let oriented: Vec<u32> = if flip {
                path.iter().rev().copied().collect()
            } else {
                path.clone()
            };
            let v0 = oriented[0];
            let ps = PosaState::new(g, oriented).expect("the path stays inside the graph");
            let ee = endpoint_expansion(g, &ps).expect("extension left the path maximal");
            for &s in ee.endpoints() {
                let rp = ee.path(s).expect("reachable endpoints carry a path");
                if spanning && s != v0 && g.has_edge(v0, s) {
                    return (rp.to_vec(), Some(rp.to_vec()));
                }
                if !spanning {
                    let next = g
                        .neighbors(s)
                        .iter()
                        .copied()
                        .filter(|&y| !on_path[y as usize])
                        .min();
                    if let Some(y) = next {
                        path = rp.to_vec();
                        path.push(y);
                        on_path[y as usize] = true;
                        improved = true;
                        break;
                    }
                }
            }
            if improved {
                break;
            }
        }
        if !improved {
            return (path, None);
        }
    }
}

/// Appends the lowest free neighbor at either end until both ends are stuck.
fn extend_max(g: &Graph, path: &mut Vec<u32>, on_path: &mut [bool]) {
    loop {
        let mut grew = false;
        while let Some(y) = free_neighbor(g, *path.last().expect("nonempty"), on_path) {
            path.push(y);
            on_path[y as usize] = true;
            grew = true;
        }
        while let Some(y) = free_neighbor(g, path[0], on_path) {
            path.insert(0, y);
            on_path[y as usize] = true;
            grew = true;
        }
        if !grew {
            return;
        }
    }
}

fn free_neighbor(g: &Graph, v: u32, on_path: &[bool]) -> Option<u32> {
    g.neighbors(v).iter().copied().filter(|&y| !on_path[y as usize]).min()
}

/// Candidate pairs whose claim provably advances the grown path, keyed
/// ascending so the lowest claimable pair wins ties, plus every endpoint
/// rotations can reach (for fallback targeting).
///
/// The path must be the output of [`grow`]: maximal with no reachable
/// endpoint extendable. Attach pairs join a reachable endpoint to an
/// off-path vertex; closure pairs join the fixed start to a reachable
/// endpoint and either close a spanning cycle or, when some path vertex
/// still sees off-path vertices, reopen into a longer path.
fn booster_moves(
    g: &Graph,
    path: &[u32],
) -> (BTreeMap<(u32, u32), Claimed>, BTreeSet<u32>) {
    let n = g.n();
    let mut on_path = vec![false; n];
    for &v in path {
        on_path[v as usize] = true;
    }
    let outside: Vec<u32> = (0..n as u32).filter(|&v| !on_path[v as usize]).collect();
    let spanning = path.len() == n && n >= 3;
    let frontier = path
        .iter()
        .any(|&v| g.neighbors(v).iter().any(|&u| !on_path[u as usize]));
    let mut out: BTreeMap<(u32, u32), Claimed> = BTreeMap::new();
    let mut ends: BTreeSet<u32> = BTreeSet::new();
    if path.len() < 2 {
        // A bare vertex only attaches.
        let v0 = path[0];
        ends.insert(v0);
        for &y in &outside {
            if !g.has_edge(v0, y) {
                out.insert(norm(v0, y), Claimed::Grow(vec![v0, y]));
            }
        }
        return (out, ends);
    }
    for flip in [false, true] {
        let oriented: Vec<u32> =
            if flip { path.iter().rev().copied().collect() } else { path.to_vec() };
        let v0 = oriented[0];
        let ps = PosaState::new(g, oriented).expect("the path stays inside the graph");
        let ee = endpoint_expansion(g, &ps).expect("booster extraction needs a maximal path");
        for &s in ee.endpoints() {
            ends.insert(s);
            let rp = ee.path(s).expect("reachable endpoints carry a path");
            for &y in &outside {
                if !g.has_edge(s, y) {
                    let mut np = rp.to_vec();
                    np.push(y);
                    out.entry(norm(s, y)).or_insert(Claimed::Grow(np));
                }
            }
            if s != v0 && !g.has_edge(v0, s) {
                if spanning {
                    out.insert(norm(v0, s), Claimed::Win(rp.to_vec()));
                } else if frontier {
                    if let Some(np) = open_cycle(g, rp, &on_path) {
                        out.entry(norm(v0, s)).or_insert(Claimed::Grow(np));
                    }
                }
            }
        }
    }
    (out, ends)
}

/// Reopens the cycle formed by `order` plus the claimed pair of its ends:
/// walks around from just past a vertex with an off-path neighbor and steps
/// off, producing a path one longer than `order`'s.
fn open_cycle(g: &Graph, order: &[u32], on_path: &[bool]) -> Option<Vec<u32>> {
    let l = order.len();
    for i in 0..l {
        let w = g
            .neighbors(order[i])
            .iter()
            .copied()
            .filter(|&w| !on_path[w as usize])
            .min();
        if let Some(w) = w {
            let mut np = Vec::with_capacity(l + 1);
            np.extend_from_slice(&order[i + 1..]);
            np.extend_from_slice(&order[..=i]);
            np.push(w);
            return Some(np);
        }
    }
    None
}

/// Board decomposition a [`StagedMaker`] plays from: two edge-disjoint
/// spanning cycles feeding the connectivity subgame, a degree part, and a
/// booster part. The four parts partition the board's edges.
#[derive(Debug, Clone)]
pub struct MakerPlan {
    c1c2: Graph,
    g12: Graph,
    g2: Graph,
    k: usize,
    t1: Vec<(u32, u32)>,
    t2: Vec<(u32, u32)>,
}

impl MakerPlan {
    /// Validates the decomposition: `c1` and `c2` must be edge-disjoint
    /// spanning cycles and the four parts must partition `board`'s edges.
    /// The degree target is the degree part's minimum degree divided by
    /// [`DEGREE_DIVISOR`], rounded up.
    pub fn new(board: &Graph, c1: &Graph, c2: &Graph, g12: Graph, g2: Graph) -> Result<Self> {
        let n = board.n();
        for part in [c1, c2, &g12, &g2] {
            if part.n() != n {
                return Err(Error::SizeMismatch(part.n(), n));
            }
        }
        for (c, name) in [(c1, "first"), (c2, "second")] {
            if c.regular_degree() != Some(2) || !c.is_connected() {
                return Err(Error::InvalidParameter(format!(
                    "{name} cycle part is not a spanning cycle"
                )));
            }
        }
        let c1c2 = c1.union_disjoint(c2)?;
        let total = c1c2.union_disjoint(&g12)?.union_disjoint(&g2)?;
        if !total.edges().eq(board.edges()) {
            return Err(Error::InvalidBoard(
                "the parts do not partition the board's edges".into(),
            ));
        }
        let k = if g12.m() == 0 { 0 } else { g12.min_degree().div_ceil(DEGREE_DIVISOR) };
        let t1 = tree_from_cycle(c1);
        let t2 = tree_from_cycle(c2);
        Ok(MakerPlan { c1c2, g12, g2, k, t1, t2 })
    }

    /// Union of the two reserved cycles.
    pub fn cycle_pair(&self) -> &Graph {
        &self.c1c2
    }

    pub fn degree_part(&self) -> &Graph {
        &self.g12
    }

    pub fn booster_part(&self) -> &Graph {
        &self.g2
    }

    /// Degree target of the minimum-degree subgame.
    pub fn k(&self) -> usize {
        self.k
    }

    /// The spanning trees the connectivity subgame starts from (each cycle
    /// minus its lexicographically largest edge).
    pub fn initial_trees(&self) -> (&[(u32, u32)], &[(u32, u32)]) {
        (&self.t1, &self.t2)
    }
}

fn tree_from_cycle(c: &Graph) -> Vec<(u32, u32)> {
    let mut edges: Vec<(u32, u32)> = c.edges().collect();
    edges.pop();
    edges
}

/// Two-stage Maker over a [`MakerPlan`]; see the module docs for the
/// schedule.
pub struct StagedMaker {
    plan: MakerPlan,
    conn: LehmanConn,
    degree: DegreeGame,
    engine: BoosterEngine,
    stage: Phase,
    failure: Option<String>,
}

impl StagedMaker {
    pub fn new(plan: MakerPlan, seed: u64) -> Self {
        let conn = LehmanConn::from_trees(plan.c1c2.n(), &plan.t1, &plan.t2)
            .expect("plan construction validated the trees");
        let degree = DegreeGame::new(plan.g12.clone(), plan.k);
        let engine = BoosterEngine::new(
            plan.g2.clone(),
            seed ^ stream::stream_id("game/staged/boosters"),
        );
        StagedMaker { plan, conn, degree, engine, stage: Phase::Build, failure: None }
    }

    pub fn plan(&self) -> &MakerPlan {
        &self.plan
    }

    /// Moves spent on the connectivity subgame.
    pub fn conn_moves(&self) -> usize {
        self.conn.moves_made()
    }

    /// Moves spent on the minimum-degree subgame.
    pub fn degree_moves(&self) -> usize {
        self.degree.moves
    }

    /// Booster-stage claims that provably advanced the witness path.
    pub fn booster_claims(&self) -> usize {
        self.engine.booster_claims
    }

    /// Booster-stage claims that only added chords or filled the board.
    pub fn fallback_claims(&self) -> usize {
        self.engine.fallback_claims
    }

    /// Witnessed path length after each booster claim; strictly increasing.
    pub fn booster_lens(&self) -> &[usize] {
        &self.engine.booster_lens
    }
}

impl MakerStrategy for StagedMaker {
    fn name(&self) -> &'static str {
        "staged"
    }

    fn phase(&self) -> Phase {
        self.stage
    }

    fn claimed_witness(&self) -> Option<Vec<u32>> {
        self.engine.witness.clone()
    }

    fn diagnostic(&self) -> Option<String> {
        self.failure.clone().or_else(|| self.degree.failure.clone())
    }

    fn choose(
        &mut self,
        st: &GameState,
        last: Option<(u32, u32)>,
        _rng: &mut ChaCha12Rng,
    ) -> Option<(u32, u32)> {
        if self.stage == Phase::Build && self.conn.won() && self.degree.won(st) {
            self.stage = Phase::Boost;
        }
        if self.stage == Phase::Boost {
            return self.engine.choose(st);
        }
        let claimed = |u: u32, v: u32| st.is_claimed(u, v);
        let in_cycles = last.is_some_and(|(u, v)| self.plan.c1c2.has_edge(u, v));
        let in_degree = last.is_some_and(|(u, v)| self.plan.g12.has_edge(u, v));
        let mv = if in_cycles && !self.conn.won() {
            self.conn.respond(&claimed, last)
        } else if in_degree && !self.degree.won(st) {
            self.degree.respond(st)
        } else if !self.conn.won() {
            self.conn.respond(&claimed, None)
        } else if !self.degree.won(st) {
            self.degree.respond(st)
        } else {
            self.stage = Phase::Boost;
            return self.engine.choose(st);
        };
        if mv.is_none() && self.failure.is_none() {
            self.failure = self.degree.failure.clone();
        }
        mv
    }
}

/// Undecomposed Maker: plays the booster engine over the whole board from
/// the first move.
pub struct GreedyBooster {
    engine: BoosterEngine,
}

impl GreedyBooster {
    pub fn new(board: &Graph, seed: u64) -> Self {
        GreedyBooster {
            engine: BoosterEngine::new(
                board.clone(),
                seed ^ stream::stream_id("game/greedy-booster"),
            ),
        }
    }
}

impl MakerStrategy for GreedyBooster {
    fn name(&self) -> &'static str {
        "greedy-booster"
    }

    fn choose(
        &mut self,
        st: &GameState,
        _last: Option<(u32, u32)>,
        _rng: &mut ChaCha12Rng,
    ) -> Option<(u32, u32)> {
        self.engine.choose(st)
    }

    fn claimed_witness(&self) -> Option<Vec<u32>> {
        self.engine.witness.clone()
    }
}

/// Samples a board together with its play decomposition: two edge-disjoint
/// spanning cycles, a `d12`-regular degree part, and a `d2`-regular booster
/// part, all pairwise edge-disjoint.
pub fn sample_staged_board(
    n: usize,
    d12: usize,
    d2: usize,
    seed: u64,
) -> Result<(Graph, MakerPlan)> {
    let (o1, o2, cycles) =
        gen_two_hamilton_cycles(n, seed ^ stream::stream_id("game/board/cycles"))?;
    let g12 = if d12 == 0 {
        Graph::empty(n)
    } else {
        gen_regular_avoiding(n, d12, &cycles, seed ^ stream::stream_id("game/board/degree-part"))?
    };
    let used = cycles.union_disjoint(&g12)?;
    let g2 = if d2 == 0 {
        Graph::empty(n)
    } else {
        gen_regular_avoiding(n, d2, &used, seed ^ stream::stream_id("game/board/booster-part"))?
    };
    let board = used.union_disjoint(&g2)?;
    let c1 = cycle_graph_of(n, &o1)?;
    let c2 = cycle_graph_of(n, &o2)?;
    let plan = MakerPlan::new(&board, &c1, &c2, g12, g2)?;
    Ok((board, plan))
}

fn cycle_graph_of(n: usize, order: &[u32]) -> Result<Graph> {
    let edges: Vec<(u32, u32)> = (0..order.len())
        .map(|i| norm(order[i], order[(i + 1) % order.len()]))
        .collect();
    Graph::from_edges(n, &edges)
}
