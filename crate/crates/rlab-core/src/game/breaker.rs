//! Breaker strategies: a seeded random baseline and three documented
//! heuristics (vertex starvation, booster denial, cut capture), plus a
//! scripted opponent for tests.

use std::collections::{BTreeSet, VecDeque};

use rand::Rng;
use rand_chacha::ChaCha12Rng;

use crate::hamilton::witnessed_boosters;

use super::{norm, BreakerStrategy, GameState};

/// Claims a uniformly random unclaimed edge.
pub struct RandomBreaker;

impl BreakerStrategy for RandomBreaker {
    fn name(&self) -> &'static str {
        "random"
    }

    fn choose(&mut self, state: &GameState, rng: &mut ChaCha12Rng) -> Option<(u32, u32)> {
        let open = state.unclaimed();
        if open.is_empty() {
            None
        } else {
            Some(open[rng.random_range(0..open.len())])
        }
    }
}

/// Starves low-degree vertices: locks onto the vertex that looks cheapest to
/// keep below Maker degree two and claims its edges until it is dead or
/// safe, then retargets.
///
/// The commitment matters: on a board with a degree-three vertex, Breaker
/// moves first and takes two of the three incident edges before Maker can
/// hold two, so the vertex ends on at most one Maker edge and Maker's graph
/// has no spanning cycle. That wins against every Maker.
pub struct VertexKiller {
    target: Option<u32>,
}

impl VertexKiller {
    pub fn new() -> Self {
        VertexKiller { target: None }
    }

    /// Still worth attacking: below Maker degree two with edges left.
    fn killable(state: &GameState, v: u32) -> bool {
        state.maker_graph().degree(v) < 2 && !state.unclaimed_at(v).is_empty()
    }

    /// Lower is more vulnerable; Maker progress weighs three open edges.
    fn vulnerability(state: &GameState, v: u32) -> usize {
        3 * state.maker_graph().degree(v) + state.unclaimed_at(v).len()
    }
}

impl Default for VertexKiller {
    fn default() -> Self {
        Self::new()
    }
}

impl BreakerStrategy for VertexKiller {
    fn name(&self) -> &'static str {
        "vertex-killer"
    }

    fn choose(&mut self, state: &GameState, _rng: &mut ChaCha12Rng) -> Option<(u32, u32)> {
        if let Some(t) = self.target {
            if !Self::killable(state, t) {
                self.target = None;
            }
        }
        if self.target.is_none() {
            self.target = (0..state.board().n() as u32)
                .filter(|&v| Self::killable(state, v))
                .min_by_key(|&v| (Self::vulnerability(state, v), v));
        }
        match self.target {
            Some(t) => state.unclaimed_at(t).first().map(|&u| norm(t, u)),
            None => state.unclaimed().first().copied(),
        }
    }
}

/// Denies path growth: enumerates witnessed boosters of Maker's current
/// graph and claims the lowest one that is still an open board edge, falling
/// back to a random edge.
pub struct BoosterBlocker {
    iters: usize,
}

impl BoosterBlocker {
    pub fn new() -> Self {
        // Two search restarts per move keeps the heuristic affordable.
        BoosterBlocker { iters: 2 }
    }
}

impl Default for BoosterBlocker {
    fn default() -> Self {
        Self::new()
    }
}

impl BreakerStrategy for BoosterBlocker {
    fn name(&self) -> &'static str {
        "booster-blocker"
    }

    fn choose(&mut self, state: &GameState, rng: &mut ChaCha12Rng) -> Option<(u32, u32)> {
        let m = state.maker_graph();
        if m.m() > 0 {
            if let Ok(wb) = witnessed_boosters(m, self.iters, rng.random::<u64>(), false) {
                for &(u, v) in &wb.set.pairs {
                    if state.board().has_edge(u, v) && !state.is_claimed(u, v) {
                        return Some((u, v));
                    }
                }
            }
        }
        RandomBreaker.choose(state, rng)
    }
}

/// Captures an edge cut: grows a side from a low-degree seed, absorbing
/// every vertex Maker has already connected to it, and claims unclaimed
/// crossing edges. Owning a full cut around the side leaves Maker's graph
/// disconnected.
pub struct CutBuilder {
    side: BTreeSet<u32>,
}

impl CutBuilder {
    pub fn new() -> Self {
        CutBuilder { side: BTreeSet::new() }
    }
}

impl Default for CutBuilder {
    fn default() -> Self {
        Self::new()
    }
}

impl BreakerStrategy for CutBuilder {
    fn name(&self) -> &'static str {
        "cut-builder"
    }

    fn choose(&mut self, state: &GameState, _rng: &mut ChaCha12Rng) -> Option<(u32, u32)> {
        let n = state.board().n() as u32;
        if self.side.is_empty() {
            let seed = (0..n).min_by_key(|&v| (state.board().degree(v), v))?;
            self.side.insert(seed);
        }
        // Crossing edges Maker already owns are lost; absorb their far ends
        // so the frontier moves outward past them.
        loop {
            let grab: Vec<u32> = self
                .side
                .iter()
                .flat_map(|&v| state.maker_graph().neighbors(v).iter().copied())
                .filter(|w| !self.side.contains(w))
                .collect();
            if grab.is_empty() {
                break;
            }
            self.side.extend(grab);
        }
        if self.side.len() as u32 == n {
            // Maker already connects everything; no cut is left to build.
            return state.unclaimed().first().copied();
        }
        state
            .board()
            .edges()
            .find(|&(u, v)| {
                self.side.contains(&u) != self.side.contains(&v) && !state.is_claimed(u, v)
            })
            .or_else(|| state.unclaimed().first().copied())
    }
}

/// Plays a fixed move list, then the lowest unclaimed edge.
pub struct Scripted {
    script: VecDeque<(u32, u32)>,
}

impl Scripted {
    pub fn new(moves: &[(u32, u32)]) -> Self {
        Scripted { script: moves.iter().copied().collect() }
    }
}

impl BreakerStrategy for Scripted {
    fn name(&self) -> &'static str {
        "scripted"
    }

    fn choose(&mut self, state: &GameState, _rng: &mut ChaCha12Rng) -> Option<(u32, u32)> {
        self.script.pop_front().or_else(|| state.unclaimed().first().copied())
    }
}
