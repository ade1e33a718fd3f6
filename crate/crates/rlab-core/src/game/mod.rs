//! Maker-Breaker play on graph boards.
//!
//! Two players alternately claim unclaimed board edges, Breaker first. Maker
//! wins if and only if the graph of Maker's edges acquires a spanning cycle;
//! a win is declared only together with an explicit cycle witness (exactly
//! decided on small boards, otherwise by a found cycle). Games may stop as
//! soon as Maker's graph is Hamiltonian, since claiming further edges cannot
//! undo a monotone property; [`play_full`] claims every edge regardless, for
//! studying Breaker scores.

pub mod breaker;
pub mod maker;

use rand_chacha::ChaCha12Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::hamilton::{hamiltonian_cycle, is_hamilton_cycle, HAMILTON_CAP};
use crate::resilience::{hamilton_status, HamStatus, HAM_SEARCH_RESTARTS};
use crate::stream;

pub use breaker::{BoosterBlocker, CutBuilder, RandomBreaker, Scripted, VertexKiller};
pub use maker::{
    sample_staged_board, GreedyBooster, LehmanConn, MakerPlan, StagedMaker, DEGREE_DIVISOR,
};

/// Side of the game a move belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Player {
    Maker,
    Breaker,
}

/// One claimed edge, in claim order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Move {
    pub player: Player,
    pub u: u32,
    pub v: u32,
}

/// Stage a structured Maker strategy reports itself in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    /// Connectivity and minimum-degree subgames on the reserved parts.
    Build,
    /// Booster claims toward a spanning cycle.
    Boost,
    /// The strategy does not stage its play.
    Freeplay,
}

/// Live position: the board and the two disjoint claimed edge sets.
///
/// Claim counts always satisfy `breaker - maker` in `{0, 1}` because Breaker
/// moves first and the players strictly alternate.
#[derive(Debug, Clone)]
pub struct GameState {
    board: Graph,
    maker: Graph,
    breaker: Graph,
    moves: usize,
    /// Stage reported by the Maker strategy after its latest move.
    pub phase: Phase,
}

impl GameState {
    pub fn new(board: &Graph) -> Result<Self> {
        if board.n() == 0 {
            return Err(Error::InvalidBoard("board has no vertices".into()));
        }
        Ok(GameState {
            board: board.clone(),
            maker: Graph::empty(board.n()),
            breaker: Graph::empty(board.n()),
            moves: 0,
            phase: Phase::Freeplay,
        })
    }

    pub fn board(&self) -> &Graph {
        &self.board
    }

    /// Graph of Maker's claimed edges on the board's vertex set.
    pub fn maker_graph(&self) -> &Graph {
        &self.maker
    }

    /// Graph of Breaker's claimed edges on the board's vertex set.
    pub fn breaker_graph(&self) -> &Graph {
        &self.breaker
    }

    /// Total moves made so far by both players.
    pub fn moves_made(&self) -> usize {
        self.moves
    }

    pub fn is_claimed(&self, u: u32, v: u32) -> bool {
        self.maker.has_edge(u, v) || self.breaker.has_edge(u, v)
    }

    pub fn unclaimed_count(&self) -> usize {
        self.board.m() - self.maker.m() - self.breaker.m()
    }

    /// Unclaimed board edges, ascending.
    pub fn unclaimed(&self) -> Vec<(u32, u32)> {
        self.board
            .edges()
            .filter(|&(u, v)| !self.is_claimed(u, v))
            .collect()
    }

    /// Unclaimed board edges at `v`, ascending by neighbor.
    pub fn unclaimed_at(&self, v: u32) -> Vec<u32> {
        self.board
            .neighbors(v)
            .iter()
            .copied()
            .filter(|&u| !self.is_claimed(v, u))
            .collect()
    }

    pub(crate) fn claim(&mut self, player: Player, u: u32, v: u32) -> Result<()> {
        if !self.board.has_edge(u, v) {
            return Err(Error::InvalidBoard(format!("({u}, {v}) is not a board edge")));
        }
        if self.is_claimed(u, v) {
            return Err(Error::InvalidBoard(format!("({u}, {v}) is already claimed")));
        }
        match player {
            Player::Maker => self.maker = self.maker.with_edge(u, v)?,
            Player::Breaker => self.breaker = self.breaker.with_edge(u, v)?,
        }
        self.moves += 1;
        Ok(())
    }
}

/// Chooses Maker's next claim given the position and Breaker's last move.
///
/// Returning `None` forfeits; [`MakerStrategy::diagnostic`] then explains
/// why. A strategy that discovers a spanning cycle reports it through
/// [`MakerStrategy::claimed_witness`], which is read after the returned move
/// has been applied, so the witness may use that move's edge.
pub trait MakerStrategy {
    fn name(&self) -> &'static str;

    fn choose(
        &mut self,
        state: &GameState,
        last_breaker: Option<(u32, u32)>,
        rng: &mut ChaCha12Rng,
    ) -> Option<(u32, u32)>;

    /// Stage to record on the state after this strategy's move.
    fn phase(&self) -> Phase {
        Phase::Freeplay
    }

    /// Spanning cycle in Maker's graph discovered by the strategy, if any.
    fn claimed_witness(&self) -> Option<Vec<u32>> {
        None
    }

    /// Explanation for a forfeit, once `choose` has returned `None`.
    fn diagnostic(&self) -> Option<String> {
        None
    }
}

/// Chooses Breaker's next claim. Returning `None` forfeits.
pub trait BreakerStrategy {
    fn name(&self) -> &'static str;

    fn choose(&mut self, state: &GameState, rng: &mut ChaCha12Rng) -> Option<(u32, u32)>;
}

/// Completed game: the ordered moves, the winner, and the evidence.
///
/// A Maker win with no `diagnostic` always carries a `witness` cycle drawn
/// from Maker's edges. The only Maker wins without one are Breaker forfeits,
/// which the diagnostic records.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transcript {
    pub moves: Vec<Move>,
    pub winner: Player,
    /// Spanning cycle through Maker's edges backing a Maker win.
    pub witness: Option<Vec<u32>>,
    /// Forfeit, illegal-move, or judgment detail; `None` for a clean win.
    pub diagnostic: Option<String>,
}

impl Transcript {
    /// Replays the moves onto a fresh copy of `board`, validating strict
    /// alternation with Breaker first and per-move legality, and returns the
    /// final position.
    pub fn replay(&self, board: &Graph) -> Result<GameState> {
        let mut st = GameState::new(board)?;
        for (i, mv) in self.moves.iter().enumerate() {
            let expect = if i % 2 == 0 { Player::Breaker } else { Player::Maker };
            if mv.player != expect {
                return Err(Error::InvalidBoard(format!(
                    "move {i} by {:?} breaks alternation",
                    mv.player
                )));
            }
            st.claim(mv.player, mv.u, mv.v)?;
        }
        Ok(st)
    }

    /// Replays and checks the win evidence: a Maker win without a diagnostic
    /// must carry a spanning cycle valid in the replayed Maker graph.
    pub fn verify(&self, board: &Graph) -> Result<GameState> {
        let st = self.replay(board)?;
        let b = st.breaker_graph().m();
        let m = st.maker_graph().m();
        if b < m || b > m + 1 {
            return Err(Error::InvalidBoard(format!(
                "claim counts {b} breaker vs {m} maker are not an alternation prefix"
            )));
        }
        if self.winner == Player::Maker && self.diagnostic.is_none() {
            let w = self.witness.as_ref().ok_or_else(|| {
                Error::InvalidBoard("maker win declared without a cycle witness".into())
            })?;
            if !is_hamilton_cycle(st.maker_graph(), w) {
                return Err(Error::InvalidBoard(
                    "witness is not a spanning cycle of the maker graph".into(),
                ));
            }
        }
        Ok(st)
    }
}

/// Plays one game to an early stop: the game ends as soon as Maker's graph
/// has a spanning cycle, the board is exhausted, or a strategy forfeits or
/// moves illegally (an immediate recorded loss). `seed` drives all strategy
/// randomness, so a replay with the same strategies is move-for-move
/// identical.
pub fn play(
    board: &Graph,
    maker: &mut dyn MakerStrategy,
    breaker: &mut dyn BreakerStrategy,
    seed: u64,
) -> Result<Transcript> {
    run(board, maker, breaker, seed, false)
}

/// Plays until every board edge is claimed, even after Maker's graph has
/// become Hamiltonian; the first discovered witness still decides the game.
pub fn play_full(
    board: &Graph,
    maker: &mut dyn MakerStrategy,
    breaker: &mut dyn BreakerStrategy,
    seed: u64,
) -> Result<Transcript> {
    run(board, maker, breaker, seed, true)
}

fn run(
    board: &Graph,
    maker: &mut dyn MakerStrategy,
    breaker: &mut dyn BreakerStrategy,
    seed: u64,
    full: bool,
) -> Result<Transcript> {
    let mut st = GameState::new(board)?;
    let mut rng = stream::stream(seed, "game/play");
    let mut moves: Vec<Move> = Vec::new();
    let mut winner: Option<Player> = None;
    let mut witness: Option<Vec<u32>> = None;
    let mut diagnostic: Option<String> = None;

    while st.unclaimed_count() > 0 {
        let bmv = breaker.choose(&st, &mut rng);
        match checked(&st, bmv) {
            Ok((u, v)) => {
                st.claim(Player::Breaker, u, v)?;
                moves.push(Move { player: Player::Breaker, u, v });
            }
            Err(why) => {
                // Offender loses on the spot, unless a full-board run already
                // decided the game; no cycle exists, so the win is by default
                // and the diagnostic marks it as such.
                if winner.is_none() {
                    winner = Some(Player::Maker);
                    diagnostic = Some(format!("breaker ({}) {why}", breaker.name()));
                }
                break;
            }
        }
        if st.unclaimed_count() == 0 {
            break;
        }

        let last = moves.last().map(|m| (m.u, m.v));
        let mmv = maker.choose(&st, last, &mut rng);
        match checked(&st, mmv) {
            Ok((u, v)) => {
                st.claim(Player::Maker, u, v)?;
                moves.push(Move { player: Player::Maker, u, v });
                st.phase = maker.phase();
            }
            Err(why) => {
                if winner.is_none() {
                    winner = Some(Player::Breaker);
                    let detail =
                        maker.diagnostic().map(|d| format!(": {d}")).unwrap_or_default();
                    diagnostic = Some(format!("maker ({}) {why}{detail}", maker.name()));
                }
                break;
            }
        }

        if winner.is_none() {
            if let Some(w) = maker.claimed_witness() {
                debug_assert!(
                    is_hamilton_cycle(st.maker_graph(), &w),
                    "strategy reported an invalid cycle witness"
                );
                if is_hamilton_cycle(st.maker_graph(), &w) {
                    winner = Some(Player::Maker);
                    witness = Some(w);
                }
            } else if board.n() <= HAMILTON_CAP && cheap_ham_possible(st.maker_graph()) {
                if let Some(c) = hamiltonian_cycle(st.maker_graph())? {
                    winner = Some(Player::Maker);
                    witness = Some(c);
                }
            }
        }
        if winner.is_some() && !full {
            break;
        }
    }

    if winner.is_none() {
        let judge = seed ^ stream::stream_id("game/judge");
        match hamilton_status(st.maker_graph(), HAM_SEARCH_RESTARTS, judge)? {
            HamStatus::Alive { cycle } => {
                winner = Some(Player::Maker);
                witness = Some(cycle);
            }
            HamStatus::DeadVerified { reason } => {
                winner = Some(Player::Breaker);
                diagnostic = Some(format!("maker graph is not Hamiltonian: {reason}"));
            }
            HamStatus::Presumed => {
                winner = Some(Player::Breaker);
                diagnostic =
                    Some("no spanning cycle found in maker graph by randomized search".into());
            }
        }
    }

    debug_assert!(moves.len() <= board.m());
    Ok(Transcript {
        moves,
        winner: winner.expect("every exit sets a winner"),
        witness,
        diagnostic,
    })
}

/// Orders an edge's endpoints ascending, the canonical form everywhere.
pub(crate) fn norm(u: u32, v: u32) -> (u32, u32) {
    if u <= v {
        (u, v)
    } else {
        (v, u)
    }
}

/// Validates a proposed claim against the position.
fn checked(st: &GameState, mv: Option<(u32, u32)>) -> std::result::Result<(u32, u32), String> {
    match mv {
        None => Err("forfeited".into()),
        Some((u, v)) if !st.board().has_edge(u, v) => {
            Err(format!("made an illegal move: ({u}, {v}) is not a board edge"))
        }
        Some((u, v)) if st.is_claimed(u, v) => {
            Err(format!("made an illegal move: ({u}, {v}) is already claimed"))
        }
        Some((u, v)) => Ok((u, v)),
    }
}

/// Cheap necessary conditions before running the exact cycle decider.
fn cheap_ham_possible(m: &Graph) -> bool {
    m.n() >= 3 && m.m() >= m.n() && m.min_degree() >= 2 && m.is_connected()
}
