//! Crate-wide error type.

use thiserror::Error;

/// Errors surfaced by graph construction, generation, and analysis.
#[derive(Debug, Error)]
pub enum Error {
    /// A vertex id is outside `0..n`.
    #[error("vertex {vertex} out of range for graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    /// An edge list contained a self-loop.
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),

    /// An edge list contained a repeated edge.
    #[error("duplicate edge {{{0}, {1}}}")]
    DuplicateEdge(usize, usize),

    /// Two graphs that must share a vertex set do not.
    #[error("vertex count mismatch: {0} vs {1}")]
    SizeMismatch(usize, usize),

    /// A subgraph argument contains an edge missing from its host.
    #[error("edge {{{0}, {1}}} is not present in the host graph")]
    NotSubgraph(usize, usize),

    /// A degree sequence cannot be realized by a simple graph.
    #[error("degree sequence is not graphic: {0}")]
    NotGraphic(String),

    /// A generator parameter is outside its documented domain.
    #[error("invalid generation parameter: {0}")]
    InvalidParameter(String),

    /// Rejection or repair sampling exhausted its attempt budget.
    #[error("generation failed after {attempts} attempts: {what}")]
    GenerationExhausted { what: String, attempts: usize },

    /// An analytic bound was requested outside the regime where its
    /// denominators stay positive.
    #[error("bound undefined in this regime: {0}")]
    DegenerateBound(String),

    /// The iterative eigensolver did not reach its tolerance.
    #[error("eigensolver failed to converge within {iterations} iterations (residual {residual:.3e})")]
    NoConvergence { iterations: usize, residual: f64 },

    /// An operation only defined for regular graphs received an irregular one.
    #[error("graph is not regular: degrees range over [{min}, {max}]")]
    NotRegular { min: usize, max: usize },

    /// An exact decider was asked to run above its size cap.
    #[error("exact {what} is capped at n <= {cap}, got n = {n}")]
    ExactCapExceeded {
        what: &'static str,
        cap: usize,
        n: usize,
    },

    /// A game was started on an inconsistent board.
    #[error("invalid game board: {0}")]
    InvalidBoard(String),

    /// Reading or writing an edge-list file failed.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    /// An edge-list file violated the interchange format.
    #[error("parse error at line {line}: {what}")]
    Parse { line: usize, what: String },
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
