#![forbid(unsafe_code)]

//! A laboratory for measuring how robustly sparse graphs keep their global
//! properties (connectivity, perfect matchings, Hamiltonicity) when an
//! adversary deletes a bounded number of edges at every vertex.
//!
//! The crate is organized around four kinds of evidence:
//!
//! * **Exact deciders** (`flow`, `matching`, `hamilton::exact`) settle a
//!   property outright at small scale and anchor every heuristic above them.
//! * **Analytic bounds** (`random::bounds`, `spectral`) evaluate closed-form
//!   edge-probability, concentration, and eigenvalue inequalities in `f64`,
//!   with every asymptotic slack surfaced as an explicit parameter.
//! * **Attacks** (`attacks`, `resilience`) are randomized constructions that
//!   try to destroy a property under a per-vertex deletion budget; a
//!   successful attack is always re-verified before it is reported.
//! * **Certificates** (`certificates`, `resilience::quasi`) are deterministic
//!   sufficient conditions; a certificate is only marked valid when each of
//!   its numeric hypotheses has been recomputed on the concrete instance.
//!
//! The `game` module runs Maker-Breaker Hamiltonicity games on unions of
//! random regular boards, and `stream` provides the seed-derivation scheme
//! used to make every randomized component reproducible.

pub mod attacks;
pub mod certificates;
pub mod error;
pub mod flow;
pub mod game;
pub mod graph;
pub mod hamilton;
pub mod matching;
pub mod random;
pub mod resilience;
pub mod spectral;
pub mod stream;

pub use error::{Error, Result};
pub use graph::{Graph, Partition};
