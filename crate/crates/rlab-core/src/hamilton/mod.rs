//! Hamiltonicity machinery: exact small-host deciders, rotation-extension
//! paths, booster enumeration and absorption, and expansion checkers.

mod exact;
mod expansion;
mod posa;

pub use exact::{
    exact_boosters, hamiltonian_cycle, is_hamilton_cycle, is_hamiltonian, longest_path_exact,
    longest_path_len, HAMILTON_CAP, LONGEST_PATH_CAP,
};
pub use expansion::{
    expander_check, magnifier_check, CheckMode, ExpansionVerdict, EXACT_EXPANSION_CAP,
};
pub use posa::{
    absorb_boosters, boosters, elementary_rotation, endpoint_expansion, hamilton_witness,
    longest_path_heuristic, witnessed_boosters, Absorption, AbsorptionResult, BoosterMode,
    BoosterSet, EndpointExpansion, PosaState, RotationStep, WitnessedBoosters,
};
