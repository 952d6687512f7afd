//! Differential fault analysis of SIMECK with single bit flips in one round.

pub mod attack;
pub mod deduce;
pub mod differential;
pub mod known_bits;
pub mod locate;
pub mod trail;

pub use attack::{full_attack, AttackConfig, AttackOutcome, DfaAttack, Discard, Failure};
pub use deduce::{
    deduce_linear_bits, deduce_observation_bits, deduce_state_bits, key_bits_from_state,
    position_consistent,
};
pub use differential::{
    compute_prev_delta, observe, propagate_delta, propagate_delta_bit, DifferentialView,
};
pub use known_bits::KnownBits;
pub use locate::{locate_fault, locate_in_view, locate_with, LocalizationResult};
pub use trail::{
    known_prev_differences, survey_trail, symbolic_trail, Cell, TrailPatterns, TrailTable,
};
