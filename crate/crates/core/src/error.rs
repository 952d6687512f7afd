use thiserror::Error;

use crate::cipher::Variant;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("round {round} is out of range for {variant} (expected 0..={max})")]
    RoundOutOfRange {
        variant: Variant,
        round: usize,
        max: usize,
    },

    #[error("bit position {position} is out of range for {width}-bit words")]
    PositionOutOfRange { position: u32, width: u32 },

    #[error("key schedule window starting at {start} does not fit in {rounds} round keys")]
    ScheduleWindow { start: usize, rounds: usize },

    #[error("no fault position is consistent with the observed difference")]
    NoCandidate,

    #[error("conflicting deductions for bit {bit}")]
    Conflict { bit: u32 },

    #[error("unknown cipher variant `{0}`")]
    UnknownVariant(String),
}
