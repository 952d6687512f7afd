//! Recovering the flipped bit position from a propagated difference.
//!
//! Three rounds after the flip, `D^{T-2}` carries a fixed shape: a one at
//! `l + 3` followed by the pattern `10***00**000` and, for wider words, a run
//! of zeros. Sliding that shape over all rotations yields the positions
//! consistent with the observation. [`locate_in_view`] further drops the
//! positions that contradict the later differences of the same pair.

use super::deduce::position_consistent;
use super::differential::DifferentialView;
use super::trail::TrailPatterns;
use crate::cipher::{Variant, Word};
use crate::error::{Error, Result};

/// Rounds between the faulted round `T - 5` and `D^{T-2}`.
pub const ROUNDS_TO_TARGET: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalizationResult {
    pub candidates: Vec<u32>,
    pub unique: bool,
}

impl LocalizationResult {
    pub fn position(&self) -> Option<u32> {
        self.unique.then(|| self.candidates[0])
    }
}

/// Positions whose forced bits `rounds_after` rounds past the flip agree with `delta`.
pub fn locate_with(
    delta: Word,
    rounds_after: usize,
    patterns: &TrailPatterns,
) -> Result<LocalizationResult> {
    let candidates: Vec<u32> = (0..patterns.variant().word_size())
        .filter(|&p| patterns.get(rounds_after as isize, p).matches(delta))
        .collect();
    if candidates.is_empty() {
        return Err(Error::NoCandidate);
    }
    Ok(LocalizationResult {
        unique: candidates.len() == 1,
        candidates,
    })
}

/// Candidates from [`locate_with`] that also explain the rest of the view.
///
/// `patterns` must cover at least `ROUNDS_TO_TARGET + 2` rounds.
pub fn locate_in_view(
    view: &DifferentialView,
    patterns: &TrailPatterns,
) -> Result<LocalizationResult> {
    let rounds_after = ROUNDS_TO_TARGET - view.depth;
    let candidates: Vec<u32> = locate_with(view.delta_minus1, rounds_after, patterns)?
        .candidates
        .into_iter()
        .filter(|&p| position_consistent(view, p, patterns))
        .collect();
    if candidates.is_empty() {
        return Err(Error::NoCandidate);
    }
    Ok(LocalizationResult {
        unique: candidates.len() == 1,
        candidates,
    })
}

/// Localizes a fault at `T - 5` from `D^{T-2}`.
pub fn locate_fault(delta_t2: Word, variant: Variant) -> Result<LocalizationResult> {
    locate_with(
        delta_t2,
        ROUNDS_TO_TARGET,
        &TrailPatterns::new(variant, ROUNDS_TO_TARGET),
    )
}
