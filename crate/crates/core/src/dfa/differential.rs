//! Propagation of left-half differences between a correct and a faulty run.
//!
//! With `D^t = X^t ^ X'^t`, one round gives, bit by bit,
//!
//! ```text
//! d^{t+1}_j = d^t_j x^t_{j-5} ^ d^t_{j-5} x^t_j ^ d^t_j d^t_{j-5} ^ d^t_{j-1} ^ d^{t-1}_j
//! ```
//!
//! which can be solved for `D^{t-1}` once `D^t`, `D^{t+1}` and `X^t` are known.

use crate::cipher::{Block, Variant, Word};
use crate::oracle::CiphertextPair;

/// One bit of `D^{t+1}` from `D^t`, bit `j` of `D^{t-1}` and `X^t`.
pub fn propagate_delta_bit(
    delta_t: Word,
    delta_prev_bit: u32,
    x_t: Word,
    j: i64,
    variant: Variant,
) -> u32 {
    let d = |k: i64| variant.bit(delta_t, k);
    let x = |k: i64| variant.bit(x_t, k);
    (d(j) & x(j - 5)) ^ (d(j - 5) & x(j)) ^ (d(j) & d(j - 5)) ^ d(j - 1) ^ (delta_prev_bit & 1)
}

/// Full-word form of [`propagate_delta_bit`]: `D^{t+1}` from `D^t`, `D^{t-1}`, `X^t`.
pub fn propagate_delta(delta_t: Word, delta_prev: Word, x_t: Word, variant: Variant) -> Word {
    nonlinear_term(delta_t, x_t, variant) ^ variant.rotl(delta_t, 1) ^ delta_prev
}

/// `D^{t-1}` from `D^t`, `D^{t+1}` and `X^t`.
pub fn compute_prev_delta(delta: Word, delta_next: Word, x: Word, variant: Variant) -> Word {
    nonlinear_term(delta, x, variant) ^ variant.rotl(delta, 1) ^ (delta_next & variant.mask())
}

fn nonlinear_term(delta: Word, x: Word, variant: Variant) -> Word {
    let r5 = |w: Word| variant.rotl(w, 5);
    (delta & r5(x)) ^ (r5(delta) & x) ^ (delta & r5(delta))
}

/// Differences visible from a correct/faulty pair peeled by `depth` rounds.
///
/// With `T' = T - depth`, the current pair is `(X^{T'}, Y^{T'})` and its
/// faulty twin, so `Y^{T'} = X^{T'-1}` and the three differences below are
/// `D^{T'}`, `D^{T'-1}` and `D^{T'-2}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DifferentialView {
    pub variant: Variant,
    pub depth: usize,
    /// Left half of the current correct state, `X^{T'}`.
    pub x_cur: Word,
    /// `X^{T'-1}`.
    pub x_top: Word,
    /// `D^{T'-1}`.
    pub delta_top: Word,
    /// `D^{T'}`.
    pub delta_top_plus: Word,
    /// `D^{T'-2}`.
    pub delta_minus1: Word,
}

impl DifferentialView {
    pub fn from_blocks(correct: Block, faulty: Block, depth: usize, variant: Variant) -> Self {
        let x_top = correct.y;
        let delta_top = correct.y ^ faulty.y;
        let delta_top_plus = correct.x ^ faulty.x;
        DifferentialView {
            variant,
            depth,
            x_cur: correct.x,
            x_top,
            delta_top,
            delta_top_plus,
            delta_minus1: compute_prev_delta(delta_top, delta_top_plus, x_top, variant),
        }
    }

    /// Index of the round whose left input is being recovered, `T - 2 - depth`.
    pub fn target_round(&self) -> usize {
        self.variant.rounds() - 2 - self.depth
    }
}

/// Depth-0 view of a ciphertext pair.
pub fn observe(pair: &CiphertextPair, variant: Variant) -> DifferentialView {
    DifferentialView::from_blocks(pair.correct, pair.faulty, 0, variant)
}
