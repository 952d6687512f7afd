//! State and key bits recovered from one localized pair.
//!
//! Writing `t` for the round being recovered, the difference recurrence at
//! bit `j` is
//!
//! ```text
//! d^{t+1}_j = d^t_j x^t_{j-5} ^ d^t_{j-5} x^t_j ^ d^t_j d^t_{j-5} ^ d^t_{j-1} ^ d^{t-1}_j
//! ```
//!
//! When exactly one of `d^t_j`, `d^t_{j-5}` is set and `d^{t-1}_j` is known,
//! the equation is linear in a single state bit:
//!
//! | `d^t_j` | `d^t_{j-5}` | recovered                                  |
//! |---------|-------------|--------------------------------------------|
//! | 1       | 0           | `x^t_{j-5} = d^{t+1}_j ^ d^t_{j-1} ^ d^{t-1}_j` |
//! | 0       | 1           | `x^t_j     = d^{t+1}_j ^ d^t_{j-1} ^ d^{t-1}_j` |
//!
//! Every other case leaves both bits unknown.

use super::differential::DifferentialView;
use super::known_bits::KnownBits;
use super::trail::TrailPatterns;
use crate::cipher::Word;
use crate::error::Result;

/// Rounds between the fault and `D^{t-1}` at depth 0.
const ROUNDS_TO_PREVIOUS: isize = 2;

/// Forced bits of `D^{t-1}` for a pair whose fault sits at `position`.
pub fn previous_delta_knowledge(
    view: &DifferentialView,
    position: u32,
    patterns: &TrailPatterns,
) -> KnownBits {
    patterns.get(ROUNDS_TO_PREVIOUS - view.depth as isize, position)
}

/// The two bits read off the trail's linear cells.
///
/// The flip reaches `a = l + 3 - depth` in `D^t`; the cells `a` and `a + 5`
/// of `D^{t+1}` then give `x^t_{a-5}` and `x^t_{a+5}`. At depth 0 these are
/// `x^{T-2}_{l-2}` and `x^{T-2}_{l+8}`.
pub fn deduce_linear_bits(view: &DifferentialView, position: u32) -> KnownBits {
    let v = view.variant;
    let anchor = position as i64 + 3 - view.depth as i64;
    let next = |j: i64| v.bit(view.delta_top, j);
    let cur = |j: i64| v.bit(view.delta_minus1, j);
    let mut out = KnownBits::unknown(v.word_size());
    out.set(v.index(anchor + 5), next(anchor + 5) ^ cur(anchor + 4))
        .expect("fresh word");
    out.set(v.index(anchor - 5), next(anchor) ^ cur(anchor - 1))
        .expect("fresh word");
    out
}

/// Applies the single-unknown rows above to every bit position.
pub fn deduce_observation_bits(view: &DifferentialView, previous: &KnownBits) -> Result<KnownBits> {
    let v = view.variant;
    let next = view.delta_top;
    let cur = view.delta_minus1;
    let mut out = KnownBits::unknown(v.word_size());
    for j in 0..v.word_size() as i64 {
        let (dj, dj5) = (v.bit(cur, j), v.bit(cur, j - 5));
        if dj == dj5 {
            continue;
        }
        let Some(prev) = previous.get(v.index(j)) else {
            continue;
        };
        let value = v.bit(next, j) ^ v.bit(cur, j - 1) ^ prev;
        let target = if dj == 1 { j - 5 } else { j };
        out.set(v.index(target), value)?;
    }
    Ok(out)
}

/// Round-key bits from known bits of `X^{t}` via `K = X^t ^ F(X^{t+1}) ^ X^{t+2}`.
///
/// `y_top` and `x_top` are the halves of the current (peeled) ciphertext.
pub fn key_bits_from_state(
    x_t2: &KnownBits,
    y_top: Word,
    x_top: Word,
    variant: crate::cipher::Variant,
) -> KnownBits {
    let full = x_t2.value() ^ variant.f(y_top) ^ x_top;
    KnownBits::from_parts(full, x_t2.mask(), variant.word_size())
}

/// Every bit of `X^t` that one localized pair yields at the view's depth.
pub fn deduce_state_bits(
    view: &DifferentialView,
    position: u32,
    patterns: &TrailPatterns,
) -> Result<KnownBits> {
    let previous = previous_delta_knowledge(view, position, patterns);
    let mut bits = deduce_observation_bits(view, &previous)?;
    bits.merge(&deduce_linear_bits(view, position))?;
    Ok(bits)
}

/// Whether a flip at `position` explains every observed difference of the view.
///
/// Checks the forced cells of `D^{t+1}` and `D^{t+2}`, the parity of every bit
/// whose update carries no state bit (`d^t_j = d^t_{j-5} = 0` with `d^{t-1}_j`
/// forced), and that the deductions agree with each other.
pub fn position_consistent(
    view: &DifferentialView,
    position: u32,
    patterns: &TrailPatterns,
) -> bool {
    let v = view.variant;
    let i = ROUNDS_TO_PREVIOUS - view.depth as isize;
    if !patterns.get(i + 1, position).matches(view.delta_minus1)
        || !patterns.get(i + 2, position).matches(view.delta_top)
        || !patterns.get(i + 3, position).matches(view.delta_top_plus)
    {
        return false;
    }
    let previous = patterns.get(i, position);
    for j in 0..v.word_size() as i64 {
        if v.bit(view.delta_minus1, j) | v.bit(view.delta_minus1, j - 5) != 0 {
            continue;
        }
        if let Some(prev) = previous.get(v.index(j)) {
            if v.bit(view.delta_top, j) != v.bit(view.delta_minus1, j - 1) ^ prev {
                return false;
            }
        }
    }
    deduce_state_bits(view, position, patterns).is_ok()
}
