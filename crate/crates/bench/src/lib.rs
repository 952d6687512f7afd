//! Shared fixtures for the criterion benchmarks.

use simeck_dfa::{Block, MasterKey, Variant};

/// A fixed key for each variant.
pub fn fixture_key(variant: Variant) -> MasterKey {
    MasterKey::from_round_keys(
        [0x0302_0100, 0x0b0a_0908, 0x1312_1110, 0x1b1a_1918].map(|w| w & variant.mask()),
    )
}

pub fn fixture_plaintext(variant: Variant) -> Block {
    Block::new(0x656b_696c & variant.mask(), 0x2064_6e75 & variant.mask())
}
