//! The SIMECK family of Feistel block ciphers.
//!
//! A block is two `n`-bit words `(X, Y)`. One round maps
//! `(X, Y) -> (Y ^ F(X) ^ K, X)` with `F(X) = (X & rotl(X, 5)) ^ rotl(X, 1)`.
//! Words are held in `u32` and masked to `n` bits after every operation;
//! bit `j` of a word is the coefficient of `2^j`.

mod lfsr;
mod schedule;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use lfsr::{Lfsr, ZSequence};
pub use schedule::{expand_key, invert_key_schedule, z_bit, RoundKeys};

/// An `n`-bit word stored in the low bits of a `u32`.
pub type Word = u32;

/// One of the three members of the family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Variant {
    #[serde(rename = "s32_64")]
    Simeck32_64,
    #[serde(rename = "s48_96")]
    Simeck48_96,
    #[serde(rename = "s64_128")]
    Simeck64_128,
}

impl Variant {
    pub const ALL: [Variant; 3] = [
        Variant::Simeck32_64,
        Variant::Simeck48_96,
        Variant::Simeck64_128,
    ];

    /// Word size `n` in bits.
    pub const fn word_size(self) -> u32 {
        match self {
            Variant::Simeck32_64 => 16,
            Variant::Simeck48_96 => 24,
            Variant::Simeck64_128 => 32,
        }
    }

    /// Number of encryption rounds `T`.
    pub const fn rounds(self) -> usize {
        match self {
            Variant::Simeck32_64 => 32,
            Variant::Simeck48_96 => 36,
            Variant::Simeck64_128 => 44,
        }
    }

    pub const fn sequence(self) -> ZSequence {
        match self {
            Variant::Simeck32_64 | Variant::Simeck48_96 => ZSequence::Z0,
            Variant::Simeck64_128 => ZSequence::Z1,
        }
    }

    pub const fn mask(self) -> Word {
        word_mask(self.word_size())
    }

    /// Key-schedule constant `2^n - 4`.
    pub const fn constant(self) -> Word {
        self.mask() ^ 3
    }

    /// Round whose left input the attack faults, `T - 5`.
    pub const fn fault_round(self) -> usize {
        self.rounds() - 5
    }

    /// Hex digits in one word.
    pub const fn word_hex_digits(self) -> usize {
        (self.word_size() / 4) as usize
    }

    /// Command-line identifier (`s32_64`, ...).
    pub const fn id(self) -> &'static str {
        match self {
            Variant::Simeck32_64 => "s32_64",
            Variant::Simeck48_96 => "s48_96",
            Variant::Simeck64_128 => "s64_128",
        }
    }

    pub fn rotl(self, x: Word, a: u32) -> Word {
        rotl(x, a, self.word_size())
    }

    pub fn f(self, x: Word) -> Word {
        f_function(x, self.word_size())
    }

    /// Bit `j mod n` of `x`.
    pub fn bit(self, x: Word, j: i64) -> u32 {
        (x >> self.index(j)) & 1
    }

    /// Reduces a possibly negative bit index modulo `n`.
    pub fn index(self, j: i64) -> u32 {
        j.rem_euclid(self.word_size() as i64) as u32
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Variant::Simeck32_64 => "SIMECK32/64",
            Variant::Simeck48_96 => "SIMECK48/96",
            Variant::Simeck64_128 => "SIMECK64/128",
        };
        f.write_str(name)
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let normalized = s.to_ascii_lowercase().replace(['/', '-'], "_");
        match normalized
            .trim_start_matches("simeck")
            .trim_start_matches('_')
        {
            "s32_64" | "32_64" | "32" => Ok(Variant::Simeck32_64),
            "s48_96" | "48_96" | "48" => Ok(Variant::Simeck48_96),
            "s64_128" | "64_128" | "64" => Ok(Variant::Simeck64_128),
            _ => Err(Error::UnknownVariant(s.to_string())),
        }
    }
}

pub const fn word_mask(n: u32) -> Word {
    if n >= 32 {
        u32::MAX
    } else {
        (1 << n) - 1
    }
}

/// Rotates the `n`-bit word `x` left by `a mod n` positions.
pub fn rotl(x: Word, a: u32, n: u32) -> Word {
    let x = x & word_mask(n);
    let a = a % n;
    if a == 0 {
        return x;
    }
    ((x << a) | (x >> (n - a))) & word_mask(n)
}

/// `F(x) = (x & rotl(x, 5)) ^ rotl(x, 1)` on `n`-bit words.
pub fn f_function(x: Word, n: u32) -> Word {
    (x & rotl(x, 5, n)) ^ rotl(x, 1, n)
}

/// The two halves of a cipher state; `x` is the left half.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Block {
    pub x: Word,
    pub y: Word,
}

impl Block {
    pub const fn new(x: Word, y: Word) -> Self {
        Block { x, y }
    }

    /// Word-wise XOR of two states.
    pub fn xor(self, other: Block) -> Block {
        Block::new(self.x ^ other.x, self.y ^ other.y)
    }
}

/// The `4n`-bit master key, stored as the first four round keys.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct MasterKey {
    words: [Word; 4],
}

impl MasterKey {
    /// Builds a key from `[K^0, K^1, K^2, K^3]`.
    pub const fn from_round_keys(words: [Word; 4]) -> Self {
        MasterKey { words }
    }

    /// Builds a key from `[K^3, K^2, K^1, K^0]`, the order in which keys are written.
    pub const fn from_words_msb_first(words: [Word; 4]) -> Self {
        MasterKey {
            words: [words[3], words[2], words[1], words[0]],
        }
    }

    /// `[K^0, K^1, K^2, K^3]`.
    pub const fn round_keys(&self) -> [Word; 4] {
        self.words
    }

    /// `[K^3, K^2, K^1, K^0]`.
    pub const fn words_msb_first(&self) -> [Word; 4] {
        [self.words[3], self.words[2], self.words[1], self.words[0]]
    }

    pub const fn word(&self, i: usize) -> Word {
        self.words[i]
    }

    pub fn fits(&self, variant: Variant) -> bool {
        self.words.iter().all(|w| w & !variant.mask() == 0)
    }
}

// Keys are secret material in the simulator; keep them out of casual debug output.
impl fmt::Debug for MasterKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MasterKey").finish_non_exhaustive()
    }
}

/// One forward round: `(X, Y) -> (Y ^ F(X) ^ k, X)`.
pub fn round_forward(state: Block, k: Word, variant: Variant) -> Block {
    Block::new((state.y ^ variant.f(state.x) ^ k) & variant.mask(), state.x)
}

/// Inverse of [`round_forward`] for the same round key.
pub fn round_backward(state: Block, k: Word, variant: Variant) -> Block {
    Block::new(state.y, (state.x ^ variant.f(state.y) ^ k) & variant.mask())
}

/// Applies `round_forward` once per key in `keys`.
pub fn encrypt_with_keys(p: Block, keys: &[Word], variant: Variant) -> Block {
    keys.iter().fold(p, |s, &k| round_forward(s, k, variant))
}

/// Applies `round_backward` for the keys in reverse order.
pub fn decrypt_with_keys(c: Block, keys: &[Word], variant: Variant) -> Block {
    keys.iter()
        .rev()
        .fold(c, |s, &k| round_backward(s, k, variant))
}

pub fn encrypt(p: Block, master: &MasterKey, variant: Variant) -> Block {
    Cipher::new(variant, master).encrypt(p)
}

pub fn decrypt(c: Block, master: &MasterKey, variant: Variant) -> Block {
    Cipher::new(variant, master).decrypt(c)
}

/// All `T + 1` states `(X^0, Y^0) .. (X^T, Y^T)`.
pub fn encrypt_traced(p: Block, master: &MasterKey, variant: Variant) -> Vec<Block> {
    Cipher::new(variant, master).encrypt_traced(p)
}

/// A keyed cipher instance with its expanded schedule.
#[derive(Clone)]
pub struct Cipher {
    variant: Variant,
    keys: RoundKeys,
}

impl Cipher {
    pub fn new(variant: Variant, master: &MasterKey) -> Self {
        Cipher {
            variant,
            keys: expand_key(master, variant),
        }
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn round_keys(&self) -> &RoundKeys {
        &self.keys
    }

    pub fn encrypt(&self, p: Block) -> Block {
        encrypt_with_keys(p, self.keys.as_slice(), self.variant)
    }

    pub fn decrypt(&self, c: Block) -> Block {
        decrypt_with_keys(c, self.keys.as_slice(), self.variant)
    }

    pub fn encrypt_traced(&self, p: Block) -> Vec<Block> {
        let mut trace = Vec::with_capacity(self.variant.rounds() + 1);
        trace.push(p);
        let mut state = p;
        for &k in self.keys.as_slice() {
            state = round_forward(state, k, self.variant);
            trace.push(state);
        }
        trace
    }
}
