//! Simulated fault injection.
//!
//! [`FaultOracle`] holds a hidden key and a fixed plaintext. Each injection
//! re-runs the encryption with one bit of the left input of a chosen round
//! flipped. The attacker only sees [`CiphertextPair`]s through the
//! [`FaultTarget`] trait; the flipped position and the traces stay on the
//! simulator side for test assertions.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cipher::{round_forward, Block, Cipher, MasterKey, Variant};
use crate::error::{Error, Result};

/// Flip bit `position` of `X^round` before round `round` executes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FaultSpec {
    pub round: usize,
    pub position: u32,
}

impl FaultSpec {
    pub fn validate(self, variant: Variant) -> Result<Self> {
        if self.round > variant.rounds() {
            return Err(Error::RoundOutOfRange {
                variant,
                round: self.round,
                max: variant.rounds(),
            });
        }
        if self.position >= variant.word_size() {
            return Err(Error::PositionOutOfRange {
                position: self.position,
                width: variant.word_size(),
            });
        }
        Ok(self)
    }
}

/// What the attacker observes from one injection.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CiphertextPair {
    pub correct: Block,
    pub faulty: Block,
}

/// A pair together with the simulator's ground truth.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FaultedPair {
    ciphertexts: CiphertextPair,
    spec: FaultSpec,
}

impl FaultedPair {
    pub fn ciphertexts(&self) -> CiphertextPair {
        self.ciphertexts
    }

    pub fn correct(&self) -> Block {
        self.ciphertexts.correct
    }

    pub fn faulty(&self) -> Block {
        self.ciphertexts.faulty
    }

    pub fn true_position(&self) -> u32 {
        self.spec.position
    }

    pub fn spec(&self) -> FaultSpec {
        self.spec
    }
}

/// The attacker's view of a faultable device.
pub trait FaultTarget {
    fn variant(&self) -> Variant;

    fn correct_ciphertext(&self) -> Block;

    fn plaintext(&self) -> Block;

    /// Runs the encryption again with a bit flip at an unknown position of
    /// `X^{T-5}`.
    fn inject(&mut self) -> CiphertextPair;
}

pub struct FaultOracle {
    cipher: Cipher,
    plaintext: Block,
    correct: Block,
    rng: ChaCha8Rng,
}

impl FaultOracle {
    pub fn new(variant: Variant, master: &MasterKey, plaintext: Block, seed: u64) -> Self {
        let cipher = Cipher::new(variant, master);
        let plaintext = Block::new(plaintext.x & variant.mask(), plaintext.y & variant.mask());
        let correct = cipher.encrypt(plaintext);
        FaultOracle {
            cipher,
            plaintext,
            correct,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn variant(&self) -> Variant {
        self.cipher.variant()
    }

    pub fn correct_ciphertext(&self) -> Block {
        self.correct
    }

    /// Ground truth: the fault-free trace `(X^0, Y^0) .. (X^T, Y^T)`.
    pub fn trace(&self) -> Vec<Block> {
        self.cipher.encrypt_traced(self.plaintext)
    }

    /// Ground truth: the trace with `spec` applied; entry `i` is the input of round `i`.
    pub fn faulty_trace(&self, spec: FaultSpec) -> Result<Vec<Block>> {
        let spec = spec.validate(self.variant())?;
        let mut trace = self.trace();
        let keys = self.cipher.round_keys().as_slice();
        trace[spec.round].x ^= 1 << spec.position;
        for r in spec.round..keys.len() {
            trace[r + 1] = round_forward(trace[r], keys[r], self.variant());
        }
        Ok(trace)
    }

    /// Draws the next fault position uniformly from `0..n`.
    pub fn next_position(&mut self) -> u32 {
        self.rng.random_range(0..self.variant().word_size())
    }

    /// Injects a fault at a random position of `X^round`.
    pub fn inject_fault(&mut self, round: usize) -> Result<FaultedPair> {
        if round > self.variant().rounds() {
            return Err(Error::RoundOutOfRange {
                variant: self.variant(),
                round,
                max: self.variant().rounds(),
            });
        }
        let position = self.next_position();
        self.inject_fault_at(FaultSpec { round, position })
    }

    pub fn inject_fault_at(&self, spec: FaultSpec) -> Result<FaultedPair> {
        let spec = spec.validate(self.variant())?;
        let keys = &self.cipher.round_keys().as_slice()[..spec.round];
        let mut state = crate::cipher::encrypt_with_keys(self.plaintext, keys, self.variant());
        state.x ^= 1 << spec.position;
        for &k in &self.cipher.round_keys().as_slice()[spec.round..] {
            state = round_forward(state, k, self.variant());
        }
        Ok(FaultedPair {
            ciphertexts: CiphertextPair {
                correct: self.correct,
                faulty: state,
            },
            spec,
        })
    }
}

impl FaultTarget for FaultOracle {
    fn variant(&self) -> Variant {
        self.cipher.variant()
    }

    fn correct_ciphertext(&self) -> Block {
        self.correct
    }

    fn plaintext(&self) -> Block {
        self.plaintext
    }

    fn inject(&mut self) -> CiphertextPair {
        let round = self.variant().fault_round();
        self.inject_fault(round)
            .expect("fault round is always in range")
            .ciphertexts
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cipher::encrypt;

    fn oracle(v: Variant, seed: u64) -> FaultOracle {
        let key =
            MasterKey::from_round_keys([0x1234, 0x5678, 0x9abc, 0xdef0].map(|w| w & v.mask()));
        FaultOracle::new(v, &key, Block::new(0x6565, 0x6877), seed)
    }

    #[test]
    fn correct_ciphertext_matches_encrypt() {
        let v = Variant::Simeck32_64;
        let key = MasterKey::from_round_keys([0x1234, 0x5678, 0x9abc, 0xdef0]);
        let o = FaultOracle::new(v, &key, Block::new(0x6565, 0x6877), 1);
        assert_eq!(
            o.correct_ciphertext(),
            encrypt(Block::new(0x6565, 0x6877), &key, v)
        );
    }

    #[test]
    fn same_seed_same_positions() {
        let mut a = oracle(Variant::Simeck48_96, 42);
        let mut b = oracle(Variant::Simeck48_96, 42);
        let pa: Vec<u32> = (0..100).map(|_| a.next_position()).collect();
        let pb: Vec<u32> = (0..100).map(|_| b.next_position()).collect();
        assert_eq!(pa, pb);
    }

    #[test]
    fn flip_in_ciphertext_round_changes_one_bit() {
        for v in Variant::ALL {
            let o = oracle(v, 0);
            for position in 0..v.word_size() {
                let pair = o
                    .inject_fault_at(FaultSpec {
                        round: v.rounds(),
                        position,
                    })
                    .unwrap();
                let d = pair.correct().xor(pair.faulty());
                assert_eq!(d, Block::new(1 << position, 0));
            }
        }
    }

    #[test]
    fn controlled_injection_is_deterministic() {
        let o = oracle(Variant::Simeck64_128, 3);
        let spec = FaultSpec {
            round: 39,
            position: 17,
        };
        assert_eq!(
            o.inject_fault_at(spec).unwrap(),
            o.inject_fault_at(spec).unwrap()
        );
    }

    #[test]
    fn faulty_trace_agrees_with_injection() {
        let v = Variant::Simeck32_64;
        let o = oracle(v, 3);
        let spec = FaultSpec {
            round: v.fault_round(),
            position: 9,
        };
        let trace = o.faulty_trace(spec).unwrap();
        assert_eq!(trace[v.rounds()], o.inject_fault_at(spec).unwrap().faulty());
        let clean = o.trace();
        assert_eq!(trace[spec.round].x ^ clean[spec.round].x, 1 << 9);
    }

    #[test]
    fn out_of_range_specs_are_rejected() {
        let v = Variant::Simeck32_64;
        let mut o = oracle(v, 0);
        assert!(matches!(
            o.inject_fault(33),
            Err(Error::RoundOutOfRange { .. })
        ));
        assert!(matches!(
            o.inject_fault_at(FaultSpec {
                round: 27,
                position: 16
            }),
            Err(Error::PositionOutOfRange { .. })
        ));
    }
}
