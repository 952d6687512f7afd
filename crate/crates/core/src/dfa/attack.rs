//! The full key-recovery loop.
//!
//! All faults go into `X^{T-5}`. Round keys are recovered from the bottom of
//! the cipher upward: `K^{T-1}` from the ciphertext pairs, then every stored
//! pair is decrypted by one round and mined again for `K^{T-2}`, and so on.
//! New faults are requested only while the current round key has unknown
//! bits. The last four round keys are then rolled back to the master key.

use std::collections::HashMap;

use super::deduce::{deduce_state_bits, key_bits_from_state};
use super::differential::DifferentialView;
use super::known_bits::KnownBits;
use super::locate::{locate_in_view, ROUNDS_TO_TARGET};
use super::trail::TrailPatterns;
use crate::cipher::{
    encrypt, invert_key_schedule, round_backward, Block, MasterKey, Variant, Word,
};
use crate::oracle::{CiphertextPair, FaultTarget};

/// Number of round keys recovered before inverting the schedule.
pub const KEYS_NEEDED: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AttackConfig {
    /// Injection budget per trial, as a multiple of the word size.
    pub budget_per_bit: usize,
    /// A bit that conflicts in this many pairs fails the trial.
    pub conflict_limit: usize,
}

impl Default for AttackConfig {
    fn default() -> Self {
        AttackConfig {
            budget_per_bit: 50,
            conflict_limit: 3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Failure {
    BudgetExhausted { depth: usize },
    RepeatedConflict { depth: usize, bit: u32 },
    KeyCheck,
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::BudgetExhausted { depth } => {
                write!(f, "injection budget exhausted at depth {depth}")
            }
            Failure::RepeatedConflict { depth, bit } => {
                write!(f, "bit {bit} conflicted repeatedly at depth {depth}")
            }
            Failure::KeyCheck => f.write_str("recovered key does not reproduce the ciphertext"),
        }
    }
}

/// Why a stored pair stopped being used.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Discard {
    NoCandidate { depth: usize },
    PatternMismatch { depth: usize },
    Conflict { depth: usize, bit: u32 },
}

#[derive(Debug, Clone)]
struct PairRecord {
    correct: Block,
    faulty: Block,
    position: Option<u32>,
    discarded: Option<Discard>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttackOutcome {
    pub variant: Variant,
    pub master_key: Option<MasterKey>,
    /// `K^{T-1}, K^{T-2}, ...` in recovery order.
    pub round_keys: Vec<Word>,
    /// New injections spent on each round key, same order.
    pub faults_per_key: Vec<usize>,
    pub total_faults: usize,
    pub failure: Option<Failure>,
    pub discards: Vec<Discard>,
    /// Known key bits after each processed pair, one list per round key.
    pub progress: Vec<Vec<u32>>,
}

impl AttackOutcome {
    pub fn success(&self) -> bool {
        self.failure.is_none() && self.master_key.is_some()
    }

    pub fn faults_last_key(&self) -> usize {
        self.faults_per_key
            .first()
            .copied()
            .unwrap_or(self.total_faults)
    }
}

/// Attack state: the pool of collected pairs, peeled to the current depth.
pub struct DfaAttack {
    variant: Variant,
    config: AttackConfig,
    patterns: TrailPatterns,
    pairs: Vec<PairRecord>,
    injections: usize,
    depth: usize,
    conflicts: HashMap<u32, usize>,
    discards: Vec<Discard>,
}

impl DfaAttack {
    pub fn new(variant: Variant, config: AttackConfig) -> Self {
        DfaAttack {
            variant,
            config,
            patterns: TrailPatterns::new(variant, ROUNDS_TO_TARGET + 2),
            pairs: Vec::new(),
            injections: 0,
            depth: 0,
            conflicts: HashMap::new(),
            discards: Vec::new(),
        }
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn injections(&self) -> usize {
        self.injections
    }

    pub fn budget(&self) -> usize {
        self.config.budget_per_bit * self.variant.word_size() as usize
    }

    /// Adds a ciphertext pair; it is peeled to the current depth first.
    pub fn add_pair(&mut self, pair: CiphertextPair, keys_so_far: &[Word]) {
        let (mut correct, mut faulty) = (pair.correct, pair.faulty);
        for &k in keys_so_far {
            correct = round_backward(correct, k, self.variant);
            faulty = round_backward(faulty, k, self.variant);
        }
        self.pairs.push(PairRecord {
            correct,
            faulty,
            position: None,
            discarded: None,
        });
    }

    /// Views of the usable pairs at the current depth.
    pub fn views(&self) -> impl Iterator<Item = DifferentialView> + '_ {
        self.pairs
            .iter()
            .filter(|p| p.discarded.is_none())
            .map(|p| DifferentialView::from_blocks(p.correct, p.faulty, self.depth, self.variant))
    }

    fn discard(&mut self, idx: usize, why: Discard) {
        self.pairs[idx].discarded = Some(why);
        self.discards.push(why);
    }

    /// Mines pair `idx` for key bits at the current depth and merges them into `acc`.
    fn process(&mut self, idx: usize, acc: &mut KnownBits) -> Result<(), Failure> {
        let depth = self.depth;
        let pair = &self.pairs[idx];
        if pair.discarded.is_some() {
            return Ok(());
        }
        let view = DifferentialView::from_blocks(pair.correct, pair.faulty, depth, self.variant);
        let rounds_after = ROUNDS_TO_TARGET - depth;
        let position = match pair.position {
            Some(p) => {
                if !self
                    .patterns
                    .get(rounds_after as isize, p)
                    .matches(view.delta_minus1)
                {
                    self.discard(idx, Discard::PatternMismatch { depth });
                    return Ok(());
                }
                p
            }
            None => match locate_in_view(&view, &self.patterns) {
                Err(_) => {
                    self.discard(idx, Discard::NoCandidate { depth });
                    return Ok(());
                }
                Ok(r) => match r.position() {
                    Some(p) => {
                        self.pairs[idx].position = Some(p);
                        p
                    }
                    // still ambiguous: the next depth sees a different slice of the trail
                    None => return Ok(()),
                },
            },
        };
        let state = match deduce_state_bits(&view, position, &self.patterns) {
            Ok(s) => s,
            Err(crate::Error::Conflict { bit }) => return self.record_conflict(idx, bit),
            Err(_) => unreachable!("deduction only reports conflicts"),
        };
        let correct = self.pairs[idx].correct;
        let key_bits = key_bits_from_state(&state, correct.y, correct.x, self.variant);
        match acc.first_conflict(&key_bits) {
            Some(bit) => self.record_conflict(idx, bit),
            None => {
                acc.merge(&key_bits).expect("checked for conflicts");
                Ok(())
            }
        }
    }

    fn record_conflict(&mut self, idx: usize, bit: u32) -> Result<(), Failure> {
        let depth = self.depth;
        self.discard(idx, Discard::Conflict { depth, bit });
        let count = self.conflicts.entry(bit).or_insert(0);
        *count += 1;
        if *count >= self.config.conflict_limit {
            return Err(Failure::RepeatedConflict { depth, bit });
        }
        Ok(())
    }

    /// Recovers `K^{T-1-depth}`: first from stored pairs, then from new faults.
    ///
    /// Returns the key and the number of new injections it took, plus the
    /// known-bit count after each processed pair.
    pub fn recover_round_key<F: FaultTarget + ?Sized>(
        &mut self,
        target: &mut F,
        keys_so_far: &[Word],
    ) -> Result<(Word, usize, Vec<u32>), Failure> {
        let mut acc = KnownBits::unknown(self.variant.word_size());
        let mut progress = Vec::new();
        self.conflicts.clear();
        for idx in 0..self.pairs.len() {
            self.process(idx, &mut acc)?;
            progress.push(acc.count_known());
        }
        let mut fresh = 0;
        while !acc.is_complete() {
            if self.injections >= self.budget() {
                return Err(Failure::BudgetExhausted { depth: self.depth });
            }
            let pair = target.inject();
            self.injections += 1;
            fresh += 1;
            self.add_pair(pair, keys_so_far);
            self.process(self.pairs.len() - 1, &mut acc)?;
            progress.push(acc.count_known());
        }
        Ok((acc.value(), fresh, progress))
    }

    /// Decrypts every stored pair by one round with `round_key`.
    pub fn peel(&mut self, round_key: Word) {
        for p in &mut self.pairs {
            p.correct = round_backward(p.correct, round_key, self.variant);
            p.faulty = round_backward(p.faulty, round_key, self.variant);
        }
        self.depth += 1;
    }
}

/// Runs the whole attack against `target`.
pub fn full_attack<F: FaultTarget + ?Sized>(target: &mut F, config: AttackConfig) -> AttackOutcome {
    let variant = target.variant();
    let mut attack = DfaAttack::new(variant, config);
    let mut keys = Vec::with_capacity(KEYS_NEEDED);
    let mut faults_per_key = Vec::with_capacity(KEYS_NEEDED);
    let mut progress = Vec::with_capacity(KEYS_NEEDED);
    let mut failure = None;

    for _ in 0..KEYS_NEEDED {
        match attack.recover_round_key(target, &keys) {
            Ok((key, fresh, steps)) => {
                keys.push(key);
                faults_per_key.push(fresh);
                progress.push(steps);
                attack.peel(key);
            }
            Err(f) => {
                failure = Some(f);
                break;
            }
        }
    }

    let mut master_key = None;
    if failure.is_none() {
        // keys holds K^{T-1}, K^{T-2}, K^{T-3}, K^{T-4}
        let window = [keys[3], keys[2], keys[1], keys[0]];
        let start = variant.rounds() - KEYS_NEEDED;
        let master = invert_key_schedule(window, start, variant).expect("window fits the schedule");
        if encrypt(target.plaintext(), &master, variant) == target.correct_ciphertext() {
            master_key = Some(master);
        } else {
            failure = Some(Failure::KeyCheck);
        }
    }

    AttackOutcome {
        variant,
        master_key,
        round_keys: keys,
        faults_per_key,
        total_faults: attack.injections(),
        failure,
        discards: attack.discards,
        progress,
    }
}
