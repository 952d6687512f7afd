//! Differential trails of a single bit flip.
//!
//! Two views of the same object:
//!
//! * [`symbolic_trail`] pushes a ternary abstraction (`0`, `1`, unknown)
//!   through the difference recurrence, treating every state bit as unknown.
//!   A cell it reports as constant is constant for every key and plaintext.
//! * [`survey_trail`] runs the simulator on random keys and plaintexts and
//!   records which cells were observed as 0, 1 or both.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::known_bits::KnownBits;
use crate::cipher::{Block, MasterKey, Variant, Word};
use crate::oracle::{FaultOracle, FaultSpec};

/// Classification of one trail cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Cell {
    Zero,
    One,
    Varies,
}

impl Cell {
    pub fn symbol(self) -> char {
        match self {
            Cell::Zero => '0',
            Cell::One => '1',
            Cell::Varies => '*',
        }
    }

    pub fn from_symbol(c: char) -> Option<Cell> {
        match c {
            '0' => Some(Cell::Zero),
            '1' => Some(Cell::One),
            '*' => Some(Cell::Varies),
            _ => None,
        }
    }

    fn xor(self, other: Cell) -> Cell {
        match (self, other) {
            (Cell::Varies, _) | (_, Cell::Varies) => Cell::Varies,
            (a, b) if a == b => Cell::Zero,
            _ => Cell::One,
        }
    }

    fn and(self, other: Cell) -> Cell {
        match (self, other) {
            (Cell::Zero, _) | (_, Cell::Zero) => Cell::Zero,
            (Cell::One, Cell::One) => Cell::One,
            _ => Cell::Varies,
        }
    }
}

fn cell_of(bits: &KnownBits, j: i64, n: u32) -> Cell {
    match bits.get(j.rem_euclid(n as i64) as u32) {
        Some(0) => Cell::Zero,
        Some(_) => Cell::One,
        None => Cell::Varies,
    }
}

/// Ternary trail for a flip of bit 0; entry `i` describes `D^{t+i}` for `i = 0..=rounds`.
pub fn symbolic_trail(variant: Variant, rounds: usize) -> Vec<KnownBits> {
    let n = variant.word_size();
    let mut rows = vec![KnownBits::known(1, n)];
    let mut prev = KnownBits::known(0, n);
    for _ in 0..rounds {
        let cur = *rows.last().expect("non-empty");
        let mut next = KnownBits::unknown(n);
        for j in 0..n as i64 {
            let d = |k: i64| cell_of(&cur, k, n);
            let cell = d(j)
                .and(Cell::Varies)
                .xor(d(j - 5).and(Cell::Varies))
                .xor(d(j).and(d(j - 5)))
                .xor(d(j - 1))
                .xor(cell_of(&prev, j, n));
            match cell {
                Cell::Zero => next.set(j as u32, 0),
                Cell::One => next.set(j as u32, 1),
                Cell::Varies => Ok(()),
            }
            .expect("fresh word has no conflicts");
        }
        prev = cur;
        rows.push(next);
    }
    rows
}

fn rotate(bits: &KnownBits, by: u32, variant: Variant) -> KnownBits {
    KnownBits::from_parts(
        variant.rotl(bits.value(), by),
        variant.rotl(bits.mask(), by),
        variant.word_size(),
    )
}

/// Bits of `D^{t+i}` fixed by a single flip at `(t, position)` regardless of key and data.
///
/// `i = 0` gives the flip itself; larger `i` give the forced ones and zeros of
/// later rounds.
pub fn known_prev_differences(position: u32, i: usize, variant: Variant) -> KnownBits {
    let rows = symbolic_trail(variant, i);
    rotate(&rows[i], position, variant)
}

/// Forced bits of `D^{t+i}` for all positions, indexed `[i][position]`.
#[derive(Debug, Clone)]
pub struct TrailPatterns {
    variant: Variant,
    rows: Vec<Vec<KnownBits>>,
}

impl TrailPatterns {
    pub fn new(variant: Variant, rounds: usize) -> Self {
        let base = symbolic_trail(variant, rounds);
        let rows = base
            .iter()
            .map(|row| {
                (0..variant.word_size())
                    .map(|p| rotate(row, p, variant))
                    .collect()
            })
            .collect();
        TrailPatterns { variant, rows }
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn rounds(&self) -> usize {
        self.rows.len() - 1
    }

    /// Forced bits of `D^{t+i}` for a flip at `position`. Negative `i` is before the fault.
    pub fn get(&self, i: isize, position: u32) -> KnownBits {
        if i < 0 {
            KnownBits::known(0, self.variant.word_size())
        } else {
            self.rows[i as usize][position as usize]
        }
    }
}

/// Empirical 0/1/* classification of the left-half differences after a fault.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrailTable {
    pub variant: Variant,
    pub spec: FaultSpec,
    pub samples: usize,
    /// Round index of `rows[0]`.
    pub first_round: usize,
    pub rows: Vec<Vec<Cell>>,
}

impl TrailTable {
    pub fn row(&self, round: usize) -> Option<&[Cell]> {
        round
            .checked_sub(self.first_round)
            .and_then(|i| self.rows.get(i))
            .map(Vec::as_slice)
    }

    /// Row as a string, bit 0 first.
    pub fn row_string(&self, round: usize) -> Option<String> {
        self.row(round)
            .map(|r| r.iter().map(|c| c.symbol()).collect())
    }

    pub fn last_round(&self) -> usize {
        self.first_round + self.rows.len() - 1
    }
}

impl fmt::Display for TrailTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.variant.word_size() as usize;
        writeln!(
            f,
            "{} flip of bit {} in X^{} ({} samples)",
            self.variant, self.spec.position, self.spec.round, self.samples
        )?;
        write!(f, "{:<8}", "round")?;
        for start in (0..n).step_by(8) {
            write!(f, " {:<8}", format!("{}-{}", start, (start + 7).min(n - 1)))?;
        }
        writeln!(f)?;
        for (i, row) in self.rows.iter().enumerate() {
            write!(f, "{:<8}", format!("D^{}", self.first_round + i))?;
            for chunk in row.chunks(8) {
                let s: String = chunk.iter().map(|c| c.symbol()).collect();
                write!(f, " {s:<8}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Classifies `D^r` for `r` from one round before the fault through `T`.
///
/// A cell is `*` as soon as both values have been seen across `samples`
/// random keys and plaintexts.
pub fn survey_trail(
    variant: Variant,
    spec: FaultSpec,
    samples: usize,
    seed: u64,
) -> crate::Result<TrailTable> {
    let spec = spec.validate(variant)?;
    let first_round = spec.round.saturating_sub(1);
    let rows = variant.rounds() - first_round + 1;
    let mut seen_one = vec![0 as Word; rows];
    let mut seen_zero = vec![0 as Word; rows];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = variant.mask();
    for _ in 0..samples {
        let key = MasterKey::from_round_keys([(); 4].map(|_| rng.random::<u32>() & m));
        let p = Block::new(rng.random::<u32>() & m, rng.random::<u32>() & m);
        let oracle = FaultOracle::new(variant, &key, p, 0);
        let clean = oracle.trace();
        let faulty = oracle.faulty_trace(spec)?;
        for (i, r) in (first_round..=variant.rounds()).enumerate() {
            let d = clean[r].x ^ faulty[r].x;
            seen_one[i] |= d;
            seen_zero[i] |= !d & m;
        }
    }
    let rows = (0..rows)
        .map(|i| {
            (0..variant.word_size())
                .map(
                    |j| match ((seen_zero[i] >> j) & 1, (seen_one[i] >> j) & 1) {
                        (1, 1) => Cell::Varies,
                        (_, 1) => Cell::One,
                        _ => Cell::Zero,
                    },
                )
                .collect()
        })
        .collect();
    Ok(TrailTable {
        variant,
        spec,
        samples,
        first_round,
        rows,
    })
}
