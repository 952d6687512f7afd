//! Round-constant sequences for the key schedule.
//!
//! Both sequences come from a Fibonacci LFSR seeded with all ones. The
//! register holds `(s_i, .., s_{i+d-1})`; each step outputs `s_i` and shifts
//! in `s_{i+d} = s_i ^ s_{i+k}`, where the feedback polynomial is
//! `x^d + x^k + 1`.

/// The two constant sequences used across the family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ZSequence {
    /// Generated by `x^5 + x^2 + 1`.
    Z0,
    /// Generated by `x^6 + x + 1`.
    Z1,
}

impl ZSequence {
    const fn degree_and_tap(self) -> (u32, u32) {
        match self {
            ZSequence::Z0 => (5, 2),
            ZSequence::Z1 => (6, 1),
        }
    }

    pub fn lfsr(self) -> Lfsr {
        let (degree, tap) = self.degree_and_tap();
        Lfsr::new(degree, tap)
    }

    /// Bit `i` of the sequence.
    pub fn bit(self, i: usize) -> u32 {
        self.lfsr().nth(i).expect("lfsr iterator is infinite")
    }
}

/// A Fibonacci LFSR over GF(2) with a trinomial feedback polynomial.
#[derive(Debug, Clone)]
pub struct Lfsr {
    state: u32,
    degree: u32,
    tap: u32,
}

impl Lfsr {
    /// Register of `degree` cells for `x^degree + x^tap + 1`, all cells set.
    pub fn new(degree: u32, tap: u32) -> Self {
        assert!(degree > 0 && degree < 32 && tap > 0 && tap < degree);
        Lfsr {
            state: (1 << degree) - 1,
            degree,
            tap,
        }
    }
}

impl Iterator for Lfsr {
    type Item = u32;

    fn next(&mut self) -> Option<u32> {
        let out = self.state & 1;
        let feedback = out ^ ((self.state >> self.tap) & 1);
        self.state = (self.state >> 1) | (feedback << (self.degree - 1));
        Some(out)
    }
}
