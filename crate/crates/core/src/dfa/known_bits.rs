use crate::cipher::{word_mask, Word};
use crate::error::{Error, Result};

/// A partially known `width`-bit word. Unknown bits are stored as zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct KnownBits {
    value: Word,
    mask: Word,
    width: u32,
}

impl KnownBits {
    pub fn unknown(width: u32) -> Self {
        KnownBits {
            value: 0,
            mask: 0,
            width,
        }
    }

    pub fn known(value: Word, width: u32) -> Self {
        Self::from_parts(value, word_mask(width), width)
    }

    pub fn from_parts(value: Word, mask: Word, width: u32) -> Self {
        let mask = mask & word_mask(width);
        KnownBits {
            value: value & mask,
            mask,
            width,
        }
    }

    pub fn value(&self) -> Word {
        self.value
    }

    pub fn mask(&self) -> Word {
        self.mask
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn is_complete(&self) -> bool {
        self.mask == word_mask(self.width)
    }

    pub fn count_known(&self) -> u32 {
        self.mask.count_ones()
    }

    pub fn get(&self, bit: u32) -> Option<u32> {
        ((self.mask >> bit) & 1 == 1).then_some((self.value >> bit) & 1)
    }

    /// Records bit `bit`; fails if it is already known with the other value.
    pub fn set(&mut self, bit: u32, value: u32) -> Result<()> {
        debug_assert!(bit < self.width);
        match self.get(bit) {
            Some(old) if old != value & 1 => Err(Error::Conflict { bit }),
            Some(_) => Ok(()),
            None => {
                self.mask |= 1 << bit;
                self.value |= (value & 1) << bit;
                Ok(())
            }
        }
    }

    /// Lowest bit known in both words with different values.
    pub fn first_conflict(&self, other: &KnownBits) -> Option<u32> {
        let both = self.mask & other.mask;
        let diff = (self.value ^ other.value) & both;
        (diff != 0).then(|| diff.trailing_zeros())
    }

    /// Union of both words; on conflict `self` is left untouched.
    pub fn merge(&mut self, other: &KnownBits) -> Result<()> {
        if let Some(bit) = self.first_conflict(other) {
            return Err(Error::Conflict { bit });
        }
        self.mask |= other.mask;
        self.value |= other.value;
        Ok(())
    }

    /// Known bits that agree with `word`.
    pub fn matches(&self, word: Word) -> bool {
        (word ^ self.value) & self.mask == 0
    }
}
