//! Key expansion and its inverse.
//!
//! `K^{i+4} = K^i ^ F(K^{i+1}) ^ C ^ z_i`, so any four consecutive round keys
//! determine all the others.

use super::{MasterKey, Variant, Word};
use crate::error::{Error, Result};

/// Bit `i` of the variant's round-constant sequence.
pub fn z_bit(variant: Variant, i: usize) -> u32 {
    variant.sequence().bit(i)
}

/// The `T` round keys `K^0 .. K^{T-1}` of one variant.
#[derive(Clone, PartialEq, Eq)]
pub struct RoundKeys {
    variant: Variant,
    keys: Vec<Word>,
}

impl RoundKeys {
    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn as_slice(&self) -> &[Word] {
        &self.keys
    }

    pub fn get(&self, i: usize) -> Word {
        self.keys[i]
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    /// `[K^{T-4}, K^{T-3}, K^{T-2}, K^{T-1}]`.
    pub fn last_four(&self) -> [Word; 4] {
        let t = self.keys.len();
        [
            self.keys[t - 4],
            self.keys[t - 3],
            self.keys[t - 2],
            self.keys[t - 1],
        ]
    }
}

impl std::fmt::Debug for RoundKeys {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("RoundKeys")
            .field("variant", &self.variant)
            .field("len", &self.keys.len())
            .finish_non_exhaustive()
    }
}

pub fn expand_key(master: &MasterKey, variant: Variant) -> RoundKeys {
    let mask = variant.mask();
    let rounds = variant.rounds();
    let mut keys = Vec::with_capacity(rounds);
    keys.extend(master.round_keys().iter().map(|k| k & mask));
    for (i, z) in (0..rounds - 4).zip(variant.sequence().lfsr()) {
        let next = keys[i] ^ variant.f(keys[i + 1]) ^ variant.constant() ^ z;
        keys.push(next & mask);
    }
    RoundKeys { variant, keys }
}

/// Rolls the schedule back from `(K^s, K^{s+1}, K^{s+2}, K^{s+3})` to the master key.
pub fn invert_key_schedule(window: [Word; 4], start: usize, variant: Variant) -> Result<MasterKey> {
    if start + 4 > variant.rounds() {
        return Err(Error::ScheduleWindow {
            start,
            rounds: variant.rounds(),
        });
    }
    let z: Vec<u32> = variant.sequence().lfsr().take(start).collect();
    let mut w = window.map(|k| k & variant.mask());
    for i in (0..start).rev() {
        // w currently holds K^{i+1}..K^{i+4}
        let previous = w[3] ^ variant.f(w[0]) ^ variant.constant() ^ z[i];
        w = [previous & variant.mask(), w[0], w[1], w[2]];
    }
    Ok(MasterKey::from_round_keys(w))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn prefix_is_master_key() {
        for v in Variant::ALL {
            let m = MasterKey::from_round_keys([1, 2, 3, 4]);
            assert_eq!(expand_key(&m, v).as_slice()[..4], [1, 2, 3, 4]);
            assert_eq!(expand_key(&m, v).len(), v.rounds());
        }
    }

    #[test]
    fn fifth_key_by_hand() {
        let v = Variant::Simeck32_64;
        let m = MasterKey::from_words_msb_first([0x1918, 0x1110, 0x0908, 0x0100]);
        let keys = expand_key(&m, v);
        let k0 = 0x0100u32;
        let k1 = 0x0908u32;
        let rot = |x: u32, a: u32| ((x << a) | (x >> (16 - a))) & 0xffff;
        let f1 = (k1 & rot(k1, 5)) ^ rot(k1, 1);
        assert_eq!(keys.get(4), k0 ^ f1 ^ 0xfffc ^ 1);
    }

    #[test]
    fn start_zero_is_identity() {
        let v = Variant::Simeck48_96;
        let k = invert_key_schedule([5, 6, 7, 8], 0, v).unwrap();
        assert_eq!(k.round_keys(), [5, 6, 7, 8]);
    }

    #[test]
    fn window_out_of_range() {
        let v = Variant::Simeck32_64;
        assert_eq!(
            invert_key_schedule([0; 4], 29, v),
            Err(Error::ScheduleWindow {
                start: 29,
                rounds: 32
            })
        );
        assert!(invert_key_schedule([0; 4], 28, v).is_ok());
    }

    #[test]
    fn fixed_key_round_trip() {
        let v = Variant::Simeck32_64;
        let m = MasterKey::from_words_msb_first([0x1918, 0x1110, 0x0908, 0x0100]);
        let keys = expand_key(&m, v);
        let back = invert_key_schedule(keys.last_four(), v.rounds() - 4, v).unwrap();
        assert_eq!(back, m);
    }

    proptest! {
        #[test]
        fn inversion_from_any_window(seed in any::<[u32; 4]>(), start in 0usize..41) {
            for v in Variant::ALL {
                let m = MasterKey::from_round_keys(seed.map(|w| w & v.mask()));
                let keys = expand_key(&m, v);
                let s = start % (v.rounds() - 3);
                let window = [keys.get(s), keys.get(s + 1), keys.get(s + 2), keys.get(s + 3)];
                prop_assert_eq!(invert_key_schedule(window, s, v).unwrap(), m);
            }
        }
    }
}
