//! Packed bit vectors backing spin states and coupling bitplanes.

use alloc::vec;
use alloc::vec::Vec;

use rand_chacha::rand_core::RngCore;

pub const WORD_BITS: usize = 64;

/// Fixed-length bit vector packed into 64-bit words, least significant bit
/// first. Bits past `len` are kept zero so word-level kernels can run over
/// whole words without masking.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitVec64 {
    words: Vec<u64>,
    len: usize,
}

pub const fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD_BITS)
}

impl BitVec64 {
    pub fn zeros(len: usize) -> Self {
        Self {
            words: vec![0; words_for(len)],
            len,
        }
    }

    /// Uniformly random bits, one `next_u64` draw per 64-bit word in word
    /// order, tail bits masked off.
    pub fn random(len: usize, rng: &mut impl RngCore) -> Self {
        let mut v = Self::zeros(len);
        for w in v.words.iter_mut() {
            *w = rng.next_u64();
        }
        v.mask_tail();
        v
    }

    pub fn from_fn(len: usize, mut f: impl FnMut(usize) -> bool) -> Self {
        let mut v = Self::zeros(len);
        for i in 0..len {
            v.set(i, f(i));
        }
        v
    }

    fn mask_tail(&mut self) {
        let used = self.len % WORD_BITS;
        if used != 0
            && let Some(last) = self.words.last_mut()
        {
            *last &= (1u64 << used) - 1;
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / WORD_BITS] >> (i % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i % WORD_BITS);
        if value {
            self.words[i / WORD_BITS] |= mask;
        } else {
            self.words[i / WORD_BITS] &= !mask;
        }
    }

    #[inline]
    pub fn toggle(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / WORD_BITS] ^= 1u64 << (i % WORD_BITS);
    }

    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn count_ones(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    /// Indices of set bits, ascending.
    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        OnesIter {
            words: &self.words,
            word_idx: 0,
            current: self.words.first().copied().unwrap_or(0),
        }
    }
}

struct OnesIter<'a> {
    words: &'a [u64],
    word_idx: usize,
    current: u64,
}

impl Iterator for OnesIter<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        while self.current == 0 {
            self.word_idx += 1;
            if self.word_idx >= self.words.len() {
                return None;
            }
            self.current = self.words[self.word_idx];
        }
        let bit = self.current.trailing_zeros() as usize;
        self.current &= self.current - 1;
        Some(self.word_idx * WORD_BITS + bit)
    }
}

/// Iterator over set bits of a raw word slice (used for bitplane rows).
pub fn iter_word_ones(words: &[u64]) -> impl Iterator<Item = usize> + '_ {
    OnesIter {
        words,
        word_idx: 0,
        current: words.first().copied().unwrap_or(0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_get_toggle() {
        let mut v = BitVec64::zeros(130);
        assert_eq!(v.len(), 130);
        assert!(!v.get(129));
        v.set(129, true);
        assert!(v.get(129));
        v.toggle(129);
        assert!(!v.get(129));
        v.toggle(0);
        assert!(v.get(0));
        assert_eq!(v.count_ones(), 1);
    }

    #[test]
    fn ones_iteration_matches_sets() {
        let idx = [0usize, 1, 63, 64, 65, 127, 128];
        let v = BitVec64::from_fn(129, |i| idx.contains(&i));
        let got: Vec<usize> = v.iter_ones().collect();
        assert_eq!(got, idx);
    }

    #[test]
    fn random_masks_tail() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let v = BitVec64::random(70, &mut rng);
        // Bits 70..128 must be zero.
        assert_eq!(v.words()[1] >> 6, 0);
    }
}
