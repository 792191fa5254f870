//! Word-packed bit vectors used for incidence rows and GF(2) codewords.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

/// Fixed-length bit vector packed into `u64` words.
///
/// The `Ord` instance ranks bit 0 first, which matches the textual `0`/`1`
/// row encoding used by the file formats: a row is "smaller" exactly when
/// its character string is lexicographically smaller.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct BitRow {
    len: usize,
    words: Vec<u64>,
}

impl BitRow {
    pub fn zero(len: usize) -> Self {
        BitRow {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn from_ones<I: IntoIterator<Item = usize>>(len: usize, ones: I) -> Self {
        let mut row = Self::zero(len);
        for i in ones {
            row.set(i, true);
        }
        row
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.len);
        let w = &mut self.words[i / 64];
        if value {
            *w |= 1 << (i % 64);
        } else {
            *w &= !(1 << (i % 64));
        }
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    #[inline]
    pub fn intersection_count(&self, other: &BitRow) -> usize {
        debug_assert_eq!(self.len, other.len);
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn xor_with(&mut self, other: &BitRow) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn or_with(&mut self, other: &BitRow) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    /// Index of the lowest set bit, if any.
    pub fn first_one(&self) -> Option<usize> {
        for (w, word) in self.words.iter().enumerate() {
            if *word != 0 {
                let i = w * 64 + word.trailing_zeros() as usize;
                return (i < self.len).then_some(i);
            }
        }
        None
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.get(i))
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }
}

impl Ord for BitRow {
    fn cmp(&self, other: &Self) -> Ordering {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter().zip(&other.words) {
            // reverse_bits makes bit 0 most significant, giving the
            // "bit 0 first" lexicographic order.
            match a.reverse_bits().cmp(&b.reverse_bits()) {
                Ordering::Equal => {}
                non_eq => return non_eq,
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for BitRow {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;

    #[test]
    fn ordering_matches_text_encoding() {
        // 0110000 < 1000000 as strings, and bit order must agree.
        let a = BitRow::from_ones(7, [1, 2]);
        let b = BitRow::from_ones(7, [0]);
        assert!(a < b);
        assert!(BitRow::zero(7) < a);
    }

    #[test]
    fn set_get_count() {
        let mut r = BitRow::zero(70);
        r.set(0, true);
        r.set(69, true);
        r.set(64, true);
        assert!(r.get(0) && r.get(64) && r.get(69));
        assert_eq!(r.count_ones(), 3);
        assert_eq!(r.ones().collect::<Vec<_>>(), alloc::vec![0, 64, 69]);
        r.set(64, false);
        assert_eq!(r.count_ones(), 2);
        assert_eq!(r.first_one(), Some(0));
    }

    #[test]
    fn intersection() {
        let a = BitRow::from_ones(70, [0, 10, 65, 69]);
        let b = BitRow::from_ones(70, [10, 65, 68]);
        assert_eq!(a.intersection_count(&b), 2);
    }
}
