//! Fixed-width row bitmaps backed by `u64` blocks.

use std::ops::{BitAnd, BitAndAssign};

const BLOCK_BITS: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Bitmap {
    blocks: Vec<u64>,
    len: usize,
}

impl Bitmap {
    pub fn zeros(len: usize) -> Self {
        Bitmap {
            blocks: vec![0; len.div_ceil(BLOCK_BITS)],
            len,
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut bm = Bitmap {
            blocks: vec![u64::MAX; len.div_ceil(BLOCK_BITS)],
            len,
        };
        bm.clear_tail();
        bm
    }

    pub fn from_indices(len: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut bm = Bitmap::zeros(len);
        for i in indices {
            bm.set(i);
        }
        bm
    }

    fn clear_tail(&mut self) {
        let rem = self.len % BLOCK_BITS;
        if rem != 0 {
            if let Some(last) = self.blocks.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    /// Number of addressable bits.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn set(&mut self, i: usize) {
        assert!(i < self.len, "bit {i} out of range {}", self.len);
        self.blocks[i / BLOCK_BITS] |= 1 << (i % BLOCK_BITS);
    }

    pub fn get(&self, i: usize) -> bool {
        i < self.len && self.blocks[i / BLOCK_BITS] >> (i % BLOCK_BITS) & 1 == 1
    }

    pub fn count_ones(&self) -> usize {
        self.blocks.iter().map(|b| b.count_ones() as usize).sum()
    }

    /// Popcount of `self & other` without allocating.
    pub fn and_count(&self, other: &Bitmap) -> usize {
        debug_assert_eq!(self.len, other.len);
        self.blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    /// True when every bit set in `self` is also set in `other`.
    pub fn is_subset_of(&self, other: &Bitmap) -> bool {
        self.blocks
            .iter()
            .zip(&other.blocks)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.blocks.iter().enumerate().flat_map(|(bi, &block)| {
            let mut word = block;
            std::iter::from_fn(move || {
                if word == 0 {
                    return None;
                }
                let tz = word.trailing_zeros() as usize;
                word &= word - 1;
                Some(bi * BLOCK_BITS + tz)
            })
        })
    }
}

impl BitAnd for &Bitmap {
    type Output = Bitmap;

    fn bitand(self, rhs: &Bitmap) -> Bitmap {
        let mut out = self.clone();
        out &= rhs;
        out
    }
}

impl BitAndAssign<&Bitmap> for Bitmap {
    fn bitand_assign(&mut self, rhs: &Bitmap) {
        debug_assert_eq!(self.len, rhs.len);
        for (a, b) in self.blocks.iter_mut().zip(&rhs.blocks) {
            *a &= b;
        }
    }
}
