//! Set partitions via restricted growth strings.
//!
//! A restricted growth string `a` of length `n` has `a[0] = 0` and
//! `a[i] <= 1 + max(a[..i])`; each one encodes a unique partition where
//! element `i` belongs to block `a[i]`. Strings are visited in lexicographic
//! order, so the all-zero string (the one-block partition) comes first and is
//! skipped.

use crate::error::{Error, Result};

/// Hard ceiling on partitioned set size. Bell(15) is about 1.4e9.
pub const PARTITION_SIZE_LIMIT: usize = 15;

/// A partition of `{0..n-1}`, one bitmask per block, blocks ordered by their
/// smallest element.
pub type Blocks = Vec<u32>;

/// Iterator over restricted growth strings of a fixed length.
pub struct RestrictedGrowth {
    a: Vec<u8>,
    // prefix_max[i] = max(a[0..=i])
    prefix_max: Vec<u8>,
    started: bool,
    done: bool,
}

impl RestrictedGrowth {
    pub fn new(n: usize) -> Self {
        RestrictedGrowth {
            a: vec![0; n],
            prefix_max: vec![0; n],
            started: false,
            done: n == 0,
        }
    }

    fn advance(&mut self) -> bool {
        let n = self.a.len();
        let mut i = n;
        while i > 1 {
            i -= 1;
            if self.a[i] <= self.prefix_max[i - 1] {
                self.a[i] += 1;
                self.prefix_max[i] = self.prefix_max[i - 1].max(self.a[i]);
                for k in i + 1..n {
                    self.a[k] = 0;
                    self.prefix_max[k] = self.prefix_max[i];
                }
                return true;
            }
        }
        false
    }
}

impl Iterator for RestrictedGrowth {
    type Item = Vec<u8>;

    fn next(&mut self) -> Option<Vec<u8>> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
        } else if !self.advance() {
            self.done = true;
            return None;
        }
        Some(self.a.clone())
    }
}

fn to_blocks(rgs: &[u8]) -> Blocks {
    let count = rgs.iter().copied().max().map_or(0, |m| m as usize + 1);
    let mut blocks = vec![0u32; count];
    for (i, &b) in rgs.iter().enumerate() {
        blocks[b as usize] |= 1 << i;
    }
    blocks
}

/// Every partition of an `n`-set into at least two blocks, `Bell(n) - 1` of them.
pub fn enumerate_partitions(n: usize, limit: usize) -> Result<Vec<Blocks>> {
    let limit = limit.min(PARTITION_SIZE_LIMIT);
    if n < 2 || n > limit {
        return Err(Error::SizeLimit { size: n, limit });
    }
    Ok(RestrictedGrowth::new(n).skip(1).map(|rgs| to_blocks(&rgs)).collect())
}

/// Bell numbers through the Bell triangle.
pub fn bell(n: usize) -> u64 {
    let mut row = vec![1u64];
    for _ in 0..n {
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(*row.last().unwrap());
        for &v in &row {
            let prev = *next.last().unwrap();
            next.push(prev + v);
        }
        row = next;
    }
    row[0]
}
