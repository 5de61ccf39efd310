//! Closed frequent itemset enumeration.
//!
//! The enumerator walks the projected row sets depth first. Each node holds a
//! closed itemset and its rows; a child is formed by adding one item of higher
//! rank, taking the closure of the shrunken row set, and keeping it only if the
//! closure adds no lower-ranked item (prefix-preserving closure extension).
//! Every closed frequent itemset is produced exactly once without a global
//! duplicate check.

use rayon::prelude::*;

use crate::bitmap::Bitmap;
use crate::dataset::{Pattern, TransactionDataset};
use crate::error::{Error, Result};
use crate::measures::{mutual_information, SupportProfile};

pub const DEFAULT_MINSUP: f64 = 0.1;
pub const DEFAULT_MAX_PATTERN_SIZE: usize = 8;
pub const DEFAULT_DELTA: f64 = 0.1;

/// Largest item universe the exhaustive oracle accepts.
pub const BRUTE_FORCE_ITEM_LIMIT: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MinerConfig {
    /// Minimum support relative to all rows.
    pub minsup: f64,
    pub max_pattern_size: usize,
    /// MI threshold for the discriminative filter.
    pub delta: f64,
}

impl Default for MinerConfig {
    fn default() -> Self {
        MinerConfig {
            minsup: DEFAULT_MINSUP,
            max_pattern_size: DEFAULT_MAX_PATTERN_SIZE,
            delta: DEFAULT_DELTA,
        }
    }
}

impl MinerConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.minsup > 0.0 && self.minsup <= 1.0) {
            return Err(Error::Config(format!("minsup {} not in (0, 1]", self.minsup)));
        }
        if self.max_pattern_size < 1 {
            return Err(Error::Config("max pattern size must be at least 1".into()));
        }
        if !(self.delta >= 0.0 && self.delta.is_finite()) {
            return Err(Error::Config(format!("delta {} must be non-negative", self.delta)));
        }
        Ok(())
    }

    /// Absolute row count `ceil(minsup * n)`, at least 1.
    pub fn min_count(&self, n: usize) -> usize {
        // guard against 0.3 * 10 = 3.0000000000000004
        let raw = self.minsup * n as f64;
        let rounded = raw.round();
        let c = if (raw - rounded).abs() < 1e-9 {
            rounded
        } else {
            raw.ceil()
        };
        (c as usize).max(1)
    }
}

/// Patterns in canonical order: ascending size, then lexicographic items.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PatternSet {
    patterns: Vec<Pattern>,
    closed: Vec<bool>,
}

impl PatternSet {
    /// Sorts into canonical order and drops duplicates.
    pub fn new(patterns: Vec<Pattern>, closed: bool) -> Self {
        let mut patterns = patterns;
        patterns.sort_by(canonical_cmp);
        patterns.dedup_by(|a, b| a.items == b.items);
        let closed = vec![closed; patterns.len()];
        PatternSet { patterns, closed }
    }

    pub fn patterns(&self) -> &[Pattern] {
        &self.patterns
    }

    pub fn is_closed(&self, i: usize) -> bool {
        self.closed[i]
    }

    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Pattern> {
        self.patterns.iter()
    }

    pub fn into_patterns(self) -> Vec<Pattern> {
        self.patterns
    }

    /// Keeps the entries whose index passes `keep`, preserving order.
    pub fn retain_indices(&self, mut keep: impl FnMut(usize, &Pattern) -> bool) -> PatternSet {
        let mut out = PatternSet::default();
        for (i, p) in self.patterns.iter().enumerate() {
            if keep(i, p) {
                out.patterns.push(p.clone());
                out.closed.push(self.closed[i]);
            }
        }
        out
    }
}

pub fn canonical_cmp(a: &Pattern, b: &Pattern) -> std::cmp::Ordering {
    a.items
        .len()
        .cmp(&b.items.len())
        .then_with(|| a.items.cmp(&b.items))
}

struct Miner<'a> {
    ds: &'a TransactionDataset,
    /// Frequent items, best rank first.
    order: Vec<usize>,
    min_count: usize,
    max_size: usize,
}

impl Miner<'_> {
    fn closure(&self, tids: &Bitmap) -> Vec<bool> {
        self.order
            .iter()
            .map(|&item| tids.is_subset_of(self.ds.presence(item)))
            .collect()
    }

    fn to_pattern(&self, members: &[bool], tids: &Bitmap) -> Pattern {
        let mut items: Vec<usize> = members
            .iter()
            .enumerate()
            .filter(|(_, &m)| m)
            .map(|(r, _)| self.order[r])
            .collect();
        items.sort_unstable();
        let (count_pos, count_neg) = self.ds.split_counts(tids);
        Pattern {
            items,
            count_pos,
            count_neg,
        }
    }

    /// Child of `(members, tids)` obtained by extending with rank `ext`, if it
    /// passes the support and prefix-preservation checks.
    fn child(&self, members: &[bool], tids: &Bitmap, ext: usize) -> Option<(Vec<bool>, Bitmap)> {
        if members[ext] {
            return None;
        }
        let next = tids & self.ds.presence(self.order[ext]);
        if next.count_ones() < self.min_count {
            return None;
        }
        let closed = self.closure(&next);
        if closed[..ext] != members[..ext] {
            return None;
        }
        Some((closed, next))
    }

    fn expand(&self, members: &[bool], tids: &Bitmap, core: usize, out: &mut Vec<Pattern>) {
        for ext in core + 1..self.order.len() {
            if let Some((closed, next)) = self.child(members, tids, ext) {
                let size = closed.iter().filter(|&&m| m).count();
                if size > self.max_size {
                    continue;
                }
                out.push(self.to_pattern(&closed, &next));
                self.expand(&closed, &next, ext, out);
            }
        }
    }
}

/// All closed itemsets with support at least `ceil(minsup * |D|)` and at most
/// `max_pattern_size` items, in canonical order.
pub fn mine_closed(ds: &TransactionDataset, cfg: &MinerConfig) -> Result<PatternSet> {
    cfg.validate()?;
    let n = ds.num_rows();
    let min_count = cfg.min_count(n);
    if n < min_count {
        return Ok(PatternSet::default());
    }
    let mut order: Vec<(usize, usize)> = (0..ds.num_items())
        .map(|i| (i, ds.presence(i).count_ones()))
        .filter(|&(_, s)| s >= min_count)
        .collect();
    order.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
    let miner = Miner {
        ds,
        order: order.into_iter().map(|(i, _)| i).collect(),
        min_count,
        max_size: cfg.max_pattern_size,
    };

    let all_rows = Bitmap::ones(n);
    let root = miner.closure(&all_rows);
    let root_size = root.iter().filter(|&&m| m).count();
    if root_size > miner.max_size {
        return Ok(PatternSet::default());
    }
    let mut patterns = Vec::new();
    if root_size > 0 {
        patterns.push(miner.to_pattern(&root, &all_rows));
    }
    let branches: Vec<Vec<Pattern>> = (0..miner.order.len())
        .into_par_iter()
        .map(|ext| {
            let mut out = Vec::new();
            if let Some((closed, next)) = miner.child(&root, &all_rows, ext) {
                if closed.iter().filter(|&&m| m).count() <= miner.max_size {
                    out.push(miner.to_pattern(&closed, &next));
                    miner.expand(&closed, &next, ext, &mut out);
                }
            }
            out
        })
        .collect();
    patterns.extend(branches.into_iter().flatten());
    Ok(PatternSet::new(patterns, true))
}

/// Exhaustive subset enumeration with the same contract as [`mine_closed`].
///
/// Support is counted by scanning rows, not through the item bitmaps.
pub fn brute_force_closed(ds: &TransactionDataset, cfg: &MinerConfig) -> Result<PatternSet> {
    cfg.validate()?;
    let m = ds.num_items();
    if m > BRUTE_FORCE_ITEM_LIMIT {
        return Err(Error::SizeLimit {
            size: m,
            limit: BRUTE_FORCE_ITEM_LIMIT,
        });
    }
    let min_count = cfg.min_count(ds.num_rows());
    let row_masks: Vec<(u32, bool)> = ds
        .rows()
        .iter()
        .zip(ds.labels())
        .map(|(row, &l)| {
            (
                row.iter().fold(0u32, |acc, &i| acc | 1 << i),
                l == crate::dataset::Label::Positive,
            )
        })
        .collect();
    let full = 1usize << m;
    let mut counts = vec![(0usize, 0usize); full];
    for (mask, slot) in counts.iter_mut().enumerate() {
        let mask = mask as u32;
        for &(row, pos) in &row_masks {
            if row & mask == mask {
                if pos {
                    slot.0 += 1;
                } else {
                    slot.1 += 1;
                }
            }
        }
    }
    let total = |c: (usize, usize)| c.0 + c.1;
    let mut patterns = Vec::new();
    for mask in 1..full {
        let size = mask.count_ones() as usize;
        if size > cfg.max_pattern_size || total(counts[mask]) < min_count {
            continue;
        }
        let closed = (0..m)
            .filter(|i| mask >> i & 1 == 0)
            .all(|i| total(counts[mask | 1 << i]) != total(counts[mask]));
        if closed {
            patterns.push(Pattern {
                items: (0..m).filter(|i| mask >> i & 1 == 1).collect(),
                count_pos: counts[mask].0,
                count_neg: counts[mask].1,
            });
        }
    }
    Ok(PatternSet::new(patterns, true))
}

/// Keeps patterns whose normalized MI strictly exceeds `delta`.
pub fn filter_discriminative(patterns: &PatternSet, ds: &TransactionDataset, delta: f64) -> PatternSet {
    patterns.retain_indices(|_, p| mutual_information(&SupportProfile::of(ds, p)) > delta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{Format, Label};

    fn cfg(minsup: f64, max: usize) -> MinerConfig {
        MinerConfig {
            minsup,
            max_pattern_size: max,
            delta: 0.1,
        }
    }

    fn names(ds: &TransactionDataset, set: &PatternSet) -> Vec<String> {
        set.iter()
            .map(|p| {
                p.items
                    .iter()
                    .map(|&i| ds.item_name(i))
                    .collect::<Vec<_>>()
                    .join("")
            })
            .collect()
    }

    #[test]
    fn min_count_rounding() {
        assert_eq!(cfg(0.3, 4).min_count(10), 3);
        assert_eq!(cfg(0.1, 4).min_count(20), 2);
        assert_eq!(cfg(0.15, 4).min_count(20), 3);
        assert_eq!(cfg(0.01, 4).min_count(20), 1);
        assert_eq!(cfg(1.0, 4).min_count(7), 7);
    }

    #[test]
    fn invalid_config() {
        assert!(cfg(0.0, 4).validate().is_err());
        assert!(cfg(1.5, 4).validate().is_err());
        assert!(cfg(0.5, 0).validate().is_err());
    }

    #[test]
    fn single_transaction_yields_itself() {
        // two classes need two rows; both hold the same transaction
        let ds = TransactionDataset::new(
            vec!["a".into(), "b".into()],
            vec![vec![0, 1], vec![0, 1]],
            vec![Label::Positive, Label::Negative],
        )
        .unwrap();
        let set = mine_closed(&ds, &cfg(1.0, 8)).unwrap();
        assert_eq!(names(&ds, &set), vec!["ab"]);
        assert_eq!(set, brute_force_closed(&ds, &cfg(1.0, 8)).unwrap());
    }

    #[test]
    fn unsatisfiable_support_is_empty() {
        let ds = TransactionDataset::parse("+\ta b\n-\tb c\n+\ta c\n", Format::TransactionList).unwrap();
        let set = mine_closed(&ds, &cfg(1.0, 8)).unwrap();
        assert!(set.is_empty());
        assert!(brute_force_closed(&ds, &cfg(1.0, 8)).unwrap().is_empty());
    }

    #[test]
    fn three_item_hand_enumeration() {
        // rows: ab+, abc+, c-, bc-
        let ds = TransactionDataset::parse("+\ta b\n+\ta b c\n-\tc\n-\tb c\n", Format::TransactionList)
            .unwrap();
        // closed: b(3), c(3), ab(2), bc(2), abc(1); a is not closed (a -> ab)
        let expected = vec!["b", "c", "ab", "bc", "abc"];
        let bf = brute_force_closed(&ds, &cfg(0.01, 8)).unwrap();
        assert_eq!(names(&ds, &bf), expected);
        assert_eq!(mine_closed(&ds, &cfg(0.01, 8)).unwrap(), bf);
    }

    #[test]
    fn size_cap_applies_after_closure() {
        let ds = TransactionDataset::parse("+\ta b c\n-\ta b c\n+\ta\n", Format::TransactionList).unwrap();
        let set = mine_closed(&ds, &cfg(0.01, 2)).unwrap();
        assert_eq!(names(&ds, &set), vec!["a"]);
        assert_eq!(set, brute_force_closed(&ds, &cfg(0.01, 2)).unwrap());
    }

    #[test]
    fn brute_force_guard() {
        let names: Vec<String> = (0..21).map(|i| format!("x{i}")).collect();
        let ds = TransactionDataset::new(
            names,
            vec![vec![0], vec![1]],
            vec![Label::Positive, Label::Negative],
        )
        .unwrap();
        assert!(matches!(
            brute_force_closed(&ds, &cfg(0.5, 3)),
            Err(Error::SizeLimit { .. })
        ));
    }

    #[test]
    fn filter_is_strict() {
        let ds = TransactionDataset::parse("+\ta\n-\ta\n+\tb\n-\tb\n", Format::TransactionList).unwrap();
        let set = mine_closed(&ds, &cfg(0.25, 8)).unwrap();
        assert_eq!(set.len(), 2);
        assert!(filter_discriminative(&set, &ds, 0.0).is_empty());
    }

    #[test]
    fn perfect_discriminator_survives_delta_one_boundary() {
        let ds = TransactionDataset::parse("+\ta\n+\ta\n-\tb\n-\tb\n", Format::TransactionList).unwrap();
        let set = mine_closed(&ds, &cfg(0.25, 8)).unwrap();
        // MI == 1 is not > 1
        assert!(filter_discriminative(&set, &ds, 1.0).is_empty());
        assert_eq!(filter_discriminative(&set, &ds, 0.99).len(), 2);
    }
}
