//! Interaction measures and the four pattern types.
//!
//! For a pattern of `k` items every subset is addressed by a `k`-bit mask over
//! the pattern's positions. The MI of each subset is computed once and reused
//! by improvement, incoherence, the driver/passenger search and the partition
//! maximization.

pub mod partitions;

use std::collections::BTreeMap;
use std::sync::OnceLock;

use rayon::prelude::*;

use crate::bitmap::Bitmap;
use crate::dataset::{Pattern, TransactionDataset};
use crate::error::{Error, Result};
use crate::measures::{direction, mutual_information, Direction, SupportProfile};
use crate::miner::PatternSet;

pub use partitions::{bell, enumerate_partitions, Blocks, RestrictedGrowth};

pub const DEFAULT_J: f64 = 0.05;
pub const DEFAULT_EPSILON: f64 = 0.05;
pub const DEFAULT_MAX_SYNERGY_SIZE: usize = 10;

/// Largest pattern whose full subset lattice is enumerated.
pub const SUBSET_SIZE_LIMIT: usize = 20;
/// Improvements at or below this are round-off and count as zero.
pub const IMPROVEMENT_EPSILON: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CharParams {
    pub delta: f64,
    /// Interaction threshold shared by all type definitions.
    pub j: f64,
    /// Passenger threshold.
    pub epsilon: f64,
    pub max_synergy_size: usize,
}

impl Default for CharParams {
    fn default() -> Self {
        CharParams {
            delta: crate::miner::DEFAULT_DELTA,
            j: DEFAULT_J,
            epsilon: DEFAULT_EPSILON,
            max_synergy_size: DEFAULT_MAX_SYNERGY_SIZE,
        }
    }
}

impl CharParams {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("delta", self.delta), ("j", self.j), ("epsilon", self.epsilon)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Config(format!("{name} must be positive, got {v}")));
            }
        }
        if self.max_synergy_size < 2 || self.max_synergy_size > partitions::PARTITION_SIZE_LIMIT {
            return Err(Error::Config(format!(
                "max synergy size must be in 2..={}",
                partitions::PARTITION_SIZE_LIMIT
            )));
        }
        Ok(())
    }
}

/// MI of every subset of a pattern, indexed by position mask.
#[derive(Clone, Debug)]
pub struct SubsetMis {
    items: Vec<usize>,
    mi: Vec<f64>,
    profiles: Vec<SupportProfile>,
}

impl SubsetMis {
    /// A table from precomputed MI values, `mi[mask]` for every position mask
    /// (entry 0 is ignored). Carries no class counts.
    pub fn from_values(items: Vec<usize>, mi: Vec<f64>) -> Result<Self> {
        let k = items.len();
        if k == 0 || k > SUBSET_SIZE_LIMIT {
            return Err(Error::SizeLimit {
                size: k,
                limit: SUBSET_SIZE_LIMIT,
            });
        }
        if mi.len() != 1 << k {
            return Err(Error::Config(format!("{} MI values for {k} items", mi.len())));
        }
        Ok(SubsetMis {
            items,
            mi,
            profiles: Vec::new(),
        })
    }

    pub fn items(&self) -> &[usize] {
        &self.items
    }

    pub fn size(&self) -> usize {
        self.items.len()
    }

    pub fn full_mask(&self) -> usize {
        (1 << self.items.len()) - 1
    }

    pub fn mi(&self, mask: usize) -> f64 {
        self.mi[mask]
    }

    /// Class counts of a subset; `None` for tables built from bare MI values.
    pub fn profile(&self, mask: usize) -> Option<&SupportProfile> {
        self.profiles.get(mask)
    }

    pub fn pattern_mi(&self) -> f64 {
        self.mi[self.full_mask()]
    }

    pub fn item_mi(&self, position: usize) -> f64 {
        self.mi[1 << position]
    }

    /// Proper non-empty subsets: `2^k - 2` entries.
    pub fn proper_subsets(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        (1..self.full_mask()).map(|m| (m, self.mi[m]))
    }

    pub fn items_of(&self, mask: usize) -> Vec<usize> {
        (0..self.items.len())
            .filter(|p| mask >> p & 1 == 1)
            .map(|p| self.items[p])
            .collect()
    }

    /// Proper subsets keyed by their item indices.
    pub fn to_map(&self) -> BTreeMap<Vec<usize>, f64> {
        self.proper_subsets().map(|(m, v)| (self.items_of(m), v)).collect()
    }
}

/// MI of every subset of `pattern`; errors when `2^|pattern|` exceeds the guard.
pub fn all_subset_mis(ds: &TransactionDataset, pattern: &Pattern, limit: usize) -> Result<SubsetMis> {
    let k = pattern.items.len();
    let limit = limit.min(SUBSET_SIZE_LIMIT);
    if k == 0 || k > limit {
        return Err(Error::SizeLimit { size: k, limit });
    }
    if let Some(&index) = pattern.items.iter().find(|&&i| i >= ds.num_items()) {
        return Err(Error::ItemOutOfRange {
            index,
            num_items: ds.num_items(),
        });
    }
    let (n_pos, n_neg) = ds.class_counts();
    let mut profiles = vec![SupportProfile::new(n_pos, n_neg, n_pos, n_neg); 1 << k];

    fn walk(
        ds: &TransactionDataset,
        items: &[usize],
        start: usize,
        mask: usize,
        tids: &Bitmap,
        out: &mut [SupportProfile],
    ) {
        let (n_pos, n_neg) = ds.class_counts();
        for p in start..items.len() {
            let next = tids & ds.presence(items[p]);
            let m = mask | 1 << p;
            let (cp, cn) = ds.split_counts(&next);
            out[m] = SupportProfile::new(cp, cn, n_pos, n_neg);
            walk(ds, items, p + 1, m, &next, out);
        }
    }
    walk(ds, &pattern.items, 0, 0, &Bitmap::ones(ds.num_rows()), &mut profiles);

    let mi = profiles.iter().map(mutual_information).collect();
    Ok(SubsetMis {
        items: pattern.items.clone(),
        mi,
        profiles,
    })
}

/// Largest MI among proper non-empty subsets; `0` for a singleton.
pub fn subset_mi_max(subs: &SubsetMis) -> f64 {
    subs.proper_subsets().map(|(_, v)| v).fold(0.0, f64::max)
}

/// `MI(pattern) - max MI over proper subsets`.
pub fn improvement(subs: &SubsetMis) -> f64 {
    subs.pattern_mi() - subset_mi_max(subs)
}

/// Range of the pattern MI together with every item MI.
pub fn incoherence(subs: &SubsetMis) -> f64 {
    let values = std::iter::once(subs.pattern_mi()).chain((0..subs.size()).map(|p| subs.item_mi(p)));
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
        (lo.min(v), hi.max(v))
    });
    hi - lo
}

/// Maximum over the given partitions of the summed block MIs, with the index
/// of the first maximizing partition.
pub fn best_aggregated_mi(subs: &SubsetMis, partitions: &[Blocks]) -> Option<(f64, usize)> {
    let mut best: Option<(f64, usize)> = None;
    for (idx, blocks) in partitions.iter().enumerate() {
        let total = blocks.iter().fold(0.0, |acc, &b| acc + subs.mi(b as usize));
        if best.is_none_or(|(v, _)| total > v) {
            best = Some((total, idx));
        }
    }
    best
}

/// `MI(pattern) - best aggregated MI`.
pub fn synergy(subs: &SubsetMis, partitions: &[Blocks]) -> Option<f64> {
    best_aggregated_mi(subs, partitions).map(|(v, _)| subs.pattern_mi() - v)
}

/// All computed measures for one pattern.
#[derive(Clone, Debug, PartialEq)]
pub struct PatternStats {
    pub pattern: Pattern,
    pub mi: f64,
    pub item_mis: Vec<f64>,
    pub subset_mi_max: f64,
    pub improvement: f64,
    pub incoherence: f64,
    pub best_aggregated_mi: Option<f64>,
    /// Blocks of the maximizing partition, as item indices.
    pub best_partition: Option<Vec<Vec<usize>>>,
    pub synergy: Option<f64>,
    /// The pattern exceeded the synergy size cap, so synergy was not evaluated.
    pub synergy_skipped: bool,
    pub direction: Direction,
    pub item_directions: Vec<Direction>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct TypeLabels {
    pub t1: bool,
    pub t2: bool,
    pub t3: bool,
    pub t4: bool,
    /// Discriminative, yet none of the four types apply.
    pub gray: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Characterized {
    pub stats: PatternStats,
    pub labels: TypeLabels,
}

/// Evaluates patterns against fixed parameters. Partition tables are built
/// on first use per size and shared across threads.
pub struct Characterizer {
    params: CharParams,
    partitions: Vec<OnceLock<Vec<Blocks>>>,
}

impl Characterizer {
    pub fn new(params: CharParams) -> Result<Self> {
        params.validate()?;
        Ok(Characterizer {
            params,
            partitions: (0..=params.max_synergy_size).map(|_| OnceLock::new()).collect(),
        })
    }

    pub fn params(&self) -> &CharParams {
        &self.params
    }

    /// Non-trivial partitions of a `n`-set, cached.
    pub fn partitions(&self, n: usize) -> Result<&[Blocks]> {
        if n < 2 || n > self.params.max_synergy_size {
            return Err(Error::SizeLimit {
                size: n,
                limit: self.params.max_synergy_size,
            });
        }
        Ok(self.partitions[n].get_or_init(|| {
            enumerate_partitions(n, self.params.max_synergy_size).expect("size checked above")
        }))
    }

    pub fn stats(&self, subs: &SubsetMis, pattern: &Pattern) -> PatternStats {
        let k = subs.size();
        let mi = subs.pattern_mi();
        let subset_max = subset_mi_max(subs);
        let improvement = mi - subset_max;
        let mut best_aggregated = None;
        let mut best_partition = None;
        let mut syn = None;
        let synergy_skipped = k > self.params.max_synergy_size;
        if k >= 2 && !synergy_skipped && improvement > IMPROVEMENT_EPSILON {
            let parts = self.partitions(k).expect("size within cap");
            if let Some((value, idx)) = best_aggregated_mi(subs, parts) {
                best_aggregated = Some(value);
                best_partition = Some(parts[idx].iter().map(|&b| subs.items_of(b as usize)).collect());
                syn = Some(mi - value);
            }
        }
        PatternStats {
            pattern: pattern.clone(),
            mi,
            item_mis: (0..k).map(|p| subs.item_mi(p)).collect(),
            subset_mi_max: subset_max,
            improvement,
            incoherence: incoherence(subs),
            best_aggregated_mi: best_aggregated,
            best_partition,
            synergy: syn,
            synergy_skipped,
            direction: subs.profile(subs.full_mask()).map_or(Direction::Tied, direction),
            item_directions: (0..k)
                .map(|p| subs.profile(1 << p).map_or(Direction::Tied, direction))
                .collect(),
        }
    }

    /// Type labels of a pattern of two or more items; singletons carry no
    /// interaction and receive no type.
    pub fn classify(&self, subs: &SubsetMis, stats: &PatternStats) -> TypeLabels {
        let CharParams { delta, j, epsilon, .. } = self.params;
        let discriminative = stats.mi > delta;
        let multi = subs.size() >= 2;
        let mut labels = TypeLabels::default();
        if discriminative && multi {
            labels.t1 = has_driver_and_passenger(subs, j, epsilon);
            labels.t2 = stats.incoherence < j
                && stats.direction != Direction::Tied
                && stats.item_directions.iter().all(|&d| d == stats.direction);
            labels.t3 = stats.improvement > j;
            labels.t4 = stats.synergy.is_some_and(|s| s > j);
        }
        labels.gray = discriminative && !(labels.t1 || labels.t2 || labels.t3 || labels.t4);
        labels
    }

    pub fn characterize(&self, ds: &TransactionDataset, pattern: &Pattern) -> Result<Characterized> {
        let subs = all_subset_mis(ds, pattern, SUBSET_SIZE_LIMIT)?;
        let stats = self.stats(&subs, pattern);
        let labels = self.classify(&subs, &stats);
        Ok(Characterized { stats, labels })
    }

    /// Characterizes every pattern; output order follows the input.
    pub fn characterize_all(&self, ds: &TransactionDataset, set: &PatternSet) -> Result<Vec<Characterized>> {
        set.patterns()
            .par_iter()
            .map(|p| self.characterize(ds, p))
            .collect()
    }
}

/// Some proper subset is within `j` of the pattern MI while a non-empty part
/// of its complement stays below `epsilon`.
fn has_driver_and_passenger(subs: &SubsetMis, j: f64, epsilon: f64) -> bool {
    let full = subs.full_mask();
    let mi = subs.pattern_mi();
    // min_sub[m] = min MI over non-empty submasks of m
    let mut min_sub = vec![f64::INFINITY; full + 1];
    for m in 1..=full {
        let mut best = subs.mi(m);
        let mut rest = m;
        while rest != 0 {
            let bit = rest & rest.wrapping_neg();
            rest ^= bit;
            best = best.min(min_sub[m ^ bit]);
        }
        min_sub[m] = best;
    }
    (1..full).any(|driver| (mi - subs.mi(driver)).abs() < j && min_sub[full ^ driver] < epsilon)
}
