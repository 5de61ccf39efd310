//! Label-permutation null distributions and FDR estimates.
//!
//! The mined pattern set is fixed; under each permutation only the class split
//! changes, so every pattern is re-scored against shuffled labels.

use rayon::prelude::*;

use crate::bitmap::Bitmap;
use crate::characterize::Characterizer;
use crate::dataset::{Label, Shuffle, TransactionDataset};
use crate::error::{Error, Result};
use crate::measures::{mutual_information, SupportProfile};
use crate::miner::PatternSet;

pub const DEFAULT_PERMUTATIONS: usize = 100;
pub const DEFAULT_SEED: u64 = 0;

/// Per-pattern statistic scored under each permutation.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Statistic {
    #[default]
    MutualInformation,
    /// Synergy where it is evaluated; `-inf` elsewhere.
    Synergy,
}

impl std::str::FromStr for Statistic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mi" => Ok(Statistic::MutualInformation),
            "synergy" => Ok(Statistic::Synergy),
            other => Err(Error::Config(format!("unknown statistic {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct NullDistribution {
    pub statistic: Statistic,
    /// `values[k][i]`: statistic of pattern `i` under permutation `k`.
    pub values: Vec<Vec<f64>>,
    pub shuffles: Vec<Shuffle>,
}

impl NullDistribution {
    pub fn permutations(&self) -> usize {
        self.values.len()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FdrResult {
    pub observed: Vec<f64>,
    /// Per-pattern FDR at its own observed statistic, before monotone adjustment.
    pub raw: Vec<f64>,
    pub fdr: Vec<f64>,
}

/// Seeds `base, base+1, ...` for `n_perm` permutations.
pub fn seeded_shuffles(n_perm: usize, base_seed: u64) -> Vec<Shuffle> {
    (0..n_perm as u64)
        .map(|k| Shuffle::Seeded(base_seed.wrapping_add(k)))
        .collect()
}

/// Statistic of every pattern on `ds` as labeled.
pub fn observed_statistics(
    ds: &TransactionDataset,
    patterns: &PatternSet,
    statistic: Statistic,
    characterizer: Option<&Characterizer>,
) -> Result<Vec<f64>> {
    match statistic {
        Statistic::MutualInformation => Ok(patterns
            .iter()
            .map(|p| mutual_information(&SupportProfile::of(ds, p)))
            .collect()),
        Statistic::Synergy => {
            let ch = characterizer
                .ok_or_else(|| Error::Config("synergy statistic needs characterization parameters".into()))?;
            patterns
                .patterns()
                .par_iter()
                .map(|p| {
                    let pat = ds.pattern(&p.items)?;
                    let c = ch.characterize(ds, &pat)?;
                    Ok(c.stats.synergy.unwrap_or(f64::NEG_INFINITY))
                })
                .collect()
        }
    }
}

/// Normalized-MI null over `n_perm` seeded label permutations.
pub fn build_null(
    ds: &TransactionDataset,
    patterns: &PatternSet,
    n_perm: usize,
    seed: u64,
) -> Result<NullDistribution> {
    if n_perm == 0 {
        return Err(Error::Config("at least one permutation is required".into()));
    }
    build_null_with(
        ds,
        patterns,
        &seeded_shuffles(n_perm, seed),
        Statistic::MutualInformation,
        None,
    )
}

/// Null distribution for an explicit list of shuffles.
pub fn build_null_with(
    ds: &TransactionDataset,
    patterns: &PatternSet,
    shuffles: &[Shuffle],
    statistic: Statistic,
    characterizer: Option<&Characterizer>,
) -> Result<NullDistribution> {
    if shuffles.is_empty() {
        return Err(Error::Config("at least one permutation is required".into()));
    }
    let values = match statistic {
        Statistic::MutualInformation => {
            let tidsets: Vec<Bitmap> = patterns
                .iter()
                .map(|p| ds.tidset(&p.items))
                .collect::<Result<_>>()?;
            let (n_pos, n_neg) = ds.class_counts();
            let n = ds.num_rows();
            shuffles
                .par_iter()
                .map(|&s| {
                    let labels = ds.permute_labels(s);
                    let pos = Bitmap::from_indices(
                        n,
                        labels
                            .iter()
                            .enumerate()
                            .filter(|(_, &l)| l == Label::Positive)
                            .map(|(r, _)| r),
                    );
                    tidsets
                        .iter()
                        .map(|tids| {
                            let cp = tids.and_count(&pos);
                            let cn = tids.count_ones() - cp;
                            mutual_information(&SupportProfile::new(cp, cn, n_pos, n_neg))
                        })
                        .collect()
                })
                .collect()
        }
        Statistic::Synergy => shuffles
            .iter()
            .map(|&s| {
                let relabeled = ds.with_labels(ds.permute_labels(s))?;
                observed_statistics(&relabeled, patterns, statistic, characterizer)
            })
            .collect::<Result<Vec<_>>>()?,
    };
    Ok(NullDistribution {
        statistic,
        values,
        shuffles: shuffles.to_vec(),
    })
}

/// Number of entries of an ascending slice that are `>= t`.
fn count_at_least(sorted: &[f64], t: f64) -> usize {
    sorted.len() - sorted.partition_point(|&v| v < t)
}

fn sorted(values: impl Iterator<Item = f64>) -> Vec<f64> {
    let mut v: Vec<f64> = values.collect();
    v.sort_by(f64::total_cmp);
    v
}

fn fdr_sorted(null_sorted: &[f64], perms: usize, observed_sorted: &[f64], t: f64) -> f64 {
    let declared = count_at_least(observed_sorted, t);
    if declared == 0 {
        return 0.0;
    }
    let expected_false = count_at_least(null_sorted, t) as f64 / perms as f64;
    (expected_false / declared as f64).clamp(0.0, 1.0)
}

/// `mean_k #{null_k >= t} / #{observed >= t}`, clipped to `[0, 1]`; `0` when
/// nothing is declared at `t`.
pub fn fdr_at(null: &NullDistribution, observed: &[f64], t: f64) -> f64 {
    let null_sorted = sorted(null.values.iter().flatten().copied());
    let observed_sorted = sorted(observed.iter().copied());
    fdr_sorted(&null_sorted, null.permutations(), &observed_sorted, t)
}

/// Per-pattern FDR, made monotone: a pattern never gets a larger FDR than one
/// with a smaller statistic.
pub fn estimate_fdr(null: &NullDistribution, observed: &[f64]) -> Result<FdrResult> {
    if let Some(bad) = null.values.iter().find(|v| v.len() != observed.len()) {
        return Err(Error::Invariant(format!(
            "null vector of length {} for {} patterns",
            bad.len(),
            observed.len()
        )));
    }
    let null_sorted = sorted(null.values.iter().flatten().copied());
    let observed_sorted = sorted(observed.iter().copied());
    let perms = null.permutations();
    let raw: Vec<f64> = observed
        .iter()
        .map(|&t| fdr_sorted(&null_sorted, perms, &observed_sorted, t))
        .collect();

    let mut order: Vec<usize> = (0..observed.len()).collect();
    order.sort_by(|&a, &b| observed[a].total_cmp(&observed[b]).then(a.cmp(&b)));
    let mut fdr = vec![0.0; observed.len()];
    let mut running = f64::INFINITY;
    for &i in &order {
        running = running.min(raw[i]);
        fdr[i] = running;
    }
    Ok(FdrResult {
        observed: observed.to_vec(),
        raw,
        fdr,
    })
}

/// Indices of patterns with FDR strictly below `q`, in pattern order.
pub fn significant_patterns(result: &FdrResult, q: f64) -> Vec<usize> {
    result
        .fdr
        .iter()
        .enumerate()
        .filter(|(_, &f)| f < q)
        .map(|(i, _)| i)
        .collect()
}
