//! Independent reference implementations used by the integration tests.
//! Nothing here goes through the bitmap, miner or characterizer code paths.

#![allow(dead_code)]

use std::collections::BTreeSet;

use dpchar::{Label, TransactionDataset};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random labeled dataset with both classes present.
pub fn random_dataset(seed: u64, max_items: usize, max_rows: usize) -> TransactionDataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = rng.random_range(1..=max_items);
    let n = rng.random_range(2..=max_rows);
    let density: f64 = rng.random_range(0.15..0.6);
    let names = (0..m).map(|i| format!("x{i}")).collect();
    let mut rows = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    for r in 0..n {
        rows.push((0..m).filter(|_| rng.random_bool(density)).collect());
        labels.push(match r {
            0 => Label::Positive,
            1 => Label::Negative,
            _ if rng.random_bool(0.5) => Label::Positive,
            _ => Label::Negative,
        });
    }
    TransactionDataset::new(names, rows, labels).expect("valid random dataset")
}

/// `(rows with all items and label +, rows with all items and label -)` by scan.
pub fn scan_counts(ds: &TransactionDataset, items: &[usize]) -> (usize, usize) {
    let mut pos = 0;
    let mut neg = 0;
    for (row, label) in ds.rows().iter().zip(ds.labels()) {
        if items.iter().all(|i| row.contains(i)) {
            match label {
                Label::Positive => pos += 1,
                Label::Negative => neg += 1,
            }
        }
    }
    (pos, neg)
}

fn plogp(p: f64) -> f64 {
    if p > 0.0 {
        p * p.ln()
    } else {
        0.0
    }
}

/// `I(X;C) / H(C)` from the 2x2 joint probability table, natural log.
pub fn oracle_mi_counts(cp: usize, cn: usize, n_pos: usize, n_neg: usize) -> f64 {
    let n = (n_pos + n_neg) as f64;
    let joint = [
        [cp as f64 / n, cn as f64 / n],
        [(n_pos - cp) as f64 / n, (n_neg - cn) as f64 / n],
    ];
    let px = [joint[0][0] + joint[0][1], joint[1][0] + joint[1][1]];
    let pc = [joint[0][0] + joint[1][0], joint[0][1] + joint[1][1]];
    let hc = -(plogp(pc[0]) + plogp(pc[1]));
    let mut i = 0.0;
    for x in 0..2 {
        for c in 0..2 {
            let p = joint[x][c];
            if p > 0.0 {
                i += p * (p / (px[x] * pc[c])).ln();
            }
        }
    }
    i / hc
}

pub fn oracle_mi(ds: &TransactionDataset, items: &[usize]) -> f64 {
    let (cp, cn) = scan_counts(ds, items);
    let (n_pos, n_neg) = ds.class_counts();
    oracle_mi_counts(cp, cn, n_pos, n_neg)
}

/// Every set partition of `elems`, built by inserting each element into an
/// existing block or a new one.
pub fn all_partitions(elems: &[usize]) -> Vec<Vec<Vec<usize>>> {
    let Some((&first, rest)) = elems.split_first() else {
        return vec![vec![]];
    };
    let mut out = Vec::new();
    for part in all_partitions(rest) {
        for b in 0..part.len() {
            let mut p = part.clone();
            p[b].insert(0, first);
            out.push(p);
        }
        let mut p = part;
        p.insert(0, vec![first]);
        out.push(p);
    }
    out
}

/// Non-empty proper subsets of `items`.
pub fn proper_subsets(items: &[usize]) -> Vec<Vec<usize>> {
    let k = items.len();
    (1..(1usize << k) - 1)
        .map(|m| (0..k).filter(|p| m >> p & 1 == 1).map(|p| items[p]).collect())
        .collect()
}

pub struct OracleStats {
    pub mi: f64,
    pub subset_max: f64,
    pub improvement: f64,
    pub incoherence: f64,
    pub best_aggregated: Option<f64>,
    pub synergy: Option<f64>,
}

pub fn oracle_stats(ds: &TransactionDataset, items: &[usize], max_synergy_size: usize) -> OracleStats {
    let mi = oracle_mi(ds, items);
    let subset_max = proper_subsets(items)
        .iter()
        .map(|s| oracle_mi(ds, s))
        .fold(0.0, f64::max);
    let improvement = mi - subset_max;
    let mut values = vec![mi];
    values.extend(items.iter().map(|&i| oracle_mi(ds, &[i])));
    let hi = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let (best_aggregated, synergy) = if items.len() >= 2 && items.len() <= max_synergy_size && improvement > dpchar::characterize::IMPROVEMENT_EPSILON {
        let best = all_partitions(items)
            .into_iter()
            .filter(|p| p.len() >= 2)
            .map(|p| p.iter().map(|b| oracle_mi(ds, b)).sum::<f64>())
            .fold(f64::NEG_INFINITY, f64::max);
        (Some(best), Some(mi - best))
    } else {
        (None, None)
    };
    OracleStats {
        mi,
        subset_max,
        improvement,
        incoherence: hi - lo,
        best_aggregated,
        synergy,
    }
}

/// Closed itemsets with at least `min_count` rows and at most `max_size` items,
/// as `(items, count_pos, count_neg)`, by testing every item subset.
pub fn oracle_closed(ds: &TransactionDataset, min_count: usize, max_size: usize) -> BTreeSet<(Vec<usize>, usize, usize)> {
    let m = ds.num_items();
    let mut out = BTreeSet::new();
    for mask in 1usize..1 << m {
        let items: Vec<usize> = (0..m).filter(|i| mask >> i & 1 == 1).collect();
        if items.len() > max_size {
            continue;
        }
        let (cp, cn) = scan_counts(ds, &items);
        if cp + cn < min_count {
            continue;
        }
        let closed = (0..m)
            .filter(|i| !items.contains(i))
            .all(|extra| {
                let mut sup = items.clone();
                sup.push(extra);
                let (p, n) = scan_counts(ds, &sup);
                p + n < cp + cn
            });
        if closed {
            out.insert((items, cp, cn));
        }
    }
    out
}
