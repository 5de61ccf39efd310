//! TSV and JSON report emission.
//!
//! Floats are printed with six decimals; fields that were not computed are
//! left empty so golden files diff cleanly.

use std::collections::BTreeSet;
use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::characterize::Characterized;
use crate::dataset::TransactionDataset;
use crate::error::{Error, Result};
use crate::measures::{diffsup, mutual_information, SupportProfile};
use crate::miner::PatternSet;

pub const PATTERNS_FILE: &str = "patterns.tsv";
pub const SUMMARY_FILE: &str = "summary.json";
pub const CLOSED_FILE: &str = "closed.tsv";
pub const FDR_FILE: &str = "fdr.tsv";
pub const SCATTER_SUBSET_FILE: &str = "scatter_subset.tsv";
pub const SCATTER_AGGREGATED_FILE: &str = "scatter_aggregated.tsv";
pub const SCATTER_INCOHERENCE_FILE: &str = "scatter_incoherence.tsv";

pub const PATTERN_COLUMNS: [&str; 18] = [
    "items",
    "size",
    "supPos",
    "supNeg",
    "diffsup",
    "mi",
    "subsetMiMax",
    "improvement",
    "incoherence",
    "bestAggregatedMi",
    "synergy",
    "direction",
    "t1",
    "t2",
    "t3",
    "t4",
    "gray",
    "fdr",
];

fn float(v: f64) -> String {
    format!("{v:.6}")
}

fn opt_float(v: Option<f64>) -> String {
    v.map(float).unwrap_or_default()
}

fn flag(b: bool) -> &'static str {
    if b {
        "1"
    } else {
        "0"
    }
}

pub fn item_names(ds: &TransactionDataset, items: &[usize]) -> String {
    items
        .iter()
        .map(|&i| ds.item_name(i))
        .collect::<Vec<_>>()
        .join(";")
}

/// Writes `bytes` to `path` through a temporary file in the same directory.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| Error::io(dir, e))?;
    tmp.write_all(bytes).map_err(|e| Error::io(path, e))?;
    tmp.persist(path).map_err(|e| Error::io(path, e.error))?;
    Ok(())
}

pub fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

/// `patterns.tsv` body; `fdr[i]` belongs to `rows[i]`.
pub fn patterns_tsv(ds: &TransactionDataset, rows: &[Characterized], fdr: Option<&[f64]>) -> String {
    let mut out = PATTERN_COLUMNS.join("\t");
    out.push('\n');
    for (i, c) in rows.iter().enumerate() {
        let s = &c.stats;
        let profile = SupportProfile::of(ds, &s.pattern);
        let fields = [
            item_names(ds, &s.pattern.items),
            s.pattern.len().to_string(),
            s.pattern.count_pos.to_string(),
            s.pattern.count_neg.to_string(),
            float(diffsup(&profile)),
            float(s.mi),
            float(s.subset_mi_max),
            float(s.improvement),
            float(s.incoherence),
            opt_float(s.best_aggregated_mi),
            opt_float(s.synergy),
            s.direction.as_str().to_string(),
            flag(c.labels.t1).to_string(),
            flag(c.labels.t2).to_string(),
            flag(c.labels.t3).to_string(),
            flag(c.labels.t4).to_string(),
            flag(c.labels.gray).to_string(),
            opt_float(fdr.map(|f| f[i])),
        ];
        out.push_str(&fields.join("\t"));
        out.push('\n');
    }
    out
}

/// `closed.tsv`: every mined pattern with its counts and MI.
pub fn closed_tsv(ds: &TransactionDataset, set: &PatternSet) -> String {
    let mut out = String::from("items\tsize\tsupPos\tsupNeg\tmi\n");
    for p in set.iter() {
        let mi = mutual_information(&SupportProfile::of(ds, p));
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\n",
            item_names(ds, &p.items),
            p.len(),
            p.count_pos,
            p.count_neg,
            float(mi)
        ));
    }
    out
}

/// `fdr.tsv`: observed statistic and FDR of every tested pattern.
pub fn fdr_tsv(ds: &TransactionDataset, set: &PatternSet, observed: &[f64], fdr: &[f64]) -> String {
    let mut out = String::from("items\tsize\tstatistic\tfdr\n");
    for ((p, &o), &f) in set.iter().zip(observed).zip(fdr) {
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\n",
            item_names(ds, &p.items),
            p.len(),
            float(o),
            float(f)
        ));
    }
    out
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TypeCounts {
    pub t1: usize,
    pub t2: usize,
    pub t3: usize,
    pub t4: usize,
    pub gray: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct UniqueItems {
    pub t2: usize,
    pub t3: usize,
    pub t4: usize,
}

/// Dataset-level counts in the layout of a per-dataset results table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SummaryReport {
    pub dataset: String,
    pub n_pos: usize,
    pub n_neg: usize,
    pub items: usize,
    /// Fraction of set cells, ones / (rows * items).
    pub density: f64,
    pub closed_patterns: usize,
    pub discriminative: usize,
    pub types: TypeCounts,
    pub unique_items: UniqueItems,
    /// |T2 ∪ T3 ∪ T4| / |{MI > delta}|; 0 when nothing is discriminative.
    pub fraction_t2_t4: f64,
}

/// The label columns of one `patterns.tsv` row, as needed for the summary.
#[derive(Clone, Debug, PartialEq)]
pub struct RowFlags {
    pub items: Vec<String>,
    pub t1: bool,
    pub t2: bool,
    pub t3: bool,
    pub t4: bool,
    pub gray: bool,
}

impl RowFlags {
    pub fn from_characterized(ds: &TransactionDataset, c: &Characterized) -> Self {
        RowFlags {
            items: c.stats.pattern.items.iter().map(|&i| ds.item_name(i).to_string()).collect(),
            t1: c.labels.t1,
            t2: c.labels.t2,
            t3: c.labels.t3,
            t4: c.labels.t4,
            gray: c.labels.gray,
        }
    }
}

/// Counts over the discriminative rows.
pub fn tally(rows: &[RowFlags]) -> (TypeCounts, UniqueItems, f64) {
    let mut counts = TypeCounts::default();
    let mut union = [BTreeSet::new(), BTreeSet::new(), BTreeSet::new()];
    let mut interesting = 0;
    for r in rows {
        counts.t1 += r.t1 as usize;
        counts.t2 += r.t2 as usize;
        counts.t3 += r.t3 as usize;
        counts.t4 += r.t4 as usize;
        counts.gray += r.gray as usize;
        for (set, on) in union.iter_mut().zip([r.t2, r.t3, r.t4]) {
            if on {
                set.extend(r.items.iter().cloned());
            }
        }
        interesting += (r.t2 || r.t3 || r.t4) as usize;
    }
    let unique = UniqueItems {
        t2: union[0].len(),
        t3: union[1].len(),
        t4: union[2].len(),
    };
    let fraction = if rows.is_empty() {
        0.0
    } else {
        interesting as f64 / rows.len() as f64
    };
    (counts, unique, fraction)
}

pub fn summarize(
    name: &str,
    ds: &TransactionDataset,
    closed_patterns: usize,
    rows: &[Characterized],
) -> SummaryReport {
    let flags: Vec<RowFlags> = rows.iter().map(|c| RowFlags::from_characterized(ds, c)).collect();
    let (types, unique_items, fraction_t2_t4) = tally(&flags);
    let (n_pos, n_neg) = ds.class_counts();
    SummaryReport {
        dataset: name.to_string(),
        n_pos,
        n_neg,
        items: ds.num_items(),
        density: ds.density(),
        closed_patterns,
        discriminative: rows.len(),
        types,
        unique_items,
        fraction_t2_t4,
    }
}

pub fn summary_json(summary: &SummaryReport) -> String {
    let mut s = serde_json::to_string_pretty(summary).expect("summary serializes");
    s.push('\n');
    s
}

/// A `patterns.tsv` file read back by column name.
#[derive(Clone, Debug)]
pub struct PatternTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl PatternTable {
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header: Vec<String> = lines
            .next()
            .ok_or_else(|| Error::Parse {
                line: 1,
                message: "missing header".into(),
            })?
            .split('\t')
            .map(str::to_string)
            .collect();
        let mut rows = Vec::new();
        for (i, line) in lines.enumerate() {
            let row: Vec<String> = line.split('\t').map(str::to_string).collect();
            if row.len() != header.len() {
                return Err(Error::Parse {
                    line: i + 2,
                    message: format!("expected {} fields, found {}", header.len(), row.len()),
                });
            }
            rows.push(row);
        }
        Ok(PatternTable { header, rows })
    }

    pub fn column(&self, name: &str) -> Result<usize> {
        self.header
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::Parse {
                line: 1,
                message: format!("missing column {name:?}"),
            })
    }

    pub fn get<'a>(&'a self, row: &'a [String], name: &str) -> Result<&'a str> {
        Ok(&row[self.column(name)?])
    }

    pub fn row_flags(&self) -> Result<Vec<RowFlags>> {
        let bit = |row: &[String], name: &str| -> Result<bool> { Ok(self.get(row, name)? == "1") };
        self.rows
            .iter()
            .map(|row| {
                Ok(RowFlags {
                    items: self
                        .get(row, "items")?
                        .split(';')
                        .filter(|s| !s.is_empty())
                        .map(str::to_string)
                        .collect(),
                    t1: bit(row, "t1")?,
                    t2: bit(row, "t2")?,
                    t3: bit(row, "t3")?,
                    t4: bit(row, "t4")?,
                    gray: bit(row, "gray")?,
                })
            })
            .collect()
    }
}

/// Scatter files derived from a pattern table: `(file name, contents)`.
pub fn scatter_files(table: &PatternTable) -> Result<Vec<(&'static str, String)>> {
    let mut subset = String::from("bestSubsetMi\tmi\tsize\n");
    let mut aggregated = String::from("bestAggregatedMi\tmi\tsize\n");
    let mut incoherence = String::from("incoherence\tmi\tsize\n");
    for row in &table.rows {
        let mi = table.get(row, "mi")?;
        let size = table.get(row, "size")?;
        subset.push_str(&format!("{}\t{mi}\t{size}\n", table.get(row, "subsetMiMax")?));
        incoherence.push_str(&format!("{}\t{mi}\t{size}\n", table.get(row, "incoherence")?));
        let agg = table.get(row, "bestAggregatedMi")?;
        if !agg.is_empty() {
            aggregated.push_str(&format!("{agg}\t{mi}\t{size}\n"));
        }
    }
    Ok(vec![
        (SCATTER_SUBSET_FILE, subset),
        (SCATTER_AGGREGATED_FILE, aggregated),
        (SCATTER_INCOHERENCE_FILE, incoherence),
    ])
}
