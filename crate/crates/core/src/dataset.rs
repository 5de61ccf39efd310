//! Labeled binary transaction data with per-item presence bitmaps.

use std::collections::HashMap;
use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bitmap::Bitmap;
use crate::error::{Error, Result};

/// Two-valued class tag.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Positive,
    Negative,
}

impl Label {
    pub fn token(self) -> &'static str {
        match self {
            Label::Positive => "+",
            Label::Negative => "-",
        }
    }

    fn parse(token: &str, line: usize) -> Result<Self> {
        match token {
            "+" => Ok(Label::Positive),
            "-" => Ok(Label::Negative),
            other => Err(Error::UnknownLabel {
                line,
                token: other.to_string(),
            }),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ItemId {
    pub index: usize,
    pub name: String,
}

/// Input file layout.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    /// `LABEL<TAB>item item ...`, one transaction per line.
    TransactionList,
    /// Header of item names plus a trailing `class` column; 0/1 cells.
    MatrixCsv,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "transaction-list" | "tsv" => Ok(Format::TransactionList),
            "matrix-csv" | "csv" => Ok(Format::MatrixCsv),
            other => Err(Error::Config(format!("unknown input format {other:?}"))),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::TransactionList => "transaction-list",
            Format::MatrixCsv => "matrix-csv",
        })
    }
}

/// How to reorder the class labels.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shuffle {
    /// Leave labels untouched.
    Identity,
    /// Uniform random permutation driven by the given seed.
    Seeded(u64),
}

/// An itemset together with its per-class support counts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pattern {
    pub items: Vec<usize>,
    pub count_pos: usize,
    pub count_neg: usize,
}

impl Pattern {
    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn support(&self) -> usize {
        self.count_pos + self.count_neg
    }
}

/// Immutable labeled dataset. Cheap to clone: item bitmaps are shared.
#[derive(Clone, Debug)]
pub struct TransactionDataset {
    items: Arc<[ItemId]>,
    rows: Arc<[Vec<usize>]>,
    presence: Arc<[Bitmap]>,
    labels: Vec<Label>,
    pos_mask: Bitmap,
    neg_mask: Bitmap,
    n_pos: usize,
    n_neg: usize,
}

impl TransactionDataset {
    /// Builds a dataset from item names and rows of item indices.
    ///
    /// Duplicate indices inside a row are dropped with a warning.
    pub fn new(item_names: Vec<String>, rows: Vec<Vec<usize>>, labels: Vec<Label>) -> Result<Self> {
        if rows.len() != labels.len() {
            return Err(Error::Config(format!(
                "{} rows but {} labels",
                rows.len(),
                labels.len()
            )));
        }
        let mut seen = HashMap::with_capacity(item_names.len());
        for (i, name) in item_names.iter().enumerate() {
            if seen.insert(name.as_str(), i).is_some() {
                return Err(Error::Parse {
                    line: 0,
                    message: format!("duplicate item name {name:?}"),
                });
            }
        }
        let num_items = item_names.len();
        let num_rows = rows.len();
        let mut presence = vec![Bitmap::zeros(num_rows); num_items];
        let mut clean_rows = Vec::with_capacity(num_rows);
        for (r, mut row) in rows.into_iter().enumerate() {
            let before = row.len();
            row.sort_unstable();
            row.dedup();
            if row.len() != before {
                log::warn!("row {}: duplicate items removed", r + 1);
            }
            if let Some(&bad) = row.iter().find(|&&i| i >= num_items) {
                return Err(Error::ItemOutOfRange {
                    index: bad,
                    num_items,
                });
            }
            for &i in &row {
                presence[i].set(r);
            }
            clean_rows.push(row);
        }
        let items: Vec<ItemId> = item_names
            .into_iter()
            .enumerate()
            .map(|(index, name)| ItemId { index, name })
            .collect();
        let mut ds = TransactionDataset {
            items: items.into(),
            rows: clean_rows.into(),
            presence: presence.into(),
            labels: Vec::new(),
            pos_mask: Bitmap::zeros(num_rows),
            neg_mask: Bitmap::zeros(num_rows),
            n_pos: 0,
            n_neg: 0,
        };
        ds.install_labels(labels)?;
        Ok(ds)
    }

    fn install_labels(&mut self, labels: Vec<Label>) -> Result<()> {
        if labels.is_empty() {
            return Err(Error::EmptyDataset);
        }
        if labels.len() != self.rows.len() {
            return Err(Error::Config(format!(
                "{} labels for {} rows",
                labels.len(),
                self.rows.len()
            )));
        }
        let n = labels.len();
        let pos_mask = Bitmap::from_indices(
            n,
            labels
                .iter()
                .enumerate()
                .filter(|(_, &l)| l == Label::Positive)
                .map(|(r, _)| r),
        );
        let n_pos = pos_mask.count_ones();
        let n_neg = n - n_pos;
        if n_pos == 0 || n_neg == 0 {
            return Err(Error::SingleClass);
        }
        let neg_mask = Bitmap::from_indices(
            n,
            labels
                .iter()
                .enumerate()
                .filter(|(_, &l)| l == Label::Negative)
                .map(|(r, _)| r),
        );
        self.labels = labels;
        self.pos_mask = pos_mask;
        self.neg_mask = neg_mask;
        self.n_pos = n_pos;
        self.n_neg = n_neg;
        Ok(())
    }

    /// Same transactions under a different label vector.
    pub fn with_labels(&self, labels: Vec<Label>) -> Result<Self> {
        let mut ds = self.clone();
        ds.install_labels(labels)?;
        Ok(ds)
    }

    /// Builds a dataset from rows of item names; item indices follow first appearance.
    pub fn from_named_rows<S: AsRef<str>>(rows: &[(Label, Vec<S>)]) -> Result<Self> {
        let mut index: HashMap<String, usize> = HashMap::new();
        let mut names = Vec::new();
        let mut idx_rows = Vec::with_capacity(rows.len());
        let mut labels = Vec::with_capacity(rows.len());
        for (label, row) in rows {
            let mut idx_row = Vec::with_capacity(row.len());
            for name in row {
                let name = name.as_ref();
                let next = names.len();
                let i = *index.entry(name.to_string()).or_insert_with(|| {
                    names.push(name.to_string());
                    next
                });
                idx_row.push(i);
            }
            idx_rows.push(idx_row);
            labels.push(*label);
        }
        TransactionDataset::new(names, idx_rows, labels)
    }

    pub fn items(&self) -> &[ItemId] {
        &self.items
    }

    pub fn item_name(&self, index: usize) -> &str {
        &self.items[index].name
    }

    pub fn item_index(&self, name: &str) -> Option<usize> {
        self.items.iter().position(|it| it.name == name)
    }

    pub fn num_items(&self) -> usize {
        self.items.len()
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    /// `(nPos, nNeg)`.
    pub fn class_counts(&self) -> (usize, usize) {
        (self.n_pos, self.n_neg)
    }

    pub fn presence(&self, item: usize) -> &Bitmap {
        &self.presence[item]
    }

    pub fn positive_mask(&self) -> &Bitmap {
        &self.pos_mask
    }

    pub fn negative_mask(&self) -> &Bitmap {
        &self.neg_mask
    }

    fn check_items(&self, items: &[usize]) -> Result<()> {
        match items.iter().find(|&&i| i >= self.num_items()) {
            Some(&index) => Err(Error::ItemOutOfRange {
                index,
                num_items: self.num_items(),
            }),
            None => Ok(()),
        }
    }

    /// Rows containing every item of `items`.
    pub fn tidset(&self, items: &[usize]) -> Result<Bitmap> {
        self.check_items(items)?;
        let mut tids = Bitmap::ones(self.num_rows());
        for &i in items {
            tids &= &self.presence[i];
        }
        Ok(tids)
    }

    /// Per-class split of a row set: `(positive rows, negative rows)`.
    pub fn split_counts(&self, tids: &Bitmap) -> (usize, usize) {
        (tids.and_count(&self.pos_mask), tids.and_count(&self.neg_mask))
    }

    /// `(countPos, countNeg)` of rows containing every item; `{}` matches all rows.
    pub fn support_counts(&self, items: &[usize]) -> Result<(usize, usize)> {
        Ok(self.split_counts(&self.tidset(items)?))
    }

    /// Canonical pattern (sorted, deduplicated) with its per-class counts.
    pub fn pattern(&self, items: &[usize]) -> Result<Pattern> {
        let mut items = items.to_vec();
        items.sort_unstable();
        items.dedup();
        if items.is_empty() {
            return Err(Error::Config("patterns must be non-empty".into()));
        }
        let (count_pos, count_neg) = self.support_counts(&items)?;
        Ok(Pattern {
            items,
            count_pos,
            count_neg,
        })
    }

    /// Pattern from item names.
    pub fn pattern_by_names<S: AsRef<str>>(&self, names: &[S]) -> Result<Pattern> {
        let items = names
            .iter()
            .map(|n| {
                self.item_index(n.as_ref())
                    .ok_or_else(|| Error::Config(format!("unknown item {:?}", n.as_ref())))
            })
            .collect::<Result<Vec<_>>>()?;
        self.pattern(&items)
    }

    /// Fraction of set cells: ones / (rows * items).
    pub fn density(&self) -> f64 {
        let cells = self.num_rows() * self.num_items();
        if cells == 0 {
            return 0.0;
        }
        let ones: usize = self.rows.iter().map(Vec::len).sum();
        ones as f64 / cells as f64
    }

    /// Permuted copy of the label vector. Class counts are preserved.
    pub fn permute_labels(&self, shuffle: Shuffle) -> Vec<Label> {
        let mut labels = self.labels.clone();
        if let Shuffle::Seeded(seed) = shuffle {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            labels.shuffle(&mut rng);
        }
        labels
    }

    pub fn load(path: impl AsRef<Path>, format: Format) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, format)
    }

    pub fn parse(text: &str, format: Format) -> Result<Self> {
        match format {
            Format::TransactionList => parse_transaction_list(text),
            Format::MatrixCsv => parse_matrix_csv(text),
        }
    }

    /// Serializes to the transaction-list format.
    pub fn to_transaction_list(&self) -> String {
        let mut out = String::new();
        for (row, label) in self.rows.iter().zip(&self.labels) {
            out.push_str(label.token());
            out.push('\t');
            let names: Vec<&str> = row.iter().map(|&i| self.item_name(i)).collect();
            out.push_str(&names.join(" "));
            out.push('\n');
        }
        out
    }
}

/// Reads a transaction file.
pub fn load_transactions(path: impl AsRef<Path>, format: Format) -> Result<TransactionDataset> {
    TransactionDataset::load(path, format)
}

fn parse_transaction_list(text: &str) -> Result<TransactionDataset> {
    let mut rows: Vec<(Label, Vec<&str>)> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let (label_tok, rest) = match line.split_once('\t') {
            Some((l, r)) => (l.trim(), r),
            None => {
                let mut parts = trimmed.splitn(2, char::is_whitespace);
                let l = parts.next().unwrap_or_default();
                (l, parts.next().unwrap_or_default())
            }
        };
        let label = Label::parse(label_tok, lineno)?;
        rows.push((label, rest.split_whitespace().collect()));
    }
    if rows.is_empty() {
        return Err(Error::EmptyDataset);
    }
    TransactionDataset::from_named_rows(&rows)
}

fn parse_matrix_csv(text: &str) -> Result<TransactionDataset> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let header = reader
        .headers()
        .map_err(|e| Error::Parse {
            line: 1,
            message: e.to_string(),
        })?
        .clone();
    if header.iter().next_back() != Some("class") {
        return Err(Error::Parse {
            line: 1,
            message: "last header column must be named `class`".into(),
        });
    }
    let names: Vec<String> = header
        .iter()
        .take(header.len() - 1)
        .map(str::to_string)
        .collect();
    let mut rows = Vec::new();
    let mut labels = Vec::new();
    for (r, record) in reader.records().enumerate() {
        let line = r + 2;
        let record = record.map_err(|e| Error::Parse {
            line,
            message: e.to_string(),
        })?;
        if record.len() != header.len() {
            return Err(Error::Parse {
                line,
                message: format!("expected {} columns, found {}", header.len(), record.len()),
            });
        }
        let mut row = Vec::new();
        for (i, cell) in record.iter().take(names.len()).enumerate() {
            match cell {
                "1" => row.push(i),
                "0" => {}
                other => {
                    return Err(Error::Parse {
                        line,
                        message: format!("cell {other:?} in column {:?} is not 0 or 1", names[i]),
                    })
                }
            }
        }
        labels.push(Label::parse(&record[names.len()], line)?);
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::EmptyDataset);
    }
    TransactionDataset::new(names, rows, labels)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row_scan(ds: &TransactionDataset, items: &[usize]) -> (usize, usize) {
        let mut counts = (0, 0);
        for (row, label) in ds.rows().iter().zip(ds.labels()) {
            if items.iter().all(|i| row.contains(i)) {
                match label {
                    Label::Positive => counts.0 += 1,
                    Label::Negative => counts.1 += 1,
                }
            }
        }
        counts
    }

    #[test]
    fn smallest_valid_input() {
        let ds = TransactionDataset::parse("+\ta b\n-\tb\n", Format::TransactionList).unwrap();
        assert_eq!(ds.num_rows(), 2);
        assert_eq!(ds.num_items(), 2);
        assert_eq!(ds.class_counts(), (1, 1));
    }

    #[test]
    fn comments_and_blank_lines_are_skipped() {
        let text = "# header\n\n+\ta\n  \n-\tb c\n# tail\n";
        let ds = TransactionDataset::parse(text, Format::TransactionList).unwrap();
        assert_eq!(ds.num_rows(), 2);
        assert_eq!(ds.num_items(), 3);
    }

    #[test]
    fn single_class_rejected() {
        let err = TransactionDataset::parse("+\ta\n+\tb\n", Format::TransactionList).unwrap_err();
        assert!(matches!(err, Error::SingleClass));
        assert_eq!(err.to_string(), "single-class dataset");
    }

    #[test]
    fn empty_rejected() {
        let err = TransactionDataset::parse("# nothing\n\n", Format::TransactionList).unwrap_err();
        assert!(matches!(err, Error::EmptyDataset));
        let err = TransactionDataset::parse("a,b,class\n", Format::MatrixCsv).unwrap_err();
        assert!(matches!(err, Error::EmptyDataset));
    }

    #[test]
    fn unknown_label_rejected() {
        let err = TransactionDataset::parse("+\ta\nx\tb\n", Format::TransactionList).unwrap_err();
        assert!(matches!(err, Error::UnknownLabel { line: 2, .. }));
    }

    #[test]
    fn duplicate_item_in_row_is_deduplicated() {
        let ds = TransactionDataset::parse("+\ta a b\n-\tb\n", Format::TransactionList).unwrap();
        assert_eq!(ds.rows()[0], vec![0, 1]);
        assert_eq!(ds.support_counts(&[0]).unwrap(), (1, 0));
    }

    #[test]
    fn label_only_row_is_an_empty_transaction() {
        let ds = TransactionDataset::parse("+\ta\n-\n-\t\n", Format::TransactionList).unwrap();
        assert_eq!(ds.class_counts(), (1, 2));
        assert!(ds.rows()[1].is_empty());
    }

    #[test]
    fn matrix_csv_parses() {
        let text = "a,b,c,class\n1,0,1,+\n0,1,1,-\n0,0,0,-\n";
        let ds = TransactionDataset::parse(text, Format::MatrixCsv).unwrap();
        assert_eq!(ds.num_items(), 3);
        assert_eq!(ds.class_counts(), (1, 2));
        assert_eq!(ds.support_counts(&[2]).unwrap(), (1, 1));
        assert!((ds.density() - 4.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn matrix_csv_errors() {
        assert!(TransactionDataset::parse("a,b\n1,0\n", Format::MatrixCsv).is_err());
        assert!(TransactionDataset::parse("a,class\n2,+\n0,-\n", Format::MatrixCsv).is_err());
        let err = TransactionDataset::parse("a,class\n1,?\n0,-\n", Format::MatrixCsv).unwrap_err();
        assert!(matches!(err, Error::UnknownLabel { .. }));
    }

    #[test]
    fn density_extremes() {
        let zeros = TransactionDataset::parse("a,b,class\n0,0,+\n0,0,-\n", Format::MatrixCsv).unwrap();
        assert_eq!(zeros.density(), 0.0);
        let ones = TransactionDataset::parse("+\ta b\n-\ta b\n", Format::TransactionList).unwrap();
        assert_eq!(ones.density(), 1.0);
    }

    #[test]
    fn support_counts_edge_cases() {
        let ds = TransactionDataset::parse("+\ta b\n+\ta\n-\tb\n", Format::TransactionList).unwrap();
        assert_eq!(ds.support_counts(&[]).unwrap(), (2, 1));
        assert_eq!(ds.support_counts(&[0, 1]).unwrap(), (1, 0));
        assert!(matches!(
            ds.support_counts(&[5]),
            Err(Error::ItemOutOfRange { index: 5, .. })
        ));
    }

    #[test]
    fn permutation_contracts() {
        let ds = TransactionDataset::parse("+\ta\n+\tb\n-\ta\n-\tb\n-\tc\n", Format::TransactionList)
            .unwrap();
        assert_eq!(ds.permute_labels(Shuffle::Identity), ds.labels());
        let a = ds.permute_labels(Shuffle::Seeded(7));
        assert_eq!(a, ds.permute_labels(Shuffle::Seeded(7)));
        let pos = a.iter().filter(|&&l| l == Label::Positive).count();
        assert_eq!(pos, 2);
        let relabeled = ds.with_labels(a).unwrap();
        assert_eq!(relabeled.class_counts(), (2, 3));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn dataset() -> impl Strategy<Value = TransactionDataset> {
            (1usize..=12, 2usize..=40).prop_flat_map(|(items, rows)| {
                (
                    proptest::collection::vec(proptest::collection::vec(any::<bool>(), items), rows),
                    proptest::collection::vec(any::<bool>(), rows - 2),
                )
                    .prop_map(move |(cells, mut labels)| {
                        labels.push(true);
                        labels.push(false);
                        let names = (0..items).map(|i| format!("i{i}")).collect();
                        let rows = cells
                            .iter()
                            .map(|r| r.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i).collect())
                            .collect();
                        let labels = labels
                            .into_iter()
                            .map(|b| if b { Label::Positive } else { Label::Negative })
                            .collect();
                        TransactionDataset::new(names, rows, labels).unwrap()
                    })
            })
        }

        proptest! {
            #[test]
            fn bitmap_counts_match_row_scan(ds in dataset(), mask in any::<u16>()) {
                let items: Vec<usize> = (0..ds.num_items()).filter(|i| mask >> i & 1 == 1).collect();
                prop_assert_eq!(ds.support_counts(&items).unwrap(), row_scan(&ds, &items));
                for r in 0..ds.num_rows() {
                    for i in 0..ds.num_items() {
                        prop_assert_eq!(ds.presence(i).get(r), ds.rows()[r].contains(&i));
                    }
                }
            }

            #[test]
            fn support_is_antimonotone(ds in dataset(), mask in any::<u16>(), extra in 0usize..12) {
                let small: Vec<usize> = (0..ds.num_items()).filter(|i| mask >> i & 1 == 1).collect();
                let mut big = small.clone();
                big.push(extra % ds.num_items());
                let (sp, sn) = ds.support_counts(&small).unwrap();
                let (bp, bn) = ds.support_counts(&big).unwrap();
                prop_assert!(sp >= bp && sn >= bn);
            }

            #[test]
            fn permutation_preserves_class_counts(ds in dataset(), seed in any::<u64>()) {
                let labels = ds.permute_labels(Shuffle::Seeded(seed));
                let relabeled = ds.with_labels(labels).unwrap();
                prop_assert_eq!(relabeled.class_counts(), ds.class_counts());
            }
        }
    }
}
