//! The planted four-pattern fixture.
//!
//! Twenty rows (ten per class) over items `i1..i15` with four planted regions:
//!
//! * `A = {i1,i2,i3}`: jointly present in six positive rows and no negative
//!   row, while each item alone is nearly balanced (DiffSups 0, 0.1, 0.2).
//! * `B = {i5,i6,i7}`: three identical columns at support 0.5 in both classes.
//! * `C = {i9,i10}`: `i10` differentiates (DiffSup 0.6), `i9` does not (0).
//! * `D = {i12,i13,i14}`: DiffSups 0.6, 0.7, 0.6; the set itself 0.7 and
//!   absent from the negative class.
//!
//! `i4, i8, i11, i15` are balanced filler columns.

use num_rational::Ratio;

use crate::dataset::{Label, TransactionDataset};
use crate::error::{Error, Result};

pub const FIXTURE_FILE: &str = "fig1.tsv";

pub const REGION_A: [&str; 3] = ["i1", "i2", "i3"];
pub const REGION_B: [&str; 3] = ["i5", "i6", "i7"];
pub const REGION_C: [&str; 2] = ["i9", "i10"];
pub const REGION_D: [&str; 3] = ["i12", "i13", "i14"];

const ROWS_PER_CLASS: usize = 10;

// (item number, positive rows, negative rows); rows are 0-based within class
const INCIDENCE: &[(usize, &[usize], &[usize])] = &[
    (1, &[0, 1, 2, 3, 4, 5, 6], &[0, 1, 2, 3, 4, 5, 6]),
    (2, &[0, 1, 2, 3, 4, 5, 7, 8], &[0, 1, 2, 3, 7, 8, 9]),
    (3, &[0, 1, 2, 3, 4, 5, 8, 9], &[4, 5, 6, 7, 8, 9]),
    (4, &[0, 9], &[0, 9]),
    (5, &[0, 1, 2, 3, 4], &[0, 1, 2, 3, 4]),
    (6, &[0, 1, 2, 3, 4], &[0, 1, 2, 3, 4]),
    (7, &[0, 1, 2, 3, 4], &[0, 1, 2, 3, 4]),
    (8, &[1, 8], &[1, 8]),
    (9, &[3, 4, 5, 6, 7], &[0, 1, 2, 3, 4]),
    (10, &[3, 4, 5, 6, 7, 8, 9], &[9]),
    (11, &[2, 7], &[2, 7]),
    (12, &[0, 1, 2, 3, 4, 5, 6, 7, 8, 9], &[0, 1, 2, 3]),
    (13, &[0, 1, 2, 3, 4, 5, 6], &[]),
    (14, &[0, 1, 2, 3, 4, 5, 6, 7, 8, 9], &[0, 1, 2, 3]),
    (15, &[3, 6], &[3, 6]),
];

/// Rows of the fixture as item-name lists, positives first, each row repeated
/// `replicate` times within its class block.
fn named_rows(replicate: usize) -> Vec<(Label, Vec<String>)> {
    let mut out = Vec::with_capacity(2 * ROWS_PER_CLASS * replicate);
    for (label, negative) in [(Label::Positive, false), (Label::Negative, true)] {
        for r in 0..ROWS_PER_CLASS {
            let items: Vec<String> = INCIDENCE
                .iter()
                .filter(|(_, pos, neg)| if negative { neg.contains(&r) } else { pos.contains(&r) })
                .map(|(i, _, _)| format!("i{i}"))
                .collect();
            for _ in 0..replicate {
                out.push((label, items.clone()));
            }
        }
    }
    out
}

/// Class-relative supports `(rel+, rel-)` by direct row scan.
pub fn row_scan_supports(ds: &TransactionDataset, names: &[&str]) -> Result<(Ratio<i64>, Ratio<i64>)> {
    let idx: Vec<usize> = names
        .iter()
        .map(|n| {
            ds.item_index(n)
                .ok_or_else(|| Error::Invariant(format!("fixture lacks item {n}")))
        })
        .collect::<Result<_>>()?;
    let (mut pos, mut neg, mut n_pos, mut n_neg) = (0i64, 0i64, 0i64, 0i64);
    for (row, label) in ds.rows().iter().zip(ds.labels()) {
        let hit = idx.iter().all(|i| row.contains(i));
        match label {
            Label::Positive => {
                n_pos += 1;
                pos += hit as i64;
            }
            Label::Negative => {
                n_neg += 1;
                neg += hit as i64;
            }
        }
    }
    Ok((Ratio::new(pos, n_pos), Ratio::new(neg, n_neg)))
}

fn tenths(v: i64) -> Ratio<i64> {
    Ratio::new(v, 10)
}

fn abs(r: Ratio<i64>) -> Ratio<i64> {
    if r < Ratio::from_integer(0) {
        -r
    } else {
        r
    }
}

/// Checks every planted support constraint; returns the first violation.
pub fn verify_fixture(ds: &TransactionDataset) -> Result<()> {
    let fail = |msg: String| Err(Error::Invariant(format!("fixture constraint: {msg}")));
    if ds.num_items() != 15 {
        return fail(format!("{} items", ds.num_items()));
    }
    let replicate = ds.num_rows() / (2 * ROWS_PER_CLASS);
    if replicate == 0 || ds.class_counts() != (ROWS_PER_CLASS * replicate, ROWS_PER_CLASS * replicate) {
        return fail(format!("class counts {:?}", ds.class_counts()));
    }
    let diff = |names: &[&str]| -> Result<Ratio<i64>> {
        let (p, n) = row_scan_supports(ds, names)?;
        Ok(abs(p - n))
    };
    let expect_diff = |names: &[&str], want: i64| -> Result<()> {
        let got = diff(names)?;
        if got != tenths(want) {
            return fail(format!("DiffSup{names:?} = {got}, expected {}", tenths(want)));
        }
        Ok(())
    };
    let expect_supports = |names: &[&str], pos: i64, neg: i64| -> Result<()> {
        let got = row_scan_supports(ds, names)?;
        if got != (tenths(pos), tenths(neg)) {
            return fail(format!("supports{names:?} = {got:?}, expected ({pos}/10, {neg}/10)"));
        }
        Ok(())
    };

    expect_diff(&REGION_A, 6)?;
    expect_diff(&REGION_B, 0)?;
    expect_diff(&REGION_C, 5)?;
    expect_diff(&REGION_D, 7)?;
    for (name, want) in REGION_A.iter().zip([0, 1, 2]) {
        expect_diff(&[name], want)?;
    }
    for (name, want) in REGION_C.iter().zip([0, 6]) {
        expect_diff(&[name], want)?;
    }
    for (name, want) in REGION_D.iter().zip([6, 7, 6]) {
        expect_diff(&[name], want)?;
    }
    expect_supports(&REGION_A, 6, 0)?;
    expect_supports(&REGION_D, 7, 0)?;
    for (name, (pos, neg)) in REGION_A.iter().zip([(7, 7), (8, 7), (8, 6)]) {
        expect_supports(&[name], pos, neg)?;
    }
    expect_supports(&REGION_B, 5, 5)?;
    for name in REGION_B {
        expect_supports(&[name], 5, 5)?;
    }
    Ok(())
}

/// The fixture, with each row repeated `replicate` times. Replication keeps
/// every class-relative support and therefore every measure unchanged.
pub fn fixture(replicate: usize) -> Result<TransactionDataset> {
    if replicate == 0 {
        return Err(Error::Config("replication factor must be at least 1".into()));
    }
    let ds = TransactionDataset::from_named_rows(&named_rows(replicate))?;
    verify_fixture(&ds)?;
    Ok(ds)
}

/// Fixture file contents in the transaction-list format.
pub fn fixture_text(replicate: usize) -> Result<String> {
    let ds = fixture(replicate)?;
    let mut text = String::from("# planted fixture: A={i1,i2,i3} B={i5,i6,i7} C={i9,i10} D={i12,i13,i14}\n");
    text.push_str(&ds.to_transaction_list());
    let reparsed = TransactionDataset::parse(&text, crate::dataset::Format::TransactionList)?;
    verify_fixture(&reparsed)?;
    Ok(text)
}
