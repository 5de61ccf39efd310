mod common;

use common::{oracle_mi_counts, oracle_stats};
use dpchar::report::{self, PatternTable};
use dpchar::synth::{self, REGION_A, REGION_B, REGION_C, REGION_D};
use dpchar::{AnalysisConfig, CharParams, Characterizer, Format, TransactionDataset};

const GOLDEN_DATA: &str = include_str!("../fixtures/fig1.tsv");
const GOLDEN_PATTERNS: &str = include_str!("../fixtures/fig1_patterns.tsv");

fn eval(names: &[&str]) -> dpchar::Characterized {
    let ds = synth::fixture(1).unwrap();
    let p = ds.pattern_by_names(names).unwrap();
    Characterizer::new(CharParams::default()).unwrap().characterize(&ds, &p).unwrap()
}

#[test]
fn committed_fixture_matches_generator() {
    assert_eq!(GOLDEN_DATA, synth::fixture_text(1).unwrap());
    let ds = TransactionDataset::parse(GOLDEN_DATA, Format::TransactionList).unwrap();
    synth::verify_fixture(&ds).unwrap();
}

#[test]
fn golden_patterns_match_oracle_and_pipeline() {
    let ds = TransactionDataset::parse(GOLDEN_DATA, Format::TransactionList).unwrap();
    let table = PatternTable::parse(GOLDEN_PATTERNS).unwrap();
    let fmt = |v: f64| format!("{v:.6}");
    for row in &table.rows {
        let names: Vec<&str> = table.get(row, "items").unwrap().split(';').collect();
        let items = ds.pattern_by_names(&names).unwrap().items;
        let o = oracle_stats(&ds, &items, 10);
        assert_eq!(table.get(row, "mi").unwrap(), fmt(o.mi), "{names:?}");
        assert_eq!(table.get(row, "improvement").unwrap(), fmt(o.improvement), "{names:?}");
        assert_eq!(table.get(row, "incoherence").unwrap(), fmt(o.incoherence), "{names:?}");
        assert_eq!(table.get(row, "synergy").unwrap(), o.synergy.map(fmt).unwrap_or_default());
    }

    let analysis = dpchar::analyze(
        &ds,
        &AnalysisConfig {
            permutations: 0,
            ..Default::default()
        },
    )
    .unwrap();
    assert_eq!(report::patterns_tsv(&ds, &analysis.characterized, None), GOLDEN_PATTERNS);
}

#[test]
fn region_c_is_driver_passenger() {
    let c = eval(&REGION_C);
    assert!(c.labels.t1);
    assert!(!c.labels.t3);
}

#[test]
fn region_a_is_additive_and_synergistic() {
    let a = eval(&REGION_A);
    assert!(a.labels.t3 && a.labels.t4);
    assert!(!a.labels.t2);
    let syn = a.stats.synergy.unwrap();
    assert!(syn > 0.05 && syn <= a.stats.improvement + 1e-12);
}

#[test]
fn region_d_is_not_additive() {
    let d = eval(&REGION_D);
    assert!(!d.labels.t3);
    assert!(d.stats.improvement.abs() < 1e-12);
}

#[test]
fn no_subset_of_b_is_discriminative() {
    let ds = synth::fixture(1).unwrap();
    for m in 1..8usize {
        let names: Vec<&str> = (0..3).filter(|p| m >> p & 1 == 1).map(|p| REGION_B[p]).collect();
        let p = ds.pattern_by_names(&names).unwrap();
        assert_eq!(dpchar::measures::mutual_information(&dpchar::SupportProfile::of(&ds, &p)), 0.0);
    }
}

#[test]
fn identical_columns_of_d_form_a_coherent_pattern() {
    let c = eval(&["i12", "i14"]);
    assert!(c.labels.t2);
    assert_eq!(c.stats.incoherence, 0.0);
}

/// With ten rows per class and D present in seven positive rows only, an
/// item of D with DiffSup 0.6 has counts (p, p - 6) for p in 7..=10. None of
/// those reaches MI(D) - j, so D's incoherence exceeds j in every fixture
/// satisfying the support constraints.
#[test]
fn region_d_cannot_be_coherent_under_its_constraints() {
    let j = CharParams::default().j;
    let mi_d = oracle_mi_counts(7, 0, 10, 10);
    let best_item = (7..=10)
        .map(|p| oracle_mi_counts(p, p - 6, 10, 10))
        .fold(f64::NEG_INFINITY, f64::max);
    assert!(mi_d - best_item > j, "MI(D)={mi_d} best item={best_item}");

    let d = eval(&REGION_D);
    assert!(d.stats.incoherence >= mi_d - best_item - 1e-12);
    assert!(!d.labels.t2);
}

#[test]
fn replication_preserves_measures() {
    let one = synth::fixture(1).unwrap();
    let three = synth::fixture(3).unwrap();
    for names in [&REGION_A[..], &REGION_C, &REGION_D] {
        let a = oracle_stats(&one, &one.pattern_by_names(names).unwrap().items, 10);
        let b = oracle_stats(&three, &three.pattern_by_names(names).unwrap().items, 10);
        assert!((a.mi - b.mi).abs() < 1e-12);
        assert!((a.incoherence - b.incoherence).abs() < 1e-12);
    }
}

#[test]
fn fixture_summary_counts() {
    let ds = synth::fixture(1).unwrap();
    let analysis = dpchar::analyze(
        &ds,
        &AnalysisConfig {
            permutations: 0,
            ..Default::default()
        },
    )
    .unwrap();
    let s = report::summarize("fig1", &ds, analysis.closed.len(), &analysis.characterized);
    assert!(s.types.t2 >= 1);
    assert!(s.types.t3 >= 1 && s.types.t4 >= 1);
    assert!(s.types.t4 <= s.types.t3);
    assert_eq!(s.discriminative, analysis.characterized.len());
}
