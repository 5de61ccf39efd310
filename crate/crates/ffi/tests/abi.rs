use std::ffi::{CStr, CString};
use std::ptr;

use dpchar_ffi::*;

fn last_error() -> String {
    let p = dpc_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn parse(text: &str) -> Result<*mut DpcDataset, DpcStatus> {
    let text = CString::new(text).unwrap();
    let mut ds = ptr::null_mut();
    match unsafe { dpc_dataset_parse(text.as_ptr(), DpcFormat::TransactionList as u32, &mut ds) } {
        DpcStatus::Ok => Ok(ds),
        s => Err(s),
    }
}

fn fixture() -> *mut DpcDataset {
    let mut ds = ptr::null_mut();
    assert_eq!(unsafe { dpc_dataset_fixture(1, &mut ds) }, DpcStatus::Ok);
    ds
}

#[test]
fn dataset_accessors() {
    let ds = parse("+\ta b\n-\tb c\n+\ta\n").unwrap();
    unsafe {
        assert_eq!(dpc_dataset_num_rows(ds), 3);
        assert_eq!(dpc_dataset_num_items(ds), 3);
        let (mut p, mut n) = (0, 0);
        assert_eq!(dpc_dataset_class_counts(ds, &mut p, &mut n), DpcStatus::Ok);
        assert_eq!((p, n), (2, 1));
        let name = CStr::from_ptr(dpc_dataset_item_name(ds, 1)).to_str().unwrap();
        assert_eq!(name, "b");
        assert!(dpc_dataset_item_name(ds, 3).is_null());
        let items = [1usize];
        assert_eq!(dpc_dataset_support_counts(ds, items.as_ptr(), 1, &mut p, &mut n), DpcStatus::Ok);
        assert_eq!((p, n), (1, 1));
        let items = [7usize];
        assert_eq!(
            dpc_dataset_support_counts(ds, items.as_ptr(), 1, &mut p, &mut n),
            DpcStatus::OutOfRange
        );
        dpc_dataset_free(ds);
    }
}

#[test]
fn error_codes_and_messages() {
    assert_eq!(parse("+\ta\n+\tb\n").unwrap_err(), DpcStatus::Data);
    assert!(last_error().contains("single-class"));
    assert_eq!(parse("?\ta\n").unwrap_err(), DpcStatus::Data);

    let mut ds = ptr::null_mut();
    let path = CString::new("/nonexistent/input.tsv").unwrap();
    let st = unsafe { dpc_dataset_load(path.as_ptr(), 0, &mut ds) };
    assert_eq!(st, DpcStatus::Io);
    assert!(ds.is_null());

    let text = CString::new("+\ta\n").unwrap();
    let st = unsafe { dpc_dataset_parse(text.as_ptr(), 9, &mut ds) };
    assert_eq!(st, DpcStatus::InvalidArgument);
    assert!(last_error().contains("format"));

    let st = unsafe { dpc_dataset_parse(ptr::null(), 0, &mut ds) };
    assert_eq!(st, DpcStatus::NullPointer);
    assert_eq!(unsafe { dpc_analyze(ptr::null(), ptr::null(), ptr::null_mut()) }, DpcStatus::NullPointer);
}

#[test]
fn bad_config_is_rejected() {
    let ds = fixture();
    let mut cfg = dpc_config_default();
    cfg.minsup = 0.0;
    let mut an = ptr::null_mut();
    assert_eq!(unsafe { dpc_analyze(ds, &cfg, &mut an) }, DpcStatus::Config);
    assert!(an.is_null());
    unsafe { dpc_dataset_free(ds) };
}

#[test]
fn analysis_matches_library() {
    let ds = fixture();
    let mut cfg = dpc_config_default();
    cfg.permutations = 20;
    let mut an = ptr::null_mut();
    assert_eq!(unsafe { dpc_analyze(ds, &cfg, &mut an) }, DpcStatus::Ok);

    let lib_ds = dpchar::synth::fixture(1).unwrap();
    let lib_cfg = dpchar::AnalysisConfig {
        permutations: 20,
        ..Default::default()
    };
    let lib = dpchar::analyze(&lib_ds, &lib_cfg).unwrap();
    let lib_fdr = lib.discriminative_fdr().unwrap();

    unsafe {
        assert_eq!(dpc_analysis_closed_count(an), lib.closed.len());
        assert_eq!(dpc_analysis_len(an), lib.characterized.len());
        for (i, c) in lib.characterized.iter().enumerate() {
            let mut rec = std::mem::zeroed::<DpcPatternRecord>();
            assert_eq!(dpc_analysis_pattern(an, i, &mut rec), DpcStatus::Ok);
            assert_eq!(rec.mi, c.stats.mi);
            assert_eq!(rec.improvement, c.stats.improvement);
            assert_eq!(rec.t3, c.labels.t3);
            assert_eq!(rec.fdr, lib_fdr[i]);
            assert_eq!(rec.synergy.is_nan(), c.stats.synergy.is_none());

            let mut len = 0;
            assert_eq!(
                dpc_analysis_pattern_items(an, i, ptr::null_mut(), 0, &mut len),
                DpcStatus::OutOfRange
            );
            assert_eq!(len, c.stats.pattern.len());
            let mut buf = vec![0usize; len];
            assert_eq!(dpc_analysis_pattern_items(an, i, buf.as_mut_ptr(), len, &mut len), DpcStatus::Ok);
            assert_eq!(buf, c.stats.pattern.items);
        }
        dpc_analysis_free(an);
        dpc_dataset_free(ds);
    }
}

#[test]
fn no_permutations_gives_nan_fdr() {
    let ds = fixture();
    let mut cfg = dpc_config_default();
    cfg.permutations = 0;
    let mut an = ptr::null_mut();
    unsafe {
        assert_eq!(dpc_analyze(ds, &cfg, &mut an), DpcStatus::Ok);
        let mut rec = std::mem::zeroed::<DpcPatternRecord>();
        assert_eq!(dpc_analysis_pattern(an, 0, &mut rec), DpcStatus::Ok);
        assert!(rec.fdr.is_nan());
        dpc_analysis_free(an);
        dpc_dataset_free(ds);
    }
}

#[test]
fn mutual_information_entry_point() {
    let mut mi = -1.0;
    assert_eq!(unsafe { dpc_mutual_information(6, 0, 10, 10, &mut mi) }, DpcStatus::Ok);
    let lib = dpchar::measures::mutual_information(&dpchar::SupportProfile::new(6, 0, 10, 10));
    assert_eq!(mi, lib);
    assert_eq!(
        unsafe { dpc_mutual_information(11, 0, 10, 10, &mut mi) },
        DpcStatus::InvalidArgument
    );
}

#[test]
fn run_writes_reports() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("fig1.tsv");
    std::fs::write(&input, dpchar::synth::fixture_text(1).unwrap()).unwrap();
    let out = dir.path().join("out");
    let mut cfg = dpc_config_default();
    cfg.permutations = 5;
    let input_c = CString::new(input.to_str().unwrap()).unwrap();
    let out_c = CString::new(out.to_str().unwrap()).unwrap();
    let st = unsafe { dpc_run(input_c.as_ptr(), 0, &cfg, out_c.as_ptr()) };
    assert_eq!(st, DpcStatus::Ok);
    assert!(out.join("patterns.tsv").exists());
    assert!(out.join("summary.json").exists());
}

#[test]
fn free_accepts_null() {
    unsafe {
        dpc_dataset_free(ptr::null_mut());
        dpc_analysis_free(ptr::null_mut());
    }
}

#[test]
fn header_is_generated() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/dpchar.h")).unwrap();
    for sym in ["dpc_dataset_load", "dpc_analyze", "dpc_analysis_pattern", "dpc_last_error", "DPC_STATUS_OK"] {
        assert!(header.contains(sym), "{sym} missing from header");
    }
}
