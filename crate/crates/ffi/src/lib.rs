//! C ABI over the `dpchar` library.
//!
//! Datasets and analyses are opaque heap handles released with their
//! `*_free` function. Every fallible call returns a [`DpcStatus`]; on failure
//! the message is available from [`dpc_last_error`] on the same thread.

// FFI functions check for null before dereferencing raw pointers.
#![allow(clippy::not_unsafe_ptr_arg_deref)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::path::PathBuf;
use std::ptr;

use dpchar::pipeline::{self, AnalysisConfig, RunConfig};
use dpchar::{Analysis, CharParams, Direction, Error, Format, MinerConfig, Statistic, TransactionDataset};

/// Status codes returned by every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DpcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Io = 3,
    Data = 4,
    Config = 5,
    Internal = 6,
    OutOfRange = 7,
}

/// Input formats; pass the numeric value where a `format` is expected.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DpcFormat {
    TransactionList = 0,
    MatrixCsv = 1,
}

/// Decodes a `DpcFormat` value received as a plain integer.
fn format_of(code: u32) -> Result<Format, DpcStatus> {
    match code {
        c if c == DpcFormat::TransactionList as u32 => Ok(Format::TransactionList),
        c if c == DpcFormat::MatrixCsv as u32 => Ok(Format::MatrixCsv),
        other => Err(fail(DpcStatus::InvalidArgument, format!("unknown format code {other}"))),
    }
}

/// Analysis parameters. Obtain defaults from [`dpc_config_default`].
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DpcConfig {
    pub minsup: f64,
    pub max_pattern_size: usize,
    pub delta: f64,
    pub j: f64,
    pub epsilon: f64,
    pub max_synergy_size: usize,
    /// 0 disables FDR estimation.
    pub permutations: usize,
    pub seed: u64,
}

impl From<&DpcConfig> for AnalysisConfig {
    fn from(c: &DpcConfig) -> Self {
        AnalysisConfig {
            miner: MinerConfig {
                minsup: c.minsup,
                max_pattern_size: c.max_pattern_size,
                delta: c.delta,
            },
            params: CharParams {
                delta: c.delta,
                j: c.j,
                epsilon: c.epsilon,
                max_synergy_size: c.max_synergy_size,
            },
            permutations: c.permutations,
            seed: c.seed,
            statistic: Statistic::MutualInformation,
        }
    }
}

/// One characterized pattern. Absent values are NaN.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DpcPatternRecord {
    pub size: usize,
    pub count_pos: usize,
    pub count_neg: usize,
    pub mi: f64,
    pub subset_mi_max: f64,
    pub improvement: f64,
    pub incoherence: f64,
    pub best_aggregated_mi: f64,
    pub synergy: f64,
    /// +1 positive class, -1 negative class, 0 tied.
    pub direction: i32,
    pub t1: bool,
    pub t2: bool,
    pub t3: bool,
    pub t4: bool,
    pub gray: bool,
    pub fdr: f64,
}

/// Opaque dataset handle.
pub struct DpcDataset {
    inner: TransactionDataset,
    names: Vec<CString>,
}

/// Opaque analysis handle.
pub struct DpcAnalysis {
    inner: Analysis,
    fdr: Option<Vec<f64>>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).expect("nul bytes replaced");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn fail(status: DpcStatus, msg: impl Into<String>) -> DpcStatus {
    set_error(msg);
    status
}

fn status_of(err: &Error) -> DpcStatus {
    match err {
        Error::Io { .. } => DpcStatus::Io,
        Error::Config(_) => DpcStatus::Config,
        Error::Invariant(_) => DpcStatus::Internal,
        Error::ItemOutOfRange { .. } => DpcStatus::OutOfRange,
        _ => DpcStatus::Data,
    }
}

fn from_error(err: Error) -> DpcStatus {
    fail(status_of(&err), err.to_string())
}

unsafe fn cstr<'a>(p: *const c_char) -> Result<&'a str, DpcStatus> {
    if p.is_null() {
        return Err(fail(DpcStatus::NullPointer, "null string argument"));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail(DpcStatus::InvalidArgument, "string is not valid UTF-8"))
}

fn new_dataset(inner: TransactionDataset) -> *mut DpcDataset {
    let names = inner
        .items()
        .iter()
        .map(|it| CString::new(it.name.replace('\0', " ")).expect("nul bytes replaced"))
        .collect();
    Box::into_raw(Box::new(DpcDataset { inner, names }))
}

/// Message of the last failed call on this thread, or NULL. The pointer is
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn dpc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

#[no_mangle]
pub extern "C" fn dpc_config_default() -> DpcConfig {
    let a = AnalysisConfig::default();
    DpcConfig {
        minsup: a.miner.minsup,
        max_pattern_size: a.miner.max_pattern_size,
        delta: a.miner.delta,
        j: a.params.j,
        epsilon: a.params.epsilon,
        max_synergy_size: a.params.max_synergy_size,
        permutations: a.permutations,
        seed: a.seed,
    }
}

/// Loads a dataset file.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dpc_dataset_load(
    path: *const c_char,
    format: u32,
    out: *mut *mut DpcDataset,
) -> DpcStatus {
    if out.is_null() {
        return fail(DpcStatus::NullPointer, "null output pointer");
    }
    let path = match cstr(path) {
        Ok(p) => p,
        Err(s) => return s,
    };
    let format = match format_of(format) {
        Ok(f) => f,
        Err(s) => return s,
    };
    match TransactionDataset::load(path, format) {
        Ok(ds) => {
            *out = new_dataset(ds);
            DpcStatus::Ok
        }
        Err(e) => from_error(e),
    }
}

/// Parses a dataset from in-memory text.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dpc_dataset_parse(
    text: *const c_char,
    format: u32,
    out: *mut *mut DpcDataset,
) -> DpcStatus {
    if out.is_null() {
        return fail(DpcStatus::NullPointer, "null output pointer");
    }
    let text = match cstr(text) {
        Ok(t) => t,
        Err(s) => return s,
    };
    let format = match format_of(format) {
        Ok(f) => f,
        Err(s) => return s,
    };
    match TransactionDataset::parse(text, format) {
        Ok(ds) => {
            *out = new_dataset(ds);
            DpcStatus::Ok
        }
        Err(e) => from_error(e),
    }
}

/// The planted four-pattern fixture, each row repeated `replicate` times.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dpc_dataset_fixture(replicate: usize, out: *mut *mut DpcDataset) -> DpcStatus {
    if out.is_null() {
        return fail(DpcStatus::NullPointer, "null output pointer");
    }
    match dpchar::synth::fixture(replicate) {
        Ok(ds) => {
            *out = new_dataset(ds);
            DpcStatus::Ok
        }
        Err(e) => from_error(e),
    }
}

/// # Safety
/// `ds` must be NULL or a handle from a `dpc_dataset_*` constructor, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn dpc_dataset_free(ds: *mut DpcDataset) {
    if !ds.is_null() {
        drop(Box::from_raw(ds));
    }
}

/// # Safety
/// `ds` must be a live dataset handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn dpc_dataset_num_rows(ds: *const DpcDataset) -> usize {
    ds.as_ref().map_or(0, |d| d.inner.num_rows())
}

/// # Safety
/// `ds` must be a live dataset handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn dpc_dataset_num_items(ds: *const DpcDataset) -> usize {
    ds.as_ref().map_or(0, |d| d.inner.num_items())
}

/// # Safety
/// `ds` must be a live dataset handle; `n_pos` and `n_neg` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn dpc_dataset_class_counts(
    ds: *const DpcDataset,
    n_pos: *mut usize,
    n_neg: *mut usize,
) -> DpcStatus {
    let Some(d) = ds.as_ref() else {
        return fail(DpcStatus::NullPointer, "null dataset");
    };
    if n_pos.is_null() || n_neg.is_null() {
        return fail(DpcStatus::NullPointer, "null output pointer");
    }
    let (p, n) = d.inner.class_counts();
    *n_pos = p;
    *n_neg = n;
    DpcStatus::Ok
}

/// Name of item `index`, owned by the dataset handle. NULL when out of range.
///
/// # Safety
/// `ds` must be a live dataset handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn dpc_dataset_item_name(ds: *const DpcDataset, index: usize) -> *const c_char {
    ds.as_ref()
        .and_then(|d| d.names.get(index))
        .map_or(ptr::null(), |s| s.as_ptr())
}

/// `(countPos, countNeg)` of the rows containing every listed item.
///
/// # Safety
/// `ds` must be live; `items` must point to `len` indices (may be NULL when
/// `len` is 0); outputs must be valid.
#[no_mangle]
pub unsafe extern "C" fn dpc_dataset_support_counts(
    ds: *const DpcDataset,
    items: *const usize,
    len: usize,
    count_pos: *mut usize,
    count_neg: *mut usize,
) -> DpcStatus {
    let Some(d) = ds.as_ref() else {
        return fail(DpcStatus::NullPointer, "null dataset");
    };
    if (items.is_null() && len > 0) || count_pos.is_null() || count_neg.is_null() {
        return fail(DpcStatus::NullPointer, "null pointer argument");
    }
    let items = if len == 0 {
        &[][..]
    } else {
        std::slice::from_raw_parts(items, len)
    };
    match d.inner.support_counts(items) {
        Ok((p, n)) => {
            *count_pos = p;
            *count_neg = n;
            DpcStatus::Ok
        }
        Err(e) => from_error(e),
    }
}

/// Normalized mutual information of a pattern from its counts.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dpc_mutual_information(
    count_pos: usize,
    count_neg: usize,
    n_pos: usize,
    n_neg: usize,
    out: *mut f64,
) -> DpcStatus {
    if out.is_null() {
        return fail(DpcStatus::NullPointer, "null output pointer");
    }
    if count_pos > n_pos || count_neg > n_neg || n_pos == 0 || n_neg == 0 {
        return fail(DpcStatus::InvalidArgument, "counts inconsistent with class sizes");
    }
    *out = dpchar::measures::mutual_information(&dpchar::SupportProfile::new(
        count_pos, count_neg, n_pos, n_neg,
    ));
    DpcStatus::Ok
}

/// Mines, characterizes and (when `permutations > 0`) FDR-tests a dataset.
///
/// # Safety
/// `ds` must be live, `config` NULL (defaults) or valid, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn dpc_analyze(
    ds: *const DpcDataset,
    config: *const DpcConfig,
    out: *mut *mut DpcAnalysis,
) -> DpcStatus {
    let Some(d) = ds.as_ref() else {
        return fail(DpcStatus::NullPointer, "null dataset");
    };
    if out.is_null() {
        return fail(DpcStatus::NullPointer, "null output pointer");
    }
    let cfg = config.as_ref().copied().unwrap_or_else(|| dpc_config_default());
    match dpchar::analyze(&d.inner, &AnalysisConfig::from(&cfg)) {
        Ok(inner) => {
            let fdr = inner.discriminative_fdr();
            *out = Box::into_raw(Box::new(DpcAnalysis { inner, fdr }));
            DpcStatus::Ok
        }
        Err(e) => from_error(e),
    }
}

/// # Safety
/// `an` must be NULL or a handle from [`dpc_analyze`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn dpc_analysis_free(an: *mut DpcAnalysis) {
    if !an.is_null() {
        drop(Box::from_raw(an));
    }
}

/// Number of closed frequent patterns mined.
///
/// # Safety
/// `an` must be a live analysis handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn dpc_analysis_closed_count(an: *const DpcAnalysis) -> usize {
    an.as_ref().map_or(0, |a| a.inner.closed.len())
}

/// Number of discriminative (characterized) patterns.
///
/// # Safety
/// `an` must be a live analysis handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn dpc_analysis_len(an: *const DpcAnalysis) -> usize {
    an.as_ref().map_or(0, |a| a.inner.characterized.len())
}

/// Measures and labels of discriminative pattern `index`.
///
/// # Safety
/// `an` must be live and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn dpc_analysis_pattern(
    an: *const DpcAnalysis,
    index: usize,
    out: *mut DpcPatternRecord,
) -> DpcStatus {
    let Some(a) = an.as_ref() else {
        return fail(DpcStatus::NullPointer, "null analysis");
    };
    if out.is_null() {
        return fail(DpcStatus::NullPointer, "null output pointer");
    }
    let Some(c) = a.inner.characterized.get(index) else {
        return fail(DpcStatus::OutOfRange, format!("pattern index {index} out of range"));
    };
    let s = &c.stats;
    *out = DpcPatternRecord {
        size: s.pattern.len(),
        count_pos: s.pattern.count_pos,
        count_neg: s.pattern.count_neg,
        mi: s.mi,
        subset_mi_max: s.subset_mi_max,
        improvement: s.improvement,
        incoherence: s.incoherence,
        best_aggregated_mi: s.best_aggregated_mi.unwrap_or(f64::NAN),
        synergy: s.synergy.unwrap_or(f64::NAN),
        direction: match s.direction {
            Direction::PositiveClass => 1,
            Direction::NegativeClass => -1,
            Direction::Tied => 0,
        },
        t1: c.labels.t1,
        t2: c.labels.t2,
        t3: c.labels.t3,
        t4: c.labels.t4,
        gray: c.labels.gray,
        fdr: a.fdr.as_ref().map_or(f64::NAN, |f| f[index]),
    };
    DpcStatus::Ok
}

/// Copies the item indices of discriminative pattern `index` into `buf`.
/// `*len` receives the pattern size even when `cap` is too small, in which
/// case nothing is copied and `OutOfRange` is returned.
///
/// # Safety
/// `an` must be live, `buf` must hold `cap` entries (may be NULL if `cap`
/// is 0), `len` must be valid.
#[no_mangle]
pub unsafe extern "C" fn dpc_analysis_pattern_items(
    an: *const DpcAnalysis,
    index: usize,
    buf: *mut usize,
    cap: usize,
    len: *mut usize,
) -> DpcStatus {
    let Some(a) = an.as_ref() else {
        return fail(DpcStatus::NullPointer, "null analysis");
    };
    if len.is_null() || (buf.is_null() && cap > 0) {
        return fail(DpcStatus::NullPointer, "null output pointer");
    }
    let Some(c) = a.inner.characterized.get(index) else {
        return fail(DpcStatus::OutOfRange, format!("pattern index {index} out of range"));
    };
    let items = &c.stats.pattern.items;
    *len = items.len();
    if cap < items.len() {
        return fail(DpcStatus::OutOfRange, "buffer too small");
    }
    ptr::copy_nonoverlapping(items.as_ptr(), buf, items.len());
    DpcStatus::Ok
}

/// Runs the full pipeline on a file and writes the report files into `out_dir`.
///
/// # Safety
/// `input` and `out_dir` must be NUL-terminated strings; `config` NULL or valid.
#[no_mangle]
pub unsafe extern "C" fn dpc_run(
    input: *const c_char,
    format: u32,
    config: *const DpcConfig,
    out_dir: *const c_char,
) -> DpcStatus {
    let (input, out_dir) = match (cstr(input), cstr(out_dir)) {
        (Ok(i), Ok(o)) => (i, o),
        (Err(s), _) | (_, Err(s)) => return s,
    };
    let format = match format_of(format) {
        Ok(f) => f,
        Err(s) => return s,
    };
    let cfg = config.as_ref().copied().unwrap_or_else(|| dpc_config_default());
    let run = RunConfig {
        input: PathBuf::from(input),
        format,
        analysis: AnalysisConfig::from(&cfg),
        out_dir: PathBuf::from(out_dir),
    };
    match pipeline::run(&run) {
        Ok(_) => DpcStatus::Ok,
        Err(e) => from_error(e),
    }
}
