//! End-to-end analysis: mine, filter, characterize, test, report.

use std::path::{Path, PathBuf};

use crate::characterize::{CharParams, Characterized, Characterizer};
use crate::dataset::{Format, TransactionDataset};
use crate::error::{Error, Result};
use crate::measures::{mutual_information, SupportProfile};
use crate::miner::{mine_closed, MinerConfig, PatternSet};
use crate::report::{self, SummaryReport};
use crate::significance::{
    build_null_with, estimate_fdr, observed_statistics, seeded_shuffles, FdrResult, Statistic,
    DEFAULT_PERMUTATIONS, DEFAULT_SEED,
};

/// Tolerance for the floating-point side of `synergy <= improvement`.
pub const ORDER_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct AnalysisConfig {
    pub miner: MinerConfig,
    pub params: CharParams,
    /// `0` skips significance testing.
    pub permutations: usize,
    pub seed: u64,
    pub statistic: Statistic,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig {
            miner: MinerConfig::default(),
            params: CharParams::default(),
            permutations: DEFAULT_PERMUTATIONS,
            seed: DEFAULT_SEED,
            statistic: Statistic::default(),
        }
    }
}

impl AnalysisConfig {
    /// Miner and characterizer share one MI threshold.
    pub fn with_delta(mut self, delta: f64) -> Self {
        self.miner.delta = delta;
        self.params.delta = delta;
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.miner.validate()?;
        self.params.validate()?;
        if self.miner.delta != self.params.delta {
            return Err(Error::Config("miner and characterizer delta differ".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct Analysis {
    pub closed: PatternSet,
    /// Indices into `closed` of the discriminative patterns.
    pub discriminative_idx: Vec<usize>,
    pub characterized: Vec<Characterized>,
    /// FDR over the whole closed set; `None` when no permutations were run.
    pub fdr: Option<FdrResult>,
}

impl Analysis {
    /// FDR of each discriminative pattern, aligned with `characterized`.
    pub fn discriminative_fdr(&self) -> Option<Vec<f64>> {
        self.fdr
            .as_ref()
            .map(|f| self.discriminative_idx.iter().map(|&i| f.fdr[i]).collect())
    }
}

pub fn analyze(ds: &TransactionDataset, cfg: &AnalysisConfig) -> Result<Analysis> {
    cfg.validate()?;
    let characterizer = Characterizer::new(cfg.params)?;
    let closed = mine_closed(ds, &cfg.miner)?;
    let discriminative_idx: Vec<usize> = closed
        .iter()
        .enumerate()
        .filter(|(_, p)| mutual_information(&SupportProfile::of(ds, p)) > cfg.miner.delta)
        .map(|(i, _)| i)
        .collect();
    let discriminative = closed.retain_indices(|i, _| discriminative_idx.binary_search(&i).is_ok());
    let characterized = characterizer.characterize_all(ds, &discriminative)?;
    check_invariants(&characterized)?;

    let fdr = if cfg.permutations == 0 {
        None
    } else {
        let observed = observed_statistics(ds, &closed, cfg.statistic, Some(&characterizer))?;
        let null = build_null_with(
            ds,
            &closed,
            &seeded_shuffles(cfg.permutations, cfg.seed),
            cfg.statistic,
            Some(&characterizer),
        )?;
        Some(estimate_fdr(&null, &observed)?)
    };
    Ok(Analysis {
        closed,
        discriminative_idx,
        characterized,
        fdr,
    })
}

/// Ordering and exclusivity relations that must hold on every pattern.
pub fn check_invariants(rows: &[Characterized]) -> Result<()> {
    for c in rows {
        let s = &c.stats;
        let name = || format!("{:?}", s.pattern.items);
        if !(0.0..=1.0).contains(&s.mi) {
            return Err(Error::Invariant(format!("MI out of range for {}", name())));
        }
        if s.improvement > s.incoherence + ORDER_TOLERANCE && s.pattern.len() >= 2 {
            return Err(Error::Invariant(format!("improvement > incoherence for {}", name())));
        }
        if let Some(syn) = s.synergy {
            if syn > s.improvement + ORDER_TOLERANCE {
                return Err(Error::Invariant(format!("synergy > improvement for {}", name())));
            }
        }
        if let Some(agg) = s.best_aggregated_mi {
            if agg + ORDER_TOLERANCE < s.subset_mi_max {
                return Err(Error::Invariant(format!("aggregated MI < subset MI for {}", name())));
            }
        }
        if c.labels.t4 && !c.labels.t3 {
            return Err(Error::Invariant(format!("T4 without T3 for {}", name())));
        }
        if c.labels.t2 && c.labels.t3 {
            return Err(Error::Invariant(format!("T2 and T3 together for {}", name())));
        }
    }
    Ok(())
}

/// Input, analysis settings and output directory of one CLI invocation.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub input: PathBuf,
    pub format: Format,
    pub analysis: AnalysisConfig,
    pub out_dir: PathBuf,
}

pub fn dataset_name(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default()
}

/// Runs the full pipeline and writes `patterns.tsv`, `summary.json` and the
/// scatter files.
pub fn run(cfg: &RunConfig) -> Result<SummaryReport> {
    cfg.analysis.validate()?;
    let ds = TransactionDataset::load(&cfg.input, cfg.format)?;
    let analysis = analyze(&ds, &cfg.analysis)?;
    report::ensure_dir(&cfg.out_dir)?;
    let fdr = analysis.discriminative_fdr();
    let patterns = report::patterns_tsv(&ds, &analysis.characterized, fdr.as_deref());
    let summary = report::summarize(
        &dataset_name(&cfg.input),
        &ds,
        analysis.closed.len(),
        &analysis.characterized,
    );
    report::write_atomic(&cfg.out_dir.join(report::PATTERNS_FILE), patterns.as_bytes())?;
    report::write_atomic(
        &cfg.out_dir.join(report::SUMMARY_FILE),
        report::summary_json(&summary).as_bytes(),
    )?;
    write_plot_data(&cfg.out_dir, &patterns)?;
    Ok(summary)
}

fn write_plot_data(out_dir: &Path, patterns_text: &str) -> Result<()> {
    let table = report::PatternTable::parse(patterns_text)?;
    for (name, body) in report::scatter_files(&table)? {
        report::write_atomic(&out_dir.join(name), body.as_bytes())?;
    }
    Ok(())
}

/// Regenerates the scatter files from an existing `patterns.tsv`.
pub fn plotdata(out_dir: &Path) -> Result<()> {
    let path = out_dir.join(report::PATTERNS_FILE);
    let text = std::fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
    write_plot_data(out_dir, &text)
}
