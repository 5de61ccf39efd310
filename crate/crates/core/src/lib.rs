//! Discriminative pattern mining and interaction-type characterization.
//!
//! Closed frequent itemsets are mined from labeled binary transactions,
//! scored by normalized mutual information with the class, and labeled as
//! driver-passenger (T1), coherent (T2), independent-additive (T3) or
//! synergistic (T4). Label-permutation nulls give per-pattern FDR estimates.

pub mod bitmap;
pub mod characterize;
pub mod dataset;
pub mod error;
pub mod measures;
pub mod miner;
pub mod pipeline;
pub mod report;
pub mod significance;
pub mod synth;

pub use characterize::{CharParams, Characterized, Characterizer, PatternStats, TypeLabels};
pub use dataset::{load_transactions, Format, ItemId, Label, Pattern, Shuffle, TransactionDataset};
pub use error::{Error, Result};
pub use measures::{Direction, SupportProfile};
pub use miner::{brute_force_closed, filter_discriminative, mine_closed, MinerConfig, PatternSet};
pub use pipeline::{analyze, Analysis, AnalysisConfig, RunConfig};
pub use significance::{build_null, estimate_fdr, fdr_at, significant_patterns, FdrResult, NullDistribution, Statistic};
