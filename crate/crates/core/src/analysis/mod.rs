//! Post-run analytics over archives and catalogs.

mod apriori;
mod density;
mod frequency;
mod patch;

pub use apriori::{apriori, check_downward_closure, FrequentItemset, ItemsetReport, TransactionSet};
pub use density::{
    behavior_bounds, exact_behavior_distribution, exact_moment_counts, observed_density, uniform_behavior_grid,
    DensityGrid, MomentCounts,
};
pub use frequency::{card_frequency, frequency_diff, FrequencyShift, FrequencyTable, DEFAULT_RARE_THRESHOLD};
pub use patch::{apply_patch, BalancePatch, PatchEdit, PatchField};

use thiserror::Error;

use crate::archive::ArchiveError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalysisError {
    #[error("no transactions")]
    NoTransactions,
    #[error("minimum support must be in (0, 1], got {0}")]
    BadSupport(f64),
    #[error("archive is empty")]
    EmptyArchive,
    #[error("patch rejected: {}", .0.join("; "))]
    Patch(Vec<String>),
    #[error("frequency tables cover different cards: {0}")]
    UniverseMismatch(String),
    #[error("catalog holds at most {capacity} cards, deck size is {deck_size}")]
    CapacityShortfall { capacity: usize, deck_size: usize },
    #[error("density grid must be two-dimensional")]
    GridShape,
    #[error(transparent)]
    Archive(#[from] ArchiveError),
}
