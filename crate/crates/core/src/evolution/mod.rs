//! Generate, evaluate and insert: the MESB run loop plus the adversary and
//! head-to-head experiments built on it.

mod compare;
mod pool;
mod run;

pub use compare::{compare_archives, HeadToHead};
pub use pool::{build_adversary_pool, starter_decks, starter_pool, DEFAULT_ADVERSARIES};
pub use run::{run_mesb, run_mesb_observed, LogEntry, Origin, RunConfig, RunLog};

use thiserror::Error;

use crate::analysis::AnalysisError;
use crate::archive::ArchiveError;
use crate::cardgame::GameError;
use crate::deck::DeckError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EvolutionError {
    #[error("invalid run config: {0}")]
    Config(String),
    #[error("archive holds {have} elites, {want} requested")]
    NotEnoughElites { have: usize, want: usize },
    #[error("archive is empty")]
    EmptyArchive,
    #[error(transparent)]
    Archive(#[from] ArchiveError),
    #[error(transparent)]
    Game(#[from] GameError),
    #[error(transparent)]
    Deck(#[from] DeckError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
}
