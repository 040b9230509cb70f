//! Line-oriented file formats: run configs, archive snapshots, delimited
//! tables and heatmap exports.

mod config;
mod heatmap;
mod run;
mod snapshot;
mod tables;

pub use config::{OpponentEntry, OpponentSection, PlayerSection, RunFile, WeightOverrides, CATALOG_BUILTIN, CATALOG_DESK};
pub use heatmap::{export_density_heatmap, export_heatmap, HeatmapFiles};
pub use run::{
    run_to_dir, RunArtifacts, CATALOG_FILE, CONFIG_ECHO_FILE, RUN_LOG_FILE, SAMPLES_FILE, SEED_FILE, SNAPSHOT_FILE,
};
pub use snapshot::{load_snapshot, save_snapshot, ArchiveSnapshot, CellRecord};
pub use tables::{
    diff_report, frequency_table_tsv, head_to_head_tsv, itemsets_tsv, parse_behaviors, parse_frequency_table, run_log_tsv,
    samples_tsv,
};

use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::analysis::AnalysisError;
use crate::archive::ArchiveError;
use crate::cardgame::GameError;
use crate::deck::DeckError;
use crate::evolution::EvolutionError;

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "MESB_OUT_DIR";

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{}: {source}", path.display())]
    File {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{what} line {line}: {message}")]
    Parse { what: String, line: usize, message: String },
    #[error("{0}")]
    Config(String),
    #[error("nothing to export: {0}")]
    Empty(String),
    #[error(transparent)]
    Archive(#[from] ArchiveError),
    #[error(transparent)]
    Game(#[from] GameError),
    #[error(transparent)]
    Deck(#[from] DeckError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error(transparent)]
    Evolution(#[from] EvolutionError),
}

/// Failure classes, each with its own process exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FailureClass {
    Config,
    File,
    Invariant,
}

impl FailureClass {
    pub fn exit_code(self) -> i32 {
        match self {
            FailureClass::Config => 2,
            FailureClass::File => 3,
            FailureClass::Invariant => 4,
        }
    }
}

impl IoError {
    pub fn class(&self) -> FailureClass {
        match self {
            IoError::File { .. } => FailureClass::File,
            IoError::Parse { .. } | IoError::Config(_) => FailureClass::Config,
            IoError::Evolution(EvolutionError::Config(_)) => FailureClass::Config,
            _ => FailureClass::Invariant,
        }
    }

    pub(crate) fn parse(what: impl Into<String>, line: usize, message: impl Into<String>) -> Self {
        IoError::Parse {
            what: what.into(),
            line,
            message: message.into(),
        }
    }
}

pub fn read_text(path: &Path) -> Result<String, IoError> {
    std::fs::read_to_string(path).map_err(|source| IoError::File {
        path: path.to_path_buf(),
        source,
    })
}

/// Writes `text`, creating parent directories.
pub fn write_text(path: &Path, text: &str) -> Result<(), IoError> {
    let wrap = |source| IoError::File {
        path: path.to_path_buf(),
        source,
    };
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(wrap)?;
    }
    std::fs::write(path, text).map_err(wrap)
}
