use std::path::{Path, PathBuf};

use super::{run_log_tsv, samples_tsv, save_snapshot, write_text, ArchiveSnapshot, IoError, RunFile, CATALOG_BUILTIN, CATALOG_DESK};
use crate::archive::SlidingArchive;
use crate::deck::Deck;
use crate::evolution::{run_mesb_observed, LogEntry, RunLog};

pub const SNAPSHOT_FILE: &str = "archive.snap";
pub const RUN_LOG_FILE: &str = "run_log.tsv";
pub const SAMPLES_FILE: &str = "samples.tsv";
pub const CONFIG_ECHO_FILE: &str = "config.toml";
pub const SEED_FILE: &str = "seed.txt";
pub const CATALOG_FILE: &str = "catalog.json";

#[derive(Debug)]
pub struct RunArtifacts {
    pub archive: SlidingArchive<Deck>,
    pub log: RunLog,
    pub echo: RunFile,
    pub snapshot: PathBuf,
    pub run_log: PathBuf,
}

/// Runs `file` and writes the snapshot, run log, sample table, resolved
/// config echo and seed into `out_dir`. A catalog read from a file is
/// copied next to the echo so the echo runs from `out_dir` alone.
/// `workers` sets the evaluation pool width (default: all cores).
pub fn run_to_dir<F: FnMut(&LogEntry) + Send>(
    file: &RunFile,
    base_dir: &Path,
    out_dir: &Path,
    workers: Option<usize>,
    observe: F,
) -> Result<RunArtifacts, IoError> {
    let catalog = file.load_catalog(base_dir)?;
    let (config, mut echo) = file.resolve(&catalog, base_dir)?;
    if echo.catalog != CATALOG_BUILTIN && echo.catalog != CATALOG_DESK {
        write_text(&out_dir.join(CATALOG_FILE), &catalog.to_json())?;
        echo.catalog = CATALOG_FILE.to_string();
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.unwrap_or(0))
        .build()
        .map_err(|e| IoError::Config(format!("worker pool: {e}")))?;
    let (archive, log) = pool.install(|| run_mesb_observed(&config, &catalog, observe))?;

    let paths = |name: &str| out_dir.join(name);
    let snapshot = ArchiveSnapshot::from_archive(&archive, config.seed, &echo.hash());
    save_snapshot(&paths(SNAPSHOT_FILE), &snapshot)?;
    write_text(&paths(RUN_LOG_FILE), &run_log_tsv(&log))?;
    write_text(&paths(SAMPLES_FILE), &samples_tsv(archive.buffer().iter()))?;
    write_text(&paths(CONFIG_ECHO_FILE), &echo.to_toml())?;
    write_text(&paths(SEED_FILE), &format!("{}\n", config.seed))?;
    Ok(RunArtifacts {
        archive,
        log,
        echo,
        snapshot: paths(SNAPSHOT_FILE),
        run_log: paths(RUN_LOG_FILE),
    })
}
