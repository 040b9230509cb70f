//! C interface to `mesb-core`.
//!
//! Every function returns a [`MesbStatus`]. On failure the message is
//! available from [`mesb_last_error`] on the same thread. Handles are
//! opaque and owned by the caller, who releases them with the matching
//! `_free` function. Strings returned through `char **` are released with
//! [`mesb_string_free`]. Decks are passed as comma-separated card ids.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use num_bigint::BigUint;

use mesb_core::archive::{ArchiveConfig, Elite, EliteStats, SlidingArchive};
use mesb_core::cardgame::{play_game, Agent, CardCatalog, GameOptions, HeuristicWeights, Style};
use mesb_core::deck::{behavior_of, validate_deck, Deck};
use mesb_core::io::{load_snapshot, run_to_dir, save_snapshot, ArchiveSnapshot, FailureClass, IoError, RunFile};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MesbStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    Config = 3,
    File = 4,
    Invalid = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MesbStyle {
    Aggro = 0,
    Control = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MesbInsertOutcome {
    PlacedNew = 0,
    ReplacedIncumbent = 1,
    Rejected = 2,
}

/// Result of one game. `winner` is 0 or 1, or -1 for a draw. Player 0
/// moved first.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct MesbGameResult {
    pub winner: i32,
    pub health_margin: i32,
    pub final_health: [i32; 2],
    pub turns: u32,
}

pub struct MesbCatalog(CardCatalog);

pub struct MesbArchive {
    archive: SlidingArchive<Deck>,
    seed: u64,
    config_hash: String,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

struct Failure(MesbStatus, String);

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        let status = match e.class() {
            FailureClass::Config => MesbStatus::Config,
            FailureClass::File => MesbStatus::File,
            FailureClass::Invariant => MesbStatus::Invalid,
        };
        Failure(status, e.to_string())
    }
}

fn invalid(e: impl ToString) -> Failure {
    Failure(MesbStatus::Invalid, e.to_string())
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> MesbStatus {
    let (status, message) = match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => (MesbStatus::Ok, String::new()),
        Ok(Err(Failure(status, message))) => (status, message),
        Err(_) => (MesbStatus::Panic, "internal panic".to_string()),
    };
    let message = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = message);
    status
}

unsafe fn str_arg<'a>(p: *const c_char, name: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure(MesbStatus::NullArgument, format!("{name} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(MesbStatus::InvalidUtf8, format!("{name} is not UTF-8")))
}

unsafe fn ref_arg<'a, T>(p: *const T, name: &str) -> Result<&'a T, Failure> {
    p.as_ref()
        .ok_or_else(|| Failure(MesbStatus::NullArgument, format!("{name} is null")))
}

unsafe fn out_arg<'a, T>(p: *mut T, name: &str) -> Result<&'a mut T, Failure> {
    p.as_mut()
        .ok_or_else(|| Failure(MesbStatus::NullArgument, format!("{name} is null")))
}

fn owned_string(s: String) -> *mut c_char {
    CString::new(s).map_or(ptr::null_mut(), CString::into_raw)
}

fn style(s: MesbStyle) -> Style {
    match s {
        MesbStyle::Aggro => Style::Aggro,
        MesbStyle::Control => Style::Control,
    }
}

/// Message for the last failed call on this thread; empty after a success.
/// Valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn mesb_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mesb_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mesb_catalog_builtin(out: *mut *mut MesbCatalog) -> MesbStatus {
    guard(|| {
        *out_arg(out, "out")? = Box::into_raw(Box::new(MesbCatalog(CardCatalog::builtin())));
        Ok(())
    })
}

/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mesb_catalog_desk(out: *mut *mut MesbCatalog) -> MesbStatus {
    guard(|| {
        *out_arg(out, "out")? = Box::into_raw(Box::new(MesbCatalog(CardCatalog::desk())));
        Ok(())
    })
}

/// Parses a catalog from its JSON text.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mesb_catalog_from_json(json: *const c_char, out: *mut *mut MesbCatalog) -> MesbStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        let catalog = CardCatalog::from_json(str_arg(json, "json")?).map_err(|e| Failure(MesbStatus::Config, e.to_string()))?;
        *out = Box::into_raw(Box::new(MesbCatalog(catalog)));
        Ok(())
    })
}

/// # Safety
/// `catalog` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mesb_catalog_free(catalog: *mut MesbCatalog) {
    if !catalog.is_null() {
        drop(Box::from_raw(catalog));
    }
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn mesb_catalog_len(catalog: *const MesbCatalog, out: *mut usize) -> MesbStatus {
    guard(|| {
        *out_arg(out, "out")? = ref_arg(catalog, "catalog")?.0.len();
        Ok(())
    })
}

/// `MESB_STATUS_OK` if the deck is legal for the catalog, otherwise
/// `MESB_STATUS_INVALID` with every violation in the error message.
///
/// # Safety
/// `catalog` must be a valid handle and `deck` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn mesb_deck_validate(catalog: *const MesbCatalog, deck: *const c_char) -> MesbStatus {
    guard(|| {
        let catalog = &ref_arg(catalog, "catalog")?.0;
        let deck = Deck::parse_literal(str_arg(deck, "deck")?);
        validate_deck(&deck, catalog).map_err(|v| {
            invalid(v.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))
        })
    })
}

/// Mean and population variance of the deck's mana costs.
///
/// # Safety
/// Pointers must be valid; `deck` NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn mesb_deck_behavior(
    catalog: *const MesbCatalog,
    deck: *const c_char,
    mean: *mut f64,
    variance: *mut f64,
) -> MesbStatus {
    guard(|| {
        let catalog = &ref_arg(catalog, "catalog")?.0;
        let deck = Deck::parse_literal(str_arg(deck, "deck")?);
        let (mean, variance) = (out_arg(mean, "mean")?, out_arg(variance, "variance")?);
        deck.to_indices(catalog).map_err(invalid)?;
        let b = behavior_of(&deck, catalog);
        *mean = b.values()[0];
        *variance = b.values()[1];
        Ok(())
    })
}

/// Plays one game with preset heuristics. `turn_cap` 0 uses the default.
///
/// # Safety
/// Pointers must be valid; deck strings NUL-terminated.
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn mesb_play_game(
    catalog: *const MesbCatalog,
    first_deck: *const c_char,
    second_deck: *const c_char,
    first_style: MesbStyle,
    second_style: MesbStyle,
    sample_budget: usize,
    turn_cap: u32,
    seed: u64,
    out: *mut MesbGameResult,
) -> MesbStatus {
    guard(|| {
        let catalog = &ref_arg(catalog, "catalog")?.0;
        let first = Deck::parse_literal(str_arg(first_deck, "first_deck")?);
        let second = Deck::parse_literal(str_arg(second_deck, "second_deck")?);
        let out = out_arg(out, "out")?;
        let agent = |s| Agent::new(HeuristicWeights::preset(style(s)), sample_budget);
        let options = if turn_cap == 0 { GameOptions::default() } else { GameOptions { turn_cap } };
        let r = play_game(catalog, &first, &second, &agent(first_style), &agent(second_style), seed, options)
            .map_err(invalid)?;
        *out = MesbGameResult {
            winner: r.winner.map_or(-1, |w| w as i32),
            health_margin: r.health_margin,
            final_health: r.final_health,
            turns: r.turns,
        };
        Ok(())
    })
}

/// Number of legal decks of `deck_size` cards, as a decimal string.
///
/// # Safety
/// Pointers must be valid. Free the string with `mesb_string_free`.
#[no_mangle]
pub unsafe extern "C" fn mesb_exact_deck_count(
    catalog: *const MesbCatalog,
    deck_size: usize,
    out: *mut *mut c_char,
) -> MesbStatus {
    guard(|| {
        let catalog = &ref_arg(catalog, "catalog")?.0;
        let out = out_arg(out, "out")?;
        let counts = mesb_core::analysis::exact_moment_counts(catalog, deck_size).map_err(invalid)?;
        let total: BigUint = counts.values().sum();
        *out = owned_string(total.to_string());
        Ok(())
    })
}

/// Empty archive with default parameters and the given evaluation budget.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mesb_archive_new(total_evaluations: usize, out: *mut *mut MesbArchive) -> MesbStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        let config = ArchiveConfig {
            total_evaluations,
            ..ArchiveConfig::default()
        };
        let archive = SlidingArchive::new(config, 2).map_err(invalid)?;
        *out = Box::into_raw(Box::new(MesbArchive {
            archive,
            seed: 0,
            config_hash: String::new(),
        }));
        Ok(())
    })
}

/// Offers a deck; its behavior is computed from the catalog.
///
/// # Safety
/// Pointers must be valid; `deck` NUL-terminated.
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn mesb_archive_insert(
    archive: *mut MesbArchive,
    catalog: *const MesbCatalog,
    deck: *const c_char,
    fitness: f64,
    winrate: f64,
    games: u32,
    outcome: *mut MesbInsertOutcome,
) -> MesbStatus {
    guard(|| {
        let handle = out_arg(archive, "archive")?;
        let catalog = &ref_arg(catalog, "catalog")?.0;
        let deck = Deck::parse_literal(str_arg(deck, "deck")?);
        let outcome = out_arg(outcome, "outcome")?;
        validate_deck(&deck, catalog).map_err(|v| {
            invalid(v.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))
        })?;
        let behavior = behavior_of(&deck, catalog);
        let result = handle
            .archive
            .try_insert(Elite {
                genome: deck,
                behavior,
                fitness,
                stats: EliteStats { winrate, games },
            })
            .map_err(invalid)?;
        *outcome = match result {
            mesb_core::InsertOutcome::PlacedNew => MesbInsertOutcome::PlacedNew,
            mesb_core::InsertOutcome::ReplacedIncumbent => MesbInsertOutcome::ReplacedIncumbent,
            mesb_core::InsertOutcome::Rejected => MesbInsertOutcome::Rejected,
        };
        Ok(())
    })
}

/// Number of occupied cells.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn mesb_archive_len(archive: *const MesbArchive, out: *mut usize) -> MesbStatus {
    guard(|| {
        *out_arg(out, "out")? = ref_arg(archive, "archive")?.archive.len();
        Ok(())
    })
}

/// Fitness and deck of the best elite. Free `deck` with
/// `mesb_string_free`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn mesb_archive_best(
    archive: *const MesbArchive,
    fitness: *mut f64,
    deck: *mut *mut c_char,
) -> MesbStatus {
    guard(|| {
        let handle = ref_arg(archive, "archive")?;
        let (fitness, deck) = (out_arg(fitness, "fitness")?, out_arg(deck, "deck")?);
        let best = handle.archive.best().ok_or_else(|| invalid("archive is empty"))?;
        *fitness = best.fitness;
        *deck = owned_string(best.genome.to_literal());
        Ok(())
    })
}

/// # Safety
/// `archive` must be a valid handle and `path` NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn mesb_archive_save(archive: *const MesbArchive, path: *const c_char) -> MesbStatus {
    guard(|| {
        let handle = ref_arg(archive, "archive")?;
        let snapshot = ArchiveSnapshot::from_archive(&handle.archive, handle.seed, &handle.config_hash);
        Ok(save_snapshot(Path::new(str_arg(path, "path")?), &snapshot)?)
    })
}

/// # Safety
/// `path` must be NUL-terminated and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mesb_archive_load(path: *const c_char, out: *mut *mut MesbArchive) -> MesbStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        let snapshot = load_snapshot(Path::new(str_arg(path, "path")?))?;
        let archive = snapshot.to_archive()?;
        *out = Box::into_raw(Box::new(MesbArchive {
            archive,
            seed: snapshot.seed,
            config_hash: snapshot.config_hash,
        }));
        Ok(())
    })
}

/// # Safety
/// `archive` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mesb_archive_free(archive: *mut MesbArchive) {
    if !archive.is_null() {
        drop(Box::from_raw(archive));
    }
}

/// Runs a configuration file and writes all run outputs into `out_dir`.
/// `workers` 0 uses every core. `out` may be null; otherwise it receives
/// the final archive.
///
/// # Safety
/// Strings must be NUL-terminated; `out` null or valid.
#[no_mangle]
pub unsafe extern "C" fn mesb_run(
    config_path: *const c_char,
    out_dir: *const c_char,
    workers: usize,
    out: *mut *mut MesbArchive,
) -> MesbStatus {
    guard(|| {
        let config_path = Path::new(str_arg(config_path, "config_path")?);
        let out_dir = Path::new(str_arg(out_dir, "out_dir")?);
        let file = RunFile::load(config_path)?;
        let base = config_path.parent().unwrap_or(Path::new("."));
        let workers = (workers > 0).then_some(workers);
        let run = run_to_dir(&file, base, out_dir, workers, |_| {})?;
        if let Some(out) = out.as_mut() {
            *out = Box::into_raw(Box::new(MesbArchive {
                archive: run.archive,
                seed: run.echo.seed,
                config_hash: run.echo.hash(),
            }));
        }
        Ok(())
    })
}
