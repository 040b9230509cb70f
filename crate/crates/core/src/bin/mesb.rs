use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use mesb_core::analysis::{
    apply_patch, apriori, card_frequency, check_downward_closure, exact_behavior_distribution, frequency_diff,
    observed_density, uniform_behavior_grid, behavior_bounds, BalancePatch, TransactionSet, DEFAULT_RARE_THRESHOLD,
};
use mesb_core::cardgame::{Agent, CardCatalog, GameOptions, Style, DEFAULT_SAMPLE_BUDGET, DEFAULT_TURN_CAP};
use mesb_core::deck::DECK_SIZE;
use mesb_core::evolution::{compare_archives, DEFAULT_ADVERSARIES};
use mesb_core::io::{
    diff_report, export_density_heatmap, export_heatmap, frequency_table_tsv, head_to_head_tsv, itemsets_tsv,
    load_snapshot, parse_behaviors, parse_frequency_table, read_text, run_to_dir, write_text, FailureClass, IoError,
    RunFile, CATALOG_BUILTIN, CATALOG_DESK, OUT_DIR_ENV,
};

#[derive(Parser)]
#[command(name = "mesb", version, about = "Sliding-boundary MAP-Elites deck search and analysis")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Master seed. Overrides the config file where there is one.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, env = OUT_DIR_ENV, default_value = "mesb-out")]
    out_dir: PathBuf,
}

#[derive(Args)]
struct RunArgs {
    /// Run configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Evaluation threads (default: all cores). Does not affect results.
    #[arg(long)]
    workers: Option<usize>,
    /// Suppress progress lines.
    #[arg(long)]
    quiet: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Evolve decks against the configured opponents.
    Run {
        #[command(flatten)]
        run: RunArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Evolve decks against the top elites of an earlier run.
    Adversaries {
        #[command(flatten)]
        run: RunArgs,
        /// Snapshot to draw opponents from.
        #[arg(long)]
        snapshot: PathBuf,
        #[arg(long, default_value_t = DEFAULT_ADVERSARIES)]
        top_n: usize,
        /// Strategy the adversaries play.
        #[arg(long, default_value = "aggro")]
        style: Style,
        #[command(flatten)]
        common: Common,
    },
    /// Apply a balance patch and write the edited catalog.
    Patch {
        /// `builtin`, `desk` or a catalog file.
        #[arg(long)]
        catalog: String,
        #[arg(long)]
        patch: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Frequent card sets and card frequencies among a snapshot's elites.
    Mine {
        #[arg(long)]
        snapshot: PathBuf,
        #[arg(long)]
        catalog: String,
        #[arg(long, default_value_t = 0.5)]
        min_support: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Exact deck-space density, optionally with observed behaviors and a
    /// snapshot fitness heatmap on the same grid.
    Distribution {
        #[arg(long)]
        catalog: String,
        #[arg(long, default_value_t = 20)]
        resolution: usize,
        #[arg(long, default_value_t = DECK_SIZE)]
        deck_size: usize,
        /// Samples table or run log to bin as the observed density.
        #[arg(long)]
        observed: Option<PathBuf>,
        /// Snapshot to export as a fitness heatmap.
        #[arg(long)]
        snapshot: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Best elite of one snapshot against the best of another.
    Compare {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long)]
        catalog: String,
        #[arg(long, default_value_t = 200)]
        games: usize,
        #[arg(long, default_value = "aggro")]
        style_a: Style,
        #[arg(long, default_value = "aggro")]
        style_b: Style,
        #[arg(long, default_value_t = DEFAULT_SAMPLE_BUDGET)]
        sample_budget: usize,
        #[arg(long, default_value_t = DEFAULT_TURN_CAP)]
        turn_cap: u32,
        #[command(flatten)]
        common: Common,
    },
    /// Change in card frequencies between two mined frequency tables.
    Diff {
        #[arg(long)]
        before: PathBuf,
        #[arg(long)]
        after: PathBuf,
        /// Limit the report to the cards this patch edits.
        #[arg(long)]
        patch: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_RARE_THRESHOLD)]
        threshold: f64,
        #[command(flatten)]
        common: Common,
    },
}

fn load_catalog(name: &str) -> Result<CardCatalog, IoError> {
    match name {
        CATALOG_BUILTIN => Ok(CardCatalog::builtin()),
        CATALOG_DESK => Ok(CardCatalog::desk()),
        path => Ok(CardCatalog::from_json(&read_text(Path::new(path))?)?),
    }
}

fn load_patch(path: &Path) -> Result<BalancePatch, IoError> {
    BalancePatch::from_json(&read_text(path)?)
        .map_err(|e| IoError::Config(format!("{}: {e}", path.display())))
}

fn execute(run: &RunArgs, mut file: RunFile, base: &Path, common: &Common) -> Result<(), IoError> {
    if let Some(seed) = common.seed {
        file.seed = seed;
    }
    let total = file.total_evaluations;
    let step = (total / 20).max(1);
    let quiet = run.quiet;
    let out = run_to_dir(&file, base, &common.out_dir, run.workers, |e| {
        if !quiet && ((e.index + 1) % step == 0 || e.index + 1 == total) {
            eprintln!(
                "eval {}/{total}  resolution {}  occupied {}  best fitness {}  best winrate {:.3}",
                e.index + 1,
                e.resolution,
                e.occupied,
                e.best_fitness,
                e.best_winrate
            );
        }
    })?;
    println!("{}", out.snapshot.display());
    Ok(())
}

fn load_run_file(path: Option<&Path>) -> Result<(RunFile, PathBuf), IoError> {
    match path {
        Some(p) => Ok((
            RunFile::load(p)?,
            p.parent().map(Path::to_path_buf).unwrap_or_default(),
        )),
        None => Ok((RunFile::default(), PathBuf::from("."))),
    }
}

fn dispatch(command: Command) -> Result<(), IoError> {
    match command {
        Command::Run { run, common } => {
            let (file, base) = load_run_file(run.config.as_deref())?;
            execute(&run, file, &base, &common)
        }
        Command::Adversaries {
            run,
            snapshot,
            top_n,
            style,
            common,
        } => {
            let (mut file, base) = load_run_file(run.config.as_deref())?;
            let snapshot = std::path::absolute(&snapshot).map_err(|source| IoError::File {
                path: snapshot.clone(),
                source,
            })?;
            file.opponents.source = "snapshot".into();
            file.opponents.snapshot = Some(snapshot.to_string_lossy().into_owned());
            file.opponents.top_n = top_n;
            file.opponents.style = style;
            execute(&run, file, &base, &common)
        }
        Command::Patch { catalog, patch, common } => {
            let patched = apply_patch(&load_catalog(&catalog)?, &load_patch(&patch)?)?;
            let path = common.out_dir.join("catalog.json");
            write_text(&path, &patched.to_json())?;
            println!("{}", path.display());
            Ok(())
        }
        Command::Mine {
            snapshot,
            catalog,
            min_support,
            common,
        } => {
            let catalog = load_catalog(&catalog)?;
            let archive = load_snapshot(&snapshot)?.to_archive()?;
            let report = apriori(&TransactionSet::from_decks(archive.elites().map(|e| &e.genome)), min_support)?;
            check_downward_closure(&report).map_err(|m| IoError::Empty(format!("closure check failed: {m}")))?;
            let table = card_frequency(&archive, &catalog)?;
            write_text(&common.out_dir.join("itemsets.tsv"), &itemsets_tsv(&report))?;
            write_text(&common.out_dir.join("frequency.tsv"), &frequency_table_tsv(&table))?;
            println!(
                "{} elites, {} frequent itemsets at support {min_support}",
                report.transactions,
                report.len()
            );
            Ok(())
        }
        Command::Distribution {
            catalog,
            resolution,
            deck_size,
            observed,
            snapshot,
            common,
        } => {
            let catalog = load_catalog(&catalog)?;
            let grid = uniform_behavior_grid(&catalog, resolution)?;
            let axes = behavior_bounds(&catalog);
            let exact = exact_behavior_distribution(&catalog, deck_size, &grid)?;
            export_density_heatmap(&exact, axes)?.write(&common.out_dir, "exact")?;
            println!("{} decks", exact.total());
            if let Some(path) = observed {
                let behaviors = parse_behaviors(&read_text(&path)?)?;
                let seen = observed_density(&behaviors, &grid, deck_size)?;
                export_density_heatmap(&seen, axes)?.write(&common.out_dir, "observed")?;
            }
            if let Some(path) = snapshot {
                export_heatmap(&load_snapshot(&path)?)?.write(&common.out_dir, "elites")?;
            }
            Ok(())
        }
        Command::Compare {
            a,
            b,
            catalog,
            games,
            style_a,
            style_b,
            sample_budget,
            turn_cap,
            common,
        } => {
            let catalog = load_catalog(&catalog)?;
            let report = compare_archives(
                &catalog,
                &load_snapshot(&a)?.to_archive()?,
                &load_snapshot(&b)?.to_archive()?,
                &Agent::new(mesb_core::HeuristicWeights::preset(style_a), sample_budget),
                &Agent::new(mesb_core::HeuristicWeights::preset(style_b), sample_budget),
                games,
                common.seed.unwrap_or(0),
                GameOptions { turn_cap },
            )?;
            write_text(&common.out_dir.join("compare.tsv"), &head_to_head_tsv(&report))?;
            println!(
                "a winrate {:.3}, b winrate {:.3}, draws {}",
                report.a_winrate, report.b_winrate, report.draws
            );
            Ok(())
        }
        Command::Diff {
            before,
            after,
            patch,
            threshold,
            common,
        } => {
            let before = parse_frequency_table(&read_text(&before)?)?;
            let after = parse_frequency_table(&read_text(&after)?)?;
            let patch = patch.as_deref().map(load_patch).transpose()?;
            let shifts = frequency_diff(&before, &after, threshold)?;
            let path = common.out_dir.join("diff.tsv");
            write_text(&path, &diff_report(&shifts, patch.as_ref()))?;
            println!("{}", path.display());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let message = e.to_string().split_whitespace().collect::<Vec<_>>().join(" ");
            let class = match e.class() {
                FailureClass::Config => "config",
                FailureClass::File => "file",
                FailureClass::Invariant => "invariant",
            };
            eprintln!("mesb: {class} error: {message}");
            ExitCode::from(e.class().exit_code() as u8)
        }
    }
}
