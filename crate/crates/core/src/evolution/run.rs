use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::EvolutionError;
use crate::archive::{ArchiveConfig, BehaviorVector, Elite, EliteStats, InsertOutcome, SlidingArchive};
use crate::cardgame::{evaluate_deck, Agent, CardCatalog, GameOptions, Opponent};
use crate::deck::{behavior_of, mutate_deck, random_deck, validate_deck, Deck, MutationConfig};
use crate::seed;

/// Everything that determines a run. Worker-pool width is deliberately not
/// part of it: results are identical at any width.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub seed: u64,
    pub archive: ArchiveConfig,
    pub games_per_evaluation: usize,
    /// Candidates generated from one archive state and evaluated together.
    pub batch_size: usize,
    /// Leading evaluations that use fresh random decks.
    pub bootstrap_evaluations: usize,
    pub player: Agent,
    pub opponents: Vec<Opponent>,
    pub game: GameOptions,
    pub mutation: MutationConfig,
}

impl RunConfig {
    pub fn new(player: Agent, opponents: Vec<Opponent>) -> Self {
        RunConfig {
            seed: 0,
            archive: ArchiveConfig::default(),
            games_per_evaluation: 200,
            batch_size: 1,
            bootstrap_evaluations: 100,
            player,
            opponents,
            game: GameOptions::default(),
            mutation: MutationConfig::default(),
        }
    }

    pub fn total_evaluations(&self) -> usize {
        self.archive.total_evaluations
    }

    pub fn validate(&self, catalog: &CardCatalog) -> Result<(), EvolutionError> {
        self.archive.validate()?;
        let bad = |m: &str| Err(EvolutionError::Config(m.to_string()));
        if self.games_per_evaluation == 0 {
            return bad("games_per_evaluation must be >= 1");
        }
        if self.batch_size == 0 {
            return bad("batch_size must be >= 1");
        }
        if self.opponents.is_empty() {
            return bad("opponent pool is empty");
        }
        if !(self.mutation.p > 0.0 && self.mutation.p <= 1.0) || self.mutation.max_k == 0 {
            return bad("mutation p must be in (0, 1] and max_k >= 1");
        }
        for (i, opp) in self.opponents.iter().enumerate() {
            if let Err(v) = validate_deck(&opp.deck, catalog) {
                let v: Vec<String> = v.iter().map(ToString::to_string).collect();
                return Err(EvolutionError::Config(format!("opponent {i}: {}", v.join("; "))));
            }
        }
        let capacity = catalog.capacity();
        if capacity < crate::deck::DECK_SIZE {
            return Err(crate::deck::DeckError::CatalogTooSmall {
                capacity,
                needed: crate::deck::DECK_SIZE,
            }
            .into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Origin {
    Random,
    Mutant,
}

impl Origin {
    pub fn as_str(self) -> &'static str {
        match self {
            Origin::Random => "random",
            Origin::Mutant => "mutant",
        }
    }
}

/// One evaluated candidate. Aggregates describe the archive right after
/// the candidate was offered.
#[derive(Debug, Clone, PartialEq)]
pub struct LogEntry {
    pub index: usize,
    pub origin: Origin,
    pub behavior: BehaviorVector,
    pub fitness: f64,
    pub winrate: f64,
    pub outcome: InsertOutcome,
    /// Grid resolution the candidate was placed under.
    pub resolution: usize,
    pub occupied: usize,
    pub best_fitness: f64,
    pub best_winrate: f64,
    pub mean_winrate: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct RunLog {
    pub entries: Vec<LogEntry>,
}

impl RunLog {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn behaviors(&self) -> impl Iterator<Item = &BehaviorVector> {
        self.entries.iter().map(|e| &e.behavior)
    }
}

struct Candidate {
    index: usize,
    origin: Origin,
    deck: Deck,
}

pub fn run_mesb(config: &RunConfig, catalog: &CardCatalog) -> Result<(SlidingArchive<Deck>, RunLog), EvolutionError> {
    run_mesb_observed(config, catalog, |_| {})
}

/// Runs the loop and calls `observe` after each candidate is offered.
///
/// Candidates in a batch pick parents from the archive as it stood at the
/// start of the batch and are offered in index order. Every random draw is
/// seeded from the master seed and the evaluation index, so the run does
/// not depend on the worker-pool width.
pub fn run_mesb_observed<F: FnMut(&LogEntry)>(
    config: &RunConfig,
    catalog: &CardCatalog,
    mut observe: F,
) -> Result<(SlidingArchive<Deck>, RunLog), EvolutionError> {
    config.validate(catalog)?;
    let mut archive = SlidingArchive::new(config.archive.clone(), 2)?;
    let mut log = RunLog::default();
    let breeding_seed = seed::derive(config.seed, 0);
    let evaluation_seed = seed::derive(config.seed, 1);
    let total = config.total_evaluations();

    let mut start = 0;
    while start < total {
        let end = (start + config.batch_size).min(total);
        let candidates = (start..end)
            .map(|index| {
                let mut rng = seed::rng_for(breeding_seed, index as u64);
                if index < config.bootstrap_evaluations || archive.is_empty() {
                    Ok(Candidate {
                        index,
                        origin: Origin::Random,
                        deck: random_deck(catalog, &mut rng)?,
                    })
                } else {
                    let parent = archive.select_random_elite(&mut rng)?;
                    Ok(Candidate {
                        index,
                        origin: Origin::Mutant,
                        deck: mutate_deck(&parent.genome, catalog, &mut rng, &config.mutation),
                    })
                }
            })
            .collect::<Result<Vec<_>, EvolutionError>>()?;

        let results = candidates
            .par_iter()
            .map(|c| {
                evaluate_deck(
                    catalog,
                    &c.deck,
                    &config.player,
                    &config.opponents,
                    config.games_per_evaluation,
                    seed::derive(evaluation_seed, c.index as u64),
                    config.game,
                )
            })
            .collect::<Result<Vec<_>, _>>()?;

        for (c, r) in candidates.into_iter().zip(results) {
            let behavior = behavior_of(&c.deck, catalog);
            let resolution = archive.resolution();
            let outcome = archive.try_insert(Elite {
                genome: c.deck,
                behavior: behavior.clone(),
                fitness: r.fitness,
                stats: EliteStats {
                    winrate: r.winrate,
                    games: r.games,
                },
            })?;
            let entry = summarize(&archive, c.index, c.origin, behavior, r.fitness, r.winrate, outcome, resolution);
            observe(&entry);
            log.entries.push(entry);
        }
        start = end;
    }
    Ok((archive, log))
}

#[allow(clippy::too_many_arguments)]
fn summarize(
    archive: &SlidingArchive<Deck>,
    index: usize,
    origin: Origin,
    behavior: BehaviorVector,
    fitness: f64,
    winrate: f64,
    outcome: InsertOutcome,
    resolution: usize,
) -> LogEntry {
    let occupied = archive.len();
    let best_fitness = archive.best().map_or(f64::NEG_INFINITY, |e| e.fitness);
    let best_winrate = archive.elites().map(|e| e.stats.winrate).fold(0.0, f64::max);
    let mean_winrate = if occupied == 0 {
        0.0
    } else {
        archive.elites().map(|e| e.stats.winrate).sum::<f64>() / occupied as f64
    };
    LogEntry {
        index,
        origin,
        behavior,
        fitness,
        winrate,
        outcome,
        resolution,
        occupied,
        best_fitness,
        best_winrate,
        mean_winrate,
    }
}
