use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::agent::{plan_turn, Agent};
use super::state::{apply_in_place, GameState};
use super::{CardCatalog, GameError};
use crate::deck::Deck;
use crate::seed;

pub const DEFAULT_TURN_CAP: u32 = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameOptions {
    /// Turns each player may take before the game is called a draw.
    pub turn_cap: u32,
}

impl Default for GameOptions {
    fn default() -> Self {
        GameOptions {
            turn_cap: DEFAULT_TURN_CAP,
        }
    }
}

/// Result of one game. Player 0 moved first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameOutcome {
    pub winner: Option<usize>,
    /// Player 0 final hero health minus player 1 final hero health.
    pub health_margin: i32,
    pub final_health: [i32; 2],
    pub turns: u32,
}

/// Plays `first` (moving first) against `second`.
///
/// Both decks are shuffled from `seed`; the same stream then drives both
/// agents, so the outcome is a pure function of the inputs.
pub fn play_game(
    catalog: &CardCatalog,
    first: &Deck,
    second: &Deck,
    first_agent: &Agent,
    second_agent: &Agent,
    seed: u64,
    options: GameOptions,
) -> Result<GameOutcome, GameError> {
    let mut rng = seed::rng(seed);
    let mut decks = [first.to_indices(catalog)?, second.to_indices(catalog)?];
    for d in &mut decks {
        d.shuffle(&mut rng);
    }
    let [a, b] = decks;
    let mut state = GameState::start(a, b);
    let agents = [first_agent, second_agent];
    let max_turns = options.turn_cap.saturating_mul(2);

    while !state.is_over() && state.turn <= max_turns {
        let plan = plan_turn(&state, catalog, agents[state.active], &mut rng)?;
        for action in plan.actions {
            apply_in_place(&mut state, action, catalog)?;
        }
    }

    let final_health = [state.players[0].hero_health, state.players[1].hero_health];
    Ok(GameOutcome {
        winner: state.winner(),
        health_margin: final_health[0] - final_health[1],
        final_health,
        turns: state.turn,
    })
}

/// A deck and the agent that plays it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Opponent {
    pub deck: Deck,
    pub agent: Agent,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitnessResult {
    /// Sum over games of own final hero health minus opponent's.
    pub fitness: f64,
    pub winrate: f64,
    pub games: u32,
    pub wins: u32,
    pub draws: u32,
}

/// Plays `games` games against the pool and sums the health margins.
///
/// Game `g` faces opponent `g % pool.len()`; the candidate moves first in
/// even rounds `g / pool.len()`. Each game's seed is derived from `seed` and
/// `g`, so results do not depend on scheduling.
pub fn evaluate_deck(
    catalog: &CardCatalog,
    deck: &Deck,
    agent: &Agent,
    opponents: &[Opponent],
    games: usize,
    seed: u64,
    options: GameOptions,
) -> Result<FitnessResult, GameError> {
    if opponents.is_empty() {
        return Err(GameError::NoOpponents);
    }
    if games == 0 {
        return Err(GameError::NoGames);
    }
    let per_game: Vec<(i32, bool, bool)> = (0..games)
        .into_par_iter()
        .map(|g| {
            let opp = &opponents[g % opponents.len()];
            let game_seed = seed::derive(seed, g as u64);
            let candidate_first = (g / opponents.len()).is_multiple_of(2);
            let out = if candidate_first {
                play_game(catalog, deck, &opp.deck, agent, &opp.agent, game_seed, options)?
            } else {
                play_game(catalog, &opp.deck, deck, &opp.agent, agent, game_seed, options)?
            };
            let me = if candidate_first { 0 } else { 1 };
            let margin = out.final_health[me] - out.final_health[1 - me];
            Ok((margin, out.winner == Some(me), out.winner.is_none()))
        })
        .collect::<Result<_, GameError>>()?;
    Ok(summarize(&per_game))
}

fn summarize(per_game: &[(i32, bool, bool)]) -> FitnessResult {
    let fitness: i64 = per_game.iter().map(|g| i64::from(g.0)).sum();
    let wins = per_game.iter().filter(|g| g.1).count() as u32;
    let draws = per_game.iter().filter(|g| g.2).count() as u32;
    let games = per_game.len() as u32;
    FitnessResult {
        fitness: fitness as f64,
        winrate: f64::from(wins) / f64::from(games),
        games,
        wins,
        draws,
    }
}
