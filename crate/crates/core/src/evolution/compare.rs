use serde::{Deserialize, Serialize};

use super::EvolutionError;
use crate::archive::SlidingArchive;
use crate::cardgame::{play_game, Agent, CardCatalog, GameOptions};
use crate::deck::Deck;
use crate::seed;

/// Best elite of archive A against best elite of archive B.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HeadToHead {
    pub games: usize,
    pub a_wins: usize,
    pub b_wins: usize,
    pub draws: usize,
    pub a_winrate: f64,
    pub b_winrate: f64,
    pub a_mean_margin: f64,
    pub b_mean_margin: f64,
}

/// Side A moves first in even games.
#[allow(clippy::too_many_arguments)]
pub fn compare_archives(
    catalog: &CardCatalog,
    a: &SlidingArchive<Deck>,
    b: &SlidingArchive<Deck>,
    agent_a: &Agent,
    agent_b: &Agent,
    games: usize,
    seed: u64,
    options: GameOptions,
) -> Result<HeadToHead, EvolutionError> {
    let deck_a = &a.best().ok_or(EvolutionError::EmptyArchive)?.genome;
    let deck_b = &b.best().ok_or(EvolutionError::EmptyArchive)?.genome;
    head_to_head(catalog, deck_a, deck_b, agent_a, agent_b, games, seed, options)
}

#[allow(clippy::too_many_arguments)]
pub(crate) fn head_to_head(
    catalog: &CardCatalog,
    deck_a: &Deck,
    deck_b: &Deck,
    agent_a: &Agent,
    agent_b: &Agent,
    games: usize,
    seed: u64,
    options: GameOptions,
) -> Result<HeadToHead, EvolutionError> {
    use rayon::prelude::*;
    if games == 0 {
        return Err(EvolutionError::Config("games must be >= 1".into()));
    }
    let results = (0..games)
        .into_par_iter()
        .map(|g| {
            let s = seed::derive(seed, g as u64);
            let a_first = g % 2 == 0;
            let out = if a_first {
                play_game(catalog, deck_a, deck_b, agent_a, agent_b, s, options)?
            } else {
                play_game(catalog, deck_b, deck_a, agent_b, agent_a, s, options)?
            };
            let a_seat = if a_first { 0 } else { 1 };
            Ok((out.winner.map(|w| w == a_seat), out.final_health[a_seat] - out.final_health[1 - a_seat]))
        })
        .collect::<Result<Vec<_>, EvolutionError>>()?;
    let a_wins = results.iter().filter(|r| r.0 == Some(true)).count();
    let b_wins = results.iter().filter(|r| r.0 == Some(false)).count();
    let margin: i64 = results.iter().map(|r| i64::from(r.1)).sum();
    let n = games as f64;
    Ok(HeadToHead {
        games,
        a_wins,
        b_wins,
        draws: games - a_wins - b_wins,
        a_winrate: a_wins as f64 / n,
        b_winrate: b_wins as f64 / n,
        a_mean_margin: margin as f64 / n,
        b_mean_margin: -(margin as f64) / n,
    })
}
