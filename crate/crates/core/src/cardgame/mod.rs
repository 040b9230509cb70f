//! Simplified collectible card game used to evaluate decks.

mod agent;
mod card;
mod game;
pub mod state;

pub use agent::{plan_turn, Agent, HeuristicWeights, PlanStats, Style, TurnPlan, DEFAULT_SAMPLE_BUDGET};
pub use card::{Card, CardCatalog, CardKind, Keyword, SpellEffect, SpellTarget, MAX_MANA_COST};
pub use game::{evaluate_deck, play_game, FitnessResult, GameOptions, GameOutcome, Opponent, DEFAULT_TURN_CAP};
pub use state::{
    apply_action, apply_in_place, legal_actions, Action, GameState, Minion, PlayerState, Target, BOARD_LIMIT, HAND_LIMIT,
    MAX_MANA, OPENING_HAND, STARTING_HEALTH,
};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GameError {
    #[error("invalid card {0:?}: {1}")]
    InvalidCard(String, String),
    #[error("catalog is empty")]
    EmptyCatalog,
    #[error("catalog error: {0}")]
    Catalog(String),
    #[error("game is over")]
    GameOver,
    #[error("illegal action {0}")]
    IllegalAction(String),
    #[error("invalid deck: {0}")]
    InvalidDeck(String),
    #[error("opponent pool is empty")]
    NoOpponents,
    #[error("at least one game is required")]
    NoGames,
}
