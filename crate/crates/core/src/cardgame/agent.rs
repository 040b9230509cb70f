//! Greedy turn-local agent.
//!
//! Random action sequences are rolled out to the end of the current turn and
//! the end state is scored with a linear heuristic. Reached states are kept
//! in a transposition table so each one is expanded and scored at most once
//! per turn.

use std::collections::HashMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::state::{apply_action, legal_actions, Action, GameState, STARTING_HEALTH};
use super::{CardCatalog, GameError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Style {
    Aggro,
    Control,
}

impl std::str::FromStr for Style {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "aggro" => Ok(Style::Aggro),
            "control" => Ok(Style::Control),
            other => Err(format!("unknown style {other:?} (expected aggro or control)")),
        }
    }
}

/// Coefficients of the end-of-turn evaluation, scored from the point of view
/// of the player who just moved.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HeuristicWeights {
    pub style: Style,
    pub opponent_hero_damage: f64,
    pub own_hero_health: f64,
    pub own_board_attack: f64,
    pub own_board_health: f64,
    pub opponent_board_attack: f64,
    pub opponent_board_health: f64,
    pub hand_size: f64,
}

impl HeuristicWeights {
    pub fn aggro() -> Self {
        HeuristicWeights {
            style: Style::Aggro,
            opponent_hero_damage: 3.0,
            own_hero_health: 0.5,
            own_board_attack: 1.0,
            own_board_health: 0.5,
            opponent_board_attack: -0.5,
            opponent_board_health: -0.5,
            hand_size: 0.5,
        }
    }

    pub fn control() -> Self {
        HeuristicWeights {
            style: Style::Control,
            opponent_hero_damage: 0.5,
            own_hero_health: 0.5,
            own_board_attack: 2.0,
            own_board_health: 2.0,
            opponent_board_attack: -2.0,
            opponent_board_health: -2.0,
            hand_size: 0.5,
        }
    }

    pub fn preset(style: Style) -> Self {
        match style {
            Style::Aggro => Self::aggro(),
            Style::Control => Self::control(),
        }
    }

    /// Linear score of `state` for `player`. Wins and losses are infinite.
    pub fn score(&self, state: &GameState, player: usize) -> f64 {
        let me = &state.players[player];
        let foe = &state.players[1 - player];
        if foe.hero_health <= 0 && me.hero_health > 0 {
            return f64::INFINITY;
        }
        if me.hero_health <= 0 {
            return f64::NEG_INFINITY;
        }
        self.opponent_hero_damage * f64::from(STARTING_HEALTH - foe.hero_health)
            + self.own_hero_health * f64::from(me.hero_health)
            + self.own_board_attack * f64::from(me.board_attack())
            + self.own_board_health * f64::from(me.board_health())
            + self.opponent_board_attack * f64::from(foe.board_attack())
            + self.opponent_board_health * f64::from(foe.board_health())
            + self.hand_size * me.hand.len() as f64
    }
}

pub const DEFAULT_SAMPLE_BUDGET: usize = 200;

/// A player: heuristic plus the number of random sequences tried per turn.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Agent {
    pub weights: HeuristicWeights,
    pub sample_budget: usize,
}

impl Agent {
    pub fn new(weights: HeuristicWeights, sample_budget: usize) -> Self {
        Agent {
            weights,
            sample_budget,
        }
    }

    pub fn preset(style: Style) -> Self {
        Self::new(HeuristicWeights::preset(style), DEFAULT_SAMPLE_BUDGET)
    }

    /// Ends every turn without acting.
    pub fn passive(weights: HeuristicWeights) -> Self {
        Self::new(weights, 0)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PlanStats {
    pub rollouts: usize,
    /// States whose action list was generated.
    pub expanded: usize,
    /// End states scored.
    pub evaluated: usize,
    /// Arrivals at a state already in the table, or at an end state already
    /// scored.
    pub hash_hits: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TurnPlan {
    /// Ends with `EndTurn` unless the sequence wins the game first.
    pub actions: Vec<Action>,
    pub score: f64,
    pub stats: PlanStats,
}

struct Node {
    actions: Vec<Action>,
    children: Vec<Option<usize>>,
    score: Option<f64>,
}

/// Picks the best of up to `agent.sample_budget` random sequences for the
/// active player.
pub fn plan_turn<R: Rng + ?Sized>(
    state: &GameState,
    catalog: &CardCatalog,
    agent: &Agent,
    rng: &mut R,
) -> Result<TurnPlan, GameError> {
    let me = state.active;
    let weights = &agent.weights;
    let mut stats = PlanStats::default();

    let mut states: Vec<GameState> = vec![state.clone()];
    let mut table: HashMap<GameState, usize> = HashMap::new();
    table.insert(state.clone(), 0);
    let mut nodes = vec![Node {
        actions: legal_actions(state, catalog)?,
        children: Vec::new(),
        score: None,
    }];
    nodes[0].children = vec![None; nodes[0].actions.len()];
    stats.expanded = 1;

    // Ending the turn immediately is always available.
    let root_score = weights.score(state, me);
    nodes[0].score = Some(root_score);
    stats.evaluated = 1;
    let mut best = TurnPlan {
        actions: vec![Action::EndTurn],
        score: root_score,
        stats,
    };

    let mut path = Vec::new();
    for _ in 0..agent.sample_budget {
        stats.rollouts += 1;
        path.clear();
        let mut at = 0usize;
        loop {
            let pick = rng.random_range(0..nodes[at].actions.len());
            let action = nodes[at].actions[pick];
            if action == Action::EndTurn {
                // Score the state reached before ending the turn.
                match nodes[at].score {
                    Some(_) => stats.hash_hits += 1,
                    None => {
                        let s = weights.score(&states[at], me);
                        nodes[at].score = Some(s);
                        stats.evaluated += 1;
                        if s > best.score {
                            best.score = s;
                            best.actions = path.iter().copied().chain([Action::EndTurn]).collect();
                        }
                    }
                }
                break;
            }
            path.push(action);
            let child = match nodes[at].children[pick] {
                Some(child) => child,
                None => {
                    let next = apply_action(&states[at], action, catalog)?;
                    let child = match table.get(&next) {
                        Some(&known) => {
                            stats.hash_hits += 1;
                            known
                        }
                        None => {
                            let id = nodes.len();
                            let (actions, score) = if next.is_over() {
                                stats.evaluated += 1;
                                let s = weights.score(&next, me);
                                if s > best.score {
                                    best.score = s;
                                    best.actions = path.clone();
                                }
                                (Vec::new(), Some(s))
                            } else {
                                stats.expanded += 1;
                                (legal_actions(&next, catalog)?, None)
                            };
                            nodes.push(Node {
                                children: vec![None; actions.len()],
                                actions,
                                score,
                            });
                            table.insert(next.clone(), id);
                            states.push(next);
                            id
                        }
                    };
                    nodes[at].children[pick] = Some(child);
                    child
                }
            };
            at = child;
            if nodes[at].actions.is_empty() {
                // Game over inside the turn.
                break;
            }
        }
    }
    best.stats = stats;
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cardgame::state::{apply_in_place, Minion, Target};
    use crate::cardgame::{Card, CardKind, Keyword};
    use crate::seed;

    fn minion_card(id: &str, cost: u8, atk: u32, hp: u32, kw: &[Keyword]) -> Card {
        Card {
            id: id.into(),
            name: id.into(),
            mana_cost: cost,
            kind: CardKind::Minion,
            attack: Some(atk),
            health: Some(hp),
            keywords: kw.to_vec(),
            spell_effect: None,
            legendary: false,
        }
    }

    fn catalog() -> CardCatalog {
        CardCatalog::new(vec![
            minion_card("a", 1, 1, 2, &[]),
            minion_card("b", 1, 2, 1, &[]),
            minion_card("hitter", 3, 3, 3, &[]),
        ])
        .unwrap()
    }

    fn quiet_state() -> GameState {
        let mut s = GameState::start(vec![2; 20], vec![2; 20]);
        s.players[0].hand.clear();
        s.players[1].hand.clear();
        s
    }

    /// Best score reachable this turn by exhaustive search over all action
    /// sequences.
    fn exhaustive_best(state: &GameState, catalog: &CardCatalog, w: &HeuristicWeights, me: usize) -> f64 {
        let mut best = w.score(state, me);
        for a in legal_actions(state, catalog).unwrap() {
            if a == Action::EndTurn {
                continue;
            }
            let next = apply_action(state, a, catalog).unwrap();
            let s = if next.is_over() {
                w.score(&next, me)
            } else {
                exhaustive_best(&next, catalog, w, me)
            };
            best = best.max(s);
        }
        best
    }

    #[test]
    fn nothing_to_do_means_end_turn() {
        let s = quiet_state();
        let plan = plan_turn(&s, &catalog(), &Agent::preset(Style::Aggro), &mut seed::rng(1)).unwrap();
        assert_eq!(plan.actions, vec![Action::EndTurn]);
    }

    #[test]
    fn finds_lethal() {
        let cat = catalog();
        let mut s = quiet_state();
        s.players[1].hero_health = 2;
        s.players[0].board = vec![Minion {
            card: 2,
            attack: 3,
            health: 3,
            exhausted: false,
            taunt: false,
        }];
        s.players[0].hand = vec![0, 1];
        s.players[0].current_mana = 2;
        let agent = Agent::preset(Style::Aggro);
        let oracle = exhaustive_best(&s, &cat, &agent.weights, 0);
        assert_eq!(oracle, f64::INFINITY);
        let plan = plan_turn(&s, &cat, &agent, &mut seed::rng(5)).unwrap();
        assert_eq!(plan.score, oracle);
        assert!(plan.actions.iter().any(|a| matches!(
            a,
            Action::Attack {
                target: Target::Hero,
                ..
            }
        )));
        let mut end = s.clone();
        for a in &plan.actions {
            apply_in_place(&mut end, *a, &cat).unwrap();
        }
        assert_eq!(end.winner(), Some(0));
    }

    #[test]
    fn transpositions_are_scored_once() {
        let cat = catalog();
        let mut s = quiet_state();
        s.players[0].hand = vec![0, 1];
        s.players[0].current_mana = 2;
        let plan = plan_turn(&s, &cat, &Agent::preset(Style::Control), &mut seed::rng(9)).unwrap();
        // root, {a}, {b}, {a,b}: four distinct states, "a then b" and
        // "b then a" meet in the last one.
        assert_eq!(plan.stats.expanded, 4);
        assert!(plan.stats.evaluated <= 4);
        assert!(plan.stats.hash_hits >= 1);
        assert_eq!(plan.actions.len(), 3);
        assert_eq!(plan.score, exhaustive_best(&s, &cat, &Agent::preset(Style::Control).weights, 0));
    }

    #[test]
    fn planning_is_deterministic() {
        let cat = CardCatalog::desk();
        let deck: Vec<u16> = (0..30).map(|i| (i % 15) as u16).collect();
        let s = GameState::start(deck.clone(), deck);
        let agent = Agent::preset(Style::Aggro);
        let a = plan_turn(&s, &cat, &agent, &mut seed::rng(4)).unwrap();
        let b = plan_turn(&s, &cat, &agent, &mut seed::rng(4)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn zero_budget_passes() {
        let cat = catalog();
        let mut s = quiet_state();
        s.players[0].hand = vec![0, 1];
        s.players[0].current_mana = 2;
        let plan = plan_turn(&s, &cat, &Agent::passive(HeuristicWeights::aggro()), &mut seed::rng(0)).unwrap();
        assert_eq!(plan.actions, vec![Action::EndTurn]);
    }
}
