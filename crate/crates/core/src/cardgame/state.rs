//! Game state and the rules subset: minions with taunt and charge, direct
//! damage spells, mana crystals and fatigue.

use serde::{Deserialize, Serialize};

use super::{CardCatalog, CardKind, GameError, Keyword, SpellTarget};

pub const STARTING_HEALTH: i32 = 30;
pub const HAND_LIMIT: usize = 10;
pub const BOARD_LIMIT: usize = 7;
pub const MAX_MANA: u8 = 10;
pub const OPENING_HAND: [usize; 2] = [3, 4];

/// A minion on the board. Field order defines the canonical board order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Minion {
    pub card: u16,
    pub attack: i32,
    pub health: i32,
    pub exhausted: bool,
    pub taunt: bool,
}

/// One side of the table. `hand` and `board` are kept sorted so that states
/// reached through different action orders compare equal. The top of
/// `deck` is its last element.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PlayerState {
    pub hero_health: i32,
    pub mana_crystals: u8,
    pub current_mana: u8,
    pub hand: Vec<u16>,
    pub deck: Vec<u16>,
    pub board: Vec<Minion>,
    pub fatigue: u32,
}

impl PlayerState {
    fn new(deck: Vec<u16>) -> Self {
        PlayerState {
            hero_health: STARTING_HEALTH,
            mana_crystals: 0,
            current_mana: 0,
            hand: Vec::new(),
            deck,
            board: Vec::new(),
            fatigue: 0,
        }
    }

    fn draw(&mut self) {
        match self.deck.pop() {
            Some(card) => {
                if self.hand.len() < HAND_LIMIT {
                    let at = self.hand.partition_point(|&c| c <= card);
                    self.hand.insert(at, card);
                }
                // A full hand burns the card.
            }
            None => {
                self.fatigue += 1;
                self.hero_health -= self.fatigue as i32;
            }
        }
    }

    fn summon(&mut self, minion: Minion) {
        let at = self.board.partition_point(|m| *m <= minion);
        self.board.insert(at, minion);
    }

    fn clear_dead(&mut self) {
        self.board.retain(|m| m.health > 0);
    }

    pub fn has_taunt(&self) -> bool {
        self.board.iter().any(|m| m.taunt)
    }

    pub fn board_attack(&self) -> i32 {
        self.board.iter().map(|m| m.attack).sum()
    }

    pub fn board_health(&self) -> i32 {
        self.board.iter().map(|m| m.health).sum()
    }
}

/// Attack or spell target on the opponent's side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Target {
    Hero,
    Minion(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Action {
    /// Play the card at `hand_index`. `target` is set only for spells that
    /// hit a single enemy minion.
    Play {
        hand_index: usize,
        target: Option<usize>,
    },
    Attack {
        attacker: usize,
        target: Target,
    },
    EndTurn,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GameState {
    pub players: [PlayerState; 2],
    /// Turns started so far, counting both players.
    pub turn: u32,
    pub active: usize,
}

impl GameState {
    /// Deals opening hands from already ordered decks and starts the first
    /// player's turn.
    pub fn start(first_deck: Vec<u16>, second_deck: Vec<u16>) -> Self {
        let mut state = GameState {
            players: [PlayerState::new(first_deck), PlayerState::new(second_deck)],
            turn: 0,
            active: 0,
        };
        for (player, &n) in OPENING_HAND.iter().enumerate() {
            for _ in 0..n {
                state.players[player].draw();
            }
        }
        state.start_turn(0);
        state
    }

    pub fn is_over(&self) -> bool {
        self.players.iter().any(|p| p.hero_health <= 0)
    }

    /// Winning player, if exactly one hero is still standing.
    pub fn winner(&self) -> Option<usize> {
        match (self.players[0].hero_health > 0, self.players[1].hero_health > 0) {
            (true, false) => Some(0),
            (false, true) => Some(1),
            _ => None,
        }
    }

    pub fn active_player(&self) -> &PlayerState {
        &self.players[self.active]
    }

    pub fn opponent(&self) -> &PlayerState {
        &self.players[1 - self.active]
    }

    fn start_turn(&mut self, player: usize) {
        self.turn += 1;
        self.active = player;
        let p = &mut self.players[player];
        p.mana_crystals = (p.mana_crystals + 1).min(MAX_MANA);
        p.current_mana = p.mana_crystals;
        for m in &mut p.board {
            m.exhausted = false;
        }
        p.board.sort();
        p.draw();
    }
}

/// Every distinct action open to the active player, in a fixed order:
/// card plays, then attacks, then end-turn. Duplicate cards in hand and
/// identical minions yield one action each.
pub fn legal_actions(state: &GameState, catalog: &CardCatalog) -> Result<Vec<Action>, GameError> {
    if state.is_over() {
        return Err(GameError::GameOver);
    }
    let me = state.active_player();
    let foe = state.opponent();
    let mut actions = Vec::new();

    for (i, &card_index) in me.hand.iter().enumerate() {
        if i > 0 && me.hand[i - 1] == card_index {
            continue;
        }
        let card = catalog.by_index(card_index as usize);
        if card.mana_cost > me.current_mana {
            continue;
        }
        match card.kind {
            CardKind::Minion => {
                if me.board.len() < BOARD_LIMIT {
                    actions.push(Action::Play {
                        hand_index: i,
                        target: None,
                    });
                }
            }
            CardKind::Spell => {
                let effect = card.spell_effect.expect("validated spell");
                match effect.target {
                    SpellTarget::EnemyHero | SpellTarget::AllEnemyMinions => {
                        actions.push(Action::Play {
                            hand_index: i,
                            target: None,
                        })
                    }
                    SpellTarget::EnemyMinion => {
                        for t in distinct_indices(&foe.board) {
                            actions.push(Action::Play {
                                hand_index: i,
                                target: Some(t),
                            });
                        }
                    }
                }
            }
        }
    }

    let targets = attack_targets(foe);
    for attacker in distinct_indices(&me.board) {
        let m = &me.board[attacker];
        if m.exhausted || m.attack <= 0 {
            continue;
        }
        for &target in &targets {
            actions.push(Action::Attack { attacker, target });
        }
    }

    actions.push(Action::EndTurn);
    Ok(actions)
}

fn distinct_indices(board: &[Minion]) -> impl Iterator<Item = usize> + '_ {
    (0..board.len()).filter(move |&i| i == 0 || board[i - 1] != board[i])
}

fn attack_targets(foe: &PlayerState) -> Vec<Target> {
    if foe.has_taunt() {
        distinct_indices(&foe.board)
            .filter(|&i| foe.board[i].taunt)
            .map(Target::Minion)
            .collect()
    } else {
        distinct_indices(&foe.board)
            .map(Target::Minion)
            .chain(std::iter::once(Target::Hero))
            .collect()
    }
}

/// Applies `action` to a copy of `state`.
pub fn apply_action(
    state: &GameState,
    action: Action,
    catalog: &CardCatalog,
) -> Result<GameState, GameError> {
    let mut next = state.clone();
    apply_in_place(&mut next, action, catalog)?;
    Ok(next)
}

/// In-place variant of [`apply_action`]. On error the state is unchanged.
pub fn apply_in_place(
    state: &mut GameState,
    action: Action,
    catalog: &CardCatalog,
) -> Result<(), GameError> {
    if state.is_over() {
        return Err(GameError::GameOver);
    }
    let illegal = |why: &str| Err(GameError::IllegalAction(format!("{action:?}: {why}")));
    let me_ix = state.active;
    let foe_ix = 1 - me_ix;

    match action {
        Action::EndTurn => {
            state.start_turn(foe_ix);
        }
        Action::Play { hand_index, target } => {
            let me = &state.players[me_ix];
            let Some(&card_index) = me.hand.get(hand_index) else {
                return illegal("no such card in hand");
            };
            let card = catalog.by_index(card_index as usize);
            if card.mana_cost > me.current_mana {
                return illegal("not enough mana");
            }
            match card.kind {
                CardKind::Minion => {
                    if target.is_some() {
                        return illegal("minions take no target");
                    }
                    if me.board.len() >= BOARD_LIMIT {
                        return illegal("board is full");
                    }
                    let minion = Minion {
                        card: card_index,
                        attack: card.attack.unwrap_or(0) as i32,
                        health: card.health.unwrap_or(1) as i32,
                        exhausted: !card.has(Keyword::Charge),
                        taunt: card.has(Keyword::Taunt),
                    };
                    let me = &mut state.players[me_ix];
                    me.hand.remove(hand_index);
                    me.current_mana -= card.mana_cost;
                    me.summon(minion);
                }
                CardKind::Spell => {
                    let effect = card.spell_effect.expect("validated spell");
                    let damage = effect.damage as i32;
                    match (effect.target, target) {
                        (SpellTarget::EnemyHero, None) => {
                            state.players[foe_ix].hero_health -= damage;
                        }
                        (SpellTarget::AllEnemyMinions, None) => {
                            let foe = &mut state.players[foe_ix];
                            for m in &mut foe.board {
                                m.health -= damage;
                            }
                            foe.clear_dead();
                        }
                        (SpellTarget::EnemyMinion, Some(t)) => {
                            let foe = &mut state.players[foe_ix];
                            let Some(m) = foe.board.get_mut(t) else {
                                return illegal("no such enemy minion");
                            };
                            m.health -= damage;
                            foe.clear_dead();
                            foe.board.sort();
                        }
                        _ => return illegal("spell target does not match its effect"),
                    }
                    let me = &mut state.players[me_ix];
                    me.hand.remove(hand_index);
                    me.current_mana -= card.mana_cost;
                }
            }
        }
        Action::Attack { attacker, target } => {
            let me = &state.players[me_ix];
            let foe = &state.players[foe_ix];
            let Some(m) = me.board.get(attacker) else {
                return illegal("no such attacker");
            };
            if m.exhausted {
                return illegal("attacker is exhausted");
            }
            if m.attack <= 0 {
                return illegal("attacker has no attack");
            }
            let power = m.attack;
            match target {
                Target::Hero => {
                    if foe.has_taunt() {
                        return illegal("a taunt minion blocks the hero");
                    }
                    state.players[foe_ix].hero_health -= power;
                }
                Target::Minion(t) => {
                    let Some(defender) = foe.board.get(t) else {
                        return illegal("no such defender");
                    };
                    if foe.has_taunt() && !defender.taunt {
                        return illegal("must attack a taunt minion");
                    }
                    let counter = defender.attack;
                    let foe = &mut state.players[foe_ix];
                    foe.board[t].health -= power;
                    foe.clear_dead();
                    foe.board.sort();
                    state.players[me_ix].board[attacker].health -= counter;
                }
            }
            let me = &mut state.players[me_ix];
            me.board[attacker].exhausted = true;
            me.clear_dead();
            me.board.sort();
        }
    }
    Ok(())
}
