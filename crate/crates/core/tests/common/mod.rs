//! Oracles and fixtures shared by the integration tests. Each oracle is a
//! direct, slow restatement of the definition it checks.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::{IndexedRandom, SliceRandom};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use mesb_core::analysis::TransactionSet;
use mesb_core::cardgame::{
    apply_action, legal_actions, Action, Card, CardCatalog, CardKind, GameState, Target, BOARD_LIMIT, HAND_LIMIT,
    MAX_MANA, STARTING_HEALTH,
};
use mesb_core::deck::random_deck;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Boundary `i` is the sample of rank `floor(i * n / r)` in sorted order.
pub fn nearest_rank(values: &[f64], resolution: usize) -> Vec<f64> {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    (1..resolution).map(|i| sorted[(i * n / resolution).min(n - 1)]).collect()
}

/// Cell index by counting the boundaries at or below `v`.
pub fn linear_locate(boundaries: &[f64], v: f64) -> usize {
    boundaries.iter().filter(|&&b| b <= v).count()
}

/// Mean, then the average squared deviation from it.
pub fn two_pass(costs: &[f64]) -> (f64, f64) {
    let n = costs.len() as f64;
    let mean = costs.iter().sum::<f64>() / n;
    (mean, costs.iter().map(|c| (c - mean) * (c - mean)).sum::<f64>() / n)
}

/// Support of every non-empty itemset meeting `min`, found by trying all
/// subsets of the observed items.
pub fn brute_itemsets(t: &TransactionSet, min: f64) -> BTreeMap<Vec<String>, usize> {
    let items: Vec<String> = t
        .transactions()
        .iter()
        .flatten()
        .cloned()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let mut out = BTreeMap::new();
    for mask in 1u64..(1 << items.len()) {
        let set: Vec<String> = (0..items.len())
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| items[i].clone())
            .collect();
        let support = t
            .transactions()
            .iter()
            .filter(|tx| set.iter().all(|i| tx.contains(i)))
            .count();
        if support as f64 / t.len() as f64 >= min {
            out.insert(set, support);
        }
    }
    out
}

/// Minion-only catalog with the given costs and legendary flags.
pub fn cost_catalog(cards: &[(u8, bool)]) -> CardCatalog {
    CardCatalog::new(
        cards
            .iter()
            .enumerate()
            .map(|(i, &(cost, legendary))| Card {
                id: format!("c{i:03}"),
                name: format!("Card {i}"),
                mana_cost: cost,
                kind: CardKind::Minion,
                attack: Some(1),
                health: Some(1),
                keywords: Vec::new(),
                spell_effect: None,
                legendary,
            })
            .collect(),
    )
    .unwrap()
}

/// Number of legal decks of `size` cards for each (sum of costs, sum of
/// squared costs), by walking every per-card copy choice.
pub fn enumerate_decks(catalog: &CardCatalog, size: usize) -> BTreeMap<(u32, u64), u64> {
    fn go(cards: &[Card], left: usize, sum: u32, sq: u64, out: &mut BTreeMap<(u32, u64), u64>) {
        if left == 0 {
            *out.entry((sum, sq)).or_default() += 1;
            return;
        }
        let Some((card, rest)) = cards.split_first() else { return };
        for copies in 0..=card.copy_limit().min(left) {
            let c = u32::from(card.mana_cost);
            go(
                rest,
                left - copies,
                sum + c * copies as u32,
                sq + u64::from(c * c) * copies as u64,
                out,
            );
        }
    }
    let mut out = BTreeMap::new();
    go(catalog.cards(), size, 0, 0, &mut out);
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct FuzzStats {
    pub actions: usize,
    pub attacks: usize,
    pub taunt_checks: usize,
    pub end: GameState,
}

fn check_state(s: &GameState) -> Result<(), String> {
    for (i, p) in s.players.iter().enumerate() {
        if p.hand.len() > HAND_LIMIT {
            return Err(format!("player {i} hand {}", p.hand.len()));
        }
        if p.board.len() > BOARD_LIMIT {
            return Err(format!("player {i} board {}", p.board.len()));
        }
        if p.hero_health > STARTING_HEALTH {
            return Err(format!("player {i} health {}", p.hero_health));
        }
        if p.current_mana > p.mana_crystals || p.mana_crystals > MAX_MANA {
            return Err(format!("player {i} mana {}/{}", p.current_mana, p.mana_crystals));
        }
        if p.board.iter().any(|m| m.health <= 0) {
            return Err(format!("player {i} has a dead minion on board"));
        }
        if !p.hand.is_sorted() || !p.board.is_sorted() {
            return Err(format!("player {i} hand or board out of order"));
        }
    }
    Ok(())
}

/// Plays random legal actions with random decks until the game ends or
/// `max_turns` turns have started. Checks the state after every action and
/// the taunt rule before every attack.
pub fn fuzz_game(catalog: &CardCatalog, seed: u64, max_turns: u32) -> Result<FuzzStats, String> {
    let mut r = rng(seed);
    let mut decks = [0, 1].map(|_| random_deck(catalog, &mut r).unwrap().to_indices(catalog).unwrap());
    for d in &mut decks {
        d.shuffle(&mut r);
    }
    let [a, b] = decks;
    let mut state = GameState::start(a, b);
    let mut stats = FuzzStats {
        actions: 0,
        attacks: 0,
        taunt_checks: 0,
        end: state.clone(),
    };
    check_state(&state)?;
    while !state.is_over() && state.turn <= max_turns {
        let actions = legal_actions(&state, catalog).map_err(|e| e.to_string())?;
        if actions.last() != Some(&Action::EndTurn) {
            return Err("end turn missing".into());
        }
        let &action = actions.choose(&mut r).unwrap();
        if let Action::Attack { target, .. } = action {
            stats.attacks += 1;
            let foe = state.opponent();
            if foe.has_taunt() {
                stats.taunt_checks += 1;
                let ok = matches!(target, Target::Minion(j) if foe.board[j].taunt);
                if !ok {
                    return Err(format!("attack on {target:?} past a taunt minion"));
                }
            }
        }
        state = apply_action(&state, action, catalog).map_err(|e| format!("{action:?} rejected: {e}"))?;
        stats.actions += 1;
        check_state(&state)?;
    }
    stats.end = state;
    Ok(stats)
}
