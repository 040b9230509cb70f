use super::EvolutionError;
use crate::archive::SlidingArchive;
use crate::cardgame::{Agent, CardCatalog, Opponent, Style};
use crate::deck::{Deck, DECK_SIZE};

pub const DEFAULT_ADVERSARIES: usize = 5;

/// The `top_n` fittest elites, ties broken by ascending cell coordinate,
/// each played by `agent`.
pub fn build_adversary_pool(
    archive: &SlidingArchive<Deck>,
    top_n: usize,
    agent: &Agent,
) -> Result<Vec<Opponent>, EvolutionError> {
    if archive.len() < top_n {
        return Err(EvolutionError::NotEnoughElites {
            have: archive.len(),
            want: top_n,
        });
    }
    // Cells iterate in ascending order and the sort is stable.
    let mut elites: Vec<_> = archive.elites().collect();
    elites.sort_by(|a, b| b.fitness.total_cmp(&a.fitness));
    Ok(elites
        .into_iter()
        .take(top_n)
        .map(|e| Opponent {
            deck: e.genome.clone(),
            agent: *agent,
        })
        .collect())
}

fn fill(catalog: &CardCatalog, order: &[usize]) -> Option<Deck> {
    let mut ids = Vec::with_capacity(DECK_SIZE);
    for &i in order {
        let card = catalog.by_index(i);
        for _ in 0..card.copy_limit() {
            if ids.len() < DECK_SIZE {
                ids.push(card.id.clone());
            }
        }
    }
    (ids.len() == DECK_SIZE).then(|| Deck::from_ids(ids))
}

/// Two fixed baseline decks built from non-legendary cards: a low curve
/// from the cheapest cards and a midrange curve from cards nearest the
/// catalog's median cost. Legendaries fill in only if needed.
pub fn starter_decks(catalog: &CardCatalog) -> Vec<Deck> {
    let cards = catalog.cards();
    let mut costs: Vec<u8> = cards.iter().map(|c| c.mana_cost).collect();
    costs.sort();
    let median = i32::from(costs[costs.len() / 2]);

    let mut cheap: Vec<usize> = (0..cards.len()).collect();
    cheap.sort_by_key(|&i| (cards[i].legendary, cards[i].mana_cost, cards[i].id.clone()));
    let mut mid: Vec<usize> = (0..cards.len()).collect();
    mid.sort_by_key(|&i| {
        (
            cards[i].legendary,
            (i32::from(cards[i].mana_cost) - median).abs(),
            cards[i].mana_cost,
            cards[i].id.clone(),
        )
    });
    let mut decks: Vec<Deck> = [cheap, mid].iter().filter_map(|o| fill(catalog, o)).collect();
    decks.dedup();
    decks
}

/// Starter decks, the low curve played aggro and the midrange control.
pub fn starter_pool(catalog: &CardCatalog, sample_budget: usize) -> Vec<Opponent> {
    starter_decks(catalog)
        .into_iter()
        .zip([Style::Aggro, Style::Control])
        .map(|(deck, style)| Opponent {
            deck,
            agent: Agent::new(crate::cardgame::HeuristicWeights::preset(style), sample_budget),
        })
        .collect()
}
