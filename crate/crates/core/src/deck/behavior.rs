use super::Deck;
use crate::archive::BehaviorVector;
use crate::cardgame::CardCatalog;

/// `(mean mana cost, population variance of mana cost)` of the deck.
///
/// Uses exact integer sums, so no game is simulated and no rounding
/// accumulates before the final division. Unknown ids count as cost 0;
/// callers validate decks first.
pub fn behavior_of(deck: &Deck, catalog: &CardCatalog) -> BehaviorVector {
    let n = deck.len() as i64;
    if n == 0 {
        return BehaviorVector::new(vec![0.0, 0.0]);
    }
    let (sum, sum_sq) = deck.card_ids().iter().fold((0i64, 0i64), |(s, q), id| {
        let c = catalog.get(id).map_or(0, |card| i64::from(card.mana_cost));
        (s + c, q + c * c)
    });
    let mean = sum as f64 / n as f64;
    let variance = (n * sum_sq - sum * sum) as f64 / (n * n) as f64;
    BehaviorVector::new(vec![mean, variance])
}
