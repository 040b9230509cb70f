use rand::seq::index;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{Deck, DeckError, DECK_SIZE};
use crate::cardgame::CardCatalog;

/// Geometric law for the number of swapped cards:
/// `Pr(k) = p (1 - p)^(k - 1)` for `k < max_k`, with the remaining tail mass
/// on `max_k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MutationConfig {
    pub p: f64,
    pub max_k: usize,
}

impl Default for MutationConfig {
    fn default() -> Self {
        MutationConfig {
            p: 0.5,
            max_k: DECK_SIZE,
        }
    }
}

impl MutationConfig {
    pub fn sample_k<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let mut k = 1;
        while k < self.max_k && !rng.random_bool(self.p) {
            k += 1;
        }
        k
    }

    /// Exact probability of drawing `k`.
    pub fn probability(&self, k: usize) -> f64 {
        if k == 0 || k > self.max_k {
            0.0
        } else if k < self.max_k {
            self.p * (1.0 - self.p).powi(k as i32 - 1)
        } else {
            (1.0 - self.p).powi(self.max_k as i32 - 1)
        }
    }
}

fn remaining(catalog: &CardCatalog, ids: &[String]) -> Vec<usize> {
    let mut left: Vec<usize> = catalog.cards().iter().map(|c| c.copy_limit()).collect();
    for id in ids {
        if let Some(i) = catalog.index_of(id) {
            left[i] = left[i].saturating_sub(1);
        }
    }
    left
}

/// Draws cards one at a time, uniformly among ids that still have copies
/// left, until the deck is full.
pub fn random_deck<R: Rng + ?Sized>(catalog: &CardCatalog, rng: &mut R) -> Result<Deck, DeckError> {
    let capacity = catalog.capacity();
    if capacity < DECK_SIZE {
        return Err(DeckError::CatalogTooSmall {
            capacity,
            needed: DECK_SIZE,
        });
    }
    let mut left: Vec<usize> = catalog.cards().iter().map(|c| c.copy_limit()).collect();
    let mut ids = Vec::with_capacity(DECK_SIZE);
    while ids.len() < DECK_SIZE {
        let open: Vec<usize> = (0..left.len()).filter(|&i| left[i] > 0).collect();
        let pick = open[rng.random_range(0..open.len())];
        left[pick] -= 1;
        ids.push(catalog.by_index(pick).id.clone());
    }
    Ok(Deck::from_ids(ids))
}

/// Swaps `k` cards with `k` drawn from the geometric law in `config`.
pub fn mutate_deck<R: Rng + ?Sized>(
    deck: &Deck,
    catalog: &CardCatalog,
    rng: &mut R,
    config: &MutationConfig,
) -> Deck {
    let k = config.sample_k(rng);
    mutate_deck_with_k(deck, catalog, rng, k)
}

/// Removes `k` uniformly chosen card instances and adds `k` cards drawn
/// uniformly from the catalog. A pick that would break a copy limit is
/// redrawn. A removed card may come back.
pub fn mutate_deck_with_k<R: Rng + ?Sized>(
    deck: &Deck,
    catalog: &CardCatalog,
    rng: &mut R,
    k: usize,
) -> Deck {
    let k = k.min(deck.len());
    let drop = index::sample(rng, deck.len(), k);
    let mut keep = vec![true; deck.len()];
    for i in drop.iter() {
        keep[i] = false;
    }
    let mut ids: Vec<String> = deck
        .card_ids()
        .iter()
        .zip(&keep)
        .filter(|(_, &k)| k)
        .map(|(id, _)| id.clone())
        .collect();
    let mut left = remaining(catalog, &ids);
    for _ in 0..k {
        let pick = loop {
            let i = rng.random_range(0..catalog.len());
            if left[i] > 0 {
                break i;
            }
        };
        left[pick] -= 1;
        ids.push(catalog.by_index(pick).id.clone());
    }
    Deck::from_ids(ids)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cardgame::{Card, CardKind};
    use crate::deck::validate_deck;
    use crate::seed;

    fn catalog_of(n: usize) -> CardCatalog {
        CardCatalog::new(
            (0..n)
                .map(|i| Card {
                    id: format!("c{i:02}"),
                    name: format!("Card {i}"),
                    mana_cost: (i % 11) as u8,
                    kind: CardKind::Minion,
                    attack: Some(1),
                    health: Some(1),
                    keywords: vec![],
                    spell_effect: None,
                    legendary: false,
                })
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn forced_composition() {
        let cat = catalog_of(15);
        let deck = random_deck(&cat, &mut seed::rng(1)).unwrap();
        let expected = Deck::from_ids((0..30).map(|i| format!("c{:02}", i / 2)).collect());
        assert_eq!(deck, expected);
        // The only legal replacements are the cards just removed.
        let mutated = mutate_deck_with_k(&deck, &cat, &mut seed::rng(2), 30);
        assert_eq!(mutated, deck);
    }

    #[test]
    fn too_small_catalog() {
        let mut cards = catalog_of(15).cards().to_vec();
        cards[0].legendary = true;
        let cat = CardCatalog::new(cards).unwrap();
        assert_eq!(cat.capacity(), 29);
        assert_eq!(
            random_deck(&cat, &mut seed::rng(0)).unwrap_err(),
            DeckError::CatalogTooSmall {
                capacity: 29,
                needed: 30
            }
        );
    }

    #[test]
    fn law_masses_sum_to_one() {
        let cfg = MutationConfig::default();
        let total: f64 = (1..=30).map(|k| cfg.probability(k)).sum();
        assert!((total - 1.0).abs() < 1e-15);
        assert_eq!(cfg.probability(1), 0.5);
        assert_eq!(cfg.probability(2), 0.25);
        assert_eq!(cfg.probability(30), 0.5f64.powi(29));
    }

    #[test]
    fn mutation_changes_at_most_k() {
        let cat = CardCatalog::builtin();
        let mut rng = seed::rng(3);
        let deck = random_deck(&cat, &mut rng).unwrap();
        for k in [1, 2, 5, 30] {
            let m = mutate_deck_with_k(&deck, &cat, &mut rng, k);
            validate_deck(&m, &cat).unwrap();
            let mut common = 0;
            for (id, n) in m.counts() {
                common += n.min(deck.count(id));
            }
            assert!(30 - common <= k);
        }
    }
}
