//! Deck genome: a 30-card multiset of catalog ids.

mod behavior;
mod mutation;

pub use behavior::behavior_of;
pub use mutation::{mutate_deck, mutate_deck_with_k, random_deck, MutationConfig};

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cardgame::{CardCatalog, GameError};

pub const DECK_SIZE: usize = 30;

/// Card ids kept sorted, so decks equal as multisets compare equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "Vec<String>", into = "Vec<String>")]
pub struct Deck {
    card_ids: Vec<String>,
}

impl From<Vec<String>> for Deck {
    fn from(ids: Vec<String>) -> Self {
        Deck::from_ids(ids)
    }
}

impl From<Deck> for Vec<String> {
    fn from(deck: Deck) -> Self {
        deck.card_ids
    }
}

impl Deck {
    /// Canonicalizes `ids` without checking them against a catalog.
    pub fn from_ids(mut ids: Vec<String>) -> Self {
        ids.sort();
        Deck { card_ids: ids }
    }

    /// Builds a deck and checks every invariant.
    pub fn new(ids: Vec<String>, catalog: &CardCatalog) -> Result<Self, DeckError> {
        let deck = Deck::from_ids(ids);
        validate_deck(&deck, catalog).map_err(DeckError::Invalid)?;
        Ok(deck)
    }

    pub fn card_ids(&self) -> &[String] {
        &self.card_ids
    }

    pub fn len(&self) -> usize {
        self.card_ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.card_ids.is_empty()
    }

    pub fn count(&self, id: &str) -> usize {
        self.card_ids.iter().filter(|c| c.as_str() == id).count()
    }

    pub fn contains(&self, id: &str) -> bool {
        self.card_ids.binary_search_by(|c| c.as_str().cmp(id)).is_ok()
    }

    /// Multiplicity per distinct id.
    pub fn counts(&self) -> BTreeMap<&str, usize> {
        let mut counts = BTreeMap::new();
        for id in &self.card_ids {
            *counts.entry(id.as_str()).or_insert(0) += 1;
        }
        counts
    }

    /// Replaces one copy of `remove` with `add`.
    pub fn swap(&self, remove: &str, add: &str) -> Option<Deck> {
        let pos = self.card_ids.iter().position(|c| c == remove)?;
        let mut ids = self.card_ids.clone();
        ids[pos] = add.to_string();
        Some(Deck::from_ids(ids))
    }

    /// Catalog indices of the cards, after validating the deck.
    pub fn to_indices(&self, catalog: &CardCatalog) -> Result<Vec<u16>, GameError> {
        validate_deck(self, catalog).map_err(|v| {
            GameError::InvalidDeck(
                v.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "),
            )
        })?;
        Ok(self
            .card_ids
            .iter()
            .map(|id| catalog.index_of(id).expect("validated") as u16)
            .collect())
    }

    /// Comma-separated ids, the form used in snapshots and logs.
    pub fn to_literal(&self) -> String {
        self.card_ids.join(",")
    }

    pub fn parse_literal(text: &str) -> Deck {
        Deck::from_ids(
            text.split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(String::from)
                .collect(),
        )
    }
}

impl fmt::Display for Deck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_literal())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    WrongSize { expected: usize, got: usize },
    TooManyCopies { card: String, count: usize, limit: usize },
    UnknownCard(String),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::WrongSize { expected, got } => {
                write!(f, "deck has {got} cards, expected {expected}")
            }
            Violation::TooManyCopies { card, count, limit } => {
                write!(f, "{count} copies of {card:?}, limit {limit}")
            }
            Violation::UnknownCard(id) => write!(f, "unknown card {id:?}"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DeckError {
    #[error("catalog can hold at most {capacity} cards, a deck needs {needed}")]
    CatalogTooSmall { capacity: usize, needed: usize },
    #[error("invalid deck: {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
}

/// Reports every violated deck invariant.
pub fn validate_deck(deck: &Deck, catalog: &CardCatalog) -> Result<(), Vec<Violation>> {
    let mut violations = Vec::new();
    if deck.len() != DECK_SIZE {
        violations.push(Violation::WrongSize {
            expected: DECK_SIZE,
            got: deck.len(),
        });
    }
    for (id, count) in deck.counts() {
        match catalog.copy_limit(id) {
            None => violations.push(Violation::UnknownCard(id.to_string())),
            Some(limit) if count > limit => violations.push(Violation::TooManyCopies {
                card: id.to_string(),
                count,
                limit,
            }),
            Some(_) => {}
        }
    }
    if violations.is_empty() {
        Ok(())
    } else {
        Err(violations)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn starter(catalog: &CardCatalog) -> Deck {
        Deck::from_ids(
            catalog
                .cards()
                .iter()
                .filter(|c| !c.legendary)
                .flat_map(|c| [c.id.clone(), c.id.clone()])
                .take(DECK_SIZE)
                .collect(),
        )
    }

    #[test]
    fn legal_deck_passes() {
        let cat = CardCatalog::builtin();
        assert_eq!(validate_deck(&starter(&cat), &cat), Ok(()));
    }

    #[test]
    fn third_copy_is_flagged() {
        let cat = CardCatalog::builtin();
        let deck = starter(&cat);
        let victim = deck.card_ids()[0].clone();
        let other = deck.card_ids()[29].clone();
        let bad = deck.swap(&other, &victim).unwrap();
        let err = validate_deck(&bad, &cat).unwrap_err();
        assert_eq!(
            err,
            vec![Violation::TooManyCopies {
                card: victim,
                count: 3,
                limit: 2
            }]
        );
    }

    #[test]
    fn second_legendary_copy_is_flagged() {
        let cat = CardCatalog::builtin();
        let deck = starter(&cat);
        let legend = cat.cards().iter().find(|c| c.legendary).unwrap().id.clone();
        let bad = deck
            .swap(&deck.card_ids()[0].clone(), &legend)
            .unwrap()
            .swap(&deck.card_ids()[2].clone(), &legend)
            .unwrap();
        let err = validate_deck(&bad, &cat).unwrap_err();
        assert!(err.contains(&Violation::TooManyCopies {
            card: legend,
            count: 2,
            limit: 1
        }));
    }

    #[test]
    fn every_problem_is_reported() {
        let cat = CardCatalog::builtin();
        let bad = Deck::from_ids(vec!["wisp".into(), "wisp".into(), "wisp".into(), "ghost".into()]);
        let err = validate_deck(&bad, &cat).unwrap_err();
        assert_eq!(err.len(), 3);
        assert!(err.contains(&Violation::UnknownCard("ghost".into())));
        assert!(err.contains(&Violation::WrongSize { expected: 30, got: 4 }));
    }

    #[test]
    fn canonical_order() {
        let a = Deck::from_ids(vec!["b".into(), "a".into(), "b".into()]);
        let b = Deck::from_ids(vec!["b".into(), "b".into(), "a".into()]);
        assert_eq!(a, b);
        assert_eq!(Deck::parse_literal(&a.to_literal()), a);
        let json = serde_json::to_string(&a).unwrap();
        assert_eq!(json, r#"["a","b","b"]"#);
    }
}
