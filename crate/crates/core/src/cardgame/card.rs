use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::GameError;

pub const MAX_MANA_COST: u8 = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CardKind {
    Minion,
    Spell,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Keyword {
    Taunt,
    Charge,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpellTarget {
    EnemyHero,
    EnemyMinion,
    AllEnemyMinions,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpellEffect {
    pub damage: u32,
    pub target: SpellTarget,
}

/// One card definition as it appears in a catalog file.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Card {
    pub id: String,
    pub name: String,
    pub mana_cost: u8,
    pub kind: CardKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub attack: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub health: Option<u32>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub keywords: Vec<Keyword>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spell_effect: Option<SpellEffect>,
    #[serde(default)]
    pub legendary: bool,
}

impl Card {
    pub fn has(&self, keyword: Keyword) -> bool {
        self.keywords.contains(&keyword)
    }

    pub fn copy_limit(&self) -> usize {
        if self.legendary {
            1
        } else {
            2
        }
    }

    pub fn validate(&self) -> Result<(), GameError> {
        let bad = |why: &str| Err(GameError::InvalidCard(self.id.clone(), why.to_string()));
        if self.id.is_empty() || self.id.chars().any(|c| c.is_whitespace() || c == ',') {
            return bad("id must be non-empty without whitespace or commas");
        }
        if self.mana_cost > MAX_MANA_COST {
            return bad("mana_cost must be within 0..=10");
        }
        match self.kind {
            CardKind::Minion => {
                if self.attack.is_none() || self.health.is_none() {
                    return bad("minions need attack and health");
                }
                if self.health == Some(0) {
                    return bad("minion health must be >= 1");
                }
                if self.spell_effect.is_some() {
                    return bad("minions cannot carry a spell effect");
                }
            }
            CardKind::Spell => {
                if self.attack.is_some() || self.health.is_some() || !self.keywords.is_empty() {
                    return bad("spells have no stats or keywords");
                }
                match self.spell_effect {
                    None => return bad("spells need a spell_effect"),
                    Some(e) if e.damage == 0 => return bad("spell damage must be >= 1"),
                    _ => {}
                }
            }
        }
        Ok(())
    }
}

/// Immutable card pool. Cards keep their file order; lookups by id go
/// through an index built at construction.
#[derive(Debug, Clone)]
pub struct CardCatalog {
    cards: Vec<Card>,
    index: HashMap<String, usize>,
}

impl PartialEq for CardCatalog {
    fn eq(&self, other: &Self) -> bool {
        self.cards == other.cards
    }
}

impl CardCatalog {
    pub fn new(cards: Vec<Card>) -> Result<Self, GameError> {
        if cards.is_empty() {
            return Err(GameError::EmptyCatalog);
        }
        if cards.len() > u16::MAX as usize {
            return Err(GameError::Catalog("too many cards".into()));
        }
        let mut index = HashMap::with_capacity(cards.len());
        let mut cards = cards;
        for (i, card) in cards.iter_mut().enumerate() {
            card.validate()?;
            card.keywords.sort();
            card.keywords.dedup();
            if index.insert(card.id.clone(), i).is_some() {
                return Err(GameError::Catalog(format!("duplicate card id {:?}", card.id)));
            }
        }
        Ok(CardCatalog { cards, index })
    }

    pub fn from_json(text: &str) -> Result<Self, GameError> {
        let cards: Vec<Card> =
            serde_json::from_str(text).map_err(|e| GameError::Catalog(e.to_string()))?;
        Self::new(cards)
    }

    /// One card record per line inside a JSON array.
    pub fn to_json(&self) -> String {
        let lines: Vec<String> = self
            .cards
            .iter()
            .map(|c| format!("  {}", serde_json::to_string(c).expect("cards serialize")))
            .collect();
        format!("[\n{}\n]\n", lines.join(",\n"))
    }

    /// The 60-card default pool spanning costs 0 to 10.
    pub fn builtin() -> Self {
        Self::from_json(include_str!("../../data/default_catalog.json"))
            .expect("bundled catalog is valid")
    }

    /// A 30-card pool for quick runs and tests.
    pub fn desk() -> Self {
        Self::from_json(include_str!("../../data/desk_catalog.json"))
            .expect("bundled catalog is valid")
    }

    pub fn cards(&self) -> &[Card] {
        &self.cards
    }

    pub fn len(&self) -> usize {
        self.cards.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cards.is_empty()
    }

    pub fn get(&self, id: &str) -> Option<&Card> {
        self.index.get(id).map(|&i| &self.cards[i])
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn by_index(&self, index: usize) -> &Card {
        &self.cards[index]
    }

    pub fn copy_limit(&self, id: &str) -> Option<usize> {
        self.get(id).map(Card::copy_limit)
    }

    /// Largest deck the copy limits allow.
    pub fn capacity(&self) -> usize {
        self.cards.iter().map(Card::copy_limit).sum()
    }

    /// SHA-256 over the canonical JSON form, hex encoded.
    pub fn content_hash(&self) -> String {
        hex::encode(Sha256::digest(self.to_json().as_bytes()))
    }

    pub fn cost_range(&self) -> (u8, u8) {
        let costs = self.cards.iter().map(|c| c.mana_cost);
        (
            costs.clone().min().unwrap_or(0),
            costs.max().unwrap_or(0),
        )
    }
}
