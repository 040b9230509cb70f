use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::AnalysisError;
use crate::archive::SlidingArchive;
use crate::cardgame::CardCatalog;
use crate::deck::Deck;

/// Below-or-equal marker threshold used when reporting frequency shifts.
pub const DEFAULT_RARE_THRESHOLD: f64 = 0.25;

/// Fraction of elite decks holding at least one copy of each card.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrequencyTable {
    pub decks: usize,
    /// `(card id, fraction)` in catalog order.
    pub rows: Vec<(String, f64)>,
}

impl FrequencyTable {
    pub fn from_decks<'a>(catalog: &CardCatalog, decks: impl IntoIterator<Item = &'a Deck>) -> Result<Self, AnalysisError> {
        let decks: Vec<&Deck> = decks.into_iter().collect();
        if decks.is_empty() {
            return Err(AnalysisError::EmptyArchive);
        }
        let rows = catalog
            .cards()
            .iter()
            .map(|card| {
                let present = decks.iter().filter(|d| d.contains(&card.id)).count();
                (card.id.clone(), present as f64 / decks.len() as f64)
            })
            .collect();
        Ok(FrequencyTable {
            decks: decks.len(),
            rows,
        })
    }

    pub fn get(&self, id: &str) -> Option<f64> {
        self.rows.iter().find(|(c, _)| c == id).map(|&(_, f)| f)
    }

    /// Rows sorted by descending fraction, ties by id.
    pub fn ranked(&self) -> Vec<(String, f64)> {
        let mut rows = self.rows.clone();
        rows.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
        rows
    }
}

/// Card frequencies over the archive's elites. The denominator is the
/// number of occupied cells.
pub fn card_frequency(archive: &SlidingArchive<Deck>, catalog: &CardCatalog) -> Result<FrequencyTable, AnalysisError> {
    FrequencyTable::from_decks(catalog, archive.elites().map(|e| &e.genome))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrequencyShift {
    pub card: String,
    pub before: f64,
    pub after: f64,
    pub delta: f64,
    /// Present in `threshold` or fewer of the decks.
    pub rare_before: bool,
    pub rare_after: bool,
}

/// Per-card change between two frequency tables over the same cards.
pub fn frequency_diff(
    before: &FrequencyTable,
    after: &FrequencyTable,
    threshold: f64,
) -> Result<Vec<FrequencyShift>, AnalysisError> {
    let left: BTreeSet<&str> = before.rows.iter().map(|(c, _)| c.as_str()).collect();
    let right: BTreeSet<&str> = after.rows.iter().map(|(c, _)| c.as_str()).collect();
    if left != right {
        let odd: Vec<&str> = left.symmetric_difference(&right).copied().collect();
        return Err(AnalysisError::UniverseMismatch(odd.join(",")));
    }
    Ok(before
        .rows
        .iter()
        .map(|(card, b)| {
            let a = after.get(card).expect("same universe");
            FrequencyShift {
                card: card.clone(),
                before: *b,
                after: a,
                delta: a - b,
                rare_before: *b <= threshold,
                rare_after: a <= threshold,
            }
        })
        .collect())
}
