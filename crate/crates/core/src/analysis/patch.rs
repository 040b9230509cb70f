use serde::{Deserialize, Serialize};

use super::AnalysisError;
use crate::cardgame::{Card, CardCatalog, CardKind, MAX_MANA_COST};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PatchField {
    ManaCost,
    Attack,
    Health,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PatchEdit {
    pub card: String,
    pub field: PatchField,
    pub delta: i64,
}

/// A nerf/buff list. Serialized as a JSON array of edits.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BalancePatch {
    pub edits: Vec<PatchEdit>,
}

impl BalancePatch {
    pub fn new(edits: Vec<PatchEdit>) -> Self {
        BalancePatch { edits }
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("patch serializes") + "\n"
    }

    /// The edit list with every delta negated, in reverse order.
    pub fn negate(&self) -> Self {
        BalancePatch {
            edits: self
                .edits
                .iter()
                .rev()
                .map(|e| PatchEdit {
                    delta: -e.delta,
                    ..e.clone()
                })
                .collect(),
        }
    }
}

fn edit(card: &mut Card, e: &PatchEdit) -> Result<(), String> {
    let shifted = |value: i64, lo: i64, hi: i64| {
        let v = value + e.delta;
        if (lo..=hi).contains(&v) {
            Ok(v)
        } else {
            Err(format!(
                "{}: {:?} would become {} (allowed {}..={})",
                card.id, e.field, v, lo, hi
            ))
        }
    };
    match e.field {
        PatchField::ManaCost => {
            card.mana_cost = shifted(i64::from(card.mana_cost), 0, i64::from(MAX_MANA_COST))? as u8;
        }
        PatchField::Attack | PatchField::Health if card.kind == CardKind::Spell => {
            return Err(format!("{}: spells have no {:?}", card.id, e.field));
        }
        PatchField::Attack => {
            let v = shifted(i64::from(card.attack.unwrap_or(0)), 0, i64::from(u32::MAX))?;
            card.attack = Some(v as u32);
        }
        PatchField::Health => {
            let v = shifted(i64::from(card.health.unwrap_or(1)), 1, i64::from(u32::MAX))?;
            card.health = Some(v as u32);
        }
    }
    Ok(())
}

/// Returns a patched copy of `catalog`. Edits apply in order; every
/// offending edit is reported.
pub fn apply_patch(catalog: &CardCatalog, patch: &BalancePatch) -> Result<CardCatalog, AnalysisError> {
    let mut cards = catalog.cards().to_vec();
    let mut problems = Vec::new();
    for e in &patch.edits {
        match catalog.index_of(&e.card) {
            None => problems.push(format!("unknown card {:?}", e.card)),
            Some(i) => {
                if let Err(p) = edit(&mut cards[i], e) {
                    problems.push(p);
                }
            }
        }
    }
    if !problems.is_empty() {
        return Err(AnalysisError::Patch(problems));
    }
    CardCatalog::new(cards).map_err(|e| AnalysisError::Patch(vec![e.to_string()]))
}
