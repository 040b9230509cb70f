use serde::{Deserialize, Serialize};

/// Descriptor of an individual in behavior space.
///
/// For decks this is `(mean mana cost, mana cost variance)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BehaviorVector(Vec<f64>);

impl BehaviorVector {
    pub fn new(values: Vec<f64>) -> Self {
        BehaviorVector(values)
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn dims(&self) -> usize {
        self.0.len()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|v| v.is_finite())
    }
}

impl From<Vec<f64>> for BehaviorVector {
    fn from(values: Vec<f64>) -> Self {
        BehaviorVector(values)
    }
}

impl<const N: usize> From<[f64; N]> for BehaviorVector {
    fn from(values: [f64; N]) -> Self {
        BehaviorVector(values.to_vec())
    }
}
