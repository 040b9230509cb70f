//! Exact and observed deck densities over the (mean mana, variance) plane.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use super::AnalysisError;
use crate::archive::{BehaviorVector, BoundaryGrid};
use crate::cardgame::CardCatalog;

/// Number of decks per `(sum of costs, sum of squared costs)`.
pub type MomentCounts = BTreeMap<(u32, u64), BigUint>;

/// Cell weights over a two-dimensional grid, row-major by mean index then
/// variance index.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityGrid {
    pub grid: BoundaryGrid,
    pub counts: Vec<BigUint>,
    pub deck_size: usize,
    pub catalog_hash: Option<String>,
}

impl DensityGrid {
    fn empty(grid: BoundaryGrid, deck_size: usize, catalog_hash: Option<String>) -> Result<Self, AnalysisError> {
        if grid.dims() != 2 {
            return Err(AnalysisError::GridShape);
        }
        let cells = grid.cell_count();
        Ok(DensityGrid {
            grid,
            counts: vec![BigUint::zero(); cells],
            deck_size,
            catalog_hash,
        })
    }

    fn add(&mut self, behavior: &BehaviorVector, weight: &BigUint) -> Result<(), AnalysisError> {
        let cell = self.grid.locate(behavior)?;
        let at = cell[0] * self.grid.resolution() + cell[1];
        self.counts[at] += weight;
        Ok(())
    }

    pub fn resolution(&self) -> usize {
        self.grid.resolution()
    }

    pub fn get(&self, mean_index: usize, variance_index: usize) -> &BigUint {
        &self.counts[mean_index * self.resolution() + variance_index]
    }

    pub fn total(&self) -> BigUint {
        self.counts.iter().sum()
    }

    /// Weights divided by the total. All zeros if the grid is empty.
    pub fn normalized(&self) -> Vec<f64> {
        let total = self.total();
        if total.is_zero() {
            return vec![0.0; self.counts.len()];
        }
        // Scale down before converting so huge counts keep their precision.
        let shift = total.bits().saturating_sub(1000);
        let t = (&total >> shift).to_f64().unwrap_or(f64::INFINITY);
        self.counts
            .iter()
            .map(|c| (c >> shift).to_f64().unwrap_or(f64::INFINITY) / t)
            .collect()
    }

    /// `log10(1 + count)` per cell, for plotting counts that span dozens of
    /// orders of magnitude.
    pub fn log10(&self) -> Vec<f64> {
        self.counts.iter().map(|c| log10_big(&(c + 1u32))).collect()
    }

    /// Mean-mana column indices holding any weight, as `(first, last)`.
    pub fn occupied_mean_range(&self) -> Option<(usize, usize)> {
        let r = self.resolution();
        let occupied: Vec<usize> = (0..r)
            .filter(|&i| (0..r).any(|j| !self.get(i, j).is_zero()))
            .collect();
        Some((*occupied.first()?, *occupied.last()?))
    }
}

fn log10_big(v: &BigUint) -> f64 {
    let bits = v.bits();
    if bits <= 1000 {
        v.to_f64().unwrap_or(f64::INFINITY).log10()
    } else {
        let shift = bits - 1000;
        (v >> shift).to_f64().unwrap_or(f64::INFINITY).log10() + shift as f64 * std::f64::consts::LOG10_2
    }
}

/// Mean and population variance from integer moment sums, with the same
/// arithmetic as the deck behavior descriptor.
pub(crate) fn moments_to_behavior(n: usize, sum: u32, sum_sq: u64) -> BehaviorVector {
    let n = n as i128;
    let (s, q) = (i128::from(sum), i128::from(sum_sq));
    BehaviorVector::new(vec![
        s as f64 / n as f64,
        (n * q - s * s) as f64 / (n * n) as f64,
    ])
}

/// Counts every valid deck of `deck_size` cards by its cost moments.
///
/// Cards of equal cost are interchangeable for the moments, so the dynamic
/// program runs over cost levels. For each level the number of ways to take
/// `j` copies from its cards (each card offering 0..=limit copies) is the
/// coefficient of `x^j` in the product of the per-card polynomials.
pub fn exact_moment_counts(catalog: &CardCatalog, deck_size: usize) -> Result<MomentCounts, AnalysisError> {
    let capacity = catalog.capacity();
    if capacity < deck_size {
        return Err(AnalysisError::CapacityShortfall { capacity, deck_size });
    }
    let mut levels: BTreeMap<u8, Vec<BigUint>> = BTreeMap::new();
    for card in catalog.cards() {
        let poly = levels.entry(card.mana_cost).or_insert_with(|| vec![BigUint::one()]);
        let limit = card.copy_limit();
        let mut next = vec![BigUint::zero(); (poly.len() + limit).min(deck_size + 1)];
        for (i, coef) in poly.iter().enumerate() {
            for copies in 0..=limit {
                if i + copies < next.len() {
                    next[i + copies] += coef;
                }
            }
        }
        *poly = next;
    }

    // states[n] maps (sum, sum_sq) to the number of partial decks with n cards.
    let mut states: Vec<HashMap<(u32, u64), BigUint>> = vec![HashMap::new(); deck_size + 1];
    states[0].insert((0, 0), BigUint::one());
    for (&cost, ways) in &levels {
        let c = u32::from(cost);
        let mut next: Vec<HashMap<(u32, u64), BigUint>> = vec![HashMap::new(); deck_size + 1];
        for (n, row) in states.iter().enumerate() {
            for (&(s, q), count) in row {
                for (j, w) in ways.iter().enumerate() {
                    if n + j > deck_size {
                        break;
                    }
                    if w.is_zero() {
                        continue;
                    }
                    let key = (s + j as u32 * c, q + j as u64 * u64::from(c * c));
                    *next[n + j].entry(key).or_insert_with(BigUint::zero) += count * w;
                }
            }
        }
        states = next;
    }
    Ok(states.swap_remove(deck_size).into_iter().collect())
}

/// Outer edges of the behavior space: mean cost spans the catalog's cost
/// range and variance runs from zero to the largest variance of values in
/// that range.
pub fn behavior_bounds(catalog: &CardCatalog) -> [(f64, f64); 2] {
    let (lo, hi) = catalog.cost_range();
    let half = f64::from(hi - lo) / 2.0;
    [(f64::from(lo), f64::from(hi)), (0.0, half * half)]
}

/// Equal-width grid over [`behavior_bounds`].
pub fn uniform_behavior_grid(catalog: &CardCatalog, resolution: usize) -> Result<BoundaryGrid, AnalysisError> {
    let [mean, var] = behavior_bounds(catalog);
    // A single-cost catalog has zero-width axes.
    let widen = |(lo, hi): (f64, f64)| if hi > lo { (lo, hi) } else { (lo, lo + 1.0) };
    Ok(BoundaryGrid::uniform(&[widen(mean), widen(var)], resolution)?)
}

/// Exact number of valid decks in each cell of `grid`.
pub fn exact_behavior_distribution(
    catalog: &CardCatalog,
    deck_size: usize,
    grid: &BoundaryGrid,
) -> Result<DensityGrid, AnalysisError> {
    let mut density = DensityGrid::empty(grid.clone(), deck_size, Some(catalog.content_hash()))?;
    for ((sum, sum_sq), count) in exact_moment_counts(catalog, deck_size)? {
        density.add(&moments_to_behavior(deck_size, sum, sum_sq), &count)?;
    }
    Ok(density)
}

/// Bins observed behaviors into `grid`, one unit of weight each.
pub fn observed_density<'a>(
    behaviors: impl IntoIterator<Item = &'a BehaviorVector>,
    grid: &BoundaryGrid,
    deck_size: usize,
) -> Result<DensityGrid, AnalysisError> {
    let mut density = DensityGrid::empty(grid.clone(), deck_size, None)?;
    let one = BigUint::one();
    for b in behaviors {
        density.add(b, &one)?;
    }
    Ok(density)
}
