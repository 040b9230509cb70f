use serde::{Deserialize, Serialize};

use super::{ArchiveError, BehaviorVector};

/// Cell coordinate, one index per behavior dimension.
pub type Cell = Vec<usize>;

/// Per-dimension interior boundaries of a `resolution^d` grid.
///
/// Each list holds `resolution - 1` non-decreasing values. A value `v` lands
/// in the cell whose index equals the number of boundaries `b <= v`, so ties
/// go to the upper cell and the outermost cells extend to infinity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryGrid {
    boundaries: Vec<Vec<f64>>,
    resolution: usize,
}

impl BoundaryGrid {
    /// Builds a grid from explicit boundary lists.
    pub fn from_boundaries(
        boundaries: Vec<Vec<f64>>,
        resolution: usize,
    ) -> Result<Self, ArchiveError> {
        if resolution < 2 {
            return Err(ArchiveError::BadResolution(resolution));
        }
        for list in &boundaries {
            if list.len() != resolution - 1 {
                return Err(ArchiveError::Config(format!(
                    "boundary list has {} entries, resolution {} needs {}",
                    list.len(),
                    resolution,
                    resolution - 1
                )));
            }
            if list.iter().any(|b| !b.is_finite()) || list.windows(2).any(|w| w[0] > w[1]) {
                return Err(ArchiveError::Config(
                    "boundary list must be finite and sorted".into(),
                ));
            }
        }
        Ok(BoundaryGrid {
            boundaries,
            resolution,
        })
    }

    /// Equal-width grid over `[lo, hi]` per dimension. Used for plots and
    /// density comparisons where a fixed frame is wanted.
    pub fn uniform(ranges: &[(f64, f64)], resolution: usize) -> Result<Self, ArchiveError> {
        if resolution < 2 {
            return Err(ArchiveError::BadResolution(resolution));
        }
        let boundaries = ranges
            .iter()
            .map(|&(lo, hi)| {
                (1..resolution)
                    .map(|i| lo + (hi - lo) * i as f64 / resolution as f64)
                    .collect()
            })
            .collect();
        Self::from_boundaries(boundaries, resolution)
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn dims(&self) -> usize {
        self.boundaries.len()
    }

    pub fn boundaries(&self) -> &[Vec<f64>] {
        &self.boundaries
    }

    pub fn cell_count(&self) -> usize {
        self.resolution.pow(self.dims() as u32)
    }

    pub fn locate(&self, behavior: &BehaviorVector) -> Result<Cell, ArchiveError> {
        locate_cell(self, behavior)
    }
}

/// Places boundaries at nearest-rank percentile marks of `samples`.
///
/// For each dimension the values are sorted and boundary `i` (1-based) is the
/// value at index `floor(i * n / resolution)`, clamped to `n - 1`.
pub fn compute_boundaries<'a, I>(
    samples: I,
    resolution: usize,
    dims: usize,
) -> Result<BoundaryGrid, ArchiveError>
where
    I: IntoIterator<Item = &'a BehaviorVector>,
{
    if resolution < 2 {
        return Err(ArchiveError::BadResolution(resolution));
    }
    let mut columns: Vec<Vec<f64>> = vec![Vec::new(); dims];
    for (index, sample) in samples.into_iter().enumerate() {
        if sample.dims() != dims {
            return Err(ArchiveError::DimensionMismatch {
                expected: dims,
                got: sample.dims(),
            });
        }
        for (component, &v) in sample.values().iter().enumerate() {
            if !v.is_finite() {
                return Err(ArchiveError::InvalidSample { index, component });
            }
            columns[component].push(v);
        }
    }
    let n = columns.first().map_or(0, Vec::len);
    if n == 0 {
        return Err(ArchiveError::NoSamples);
    }
    let boundaries = columns
        .into_iter()
        .map(|mut column| {
            column.sort_by(f64::total_cmp);
            (1..resolution)
                .map(|i| column[(i * n / resolution).min(n - 1)])
                .collect()
        })
        .collect();
    Ok(BoundaryGrid {
        boundaries,
        resolution,
    })
}

/// Finds the cell holding `behavior` by binary search in each dimension.
pub fn locate_cell(grid: &BoundaryGrid, behavior: &BehaviorVector) -> Result<Cell, ArchiveError> {
    if behavior.dims() != grid.dims() {
        return Err(ArchiveError::DimensionMismatch {
            expected: grid.dims(),
            got: behavior.dims(),
        });
    }
    if !behavior.is_finite() {
        return Err(ArchiveError::NonFiniteBehavior);
    }
    Ok(grid
        .boundaries
        .iter()
        .zip(behavior.values())
        .map(|(list, &v)| list.partition_point(|&b| b <= v))
        .collect())
}
