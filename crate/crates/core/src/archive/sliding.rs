use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{
    compute_boundaries, resolution_for, ArchiveConfig, ArchiveError, BehaviorVector,
    BoundaryGrid, Cell, SampleBuffer,
};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct EliteStats {
    pub winrate: f64,
    pub games: u32,
}

/// An evaluated individual. `behavior` and `fitness` come from one
/// evaluation of `genome`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Elite<G> {
    pub genome: G,
    pub behavior: BehaviorVector,
    pub fitness: f64,
    pub stats: EliteStats,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InsertOutcome {
    PlacedNew,
    ReplacedIncumbent,
    Rejected,
}

impl InsertOutcome {
    pub fn as_str(self) -> &'static str {
        match self {
            InsertOutcome::PlacedNew => "placed-new",
            InsertOutcome::ReplacedIncumbent => "replaced-incumbent",
            InsertOutcome::Rejected => "rejected",
        }
    }
}

impl std::str::FromStr for InsertOutcome {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "placed-new" => Ok(InsertOutcome::PlacedNew),
            "replaced-incumbent" => Ok(InsertOutcome::ReplacedIncumbent),
            "rejected" => Ok(InsertOutcome::Rejected),
            other => Err(format!("unknown insert outcome {other:?}")),
        }
    }
}

/// MAP-Elites archive whose cell boundaries follow the sample distribution.
///
/// The grid is built from the first offered behavior and rebuilt every
/// `remap_frequency` offers and whenever the resolution schedule moves to a
/// new level. At a rebuild all elites are re-placed in ascending order of
/// their old cell; collisions keep the fitter elite.
#[derive(Debug, Clone, PartialEq)]
pub struct SlidingArchive<G> {
    config: ArchiveConfig,
    dims: usize,
    resolution: usize,
    grid: Option<BoundaryGrid>,
    cells: BTreeMap<Cell, Elite<G>>,
    buffer: SampleBuffer,
    inserted: usize,
}

impl<G: Clone> SlidingArchive<G> {
    pub fn new(config: ArchiveConfig, dims: usize) -> Result<Self, ArchiveError> {
        config.validate()?;
        if dims == 0 {
            return Err(ArchiveError::Config("dims must be >= 1".into()));
        }
        let resolution = config.min_resolution;
        let buffer = SampleBuffer::new(config.buffer_capacity);
        Ok(SlidingArchive {
            config,
            dims,
            resolution,
            grid: None,
            cells: BTreeMap::new(),
            buffer,
            inserted: 0,
        })
    }

    /// Rebuilds an archive from stored cells, e.g. a loaded snapshot. The
    /// sample buffer starts empty.
    pub fn from_parts(
        config: ArchiveConfig,
        grid: BoundaryGrid,
        elites: Vec<Elite<G>>,
        inserted: usize,
    ) -> Result<Self, ArchiveError> {
        let mut archive = Self::new(config, grid.dims())?;
        archive.resolution = grid.resolution();
        archive.grid = Some(grid);
        archive.inserted = inserted;
        for elite in elites {
            archive.place(elite)?;
        }
        Ok(archive)
    }

    pub fn config(&self) -> &ArchiveConfig {
        &self.config
    }

    pub fn dims(&self) -> usize {
        self.dims
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    /// Current grid; `None` until the first individual is offered.
    pub fn grid(&self) -> Option<&BoundaryGrid> {
        self.grid.as_ref()
    }

    pub fn buffer(&self) -> &SampleBuffer {
        &self.buffer
    }

    pub fn inserted_count(&self) -> usize {
        self.inserted
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn get(&self, cell: &[usize]) -> Option<&Elite<G>> {
        self.cells.get(cell)
    }

    /// Occupied cells in ascending coordinate order.
    pub fn iter(&self) -> impl Iterator<Item = (&Cell, &Elite<G>)> {
        self.cells.iter()
    }

    pub fn elites(&self) -> impl Iterator<Item = &Elite<G>> {
        self.cells.values()
    }

    /// Highest-fitness elite; ties go to the lowest cell coordinate.
    pub fn best(&self) -> Option<&Elite<G>> {
        self.cells
            .values()
            .fold(None, |best: Option<&Elite<G>>, e| match best {
                Some(b) if b.fitness >= e.fitness => Some(b),
                _ => Some(e),
            })
    }

    /// Offers a candidate to the archive.
    ///
    /// The behavior is always recorded in the sample buffer. The candidate
    /// takes its cell if the cell is empty or it is strictly fitter than the
    /// incumbent. Scheduled remaps run after placement.
    pub fn try_insert(&mut self, candidate: Elite<G>) -> Result<InsertOutcome, ArchiveError> {
        self.check_behavior(&candidate.behavior)?;
        self.buffer.push(candidate.behavior.clone());
        if self.grid.is_none() {
            self.grid = Some(compute_boundaries(
                self.buffer.iter(),
                self.resolution,
                self.dims,
            )?);
        }
        let outcome = self.place(candidate)?;
        self.inserted += 1;

        let next = if self.inserted < self.config.total_evaluations {
            resolution_for(self.inserted, &self.config)?
        } else {
            self.resolution
        };
        if self.inserted.is_multiple_of(self.config.remap_frequency) || next != self.resolution {
            self.remap(next)?;
        }
        Ok(outcome)
    }

    /// Recomputes boundaries from the whole buffer at `new_resolution` and
    /// re-places every elite. The buffer and offer count are untouched.
    pub fn remap(&mut self, new_resolution: usize) -> Result<(), ArchiveError> {
        if self.buffer.is_empty() {
            return Err(ArchiveError::EmptyBuffer);
        }
        let grid = compute_boundaries(self.buffer.iter(), new_resolution, self.dims)?;
        self.apply_grid(grid)
    }

    /// Swaps in `grid` and re-places the elites under it.
    pub fn apply_grid(&mut self, grid: BoundaryGrid) -> Result<(), ArchiveError> {
        if grid.dims() != self.dims {
            return Err(ArchiveError::DimensionMismatch {
                expected: self.dims,
                got: grid.dims(),
            });
        }
        self.resolution = grid.resolution();
        self.grid = Some(grid);
        let old = std::mem::take(&mut self.cells);
        for (_, elite) in old {
            self.place(elite)?;
        }
        Ok(())
    }

    /// Uniform choice over occupied cells.
    pub fn select_random_elite<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<&Elite<G>, ArchiveError> {
        if self.cells.is_empty() {
            return Err(ArchiveError::NoElites);
        }
        let index = rng.random_range(0..self.cells.len());
        Ok(self.cells.values().nth(index).expect("index within len"))
    }

    fn check_behavior(&self, behavior: &BehaviorVector) -> Result<(), ArchiveError> {
        if behavior.dims() != self.dims {
            return Err(ArchiveError::DimensionMismatch {
                expected: self.dims,
                got: behavior.dims(),
            });
        }
        if !behavior.is_finite() {
            return Err(ArchiveError::NonFiniteBehavior);
        }
        Ok(())
    }

    fn place(&mut self, elite: Elite<G>) -> Result<InsertOutcome, ArchiveError> {
        self.check_behavior(&elite.behavior)?;
        let grid = self.grid.as_ref().ok_or(ArchiveError::NoSamples)?;
        let cell = grid.locate(&elite.behavior)?;
        Ok(match self.cells.entry(cell) {
            Entry::Vacant(slot) => {
                slot.insert(elite);
                InsertOutcome::PlacedNew
            }
            Entry::Occupied(mut slot) => {
                if elite.fitness > slot.get().fitness {
                    slot.insert(elite);
                    InsertOutcome::ReplacedIncumbent
                } else {
                    InsertOutcome::Rejected
                }
            }
        })
    }
}
