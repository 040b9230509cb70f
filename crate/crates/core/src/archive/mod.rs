//! Sliding-boundary MAP-Elites archive.
//!
//! Cell boundaries are not fixed in behavior space. They sit at percentile
//! marks of the behaviors seen so far and are recomputed every
//! `remap_frequency` offers, and whenever the resolution schedule grows the
//! grid. Outer cells are open-ended so every finite behavior has a home.

mod behavior;
mod buffer;
mod grid;
mod schedule;
mod sliding;

pub use behavior::BehaviorVector;
pub use buffer::SampleBuffer;
pub use grid::{compute_boundaries, locate_cell, BoundaryGrid, Cell};
pub use schedule::{resolution_for, ArchiveConfig};
pub use sliding::{Elite, EliteStats, InsertOutcome, SlidingArchive};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ArchiveError {
    #[error("no samples")]
    NoSamples,
    #[error("invalid sample: component {component} of sample {index} is not finite")]
    InvalidSample { index: usize, component: usize },
    #[error("resolution must be at least 2, got {0}")]
    BadResolution(usize),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("behavior is not finite")]
    NonFiniteBehavior,
    #[error("cannot remap without samples")]
    EmptyBuffer,
    #[error("evaluation index {index} out of range for budget {budget}")]
    IndexOutOfRange { index: usize, budget: usize },
    #[error("no elites")]
    NoElites,
    #[error("invalid archive config: {0}")]
    Config(String),
}
