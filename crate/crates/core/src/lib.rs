//! MAP-Elites with sliding boundaries (MESB) applied to deckbuilding.
//!
//! The crate is split along the pipeline:
//!
//! * [`archive`] holds the quality-diversity archive: percentile cell
//!   boundaries recomputed from a sample buffer, resolution expansion and
//!   elite storage.
//! * [`cardgame`] is a small deterministic card-game simulator with greedy
//!   turn-local agents. It is the fitness oracle for decks.
//! * [`deck`] defines the deck genome, its geometric swap mutation and the
//!   mana mean/variance behavior descriptor.
//! * [`evolution`] drives generate-evaluate-insert runs and the adversary and
//!   head-to-head experiments.
//! * [`analysis`] mines frequent card sets, applies balance patches and
//!   computes the exact behavior distribution of the whole deck space.
//! * [`io`] reads and writes every on-disk format used by the `mesb` binary.

pub mod analysis;
pub mod archive;
pub mod cardgame;
pub mod deck;
pub mod evolution;
pub mod io;
pub mod seed;

pub use archive::{
    ArchiveConfig, BehaviorVector, BoundaryGrid, Elite, EliteStats, InsertOutcome, SlidingArchive,
};
pub use cardgame::{Card, CardCatalog, HeuristicWeights};

pub use deck::Deck;
