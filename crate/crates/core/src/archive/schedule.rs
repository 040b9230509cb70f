use serde::{Deserialize, Serialize};

use super::ArchiveError;

/// Archive parameters. `buffer_capacity: None` keeps every sample.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArchiveConfig {
    pub remap_frequency: usize,
    pub buffer_capacity: Option<usize>,
    pub min_resolution: usize,
    pub max_resolution: usize,
    pub total_evaluations: usize,
}

impl Default for ArchiveConfig {
    fn default() -> Self {
        ArchiveConfig {
            remap_frequency: 100,
            buffer_capacity: None,
            min_resolution: 2,
            max_resolution: 20,
            total_evaluations: 10_000,
        }
    }
}

impl ArchiveConfig {
    pub fn validate(&self) -> Result<(), ArchiveError> {
        if self.remap_frequency == 0 {
            return Err(ArchiveError::Config("remap_frequency must be >= 1".into()));
        }
        if self.min_resolution < 2 {
            return Err(ArchiveError::BadResolution(self.min_resolution));
        }
        if self.max_resolution < self.min_resolution {
            return Err(ArchiveError::Config(
                "max_resolution must be >= min_resolution".into(),
            ));
        }
        if self.total_evaluations == 0 {
            return Err(ArchiveError::Config("total_evaluations must be >= 1".into()));
        }
        if self.buffer_capacity == Some(0) {
            return Err(ArchiveError::Config("buffer_capacity must be >= 1".into()));
        }
        Ok(())
    }

    pub fn levels(&self) -> usize {
        self.max_resolution - self.min_resolution + 1
    }
}

/// Grid resolution in force for evaluation `eval_index`.
///
/// The budget is split into equal intervals, one per resolution level from
/// `min_resolution` up to `max_resolution`.
pub fn resolution_for(eval_index: usize, config: &ArchiveConfig) -> Result<usize, ArchiveError> {
    if eval_index >= config.total_evaluations {
        return Err(ArchiveError::IndexOutOfRange {
            index: eval_index,
            budget: config.total_evaluations,
        });
    }
    let step = (eval_index as u128 * config.levels() as u128 / config.total_evaluations as u128)
        as usize;
    Ok((config.min_resolution + step).min(config.max_resolution))
}
