use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use num_traits::Zero;

use super::{write_text, ArchiveSnapshot, IoError};
use crate::analysis::DensityGrid;

/// Plot-ready text: a resolution x resolution matrix (rows are mean-cost
/// cells, columns variance cells), a point cloud and a key/value sidecar
/// with axis ranges.
#[derive(Debug, Clone, PartialEq)]
pub struct HeatmapFiles {
    pub matrix: String,
    pub points: String,
    pub meta: String,
}

impl HeatmapFiles {
    /// Writes `<prefix>_matrix.tsv`, `<prefix>_points.tsv` and
    /// `<prefix>_meta.tsv`.
    pub fn write(&self, dir: &Path, prefix: &str) -> Result<[PathBuf; 3], IoError> {
        let paths = [
            dir.join(format!("{prefix}_matrix.tsv")),
            dir.join(format!("{prefix}_points.tsv")),
            dir.join(format!("{prefix}_meta.tsv")),
        ];
        for (path, text) in paths.iter().zip([&self.matrix, &self.points, &self.meta]) {
            write_text(path, text)?;
        }
        Ok(paths)
    }
}

fn matrix(resolution: usize, value: impl Fn(usize, usize) -> String) -> String {
    let mut out = String::from("mean_cell");
    for v in 0..resolution {
        let _ = write!(out, "\tvariance_cell_{v}");
    }
    out.push('\n');
    for m in 0..resolution {
        out.push_str(&m.to_string());
        for v in 0..resolution {
            out.push('\t');
            out.push_str(&value(m, v));
        }
        out.push('\n');
    }
    out
}

fn join(values: &[f64]) -> String {
    values.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

fn range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)))
}

/// Fitness heatmap of the elites; empty matrix cells are blank.
pub fn export_heatmap(snapshot: &ArchiveSnapshot) -> Result<HeatmapFiles, IoError> {
    let Some(bounds) = snapshot.boundaries.as_ref().filter(|_| !snapshot.cells.is_empty()) else {
        return Err(IoError::Empty("snapshot has no elites".into()));
    };
    if snapshot.dims != 2 {
        return Err(IoError::Empty(format!("{}-dimensional snapshot", snapshot.dims)));
    }
    let r = snapshot.resolution;
    let mut grid = vec![String::new(); r * r];
    let mut points = String::from("mean\tvariance\tfitness\twinrate\tmean_cell\tvariance_cell\n");
    for c in &snapshot.cells {
        grid[c.cell[0] * r + c.cell[1]] = c.fitness.to_string();
        let _ = writeln!(
            points,
            "{}\t{}\t{}\t{}\t{}\t{}",
            c.behavior[0], c.behavior[1], c.fitness, c.winrate, c.cell[0], c.cell[1]
        );
    }
    let x = range(snapshot.cells.iter().map(|c| c.behavior[0]));
    let y = range(snapshot.cells.iter().map(|c| c.behavior[1]));
    let v = range(snapshot.cells.iter().map(|c| c.fitness));
    let meta = format!(
        "key\tvalue\nvalue\tfitness\nresolution\t{r}\nx_axis\tmean\nx_min\t{}\nx_max\t{}\ny_axis\tvariance\ny_min\t{}\ny_max\t{}\nvalue_min\t{}\nvalue_max\t{}\nx_boundaries\t{}\ny_boundaries\t{}\n",
        x.0,
        x.1,
        y.0,
        y.1,
        v.0,
        v.1,
        join(&bounds[0]),
        join(&bounds[1])
    );
    Ok(HeatmapFiles {
        matrix: matrix(r, |m, v| grid[m * r + v].clone()),
        points,
        meta,
    })
}

/// Deck-count heatmap. `axes` gives the outer edges of the mean and
/// variance axes; counts are exact integers.
pub fn export_density_heatmap(density: &DensityGrid, axes: [(f64, f64); 2]) -> Result<HeatmapFiles, IoError> {
    let total = density.total();
    if total.is_zero() {
        return Err(IoError::Empty("density grid has no decks".into()));
    }
    let r = density.resolution();
    let bounds = density.grid.boundaries();
    let edges: Vec<Vec<f64>> = (0..2)
        .map(|d| {
            let mut e = vec![axes[d].0];
            e.extend_from_slice(&bounds[d]);
            e.push(axes[d].1);
            e
        })
        .collect();
    let fractions = density.normalized();
    let mut points = String::from("mean_lo\tmean_hi\tvariance_lo\tvariance_hi\tcount\tfraction\tmean_cell\tvariance_cell\n");
    for m in 0..r {
        for v in 0..r {
            let count = density.get(m, v);
            if count.is_zero() {
                continue;
            }
            let _ = writeln!(
                points,
                "{}\t{}\t{}\t{}\t{count}\t{}\t{m}\t{v}",
                edges[0][m],
                edges[0][m + 1],
                edges[1][v],
                edges[1][v + 1],
                fractions[m * r + v]
            );
        }
    }
    let mut meta = format!(
        "key\tvalue\nvalue\tcount\nresolution\t{r}\ndeck_size\t{}\ntotal\t{total}\nx_axis\tmean\nx_min\t{}\nx_max\t{}\ny_axis\tvariance\ny_min\t{}\ny_max\t{}\nx_boundaries\t{}\ny_boundaries\t{}\n",
        density.deck_size,
        axes[0].0,
        axes[0].1,
        axes[1].0,
        axes[1].1,
        join(&bounds[0]),
        join(&bounds[1])
    );
    if let Some(h) = &density.catalog_hash {
        let _ = writeln!(meta, "catalog_sha256\t{h}");
    }
    Ok(HeatmapFiles {
        matrix: matrix(r, |m, v| density.get(m, v).to_string()),
        points,
        meta,
    })
}
