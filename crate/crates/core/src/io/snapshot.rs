use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use super::{read_text, write_text, IoError};
use crate::archive::{ArchiveConfig, BehaviorVector, BoundaryGrid, Elite, EliteStats, SlidingArchive};
use crate::deck::Deck;

const MAGIC: &str = "mesb-snapshot";
const VERSION: u32 = 1;
const CELL_HEADER: &str = "cell\tbehavior\tfitness\twinrate\tgames\tdeck";

/// One occupied cell.
#[derive(Debug, Clone, PartialEq)]
pub struct CellRecord {
    pub cell: Vec<usize>,
    pub behavior: Vec<f64>,
    pub fitness: f64,
    pub winrate: f64,
    pub games: u32,
    pub deck: Deck,
}

/// Text form of an archive: explicit boundaries plus one record per
/// occupied cell. The sample buffer is summarized by its length only.
#[derive(Debug, Clone, PartialEq)]
pub struct ArchiveSnapshot {
    pub dims: usize,
    pub resolution: usize,
    /// `None` until the archive has seen a sample.
    pub boundaries: Option<Vec<Vec<f64>>>,
    pub config: ArchiveConfig,
    pub config_hash: String,
    pub seed: u64,
    pub inserted: usize,
    pub buffer_len: usize,
    pub cells: Vec<CellRecord>,
}

impl ArchiveSnapshot {
    pub fn from_archive(archive: &SlidingArchive<Deck>, seed: u64, config_hash: &str) -> Self {
        ArchiveSnapshot {
            dims: archive.dims(),
            resolution: archive.resolution(),
            boundaries: archive.grid().map(|g| g.boundaries().to_vec()),
            config: archive.config().clone(),
            config_hash: config_hash.to_string(),
            seed,
            inserted: archive.inserted_count(),
            buffer_len: archive.buffer().len(),
            cells: archive
                .iter()
                .map(|(cell, e)| CellRecord {
                    cell: cell.clone(),
                    behavior: e.behavior.values().to_vec(),
                    fitness: e.fitness,
                    winrate: e.stats.winrate,
                    games: e.stats.games,
                    deck: e.genome.clone(),
                })
                .collect(),
        }
    }

    /// Rebuilds the archive with an empty sample buffer. Fails if a record
    /// does not sit in the cell its behavior maps to.
    pub fn to_archive(&self) -> Result<SlidingArchive<Deck>, IoError> {
        let Some(bounds) = &self.boundaries else {
            if !self.cells.is_empty() {
                return Err(IoError::parse("snapshot", 0, "cell records without boundaries"));
            }
            return Ok(SlidingArchive::new(self.config.clone(), self.dims)?);
        };
        let grid = BoundaryGrid::from_boundaries(bounds.clone(), self.resolution)?;
        let mut elites = Vec::with_capacity(self.cells.len());
        for (i, rec) in self.cells.iter().enumerate() {
            let behavior = BehaviorVector::new(rec.behavior.clone());
            let at = grid.locate(&behavior)?;
            if at != rec.cell {
                return Err(IoError::parse(
                    "snapshot",
                    0,
                    format!("cell record {} claims cell {:?} but its behavior maps to {:?}", i + 1, rec.cell, at),
                ));
            }
            elites.push(Elite {
                genome: rec.deck.clone(),
                behavior,
                fitness: rec.fitness,
                stats: EliteStats {
                    winrate: rec.winrate,
                    games: rec.games,
                },
            });
        }
        let archive = SlidingArchive::from_parts(self.config.clone(), grid, elites, self.inserted)?;
        if archive.len() != self.cells.len() {
            return Err(IoError::parse("snapshot", 0, "two cell records share a cell"));
        }
        Ok(archive)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let c = &self.config;
        let _ = writeln!(out, "{MAGIC}\t{VERSION}");
        let _ = writeln!(out, "dims\t{}", self.dims);
        let _ = writeln!(out, "resolution\t{}", self.resolution);
        if let Some(bounds) = &self.boundaries {
            for (d, b) in bounds.iter().enumerate() {
                let _ = writeln!(out, "boundary\t{d}\t{}", join(b, "\t"));
            }
        }
        let _ = writeln!(out, "remap_frequency\t{}", c.remap_frequency);
        let _ = writeln!(out, "buffer_capacity\t{}", c.buffer_capacity.unwrap_or(0));
        let _ = writeln!(out, "min_resolution\t{}", c.min_resolution);
        let _ = writeln!(out, "max_resolution\t{}", c.max_resolution);
        let _ = writeln!(out, "total_evaluations\t{}", c.total_evaluations);
        let _ = writeln!(out, "config_hash\t{}", self.config_hash);
        let _ = writeln!(out, "seed\t{}", self.seed);
        let _ = writeln!(out, "inserted\t{}", self.inserted);
        let _ = writeln!(out, "buffer_len\t{}", self.buffer_len);
        let _ = writeln!(out, "cells\t{}", self.cells.len());
        let _ = writeln!(out, "{CELL_HEADER}");
        for r in &self.cells {
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}\t{}",
                join(&r.cell, ","),
                join(&r.behavior, ","),
                r.fitness,
                r.winrate,
                r.games,
                r.deck.to_literal()
            );
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self, IoError> {
        let mut lines = Lines {
            inner: text.lines().enumerate().peekable(),
            last: 0,
        };

        let magic = lines.next("header")?;
        if magic.1 != [MAGIC, &VERSION.to_string()] {
            return Err(IoError::parse("snapshot", magic.0, format!("expected \"{MAGIC}\\t{VERSION}\"")));
        }
        let dims: usize = lines.value("dims")?;
        let resolution: usize = lines.value("resolution")?;

        let mut boundaries = Vec::new();
        while lines.peek_key() == Some("boundary") {
            let (no, fields) = lines.next("boundary")?;
            let d: usize = field(&fields, 1, no)?;
            if d != boundaries.len() {
                return Err(IoError::parse("snapshot", no, format!("boundary for dimension {d} out of order")));
            }
            let values = fields[2..]
                .iter()
                .map(|v| parse_num::<f64>(v, no))
                .collect::<Result<Vec<_>, _>>()?;
            boundaries.push(values);
        }
        if !boundaries.is_empty() && boundaries.len() != dims {
            return Err(IoError::parse(
                "snapshot",
                lines.last,
                format!("{} boundary lines for {dims} dimensions", boundaries.len()),
            ));
        }

        let remap_frequency = lines.value("remap_frequency")?;
        let buffer_capacity: usize = lines.value("buffer_capacity")?;
        let config = ArchiveConfig {
            remap_frequency,
            buffer_capacity: (buffer_capacity > 0).then_some(buffer_capacity),
            min_resolution: lines.value("min_resolution")?,
            max_resolution: lines.value("max_resolution")?,
            total_evaluations: lines.value("total_evaluations")?,
        };
        let config_hash: String = lines.value("config_hash")?;
        let seed = lines.value("seed")?;
        let inserted = lines.value("inserted")?;
        let buffer_len = lines.value("buffer_len")?;
        let count: usize = lines.value("cells")?;
        let (no, header) = lines.next("cell header")?;
        if header.join("\t") != CELL_HEADER {
            return Err(IoError::parse("snapshot", no, "expected the cell column header"));
        }

        let mut cells = Vec::with_capacity(count);
        for i in 0..count {
            let (no, f) = lines.next(&format!("cell record {} of {count}", i + 1))?;
            if f.len() != 6 {
                return Err(IoError::parse("snapshot", no, format!("expected 6 fields, found {}", f.len())));
            }
            let cell = split(f[0], no)?;
            let behavior: Vec<f64> = split(f[1], no)?;
            if cell.len() != dims || behavior.len() != dims {
                return Err(IoError::parse("snapshot", no, format!("expected {dims} coordinates")));
            }
            cells.push(CellRecord {
                cell,
                behavior,
                fitness: parse_num(f[2], no)?,
                winrate: parse_num(f[3], no)?,
                games: parse_num(f[4], no)?,
                deck: Deck::parse_literal(f[5]),
            });
        }
        if let Some((no, _)) = lines.inner.next() {
            return Err(IoError::parse("snapshot", no + 1, format!("more than {count} cell records")));
        }
        Ok(ArchiveSnapshot {
            dims,
            resolution,
            boundaries: (!boundaries.is_empty()).then_some(boundaries),
            config,
            config_hash,
            seed,
            inserted,
            buffer_len,
            cells,
        })
    }
}

struct Lines<'a, I: Iterator<Item = (usize, &'a str)>> {
    inner: std::iter::Peekable<I>,
    last: usize,
}

impl<'a, I: Iterator<Item = (usize, &'a str)>> Lines<'a, I> {
    fn next(&mut self, expected: &str) -> Result<(usize, Vec<&'a str>), IoError> {
        match self.inner.next() {
            Some((i, line)) => {
                self.last = i + 1;
                Ok((i + 1, line.split('\t').collect()))
            }
            None => Err(IoError::parse(
                "snapshot",
                self.last + 1,
                format!("file ends before {expected}"),
            )),
        }
    }

    fn peek_key(&mut self) -> Option<&'a str> {
        self.inner.peek().and_then(|(_, l)| l.split('\t').next())
    }

    fn value<T: FromStr>(&mut self, key: &str) -> Result<T, IoError> {
        let (no, fields) = self.next(key)?;
        if fields.len() != 2 || fields[0] != key {
            return Err(IoError::parse("snapshot", no, format!("expected \"{key}\\t<value>\"")));
        }
        parse_num(fields[1], no)
    }
}

fn field<T: FromStr>(fields: &[&str], i: usize, line: usize) -> Result<T, IoError> {
    let raw = fields
        .get(i)
        .ok_or_else(|| IoError::parse("snapshot", line, format!("missing field {}", i + 1)))?;
    parse_num(raw, line)
}

fn parse_num<T: FromStr>(raw: &str, line: usize) -> Result<T, IoError> {
    raw.parse()
        .map_err(|_| IoError::parse("snapshot", line, format!("cannot parse {raw:?}")))
}

fn split<T: FromStr>(raw: &str, line: usize) -> Result<Vec<T>, IoError> {
    raw.split(',').map(|v| parse_num(v, line)).collect()
}

fn join<T: std::fmt::Display>(values: &[T], sep: &str) -> String {
    values.iter().map(ToString::to_string).collect::<Vec<_>>().join(sep)
}

pub fn save_snapshot(path: &Path, snapshot: &ArchiveSnapshot) -> Result<(), IoError> {
    write_text(path, &snapshot.to_text())
}

pub fn load_snapshot(path: &Path) -> Result<ArchiveSnapshot, IoError> {
    ArchiveSnapshot::parse(&read_text(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn deck(tag: &str) -> Deck {
        Deck::from_ids((0..30).map(|i| format!("{tag}{}", i % 15)).collect())
    }

    fn two_elites() -> SlidingArchive<Deck> {
        let mut a = SlidingArchive::new(ArchiveConfig::default(), 2).unwrap();
        for (i, b) in [[1.0, 0.5], [7.25, 3.0 / 7.0]].into_iter().enumerate() {
            a.try_insert(Elite {
                genome: deck(if i == 0 { "a" } else { "b" }),
                behavior: BehaviorVector::new(b.to_vec()),
                fitness: 0.1 + 0.2 * i as f64,
                stats: EliteStats { winrate: 1.0 / 3.0, games: 9 },
            })
            .unwrap();
        }
        a
    }

    #[test]
    fn two_elites_two_records_and_identical_bytes() {
        let a = two_elites();
        let snap = ArchiveSnapshot::from_archive(&a, 7, "abc");
        assert_eq!(snap.cells.len(), 2);
        let text = snap.to_text();
        let back = ArchiveSnapshot::parse(&text).unwrap();
        assert_eq!(back, snap);
        assert_eq!(back.to_text(), text);

        let rebuilt = back.to_archive().unwrap();
        assert_eq!(rebuilt.grid(), a.grid());
        assert_eq!(rebuilt.inserted_count(), a.inserted_count());
        assert!(rebuilt.iter().eq(a.iter()));
    }

    #[test]
    fn truncated_file_fails_with_line() {
        let text = ArchiveSnapshot::from_archive(&two_elites(), 7, "abc").to_text();
        let cut: String = text.lines().take(text.lines().count() - 1).map(|l| format!("{l}\n")).collect();
        let err = ArchiveSnapshot::parse(&cut).unwrap_err().to_string();
        assert!(err.contains("cell record 2 of 2"), "{err}");
    }

    #[test]
    fn bad_number_names_its_line() {
        let text = ArchiveSnapshot::from_archive(&two_elites(), 7, "abc")
            .to_text()
            .replace("seed\t7", "seed\tseven");
        let err = ArchiveSnapshot::parse(&text).unwrap_err();
        let line = text.lines().position(|l| l.starts_with("seed")).unwrap() + 1;
        assert!(err.to_string().starts_with(&format!("snapshot line {line}:")), "{err}");
    }

    #[test]
    fn empty_archive_round_trips() {
        let a: SlidingArchive<Deck> = SlidingArchive::new(ArchiveConfig::default(), 2).unwrap();
        let snap = ArchiveSnapshot::from_archive(&a, 0, "");
        let back = ArchiveSnapshot::parse(&snap.to_text()).unwrap();
        assert_eq!(back, snap);
        assert_eq!(back.to_archive().unwrap(), a);
    }
}
