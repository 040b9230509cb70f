use std::fmt::Write as _;

use super::IoError;
use crate::analysis::{BalancePatch, FrequencyShift, FrequencyTable, ItemsetReport, PatchField};
use crate::archive::BehaviorVector;
use crate::evolution::{HeadToHead, RunLog};

pub fn run_log_tsv(log: &RunLog) -> String {
    let mut out = String::from(
        "eval\torigin\tmean\tvariance\tfitness\twinrate\toutcome\tresolution\toccupied\tbest_fitness\tbest_winrate\tmean_winrate\n",
    );
    for e in &log.entries {
        let b = e.behavior.values();
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
            e.index,
            e.origin.as_str(),
            b[0],
            b[1],
            e.fitness,
            e.winrate,
            e.outcome.as_str(),
            e.resolution,
            e.occupied,
            e.best_fitness,
            e.best_winrate,
            e.mean_winrate
        );
    }
    out
}

/// Behavior samples in offer order.
pub fn samples_tsv<'a>(samples: impl IntoIterator<Item = &'a BehaviorVector>) -> String {
    let mut out = String::from("index\tmean\tvariance\n");
    for (i, s) in samples.into_iter().enumerate() {
        let v: Vec<String> = s.values().iter().map(ToString::to_string).collect();
        let _ = writeln!(out, "{i}\t{}", v.join("\t"));
    }
    out
}

/// Reads the `mean` and `variance` columns of a samples table or run log.
pub fn parse_behaviors(text: &str) -> Result<Vec<BehaviorVector>, IoError> {
    let err = |line: usize, m: String| IoError::parse("behavior table", line, m);
    let mut lines = text.lines().enumerate();
    let header: Vec<&str> = lines.next().map(|(_, h)| h.split('\t').collect()).unwrap_or_default();
    let col = |name: &str| {
        header
            .iter()
            .position(|h| *h == name)
            .ok_or_else(|| err(1, format!("no {name:?} column")))
    };
    let (mean, var) = (col("mean")?, col("variance")?);
    lines
        .map(|(i, line)| {
            let f: Vec<&str> = line.split('\t').collect();
            let get = |c: usize| -> Result<f64, IoError> {
                let raw = f.get(c).ok_or_else(|| err(i + 1, format!("missing column {}", c + 1)))?;
                raw.parse().map_err(|_| err(i + 1, format!("cannot parse {raw:?}")))
            };
            Ok(BehaviorVector::new(vec![get(mean)?, get(var)?]))
        })
        .collect()
}

pub fn itemsets_tsv(report: &ItemsetReport) -> String {
    let mut out = String::from("size\tsupport\tratio\titems\n");
    for set in report.iter() {
        let _ = writeln!(out, "{}\t{}\t{}\t{}", set.items.len(), set.support, set.ratio, set.items.join(","));
    }
    out
}

/// Catalog order. Counts are stored so the fractions reparse exactly.
pub fn frequency_table_tsv(table: &FrequencyTable) -> String {
    let mut out = String::from("card\tdecks\tpresent\tfrequency\n");
    for (card, f) in &table.rows {
        let present = (f * table.decks as f64).round() as usize;
        let _ = writeln!(out, "{card}\t{}\t{present}\t{f}", table.decks);
    }
    out
}

pub fn parse_frequency_table(text: &str) -> Result<FrequencyTable, IoError> {
    let err = |line: usize, m: String| IoError::parse("frequency table", line, m);
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, "card\tdecks\tpresent\tfrequency")) => {}
        _ => return Err(err(1, "expected header \"card\\tdecks\\tpresent\\tfrequency\"".into())),
    }
    let mut decks = None;
    let mut rows = Vec::new();
    for (i, line) in lines {
        let no = i + 1;
        let f: Vec<&str> = line.split('\t').collect();
        if f.len() != 4 {
            return Err(err(no, format!("expected 4 fields, found {}", f.len())));
        }
        let n: usize = f[1].parse().map_err(|_| err(no, format!("cannot parse {:?}", f[1])))?;
        let present: usize = f[2].parse().map_err(|_| err(no, format!("cannot parse {:?}", f[2])))?;
        if *decks.get_or_insert(n) != n || n == 0 || present > n {
            return Err(err(no, "inconsistent deck count".into()));
        }
        rows.push((f[0].to_string(), present as f64 / n as f64));
    }
    let decks = decks.ok_or_else(|| err(1, "no rows".into()))?;
    Ok(FrequencyTable { decks, rows })
}

fn describe_edits(patch: Option<&BalancePatch>, card: &str) -> String {
    let Some(patch) = patch else { return String::new() };
    patch
        .edits
        .iter()
        .filter(|e| e.card == card)
        .map(|e| {
            let field = match e.field {
                PatchField::ManaCost => "mana_cost",
                PatchField::Attack => "attack",
                PatchField::Health => "health",
            };
            format!("{field}{:+}", e.delta)
        })
        .collect::<Vec<_>>()
        .join(";")
}

/// Before/after percentages per card with the direction of change. An `x`
/// marks a frequency at or below the rarity threshold. With a patch, only
/// edited cards are listed and each row names its edits.
pub fn diff_report(shifts: &[FrequencyShift], patch: Option<&BalancePatch>) -> String {
    let mut out = String::from("card\tchange\tbefore_pct\tafter_pct\tdelta_pct\tdirection\trare_before\trare_after\n");
    for s in shifts {
        let change = describe_edits(patch, &s.card);
        if patch.is_some() && change.is_empty() {
            continue;
        }
        let direction = if s.delta > 0.0 {
            "up"
        } else if s.delta < 0.0 {
            "down"
        } else {
            "same"
        };
        let mark = |rare: bool| if rare { "x" } else { "" };
        let _ = writeln!(
            out,
            "{}\t{}\t{:.1}\t{:.1}\t{:+.1}\t{}\t{}\t{}",
            s.card,
            change,
            100.0 * s.before,
            100.0 * s.after,
            100.0 * s.delta,
            direction,
            mark(s.rare_before),
            mark(s.rare_after)
        );
    }
    out
}

pub fn head_to_head_tsv(h: &HeadToHead) -> String {
    format!(
        "metric\tvalue\ngames\t{}\na_wins\t{}\nb_wins\t{}\ndraws\t{}\na_winrate\t{}\nb_winrate\t{}\na_mean_margin\t{}\nb_mean_margin\t{}\n",
        h.games, h.a_wins, h.b_wins, h.draws, h.a_winrate, h.b_winrate, h.a_mean_margin, h.b_mean_margin
    )
}
