//! Level-wise frequent itemset mining.

use std::collections::{BTreeSet, HashSet};

use super::AnalysisError;
use crate::deck::Deck;

/// Item sets, one per transaction. Items are unique within a transaction.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TransactionSet {
    transactions: Vec<BTreeSet<String>>,
}

impl TransactionSet {
    pub fn new<I, T, S>(transactions: I) -> Self
    where
        I: IntoIterator<Item = T>,
        T: IntoIterator<Item = S>,
        S: Into<String>,
    {
        TransactionSet {
            transactions: transactions
                .into_iter()
                .map(|t| t.into_iter().map(Into::into).collect())
                .collect(),
        }
    }

    /// One transaction per deck holding each card present at least once.
    pub fn from_decks<'a>(decks: impl IntoIterator<Item = &'a Deck>) -> Self {
        Self::new(decks.into_iter().map(|d| d.card_ids().to_vec()))
    }

    pub fn len(&self) -> usize {
        self.transactions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.transactions.is_empty()
    }

    pub fn transactions(&self) -> &[BTreeSet<String>] {
        &self.transactions
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FrequentItemset {
    /// Sorted item names.
    pub items: Vec<String>,
    pub support: usize,
    pub ratio: f64,
}

/// Frequent itemsets grouped by size: `levels[0]` holds singletons.
#[derive(Debug, Clone, PartialEq)]
pub struct ItemsetReport {
    pub transactions: usize,
    pub min_support: f64,
    pub levels: Vec<Vec<FrequentItemset>>,
}

impl ItemsetReport {
    pub fn iter(&self) -> impl Iterator<Item = &FrequentItemset> {
        self.levels.iter().flatten()
    }

    pub fn len(&self) -> usize {
        self.levels.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

struct Bits(Vec<u64>);

impl Bits {
    fn new(items: usize) -> Self {
        Bits(vec![0; items.div_ceil(64).max(1)])
    }

    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn has(&self, i: usize) -> bool {
        self.0[i / 64] & (1 << (i % 64)) != 0
    }
}

/// Classic Apriori: frequent `k`-sets are joined on a shared `k-1` prefix,
/// candidates with an infrequent subset are pruned, and the survivors are
/// counted with one scan over the transactions.
pub fn apriori(transactions: &TransactionSet, min_support_ratio: f64) -> Result<ItemsetReport, AnalysisError> {
    if !(min_support_ratio > 0.0 && min_support_ratio <= 1.0) {
        return Err(AnalysisError::BadSupport(min_support_ratio));
    }
    if transactions.is_empty() {
        return Err(AnalysisError::NoTransactions);
    }
    let n = transactions.len();
    let frequent = |count: usize| count as f64 / n as f64 >= min_support_ratio;

    let names: Vec<String> = transactions
        .transactions
        .iter()
        .flatten()
        .cloned()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let rows: Vec<Bits> = transactions
        .transactions
        .iter()
        .map(|t| {
            let mut b = Bits::new(names.len());
            for item in t {
                b.set(names.binary_search(item).expect("item collected above"));
            }
            b
        })
        .collect();

    let mut levels: Vec<Vec<(Vec<usize>, usize)>> = Vec::new();
    let singles: Vec<(Vec<usize>, usize)> = (0..names.len())
        .map(|i| (vec![i], rows.iter().filter(|r| r.has(i)).count()))
        .filter(|&(_, c)| frequent(c))
        .collect();
    let mut current = singles;

    while !current.is_empty() {
        let known: HashSet<&[usize]> = current.iter().map(|(s, _)| s.as_slice()).collect();
        let mut candidates = Vec::new();
        for (a, (left, _)) in current.iter().enumerate() {
            for (right, _) in &current[a + 1..] {
                let k = left.len();
                if left[..k - 1] != right[..k - 1] {
                    // `current` is sorted, so no later set shares this prefix.
                    break;
                }
                let mut joined = left.clone();
                joined.push(right[k - 1]);
                let closed = (0..joined.len()).all(|skip| {
                    let subset: Vec<usize> = joined
                        .iter()
                        .enumerate()
                        .filter(|&(i, _)| i != skip)
                        .map(|(_, &v)| v)
                        .collect();
                    known.contains(subset.as_slice())
                });
                if closed {
                    candidates.push(joined);
                }
            }
        }
        let next: Vec<(Vec<usize>, usize)> = candidates
            .into_iter()
            .map(|c| {
                let count = rows.iter().filter(|r| c.iter().all(|&i| r.has(i))).count();
                (c, count)
            })
            .filter(|&(_, count)| frequent(count))
            .collect();
        levels.push(std::mem::replace(&mut current, next));
    }

    let levels = levels
        .into_iter()
        .map(|level| {
            level
                .into_iter()
                .map(|(set, support)| FrequentItemset {
                    items: set.iter().map(|&i| names[i].clone()).collect(),
                    support,
                    ratio: support as f64 / n as f64,
                })
                .collect()
        })
        .collect();
    Ok(ItemsetReport {
        transactions: n,
        min_support: min_support_ratio,
        levels,
    })
}

/// Checks that every reported set meets the minimum support and that every
/// non-empty proper subset of a reported set is also reported. Checking the
/// subsets one item smaller suffices: closure follows by induction on size.
pub fn check_downward_closure(report: &ItemsetReport) -> Result<(), String> {
    let all: HashSet<&[String]> = report.iter().map(|s| s.items.as_slice()).collect();
    for set in report.iter() {
        if set.ratio < report.min_support {
            return Err(format!("{:?} is below minimum support", set.items));
        }
        if set.items.len() < 2 {
            continue;
        }
        for skip in 0..set.items.len() {
            let mut subset = set.items.clone();
            subset.remove(skip);
            if !all.contains(subset.as_slice()) {
                return Err(format!("{:?} is reported but its subset {:?} is not", set.items, subset));
            }
        }
    }
    Ok(())
}
