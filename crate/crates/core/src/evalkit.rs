//! Agreement and accuracy metrics for checking arcs against human judgement.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::io::Read;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum EvalError {
    #[error("length mismatch: {left} predictions vs {right} gold labels")]
    LengthMismatch { left: usize, right: usize },
    #[error("no items to evaluate")]
    Empty,
    #[error("item {item} has {found} ratings, expected {expected}")]
    Ragged { item: usize, found: usize, expected: usize },
    #[error("at least two raters per item are required")]
    TooFewRaters,
    #[error("degenerate agreement: every rating falls in one category, kappa is undefined")]
    Degenerate,
    #[error("event ids do not line up at position {position}: system {system}, gold {gold}")]
    Misaligned {
        position: usize,
        system: usize,
        gold: usize,
    },
    #[error("unknown shift label `{0}`")]
    UnknownShift(String),
    #[error("item `{item}` has no gold answer")]
    MissingGold { item: String },
    #[error("rater `{rater}` answered item `{item}` twice")]
    DuplicateResponse { item: String, rater: String },
    #[error("line {line}: {message}")]
    Csv { line: u64, message: String },
}

/// Fraction of positions where the prediction equals the gold label.
pub fn accuracy<T: PartialEq>(predicted: &[T], gold: &[T]) -> Result<f64, EvalError> {
    if predicted.len() != gold.len() {
        return Err(EvalError::LengthMismatch {
            left: predicted.len(),
            right: gold.len(),
        });
    }
    if predicted.is_empty() {
        return Err(EvalError::Empty);
    }
    let hits = predicted.iter().zip(gold).filter(|(p, g)| p == g).count();
    Ok(hits as f64 / predicted.len() as f64)
}

/// Matched, spurious and missed items from a per-item multiset comparison.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct MatchCounts {
    pub matched: usize,
    pub spurious: usize,
    pub missed: usize,
}

impl MatchCounts {
    pub fn precision(&self) -> Option<f64> {
        let n = self.matched + self.spurious;
        (n > 0).then(|| self.matched as f64 / n as f64)
    }

    pub fn recall(&self) -> Option<f64> {
        let n = self.matched + self.missed;
        (n > 0).then(|| self.matched as f64 / n as f64)
    }
}

/// Compares system and gold items (e.g. trigger words per sentence) item by
/// item; an item matches at most as often as it occurs in the gold list.
pub fn match_items<T: Ord>(system: &[Vec<T>], gold: &[Vec<T>]) -> Result<MatchCounts, EvalError> {
    if system.len() != gold.len() {
        return Err(EvalError::LengthMismatch {
            left: system.len(),
            right: gold.len(),
        });
    }
    let mut c = MatchCounts::default();
    for (sys, gld) in system.iter().zip(gold) {
        let mut remaining: BTreeMap<&T, usize> = BTreeMap::new();
        for g in gld {
            *remaining.entry(g).or_default() += 1;
        }
        for s in sys {
            match remaining.get_mut(s) {
                Some(n) if *n > 0 => {
                    *n -= 1;
                    c.matched += 1;
                }
                _ => c.spurious += 1,
            }
        }
        c.missed += remaining.values().sum::<usize>();
    }
    Ok(c)
}

/// Fleiss' kappa from an items x categories matrix of rating counts. Every
/// row must sum to the same number of raters.
pub fn fleiss_kappa(counts: &[Vec<usize>]) -> Result<f64, EvalError> {
    let first = counts.first().ok_or(EvalError::Empty)?;
    let raters: usize = first.iter().sum();
    let categories = first.len();
    for (item, row) in counts.iter().enumerate() {
        let found: usize = row.iter().sum();
        if row.len() != categories || found != raters {
            return Err(EvalError::Ragged {
                item,
                found,
                expected: raters,
            });
        }
    }
    if raters < 2 {
        return Err(EvalError::TooFewRaters);
    }
    let items = counts.len() as f64;
    let r = raters as f64;
    let p_bar = counts
        .iter()
        .map(|row| {
            let agree: usize = row.iter().map(|&c| c * c.saturating_sub(1)).sum();
            agree as f64 / (r * (r - 1.0))
        })
        .sum::<f64>()
        / items;
    let p_e: f64 = (0..categories)
        .map(|j| {
            let share = counts.iter().map(|row| row[j]).sum::<usize>() as f64 / (items * r);
            share * share
        })
        .sum();
    // all ratings in one category: every marginal but one is zero
    let observed = (0..categories).filter(|&j| counts.iter().any(|row| row[j] > 0)).count();
    if observed < 2 {
        return Err(EvalError::Degenerate);
    }
    if counts.iter().all(|row| row.contains(&raters)) {
        return Ok(1.0);
    }
    Ok((p_bar - p_e) / (1.0 - p_e))
}

/// Categorical answers indexed by item and rater, read from a CSV with
/// header `item_id,rater_id,answer`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RaterResponses {
    answers: BTreeMap<String, BTreeMap<String, String>>,
}

#[derive(Debug, Deserialize)]
struct ResponseRow {
    item_id: String,
    rater_id: String,
    answer: String,
}

impl RaterResponses {
    pub fn from_csv<R: Read>(reader: R) -> Result<Self, EvalError> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let mut out = Self::default();
        for row in rdr.deserialize::<ResponseRow>() {
            let row = row.map_err(|e| EvalError::Csv {
                line: e.position().map(|p| p.line()).unwrap_or(0),
                message: e.to_string(),
            })?;
            out.insert(row.item_id, row.rater_id, row.answer)?;
        }
        Ok(out)
    }

    pub fn insert(&mut self, item: String, rater: String, answer: String) -> Result<(), EvalError> {
        let slot = self.answers.entry(item.clone()).or_default();
        if slot.contains_key(&rater) {
            return Err(EvalError::DuplicateResponse { item, rater });
        }
        slot.insert(rater, answer);
        Ok(())
    }

    pub fn items(&self) -> impl Iterator<Item = &str> {
        self.answers.keys().map(String::as_str)
    }

    /// Sorted set of every answer given.
    pub fn vocabulary(&self) -> Vec<&str> {
        let set: BTreeSet<&str> = self
            .answers
            .values()
            .flat_map(|m| m.values().map(String::as_str))
            .collect();
        set.into_iter().collect()
    }

    /// Items x categories count matrix over the full answer vocabulary.
    pub fn category_counts(&self) -> Vec<Vec<usize>> {
        let vocab = self.vocabulary();
        self.answers
            .values()
            .map(|m| vocab.iter().map(|v| m.values().filter(|a| a == v).count()).collect())
            .collect()
    }

    /// Items x {match, no match} counts: each answer is coded 1 when it
    /// equals the item's gold answer and 0 otherwise.
    pub fn match_counts(&self, gold: &BTreeMap<String, String>) -> Result<Vec<Vec<usize>>, EvalError> {
        self.answers
            .iter()
            .map(|(item, m)| {
                let g = gold
                    .get(item)
                    .ok_or_else(|| EvalError::MissingGold { item: item.clone() })?;
                let hits = m.values().filter(|a| *a == g).count();
                Ok(vec![hits, m.len() - hits])
            })
            .collect()
    }

    /// Fraction of all answers that equal the gold answer for their item.
    pub fn accuracy_against(&self, gold: &BTreeMap<String, String>) -> Result<f64, EvalError> {
        let counts = self.match_counts(gold)?;
        let total: usize = counts.iter().map(|r| r[0] + r[1]).sum();
        if total == 0 {
            return Err(EvalError::Empty);
        }
        Ok(counts.iter().map(|r| r[0]).sum::<usize>() as f64 / total as f64)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Shift {
    Positive,
    Neutral,
    Negative,
}

impl Shift {
    pub const ALL: [Shift; 3] = [Shift::Positive, Shift::Neutral, Shift::Negative];

    fn index(self) -> usize {
        match self {
            Shift::Positive => 0,
            Shift::Neutral => 1,
            Shift::Negative => 2,
        }
    }
}

impl fmt::Display for Shift {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Shift::Positive => "positive",
            Shift::Neutral => "neutral",
            Shift::Negative => "negative",
        })
    }
}

impl FromStr for Shift {
    type Err = EvalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "positive" | "pos" | "+" => Ok(Shift::Positive),
            "neutral" | "neu" | "0" => Ok(Shift::Neutral),
            "negative" | "neg" | "-" => Ok(Shift::Negative),
            _ => Err(EvalError::UnknownShift(s.to_owned())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShiftLabel {
    pub event_id: usize,
    pub label: Shift,
}

/// 2% of the series' value range.
pub fn default_dead_band(series: &[f64]) -> f64 {
    let (lo, hi) = series.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
        (lo.min(v), hi.max(v))
    });
    if series.is_empty() {
        0.0
    } else {
        0.02 * (hi - lo)
    }
}

/// Labels each step `v[i-1] -> v[i]` by the sign of its change, with changes
/// inside `[-dead_band, dead_band]` counted as neutral. The label carries the
/// event id of the later point.
pub fn label_shifts(series: &[f64], event_ids: &[usize], dead_band: f64) -> Vec<ShiftLabel> {
    series
        .windows(2)
        .zip(event_ids.iter().skip(1))
        .map(|(w, &event_id)| {
            let delta = w[1] - w[0];
            let label = if delta > dead_band {
                Shift::Positive
            } else if delta < -dead_band {
                Shift::Negative
            } else {
                Shift::Neutral
            };
            ShiftLabel { event_id, label }
        })
        .collect()
}

/// Confusion table with rows for system labels and columns for gold labels,
/// both in positive, neutral, negative order. Each nonempty row sums to one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShiftConfusion {
    pub counts: [[usize; 3]; 3],
    pub rows: [[f64; 3]; 3],
}

pub fn shift_confusion(system: &[ShiftLabel], gold: &[ShiftLabel]) -> Result<ShiftConfusion, EvalError> {
    if system.len() != gold.len() {
        return Err(EvalError::LengthMismatch {
            left: system.len(),
            right: gold.len(),
        });
    }
    let mut counts = [[0usize; 3]; 3];
    for (position, (s, g)) in system.iter().zip(gold).enumerate() {
        if s.event_id != g.event_id {
            return Err(EvalError::Misaligned {
                position,
                system: s.event_id,
                gold: g.event_id,
            });
        }
        counts[s.label.index()][g.label.index()] += 1;
    }
    let mut rows = [[0.0; 3]; 3];
    for (row, c) in rows.iter_mut().zip(&counts) {
        let total: usize = c.iter().sum();
        if total > 0 {
            for (r, &n) in row.iter_mut().zip(c) {
                *r = n as f64 / total as f64;
            }
        }
    }
    Ok(ShiftConfusion { counts, rows })
}

impl ShiftConfusion {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("system,positive,neutral,negative,count\n");
        for s in Shift::ALL {
            let i = s.index();
            let r = &self.rows[i];
            let n: usize = self.counts[i].iter().sum();
            out.push_str(&format!("{s},{},{},{},{n}\n", r[0], r[1], r[2]));
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "{:<10}{:>10}{:>10}{:>10}{:>8}\n",
            "system", "positive", "neutral", "negative", "n"
        );
        for s in Shift::ALL {
            let i = s.index();
            let r = &self.rows[i];
            let n: usize = self.counts[i].iter().sum();
            out.push_str(&format!(
                "{:<10}{:>10.2}{:>10.2}{:>10.2}{:>8}\n",
                s.to_string(),
                r[0],
                r[1],
                r[2],
                n
            ));
        }
        out
    }
}

/// Reads `event_id,label` rows.
pub fn read_shift_labels<R: Read>(reader: R) -> Result<Vec<ShiftLabel>, EvalError> {
    #[derive(Deserialize)]
    struct Row {
        event_id: usize,
        label: String,
    }
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let mut out = Vec::new();
    for row in rdr.deserialize::<Row>() {
        let row = row.map_err(|e| EvalError::Csv {
            line: e.position().map(|p| p.line()).unwrap_or(0),
            message: e.to_string(),
        })?;
        out.push(ShiftLabel {
            event_id: row.event_id,
            label: row.label.parse()?,
        });
    }
    Ok(out)
}
