//! Span-level micro precision, recall and F1.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use core::fmt::Write;
use core::ops::{Add, AddAssign};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chunking::{erase_types, extract_chunks, EntitySpan};
use crate::tag::Tag;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MetricsError {
    #[error("gold and prediction disagree in shape at sentence {0}")]
    LengthMismatch(usize),
    #[error("cannot average an empty list")]
    EmptyInput,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Mode {
    #[serde(rename = "type-aware")]
    TypeAware,
    #[serde(rename = "type-ignored")]
    TypeIgnored,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::TypeAware => "type-aware",
            Mode::TypeIgnored => "type-ignored",
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalCounts {
    pub tp: usize,
    pub fp: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
}

impl EvalCounts {
    pub fn prf(&self) -> Prf {
        let precision = ratio(self.tp, self.tp + self.fp);
        let recall = ratio(self.tp, self.tp + self.fn_);
        Prf {
            precision,
            recall,
            f1: harmonic_mean(precision, recall),
        }
    }
}

impl Add for EvalCounts {
    type Output = EvalCounts;

    fn add(self, rhs: EvalCounts) -> EvalCounts {
        EvalCounts {
            tp: self.tp + rhs.tp,
            fp: self.fp + rhs.fp,
            fn_: self.fn_ + rhs.fn_,
        }
    }
}

impl AddAssign for EvalCounts {
    fn add_assign(&mut self, rhs: EvalCounts) {
        *self = *self + rhs;
    }
}

/// 0/0 is 0.
fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

fn harmonic_mean(p: f64, r: f64) -> f64 {
    if p + r == 0.0 {
        0.0
    } else {
        2.0 * p * r / (p + r)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Prf {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TypeScore {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    /// Number of gold chunks of this type.
    pub support: usize,
    pub counts: EvalCounts,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub mode: Mode,
    pub micro: Prf,
    pub per_type: BTreeMap<String, TypeScore>,
    pub counts: EvalCounts,
}

impl EvalReport {
    fn from_counts(mode: Mode, per_type: BTreeMap<String, EvalCounts>) -> EvalReport {
        let counts = per_type
            .values()
            .copied()
            .fold(EvalCounts::default(), Add::add);
        let per_type = per_type
            .into_iter()
            .map(|(ty, c)| {
                let prf = c.prf();
                let score = TypeScore {
                    precision: prf.precision,
                    recall: prf.recall,
                    f1: prf.f1,
                    support: c.tp + c.fn_,
                    counts: c,
                };
                (ty, score)
            })
            .collect();
        EvalReport {
            mode,
            micro: counts.prf(),
            per_type,
            counts,
        }
    }

    /// Tab-separated table: one row per entity type, then the micro row.
    /// Fractions are printed with four decimals so columns line up.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("type\tprecision\trecall\tf1\tsupport\ttp\tfp\tfn\n");
        let mut row = |name: &str, prf: Prf, support: usize, c: EvalCounts| {
            let _ = writeln!(
                out,
                "{name}\t{:.4}\t{:.4}\t{:.4}\t{support}\t{}\t{}\t{}",
                prf.precision, prf.recall, prf.f1, c.tp, c.fp, c.fn_
            );
        };
        for (ty, s) in &self.per_type {
            let prf = Prf {
                precision: s.precision,
                recall: s.recall,
                f1: s.f1,
            };
            row(ty, prf, s.support, s.counts);
        }
        row(
            &format!("micro ({})", self.mode.as_str()),
            self.micro,
            self.counts.tp + self.counts.fn_,
            self.counts,
        );
        out
    }
}

/// Per-type match counts for one sentence.
fn count_sentence(gold: &[EntitySpan], pred: &[EntitySpan], acc: &mut BTreeMap<String, EvalCounts>) {
    let gold_set: BTreeSet<&EntitySpan> = gold.iter().collect();
    let pred_set: BTreeSet<&EntitySpan> = pred.iter().collect();
    for p in &pred_set {
        let c = acc.entry(p.entity_type.clone()).or_default();
        if gold_set.contains(p) {
            c.tp += 1;
        } else {
            c.fp += 1;
        }
    }
    for g in gold_set.difference(&pred_set) {
        acc.entry(g.entity_type.clone()).or_default().fn_ += 1;
    }
}

/// Scores predicted tag sequences against gold ones.
///
/// Chunks are matched exactly on `(type, start, end)` within each sentence;
/// under [`Mode::TypeIgnored`] both sides go through [`erase_types`] first.
pub fn score<G, P>(gold: &[G], pred: &[P], mode: Mode) -> Result<EvalReport, MetricsError>
where
    G: AsRef<[Tag]>,
    P: AsRef<[Tag]>,
{
    if gold.len() != pred.len() {
        return Err(MetricsError::LengthMismatch(gold.len().min(pred.len())));
    }
    let mut per_type = BTreeMap::new();
    for (i, (g, p)) in gold.iter().zip(pred).enumerate() {
        let (g, p) = (g.as_ref(), p.as_ref());
        if g.len() != p.len() {
            return Err(MetricsError::LengthMismatch(i));
        }
        let (gs, ps) = match mode {
            Mode::TypeAware => (extract_chunks(g), extract_chunks(p)),
            Mode::TypeIgnored => (
                extract_chunks(&erase_types(g)),
                extract_chunks(&erase_types(p)),
            ),
        };
        count_sentence(&gs, &ps, &mut per_type);
    }
    Ok(EvalReport::from_counts(mode, per_type))
}

/// Arithmetic mean of a table row, diagonal included.
pub fn row_average(scores: &[f64]) -> Result<f64, MetricsError> {
    if scores.is_empty() {
        return Err(MetricsError::EmptyInput);
    }
    Ok(scores.iter().sum::<f64>() / scores.len() as f64)
}

/// Percentage at table precision (one decimal place).
pub fn format_percent(value: f64) -> String {
    format!("{value:.1}")
}
