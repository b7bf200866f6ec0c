//! Cross-domain experiment matrices.
//!
//! One model is trained per row (each dataset's train split, plus an
//! optional "all" row trained on the concatenation of every train split) and
//! scored on every dataset's test split. Test splits are never pooled.
//!
//! The functions here are sequential building blocks; the `nerkit` crate
//! runs rows in parallel and times them, assembling results in row order so
//! the output does not depend on scheduling.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt::Write;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{lowercase_dataset, Dataset, Split};
use crate::metrics::{format_percent, row_average, MetricsError, Mode};
use crate::tagger::{evaluate, train, TaggerError, TaggerModel, TrainConfig};

/// Row label of the model trained on every dataset.
pub const ALL_ROW: &str = "all";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HarnessError {
    #[error("no datasets given")]
    NoDatasets,
    #[error("dataset name {0:?} is used twice")]
    DuplicateName(String),
    #[error("dataset {0:?} has no train split")]
    MissingTrainSplit(String),
    #[error("dataset {0:?} has no test split")]
    MissingTestSplit(String),
    #[error("row {row:?}, column {col:?}: {source}")]
    Cell {
        row: String,
        col: Option<String>,
        source: TaggerError,
    },
    #[error("malformed matrix: {0}")]
    Malformed(String),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixOptions {
    pub mode: Mode,
    pub lowercase: bool,
    pub include_all_row: bool,
    pub train: TrainConfig,
}

impl Default for MatrixOptions {
    fn default() -> Self {
        MatrixOptions {
            mode: Mode::TypeIgnored,
            lowercase: false,
            include_all_row: false,
            train: TrainConfig::default(),
        }
    }
}

/// A row to train: its label and the indices of the datasets it trains on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowJob {
    pub name: String,
    pub train_on: Vec<usize>,
}

/// Checks the inputs and applies lowercasing when requested.
pub fn prepare(datasets: &[Dataset], opts: &MatrixOptions) -> Result<Vec<Dataset>, HarnessError> {
    if datasets.is_empty() {
        return Err(HarnessError::NoDatasets);
    }
    let mut seen = BTreeSet::new();
    for d in datasets {
        if !seen.insert(d.name()) || (opts.include_all_row && d.name() == ALL_ROW) {
            return Err(HarnessError::DuplicateName(d.name().to_string()));
        }
        if d.split(Split::Train).is_none_or(<[_]>::is_empty) {
            return Err(HarnessError::MissingTrainSplit(d.name().to_string()));
        }
        if d.split(Split::Test).is_none_or(<[_]>::is_empty) {
            return Err(HarnessError::MissingTestSplit(d.name().to_string()));
        }
    }
    Ok(if opts.lowercase {
        datasets.iter().map(lowercase_dataset).collect()
    } else {
        datasets.to_vec()
    })
}

pub fn plan_rows(datasets: &[Dataset], opts: &MatrixOptions) -> Vec<RowJob> {
    let mut rows: Vec<RowJob> = datasets
        .iter()
        .enumerate()
        .map(|(i, d)| RowJob {
            name: d.name().to_string(),
            train_on: alloc::vec![i],
        })
        .collect();
    if opts.include_all_row {
        rows.push(RowJob {
            name: ALL_ROW.to_string(),
            train_on: (0..datasets.len()).collect(),
        });
    }
    rows
}

pub fn train_row(
    datasets: &[Dataset],
    job: &RowJob,
    opts: &MatrixOptions,
) -> Result<TaggerModel, HarnessError> {
    let train_on: Vec<Dataset> = job.train_on.iter().map(|&i| datasets[i].clone()).collect();
    let config = TrainConfig {
        lowercase: opts.lowercase,
        ..opts.train.clone()
    };
    train(&train_on, &config).map_err(|source| HarnessError::Cell {
        row: job.name.clone(),
        col: None,
        source,
    })
}

/// Micro-F1 × 100 of `model` on `test`'s test split.
pub fn score_cell(
    model: &TaggerModel,
    row: &str,
    test: &Dataset,
    opts: &MatrixOptions,
) -> Result<f64, HarnessError> {
    let sentences = test
        .split(Split::Test)
        .ok_or_else(|| HarnessError::MissingTestSplit(test.name().to_string()))?;
    let report = evaluate(model, sentences, opts.mode).map_err(|source| HarnessError::Cell {
        row: row.to_string(),
        col: Some(test.name().to_string()),
        source,
    })?;
    Ok(report.micro.f1 * 100.0)
}

/// Runs the whole matrix sequentially.
pub fn run_matrix(
    datasets: &[Dataset],
    opts: &MatrixOptions,
) -> Result<CrossDomainMatrix, HarnessError> {
    let datasets = prepare(datasets, opts)?;
    let rows = plan_rows(&datasets, opts);
    let mut cells = Vec::with_capacity(rows.len());
    for job in &rows {
        let model = train_row(&datasets, job, opts)?;
        let row = datasets
            .iter()
            .map(|test| score_cell(&model, &job.name, test, opts))
            .collect::<Result<Vec<_>, _>>()?;
        cells.push(row);
    }
    CrossDomainMatrix::new(
        opts.mode,
        rows.into_iter().map(|r| r.name).collect(),
        datasets.iter().map(|d| d.name().to_string()).collect(),
        cells,
    )
}

/// Train rows × test columns of F1 percentages with a row-mean column.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossDomainMatrix {
    pub mode: Mode,
    pub rows: Vec<String>,
    pub cols: Vec<String>,
    pub cells: Vec<Vec<f64>>,
    pub avg: Vec<f64>,
}

impl CrossDomainMatrix {
    pub fn new(
        mode: Mode,
        rows: Vec<String>,
        cols: Vec<String>,
        cells: Vec<Vec<f64>>,
    ) -> Result<Self, HarnessError> {
        if cells.len() != rows.len() || cells.iter().any(|r| r.len() != cols.len()) {
            return Err(HarnessError::Malformed(format!(
                "expected {}x{} cells",
                rows.len(),
                cols.len()
            )));
        }
        let avg = cells
            .iter()
            .map(|r| row_average(r))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(CrossDomainMatrix {
            mode,
            rows,
            cols,
            cells,
            avg,
        })
    }

    /// Rebuilds the matrix through [`CrossDomainMatrix::new`], rejecting
    /// holes and stale `avg` values.
    pub fn validated(self) -> Result<Self, HarnessError> {
        let checked = CrossDomainMatrix::new(self.mode, self.rows, self.cols, self.cells)?;
        if checked.avg != self.avg {
            return Err(HarnessError::Malformed("avg column does not match cells".into()));
        }
        Ok(checked)
    }

    pub fn cell(&self, row: &str, col: &str) -> Option<f64> {
        let r = self.rows.iter().position(|x| x == row)?;
        let c = self.cols.iter().position(|x| x == col)?;
        Some(self.cells[r][c])
    }

    fn table_rows(&self) -> Vec<Vec<String>> {
        let mut out = Vec::with_capacity(self.rows.len() + 1);
        let mut header = Vec::with_capacity(self.cols.len() + 2);
        header.push("train\\test".to_string());
        header.extend(self.cols.iter().cloned());
        header.push("avg".to_string());
        out.push(header);
        for ((name, row), avg) in self.rows.iter().zip(&self.cells).zip(&self.avg) {
            let mut line = Vec::with_capacity(row.len() + 2);
            line.push(name.clone());
            line.extend(row.iter().map(|&v| format_percent(v)));
            line.push(format_percent(*avg));
            out.push(line);
        }
        out
    }

    pub fn to_markdown(&self) -> String {
        let rows = self.table_rows();
        let mut out = String::new();
        for (i, row) in rows.iter().enumerate() {
            let _ = writeln!(out, "| {} |", row.join(" | "));
            if i == 0 {
                let sep: Vec<&str> = (0..row.len())
                    .map(|k| if k == 0 { "---" } else { "---:" })
                    .collect();
                let _ = writeln!(out, "| {} |", sep.join(" | "));
            }
        }
        out
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for row in self.table_rows() {
            let _ = writeln!(out, "{}", row.join("\t"));
        }
        out
    }
}
