//! Parallel cross-domain matrix runs over dataset directories.

use std::path::PathBuf;
use std::time::Instant;

use nerkit_core::harness::{
    plan_rows, prepare, score_cell, train_row, CrossDomainMatrix, MatrixOptions,
};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset_io::load_dataset;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixSpec {
    pub dataset_dirs: Vec<PathBuf>,
    #[serde(flatten)]
    pub options: MatrixOptions,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CellTiming {
    pub col: String,
    pub eval_ms: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RowTiming {
    pub row: String,
    pub train_ms: f64,
    pub cells: Vec<CellTiming>,
}

/// What was run and how long each piece took. Timings vary between runs;
/// the matrix itself does not.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub spec: MatrixSpec,
    pub seed: u64,
    pub jobs: usize,
    pub rows: Vec<RowTiming>,
}

#[derive(Debug, Clone)]
pub struct MatrixRun {
    pub matrix: CrossDomainMatrix,
    pub manifest: RunManifest,
}

fn millis(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1000.0
}

/// Loads every dataset and runs the matrix with `jobs` worker threads
/// (0 = one per core). Rows are trained independently and assembled in
/// order, so the matrix does not depend on `jobs`.
pub fn run_matrix(spec: &MatrixSpec, jobs: usize) -> Result<MatrixRun> {
    let datasets = spec
        .dataset_dirs
        .iter()
        .map(load_dataset)
        .collect::<Result<Vec<_>>>()?;
    let opts = &spec.options;
    let datasets = prepare(&datasets, opts)?;
    let rows = plan_rows(&datasets, opts);

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Usage(format!("cannot start worker pool: {e}")))?;
    let results: Vec<(Vec<f64>, RowTiming)> = pool.install(|| {
        rows.par_iter()
            .map(|job| {
                let start = Instant::now();
                let model = train_row(&datasets, job, opts)?;
                let train_ms = millis(start);
                let mut cells = Vec::with_capacity(datasets.len());
                let mut timings = Vec::with_capacity(datasets.len());
                for test in &datasets {
                    let start = Instant::now();
                    cells.push(score_cell(&model, &job.name, test, opts)?);
                    timings.push(CellTiming {
                        col: test.name().to_string(),
                        eval_ms: millis(start),
                    });
                }
                Ok((
                    cells,
                    RowTiming {
                        row: job.name.clone(),
                        train_ms,
                        cells: timings,
                    },
                ))
            })
            .collect::<Result<Vec<_>>>()
    })?;

    let (cells, timings): (Vec<_>, Vec<_>) = results.into_iter().unzip();
    let matrix = CrossDomainMatrix::new(
        opts.mode,
        rows.into_iter().map(|r| r.name).collect(),
        datasets.iter().map(|d| d.name().to_string()).collect(),
        cells,
    )?;
    Ok(MatrixRun {
        matrix,
        manifest: RunManifest {
            spec: spec.clone(),
            seed: opts.train.seed,
            jobs: pool.current_num_threads(),
            rows: timings,
        },
    })
}
