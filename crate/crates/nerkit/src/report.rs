//! Report rendering for evaluations and cross-domain matrices.

use std::fmt;
use std::str::FromStr;

use nerkit_core::harness::CrossDomainMatrix;
use nerkit_core::EvalReport;

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Markdown,
    Tsv,
    Json,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "markdown" | "md" => Ok(Format::Markdown),
            "tsv" => Ok(Format::Tsv),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format {other:?} (expected markdown, tsv or json)")),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Markdown => "markdown",
            Format::Tsv => "tsv",
            Format::Json => "json",
        })
    }
}

/// Pretty JSON with keys `mode`, `micro`, `per_type`, `counts`.
pub fn eval_report_json(report: &EvalReport) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("reports serialize");
    s.push('\n');
    s
}

pub fn render_eval_report(report: &EvalReport, format: Format) -> String {
    match format {
        Format::Json => eval_report_json(report),
        Format::Tsv | Format::Markdown => report.to_tsv(),
    }
}

/// Markdown and TSV print percentages at one decimal; JSON keeps full
/// precision so that it parses back to the same matrix.
pub fn render_matrix(matrix: &CrossDomainMatrix, format: Format) -> String {
    match format {
        Format::Markdown => matrix.to_markdown(),
        Format::Tsv => matrix.to_tsv(),
        Format::Json => {
            let mut s = serde_json::to_string_pretty(matrix).expect("matrices serialize");
            s.push('\n');
            s
        }
    }
}

pub fn parse_matrix_json(text: &str) -> Result<CrossDomainMatrix> {
    let m: CrossDomainMatrix = serde_json::from_str(text)?;
    m.validated().map_err(Error::Harness)
}
