//! Averaged-perceptron sequence tagger with constrained Viterbi decoding.
//!
//! Per-position scores are sums of sparse feature weights; transitions are
//! hard IOB2 constraints. Training is a pure function of the data and
//! [`TrainConfig`], so retraining with the same seed reproduces the model
//! exactly.

use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chunking::{extract_chunks, EntitySpan};
use crate::corpus::{CorpusError, Sentence};
use crate::metrics::{score, EvalReport, MetricsError, Mode};
use crate::tag::Tag;

pub mod decode;
pub mod features;
mod model;
mod train;

pub use decode::{transition_allowed, viterbi, Constraints};
pub use features::{featurize, word_shape, FEATURE_VERSION};
pub use model::{ModelMeta, TaggerModel, TrainConfig};
pub use train::{shuffle_rng, train};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TaggerError {
    #[error("no training sentences")]
    EmptyTrainingData,
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("cannot tag an empty sentence")]
    EmptySentence,
    #[error("position {index} out of range for sentence of length {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("model has no usable labels for this data")]
    ModelLabelMismatch,
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
}

/// Per-position label scores of `tokens` under `model`, after the model's
/// lowercasing.
pub fn emission_scores<S: AsRef<str>>(
    tokens: &[S],
    model: &TaggerModel,
) -> Result<Vec<Vec<f64>>, TaggerError> {
    if tokens.is_empty() {
        return Err(TaggerError::EmptySentence);
    }
    let n = model.labels().len();
    if n == 0 {
        return Err(TaggerError::ModelLabelMismatch);
    }
    let lowered: Vec<String>;
    let view: Vec<&str> = if model.config().lowercase {
        lowered = tokens.iter().map(|t| t.as_ref().to_lowercase()).collect();
        lowered.iter().map(String::as_str).collect()
    } else {
        tokens.iter().map(AsRef::as_ref).collect()
    };
    (0..view.len())
        .map(|i| {
            let mut row = alloc::vec![0.0; n];
            for key in featurize(&view, i)? {
                if let Some(w) = model.weights().get(&key) {
                    for (r, x) in row.iter_mut().zip(w) {
                        *r += x;
                    }
                }
            }
            Ok(row)
        })
        .collect()
}

/// Best constraint-valid tag sequence for `tokens`.
pub fn viterbi_decode<S: AsRef<str>>(
    tokens: &[S],
    model: &TaggerModel,
) -> Result<Vec<Tag>, TaggerError> {
    let scores = emission_scores(tokens, model)?;
    let constraints = Constraints::new(model.labels().tags());
    Ok(viterbi(&scores, &constraints)
        .into_iter()
        .map(|id| model.labels().tag(id).clone())
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoredSpan {
    #[serde(flatten)]
    pub span: EntitySpan,
    /// Mean softmax probability of the decoded tag over the span's tokens.
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Prediction {
    pub tags: Vec<Tag>,
    pub spans: Vec<ScoredSpan>,
}

fn softmax(row: &[f64]) -> Vec<f64> {
    let max = row.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = row.iter().map(|x| libm::exp(x - max)).collect();
    let sum: f64 = exps.iter().sum();
    exps.into_iter().map(|e| e / sum).collect()
}

/// Tags `tokens` and scores each extracted span.
pub fn predict<S: AsRef<str>>(tokens: &[S], model: &TaggerModel) -> Result<Prediction, TaggerError> {
    let scores = emission_scores(tokens, model)?;
    let constraints = Constraints::new(model.labels().tags());
    let path = viterbi(&scores, &constraints);
    let probs: Vec<f64> = path
        .iter()
        .zip(&scores)
        .map(|(&label, row)| softmax(row)[label])
        .collect();
    let tags: Vec<Tag> = path
        .iter()
        .map(|&id| model.labels().tag(id).clone())
        .collect();
    let spans = extract_chunks(&tags)
        .into_iter()
        .map(|span| {
            let p = &probs[span.start..span.end];
            let score = (p.iter().sum::<f64>() / p.len() as f64).clamp(0.0, 1.0);
            ScoredSpan { span, score }
        })
        .collect();
    Ok(Prediction { tags, spans })
}

/// Decodes every sentence and scores the result against its gold tags.
pub fn evaluate(
    model: &TaggerModel,
    sentences: &[Sentence],
    mode: Mode,
) -> Result<EvalReport, TaggerError> {
    let predicted = sentences
        .iter()
        .map(|s| viterbi_decode(s.tokens(), model))
        .collect::<Result<Vec<_>, _>>()?;
    let gold: Vec<&[Tag]> = sentences.iter().map(Sentence::tags).collect();
    Ok(score(&gold, &predicted, mode)?)
}
