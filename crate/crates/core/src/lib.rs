//! Core of nerkit: unified IOB corpora, span-level chunking and scoring, a
//! deterministic averaged-perceptron tagger with constrained Viterbi
//! decoding, and cross-domain experiment matrices.
//!
//! Everything here is pure computation over in-memory values. The crate is
//! `no_std` and only needs `alloc`; reading dataset directories, model files,
//! JSON reports, the HTTP service and the command line live in the companion
//! `nerkit` crate.
#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod chunking;
pub mod corpus;
pub mod harness;
pub mod metrics;
pub mod tag;
pub mod tagger;
pub mod tokenize;

pub use chunking::{erase_types, extract_chunks, normalize_iob2, EntitySpan};
pub use corpus::{
    concat_datasets, dataset_stats, lowercase_dataset, parse_conll, serialize_conll, CorpusError,
    Dataset, DatasetStats, LabelLookup, Sentence, Split,
};
pub use metrics::{row_average, score, EvalCounts, EvalReport, MetricsError, Mode, Prf, TypeScore};
pub use tag::{Tag, TagParseError};
pub use tagger::{
    evaluate, featurize, predict, train, viterbi_decode, ModelMeta, Prediction, ScoredSpan,
    TaggerError, TaggerModel, TrainConfig,
};
pub use tokenize::{tokenize, TokenSpan};
