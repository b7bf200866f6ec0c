use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::features::FEATURE_VERSION;
use super::TaggerError;
use crate::corpus::LabelLookup;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub epochs: u32,
    pub seed: u64,
    /// Lowercase tokens at training time and at every later decode.
    pub lowercase: bool,
    pub feature_version: u32,
}

impl TrainConfig {
    pub const DEFAULT_EPOCHS: u32 = 10;
    pub const DEFAULT_SEED: u64 = 42;
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            epochs: Self::DEFAULT_EPOCHS,
            seed: Self::DEFAULT_SEED,
            lowercase: false,
            feature_version: FEATURE_VERSION,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelMeta {
    pub trained_on: Vec<String>,
    /// Left empty by training so that identical runs give identical bytes;
    /// callers may stamp it.
    pub created_at: Option<String>,
}

/// A trained tagger: label inventory, averaged sparse weights, the training
/// configuration and provenance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawModel")]
pub struct TaggerModel {
    labels: LabelLookup,
    weights: BTreeMap<String, Vec<f64>>,
    config: TrainConfig,
    meta: ModelMeta,
}

#[derive(Deserialize)]
struct RawModel {
    labels: LabelLookup,
    weights: BTreeMap<String, Vec<f64>>,
    config: TrainConfig,
    meta: ModelMeta,
}

impl TryFrom<RawModel> for TaggerModel {
    type Error = TaggerError;

    fn try_from(raw: RawModel) -> Result<Self, Self::Error> {
        TaggerModel::from_parts(raw.labels, raw.weights, raw.config, raw.meta)
    }
}

impl TaggerModel {
    /// Assembles a model, checking that every weight vector has one entry
    /// per label and that all weights are finite.
    pub fn from_parts(
        labels: LabelLookup,
        weights: BTreeMap<String, Vec<f64>>,
        config: TrainConfig,
        meta: ModelMeta,
    ) -> Result<Self, TaggerError> {
        if labels.is_empty() {
            return Err(TaggerError::ModelLabelMismatch);
        }
        for (key, row) in &weights {
            if row.len() != labels.len() {
                return Err(TaggerError::InvalidModel(format!(
                    "feature {key:?} has {} weights for {} labels",
                    row.len(),
                    labels.len()
                )));
            }
            if row.iter().any(|w| !w.is_finite()) {
                return Err(TaggerError::InvalidModel(format!(
                    "feature {key:?} has a non-finite weight"
                )));
            }
        }
        if config.feature_version != FEATURE_VERSION {
            return Err(TaggerError::Config(format!(
                "feature template version {} is not supported (expected {FEATURE_VERSION})",
                config.feature_version
            )));
        }
        Ok(TaggerModel {
            labels,
            weights,
            config,
            meta,
        })
    }

    pub fn labels(&self) -> &LabelLookup {
        &self.labels
    }

    pub fn weights(&self) -> &BTreeMap<String, Vec<f64>> {
        &self.weights
    }

    pub fn config(&self) -> &TrainConfig {
        &self.config
    }

    pub fn meta(&self) -> &ModelMeta {
        &self.meta
    }

    pub fn meta_mut(&mut self) -> &mut ModelMeta {
        &mut self.meta
    }
}
