//! Averaged-perceptron training.
//!
//! Each epoch visits the training sentences in a freshly shuffled order
//! (seeded ChaCha8 + Fisher–Yates). A sentence is decoded with the current
//! weights; at each mispredicted position the position's features get +1 on
//! the gold label and -1 on the predicted label. The stored weights are the
//! mean of the weight snapshots taken after every sentence, accumulated
//! lazily with per-parameter timestamps.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::decode::{viterbi, Constraints};
use super::features::{featurize, FEATURE_VERSION};
use super::model::{ModelMeta, TaggerModel, TrainConfig};
use super::TaggerError;
use crate::corpus::{concat_datasets, Dataset, LabelLookup, Sentence, Split};

/// Generator used for the per-epoch shuffles.
pub fn shuffle_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// One training sentence with interned features.
pub(crate) struct Encoded {
    /// Feature ids per position.
    pub feats: Vec<Vec<usize>>,
    pub gold: Vec<usize>,
}

pub(crate) struct FeatureTable {
    pub index: BTreeMap<String, usize>,
    pub names: Vec<String>,
}

pub(crate) fn encode(
    sentences: &[Sentence],
    labels: &LabelLookup,
) -> Result<(FeatureTable, Vec<Encoded>), TaggerError> {
    let mut table = FeatureTable {
        index: BTreeMap::new(),
        names: Vec::new(),
    };
    let mut out = Vec::with_capacity(sentences.len());
    for s in sentences {
        let mut feats = Vec::with_capacity(s.len());
        for i in 0..s.len() {
            let ids = featurize(s.tokens(), i)?
                .into_iter()
                .map(|k| {
                    if let Some(&id) = table.index.get(&k) {
                        id
                    } else {
                        let id = table.names.len();
                        table.names.push(k.clone());
                        table.index.insert(k, id);
                        id
                    }
                })
                .collect();
            feats.push(ids);
        }
        let gold = s
            .tags()
            .iter()
            .map(|t| labels.id_of(t).ok_or(TaggerError::ModelLabelMismatch))
            .collect::<Result<_, _>>()?;
        out.push(Encoded { feats, gold });
    }
    Ok((table, out))
}

/// Integer perceptron weights with lazy averaging.
pub(crate) struct Perceptron {
    n_labels: usize,
    weights: Vec<i64>,
    totals: Vec<i64>,
    stamps: Vec<u64>,
    /// Snapshots taken so far (one per processed sentence).
    snapshots: u64,
}

impl Perceptron {
    pub fn new(n_features: usize, n_labels: usize) -> Self {
        let size = n_features * n_labels;
        Perceptron {
            n_labels,
            weights: vec![0; size],
            totals: vec![0; size],
            stamps: vec![0; size],
            snapshots: 0,
        }
    }

    pub fn scores(&self, feats: &[Vec<usize>]) -> Vec<Vec<f64>> {
        feats
            .iter()
            .map(|ids| {
                let mut row = vec![0i64; self.n_labels];
                for &f in ids {
                    let w = &self.weights[f * self.n_labels..(f + 1) * self.n_labels];
                    for (r, x) in row.iter_mut().zip(w) {
                        *r += x;
                    }
                }
                row.into_iter().map(|x| x as f64).collect()
            })
            .collect()
    }

    fn bump(&mut self, p: usize, delta: i64) {
        self.totals[p] += self.weights[p] * (self.snapshots - self.stamps[p]) as i64;
        self.stamps[p] = self.snapshots;
        self.weights[p] += delta;
    }

    /// Applies the perceptron update for one decoded sentence and records a
    /// snapshot.
    pub fn learn(&mut self, sentence: &Encoded, predicted: &[usize]) {
        for (i, (&gold, &guess)) in sentence.gold.iter().zip(predicted).enumerate() {
            if gold == guess {
                continue;
            }
            for &f in &sentence.feats[i] {
                self.bump(f * self.n_labels + gold, 1);
                self.bump(f * self.n_labels + guess, -1);
            }
        }
        self.snapshots += 1;
    }

    /// Mean of all snapshots, per parameter.
    pub fn averaged(&self) -> Vec<f64> {
        if self.snapshots == 0 {
            return vec![0.0; self.weights.len()];
        }
        let c = self.snapshots;
        self.weights
            .iter()
            .zip(&self.totals)
            .zip(&self.stamps)
            .map(|((&w, &t), &s)| (t + w * (c - s) as i64) as f64 / c as f64)
            .collect()
    }
}

/// Trains on the concatenated train splits of `datasets`.
pub fn train(datasets: &[Dataset], config: &TrainConfig) -> Result<TaggerModel, TaggerError> {
    if config.epochs < 1 {
        return Err(TaggerError::Config(format!(
            "epochs must be at least 1, got {}",
            config.epochs
        )));
    }
    if config.feature_version != FEATURE_VERSION {
        return Err(TaggerError::Config(format!(
            "feature template version {} is not supported",
            config.feature_version
        )));
    }
    if datasets.is_empty() {
        return Err(TaggerError::EmptyTrainingData);
    }
    let name = datasets
        .iter()
        .map(Dataset::name)
        .collect::<Vec<_>>()
        .join("+");
    let combined = concat_datasets(datasets, &name)?;
    let mut sentences: Vec<Sentence> = combined
        .split(Split::Train)
        .map(<[Sentence]>::to_vec)
        .unwrap_or_default();
    if sentences.is_empty() {
        return Err(TaggerError::EmptyTrainingData);
    }
    if config.lowercase {
        sentences = sentences.iter().map(Sentence::lowercased).collect();
    }

    let labels = LabelLookup::new(combined.labels())?;
    let constraints = Constraints::new(labels.tags());
    let (table, encoded) = encode(&sentences, &labels)?;
    let mut perceptron = Perceptron::new(table.names.len(), labels.len());

    let mut rng = shuffle_rng(config.seed);
    let mut order: Vec<usize> = (0..encoded.len()).collect();
    for _ in 0..config.epochs {
        order.shuffle(&mut rng);
        for &idx in &order {
            let s = &encoded[idx];
            let predicted = viterbi(&perceptron.scores(&s.feats), &constraints);
            perceptron.learn(s, &predicted);
        }
    }

    let averaged = perceptron.averaged();
    let n = labels.len();
    let weights = table
        .names
        .into_iter()
        .enumerate()
        .filter_map(|(f, name)| {
            let row = averaged[f * n..(f + 1) * n].to_vec();
            row.iter().any(|&w| w != 0.0).then_some((name, row))
        })
        .collect();

    let meta = ModelMeta {
        trained_on: datasets.iter().map(|d| d.name().to_string()).collect(),
        created_at: None,
    };
    TaggerModel::from_parts(labels, weights, config.clone(), meta)
}
