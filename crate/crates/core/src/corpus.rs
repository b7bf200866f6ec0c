//! Sentences and datasets in the unified CoNLL/IOB format.
//!
//! The text format is one `token tag` pair per line with blank lines between
//! sentences. Extra middle columns (4-column CoNLL files) are tolerated on
//! read and dropped; `-DOCSTART-` lines are skipped.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::tag::Tag;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CorpusError {
    #[error("line {line}: expected at least two whitespace-separated fields")]
    MalformedLine { line: usize },
    #[error("line {line}: bad tag {text:?}")]
    BadTag { line: usize, text: String },
    #[error("sentence has {tokens} tokens but {tags} tags")]
    LengthMismatch { tokens: usize, tags: usize },
    #[error("sentence is empty")]
    EmptySentence,
    #[error("invalid token {0:?}: tokens must be non-empty and contain no whitespace")]
    InvalidToken(String),
    #[error("dataset {0:?} has no non-empty split")]
    EmptyDataset(String),
    #[error("no datasets given")]
    EmptyInput,
}

/// A tokenized sentence with one tag per token.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sentence {
    tokens: Vec<String>,
    tags: Vec<Tag>,
}

impl Sentence {
    pub fn new(tokens: Vec<String>, tags: Vec<Tag>) -> Result<Self, CorpusError> {
        if tokens.len() != tags.len() {
            return Err(CorpusError::LengthMismatch {
                tokens: tokens.len(),
                tags: tags.len(),
            });
        }
        if tokens.is_empty() {
            return Err(CorpusError::EmptySentence);
        }
        if let Some(bad) = tokens
            .iter()
            .find(|t| t.is_empty() || t.chars().any(char::is_whitespace))
        {
            return Err(CorpusError::InvalidToken(bad.clone()));
        }
        Ok(Sentence { tokens, tags })
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn tags(&self) -> &[Tag] {
        &self.tags
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn into_parts(self) -> (Vec<String>, Vec<Tag>) {
        (self.tokens, self.tags)
    }

    /// Unicode lowercase of every token; tags untouched.
    pub fn lowercased(&self) -> Sentence {
        Sentence {
            tokens: self.tokens.iter().map(|t| t.to_lowercase()).collect(),
            tags: self.tags.clone(),
        }
    }
}

/// Parses CoNLL/IOB text.
///
/// Line numbers in errors are 1-based. A `\r` before the line feed is
/// tolerated.
pub fn parse_conll(text: &str) -> Result<Vec<Sentence>, CorpusError> {
    let mut sentences = Vec::new();
    let mut tokens = Vec::new();
    let mut tags = Vec::new();

    let mut flush = |tokens: &mut Vec<String>, tags: &mut Vec<Tag>| {
        if !tokens.is_empty() {
            sentences.push(Sentence {
                tokens: core::mem::take(tokens),
                tags: core::mem::take(tags),
            });
        }
    };

    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let mut fields = line.split_ascii_whitespace();
        let Some(first) = fields.next() else {
            flush(&mut tokens, &mut tags);
            continue;
        };
        if first == "-DOCSTART-" {
            continue;
        }
        let Some(last) = fields.last() else {
            return Err(CorpusError::MalformedLine { line: line_no });
        };
        let tag = last.parse::<Tag>().map_err(|_| CorpusError::BadTag {
            line: line_no,
            text: last.to_string(),
        })?;
        tokens.push(first.to_string());
        tags.push(tag);
    }
    flush(&mut tokens, &mut tags);
    Ok(sentences)
}

/// Writes sentences as `token tag` lines, one blank line between sentences,
/// LF line endings.
pub fn serialize_conll(sentences: &[Sentence]) -> String {
    let mut out = String::new();
    for (i, sentence) in sentences.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        for (token, tag) in sentence.tokens.iter().zip(&sentence.tags) {
            out.push_str(token);
            out.push(' ');
            out.push_str(&tag.to_string());
            out.push('\n');
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Split {
    Train,
    Valid,
    Test,
}

impl Split {
    pub const ALL: [Split; 3] = [Split::Train, Split::Valid, Split::Test];

    pub fn as_str(self) -> &'static str {
        match self {
            Split::Train => "train",
            Split::Valid => "valid",
            Split::Test => "test",
        }
    }

    /// File name inside a dataset directory.
    pub fn file_name(self) -> &'static str {
        match self {
            Split::Train => "train.txt",
            Split::Valid => "valid.txt",
            Split::Test => "test.txt",
        }
    }
}

impl fmt::Display for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl core::str::FromStr for Split {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "train" => Ok(Split::Train),
            "valid" => Ok(Split::Valid),
            "test" => Ok(Split::Test),
            other => Err(alloc::format!("unknown split {other:?}")),
        }
    }
}

/// Orders label strings: `"O"` first, the rest lexicographically.
fn ordered_labels<'a>(labels: impl IntoIterator<Item = &'a str>) -> Vec<String> {
    let set: BTreeSet<&str> = labels.into_iter().filter(|l| *l != "O").collect();
    core::iter::once("O")
        .chain(set)
        .map(str::to_string)
        .collect()
}

/// A named corpus with up to three splits and its label inventory.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dataset {
    name: String,
    splits: BTreeMap<Split, Vec<Sentence>>,
    labels: Vec<String>,
}

impl Dataset {
    /// Builds a dataset; labels are the observed tags, `"O"` first and the
    /// rest in lexicographic order.
    pub fn new(
        name: impl Into<String>,
        splits: BTreeMap<Split, Vec<Sentence>>,
    ) -> Result<Self, CorpusError> {
        let name = name.into();
        if splits.values().all(Vec::is_empty) {
            return Err(CorpusError::EmptyDataset(name));
        }
        let observed: BTreeSet<String> = splits
            .values()
            .flatten()
            .flat_map(|s| s.tags.iter().map(Tag::to_string))
            .collect();
        let labels = ordered_labels(observed.iter().map(String::as_str));
        Ok(Dataset {
            name,
            splits,
            labels,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn split(&self, split: Split) -> Option<&[Sentence]> {
        self.splits.get(&split).map(Vec::as_slice)
    }

    pub fn splits(&self) -> &BTreeMap<Split, Vec<Sentence>> {
        &self.splits
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Dataset {
        self.name = name.into();
        self
    }
}

/// Concatenates datasets split by split, in input order. This is the
/// training set of the "all" row in cross-domain matrices.
pub fn concat_datasets(datasets: &[Dataset], name: &str) -> Result<Dataset, CorpusError> {
    if datasets.is_empty() {
        return Err(CorpusError::EmptyInput);
    }
    let mut splits: BTreeMap<Split, Vec<Sentence>> = BTreeMap::new();
    for d in datasets {
        for (split, sentences) in &d.splits {
            splits
                .entry(*split)
                .or_default()
                .extend(sentences.iter().cloned());
        }
    }
    let labels = ordered_labels(
        datasets
            .iter()
            .flat_map(|d| d.labels.iter().map(String::as_str)),
    );
    Ok(Dataset {
        name: name.to_string(),
        splits,
        labels,
    })
}

/// Lowercases every token of every split. Idempotent.
pub fn lowercase_dataset(d: &Dataset) -> Dataset {
    Dataset {
        name: d.name.clone(),
        splits: d
            .splits
            .iter()
            .map(|(k, v)| (*k, v.iter().map(Sentence::lowercased).collect()))
            .collect(),
        labels: d.labels.clone(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatasetStats {
    /// Sentence count per present split.
    pub sentences: BTreeMap<Split, usize>,
    /// Distinct entity types over the label inventory.
    pub entity_types: usize,
}

pub fn dataset_stats(d: &Dataset) -> DatasetStats {
    let entity_types = d
        .labels
        .iter()
        .filter_map(|l| l.parse::<Tag>().ok())
        .filter_map(|t| t.entity_type().map(str::to_string))
        .collect::<BTreeSet<_>>()
        .len();
    DatasetStats {
        sentences: d.splits.iter().map(|(k, v)| (*k, v.len())).collect(),
        entity_types,
    }
}

/// Bijection between label strings and contiguous ids.
///
/// `"O"` is always id 0; remaining labels follow lexicographic order, so the
/// mapping depends only on the label set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelLookup {
    tags: Vec<Tag>,
    names: Vec<String>,
    index: BTreeMap<String, usize>,
}

impl LabelLookup {
    pub fn new<I, S>(labels: I) -> Result<Self, CorpusError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let owned: Vec<String> = labels
            .into_iter()
            .map(|s| s.as_ref().to_string())
            .collect();
        let names = ordered_labels(owned.iter().map(String::as_str));
        let tags = names
            .iter()
            .map(|n| {
                n.parse::<Tag>().map_err(|_| CorpusError::BadTag {
                    line: 0,
                    text: n.clone(),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        let index = names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), i))
            .collect();
        Ok(LabelLookup { tags, names, index })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn id(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn id_of(&self, tag: &Tag) -> Option<usize> {
        self.id(&tag.to_string())
    }

    pub fn tag(&self, id: usize) -> &Tag {
        &self.tags[id]
    }

    pub fn tags(&self) -> &[Tag] {
        &self.tags
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }
}

impl Serialize for LabelLookup {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.names.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for LabelLookup {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let names = Vec::<String>::deserialize(deserializer)?;
        let lookup = LabelLookup::new(&names).map_err(serde::de::Error::custom)?;
        if lookup.names != names {
            return Err(serde::de::Error::custom("labels are not in canonical order"));
        }
        Ok(lookup)
    }
}
