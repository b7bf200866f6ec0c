//! Model files.
//!
//! A model is stored as one JSON document with the keys `checksum`,
//! `config`, `format_version`, `labels`, `meta` and `weights`, all emitted in
//! sorted order. The checksum is the SHA-256 (hex) of the compact JSON of the
//! same document without the `checksum` key. Floats are written in shortest
//! round-trip form, so saving and loading is lossless.

use std::fs;
use std::path::Path;

use nerkit_core::TaggerModel;
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

use crate::{Error, Result};

pub const FORMAT_VERSION: u64 = 1;

#[derive(Debug, thiserror::Error)]
pub enum ModelFileError {
    #[error("unsupported model format version {found} (expected {FORMAT_VERSION})")]
    VersionMismatch { found: String },
    #[error("corrupt model file: {0}")]
    CorruptModel(String),
}

fn checksum(payload: &Map<String, Value>) -> String {
    let bytes = serde_json::to_vec(payload).expect("JSON values always serialize");
    hex::encode(Sha256::digest(&bytes))
}

/// Serializes a model to its file bytes.
pub fn to_bytes(model: &TaggerModel) -> Vec<u8> {
    let Value::Object(mut doc) = serde_json::to_value(model).expect("model serializes") else {
        unreachable!("models serialize to JSON objects");
    };
    doc.insert("format_version".into(), FORMAT_VERSION.into());
    let sum = checksum(&doc);
    doc.insert("checksum".into(), sum.into());
    let mut out = serde_json::to_vec(&doc).expect("JSON values always serialize");
    out.push(b'\n');
    out
}

pub fn from_bytes(bytes: &[u8]) -> Result<TaggerModel, ModelFileError> {
    let corrupt = |msg: String| ModelFileError::CorruptModel(msg);
    let value: Value = serde_json::from_slice(bytes).map_err(|e| corrupt(e.to_string()))?;
    let Value::Object(mut doc) = value else {
        return Err(corrupt("top level is not an object".into()));
    };
    match doc.get("format_version") {
        Some(Value::Number(n)) if n.as_u64() == Some(FORMAT_VERSION) => {}
        Some(Value::Number(n)) => {
            return Err(ModelFileError::VersionMismatch {
                found: n.to_string(),
            })
        }
        Some(Value::String(s)) => return Err(ModelFileError::VersionMismatch { found: s.clone() }),
        _ => return Err(corrupt("missing format_version".into())),
    }
    let Some(Value::String(stored)) = doc.remove("checksum") else {
        return Err(corrupt("missing checksum".into()));
    };
    if checksum(&doc) != stored {
        return Err(corrupt("checksum mismatch".into()));
    }
    doc.remove("format_version");
    serde_json::from_value(Value::Object(doc)).map_err(|e| corrupt(e.to_string()))
}

pub fn save_model(model: &TaggerModel, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, to_bytes(model)).map_err(|e| Error::io(path, e))
}

pub fn load_model(path: impl AsRef<Path>) -> Result<TaggerModel> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    Ok(from_bytes(&bytes)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use nerkit_core::{parse_conll, train, Dataset, Split, TrainConfig};
    use std::collections::BTreeMap;

    fn model() -> TaggerModel {
        let s = parse_conll("Ann B-PER\nLee I-PER\nsang O\n\nRome B-LOC\nfell O\n").unwrap();
        let d = Dataset::new("toy", BTreeMap::from([(Split::Train, s)])).unwrap();
        train(&[d], &TrainConfig { epochs: 3, ..TrainConfig::default() }).unwrap()
    }

    #[test]
    fn round_trip() {
        let m = model();
        let tmp = tempfile::tempdir().unwrap();
        let path = tmp.path().join("m.json");
        save_model(&m, &path).unwrap();
        assert_eq!(load_model(&path).unwrap(), m);
    }

    #[test]
    fn keys_are_sorted() {
        let text = String::from_utf8(to_bytes(&model())).unwrap();
        let keys = ["\"checksum\"", "\"config\"", "\"format_version\"", "\"labels\"", "\"meta\"", "\"weights\""];
        let positions: Vec<usize> = keys.iter().map(|k| text.find(k).unwrap()).collect();
        assert!(positions.windows(2).all(|w| w[0] < w[1]), "{positions:?}");
    }

    #[test]
    fn truncated_file_is_corrupt() {
        let bytes = to_bytes(&model());
        let cut = &bytes[..bytes.len() / 2];
        assert!(matches!(from_bytes(cut), Err(ModelFileError::CorruptModel(_))));
        assert!(matches!(from_bytes(b""), Err(ModelFileError::CorruptModel(_))));
    }

    #[test]
    fn bumped_version_is_rejected() {
        let bytes = to_bytes(&model());
        let mut doc: Value = serde_json::from_slice(&bytes).unwrap();
        doc["format_version"] = Value::from(999);
        let err = from_bytes(&serde_json::to_vec(&doc).unwrap()).unwrap_err();
        assert!(matches!(err, ModelFileError::VersionMismatch { ref found } if found == "999"));
        doc["format_version"] = Value::from("999");
        let err = from_bytes(&serde_json::to_vec(&doc).unwrap()).unwrap_err();
        assert!(matches!(err, ModelFileError::VersionMismatch { .. }));
    }

    #[test]
    fn tampered_weight_fails_checksum() {
        let text = String::from_utf8(to_bytes(&model())).unwrap();
        let tampered = text.replacen("\"O\"", "\"O\" ", 1).replacen("\"seed\":42", "\"seed\":43", 1);
        assert!(matches!(
            from_bytes(tampered.as_bytes()),
            Err(ModelFileError::CorruptModel(ref m)) if m == "checksum mismatch"
        ));
    }
}
