//! Dataset directories: `<dir>/{train,valid,test}.txt` in CoNLL/IOB format.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use nerkit_core::{parse_conll, serialize_conll, Dataset, Split};

use crate::{Error, Result};

/// Loads every split file present in `dir`. The dataset is named after the
/// directory's last component.
pub fn load_dataset(dir: impl AsRef<Path>) -> Result<Dataset> {
    let dir = dir.as_ref();
    if !dir.join(Split::Train.file_name()).is_file() && !dir.join(Split::Test.file_name()).is_file()
    {
        return Err(Error::MissingSplit(dir.to_path_buf()));
    }
    let mut splits = BTreeMap::new();
    for split in Split::ALL {
        let path = dir.join(split.file_name());
        if !path.is_file() {
            continue;
        }
        let text = fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
        let sentences = parse_conll(&text).map_err(|source| Error::Corpus {
            path: path.clone(),
            source,
        })?;
        splits.insert(split, sentences);
    }
    let name = dir
        .canonicalize()
        .ok()
        .and_then(|p| p.file_name().map(|n| n.to_string_lossy().into_owned()))
        .unwrap_or_else(|| dir.to_string_lossy().into_owned());
    Dataset::new(name, splits).map_err(|source| Error::Corpus {
        path: dir.to_path_buf(),
        source,
    })
}

/// Writes each split of `dataset` into `dir`, creating it if needed.
pub fn write_dataset(dataset: &Dataset, dir: impl AsRef<Path>) -> Result<()> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    for (split, sentences) in dataset.splits() {
        let path = dir.join(split.file_name());
        fs::write(&path, serialize_conll(sentences)).map_err(|e| Error::io(&path, e))?;
    }
    Ok(())
}
