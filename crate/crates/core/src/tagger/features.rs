//! Sparse feature templates.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::TaggerError;

/// Version of the template set below. Stored in model files; bump on any
/// change to [`featurize`].
pub const FEATURE_VERSION: u32 = 1;

const BOS: &str = "<s>";
const EOS: &str = "</s>";

/// Word shape: uppercase letters map to `X`, lowercase to `x`, digits to
/// `d`, anything else is kept. Runs of `X` or `x` collapse to one character;
/// digits are not collapsed so numeric width stays visible.
pub fn word_shape(word: &str) -> String {
    let mut out = String::new();
    for c in word.chars() {
        let mapped = if c.is_uppercase() {
            'X'
        } else if c.is_lowercase() {
            'x'
        } else if c.is_numeric() {
            'd'
        } else {
            c
        };
        if matches!(mapped, 'X' | 'x') && out.ends_with(mapped) {
            continue;
        }
        out.push(mapped);
    }
    out
}

/// Feature keys for position `i` of `tokens`. The order of the returned keys
/// is fixed.
pub fn featurize<S: AsRef<str>>(tokens: &[S], i: usize) -> Result<Vec<String>, TaggerError> {
    if i >= tokens.len() {
        return Err(TaggerError::IndexOutOfRange {
            index: i,
            len: tokens.len(),
        });
    }
    let word = tokens[i].as_ref();
    let lower = word.to_lowercase();
    let prev = if i == 0 { BOS } else { tokens[i - 1].as_ref() };
    let next = tokens.get(i + 1).map_or(EOS, |t| t.as_ref());

    let mut feats = Vec::with_capacity(16);
    feats.push(String::from("bias"));
    feats.push(format!("w0={word}"));
    feats.push(format!("low0={lower}"));
    feats.push(format!("shape0={}", word_shape(word)));
    feats.push(format!("w-1={prev}"));
    feats.push(format!("low-1={}", prev.to_lowercase()));
    feats.push(format!("w+1={next}"));
    feats.push(format!("low+1={}", next.to_lowercase()));

    let chars: Vec<char> = lower.chars().collect();
    for n in 1..=chars.len().min(3) {
        let prefix: String = chars[..n].iter().collect();
        feats.push(format!("pre{n}_0={prefix}"));
    }
    for n in 1..=chars.len().min(3) {
        let suffix: String = chars[chars.len() - n..].iter().collect();
        feats.push(format!("suf{n}_0={suffix}"));
    }
    Ok(feats)
}
