//! Whitespace and punctuation tokenizer for raw text.
//!
//! Text is split on Unicode whitespace; each piece then has its leading and
//! trailing punctuation peeled off one character per token. Offsets count
//! Unicode scalar values in the original string, end exclusive.

use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenSpan {
    pub text: String,
    pub start_char: usize,
    pub end_char: usize,
}

fn is_punct(c: char) -> bool {
    !c.is_alphanumeric() && !c.is_whitespace()
}

pub fn tokenize(text: &str) -> Vec<TokenSpan> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut push = |start: usize, end: usize| {
        out.push(TokenSpan {
            text: chars[start..end].iter().collect(),
            start_char: start,
            end_char: end,
        });
    };

    let mut i = 0;
    while i < chars.len() {
        if chars[i].is_whitespace() {
            i += 1;
            continue;
        }
        let mut end = i;
        while end < chars.len() && !chars[end].is_whitespace() {
            end += 1;
        }
        let (mut lo, mut hi) = (i, end);
        while lo < hi && is_punct(chars[lo]) {
            push(lo, lo + 1);
            lo += 1;
        }
        let mut trailing = 0;
        while hi > lo && is_punct(chars[hi - 1]) {
            hi -= 1;
            trailing += 1;
        }
        if lo < hi {
            push(lo, hi);
        }
        for k in 0..trailing {
            push(hi + k, hi + k + 1);
        }
        i = end;
    }
    out
}
