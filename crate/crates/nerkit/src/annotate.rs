//! Raw text in, tagged entities with character offsets out. Shared by the
//! `predict` subcommand and the HTTP service.

use nerkit_core::{predict, tokenize, TaggerError, TaggerModel, TokenSpan};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnnotatedSpan {
    #[serde(rename = "type")]
    pub entity_type: String,
    pub start_token: usize,
    /// Exclusive.
    pub end_token: usize,
    pub text: String,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Annotation {
    pub tokens: Vec<TokenSpan>,
    pub tags: Vec<String>,
    pub spans: Vec<AnnotatedSpan>,
}

pub fn annotate(text: &str, model: &TaggerModel) -> Result<Annotation, TaggerError> {
    let tokens = tokenize(text);
    let words: Vec<&str> = tokens.iter().map(|t| t.text.as_str()).collect();
    let prediction = predict(&words, model)?;
    let chars: Vec<char> = text.chars().collect();
    let spans = prediction
        .spans
        .into_iter()
        .map(|s| {
            let from = tokens[s.span.start].start_char;
            let to = tokens[s.span.end - 1].end_char;
            AnnotatedSpan {
                entity_type: s.span.entity_type,
                start_token: s.span.start,
                end_token: s.span.end,
                text: chars[from..to].iter().collect(),
                score: s.score,
            }
        })
        .collect();
    Ok(Annotation {
        tokens,
        tags: prediction.tags.iter().map(ToString::to_string).collect(),
        spans,
    })
}
