//! Tag sequences to entity spans.
//!
//! Extraction is lenient: an `I-X` that does not continue an `X` chunk opens
//! a new one, the way conlleval and seqeval's default mode read IOB1 input.

use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::tag::Tag;

/// Entity type written by [`erase_types`].
pub const PLACEHOLDER_TYPE: &str = "ENT";

/// A typed half-open token interval `[start, end)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EntitySpan {
    pub entity_type: String,
    pub start: usize,
    pub end: usize,
}

impl EntitySpan {
    pub fn new(entity_type: impl Into<String>, start: usize, end: usize) -> Self {
        EntitySpan {
            entity_type: entity_type.into(),
            start,
            end,
        }
    }
}

/// True when position `i` opens a chunk.
fn starts_chunk(tags: &[Tag], i: usize) -> bool {
    match &tags[i] {
        Tag::Outside => false,
        Tag::Begin(_) => true,
        Tag::Inside(ty) => i == 0 || tags[i - 1].entity_type() != Some(ty.as_str()),
    }
}

/// Returns the chunks of a tag sequence, sorted by start and non-overlapping.
pub fn extract_chunks(tags: &[Tag]) -> Vec<EntitySpan> {
    let mut spans = Vec::new();
    let mut i = 0;
    while i < tags.len() {
        if !starts_chunk(tags, i) {
            i += 1;
            continue;
        }
        let ty = tags[i].entity_type().expect("chunk start has a type");
        let mut end = i + 1;
        while end < tags.len() && matches!(&tags[end], Tag::Inside(t) if t == ty) {
            end += 1;
        }
        spans.push(EntitySpan::new(ty, i, end));
        i = end;
    }
    spans
}

/// Rewrites tags to strict IOB2 without changing the chunks: chunk-initial
/// positions get `B`, the rest of each chunk gets `I`.
pub fn normalize_iob2(tags: &[Tag]) -> Vec<Tag> {
    (0..tags.len())
        .map(|i| match &tags[i] {
            Tag::Outside => Tag::Outside,
            Tag::Begin(ty) | Tag::Inside(ty) if starts_chunk(tags, i) => Tag::Begin(ty.clone()),
            Tag::Begin(ty) | Tag::Inside(ty) => Tag::Inside(ty.clone()),
        })
        .collect()
}

/// Normalizes to IOB2, then replaces every entity type with
/// [`PLACEHOLDER_TYPE`]. Chunk boundaries are preserved exactly.
pub fn erase_types(tags: &[Tag]) -> Vec<Tag> {
    normalize_iob2(tags)
        .iter()
        .map(|t| t.with_type(PLACEHOLDER_TYPE))
        .collect()
}

/// Span text over a token list, tokens joined by single spaces.
pub fn span_text<S: AsRef<str>>(tokens: &[S], span: &EntitySpan) -> String {
    let mut out = String::new();
    for (k, tok) in tokens[span.start..span.end].iter().enumerate() {
        if k > 0 {
            out.push(' ');
        }
        out.push_str(tok.as_ref());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tag::tags;
    use alloc::vec;
    use proptest::prelude::*;

    /// Independent oracle: find every maximal run of same-typed non-O tags,
    /// then cut the run before each `B`.
    fn oracle(tags: &[Tag]) -> Vec<EntitySpan> {
        let mut out = Vec::new();
        let mut run_start = 0;
        while run_start < tags.len() {
            let Some(ty) = tags[run_start].entity_type() else {
                run_start += 1;
                continue;
            };
            let mut run_end = run_start + 1;
            while run_end < tags.len() && tags[run_end].entity_type() == Some(ty) {
                run_end += 1;
            }
            let mut cuts: Vec<usize> = (run_start..run_end)
                .filter(|&k| k == run_start || tags[k].prefix() == 'B')
                .collect();
            cuts.push(run_end);
            for w in cuts.windows(2) {
                out.push(EntitySpan::new(ty, w[0], w[1]));
            }
            run_start = run_end;
        }
        out
    }

    fn alphabet() -> Vec<Tag> {
        tags(&["O", "B-A", "I-A", "B-B", "I-B"])
    }

    fn all_sequences(max_len: usize) -> Vec<Vec<Tag>> {
        let alpha = alphabet();
        let mut out = vec![vec![]];
        let mut frontier = vec![vec![]];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for seq in &frontier {
                for t in &alpha {
                    let mut s: Vec<Tag> = seq.clone();
                    s.push(t.clone());
                    next.push(s);
                }
            }
            out.extend(next.iter().cloned());
            frontier = next;
        }
        out
    }

    #[test]
    fn eu_block_chunks() {
        let t = tags(&["B-ORG", "O", "B-MISC", "O", "O", "O", "B-MISC", "O", "O"]);
        assert_eq!(
            extract_chunks(&t),
            vec![
                EntitySpan::new("ORG", 0, 1),
                EntitySpan::new("MISC", 2, 3),
                EntitySpan::new("MISC", 6, 7)
            ]
        );
    }

    #[test]
    fn extraction_examples() {
        assert!(extract_chunks(&tags(&["O", "O", "O"])).is_empty());
        assert!(extract_chunks(&[]).is_empty());
        assert_eq!(
            extract_chunks(&tags(&["I-PER", "I-PER", "O", "I-PER"])),
            vec![EntitySpan::new("PER", 0, 2), EntitySpan::new("PER", 3, 4)]
        );
        assert_eq!(
            extract_chunks(&tags(&["B-PER", "I-ORG"])),
            vec![EntitySpan::new("PER", 0, 1), EntitySpan::new("ORG", 1, 2)]
        );
    }

    #[test]
    fn normalize_examples() {
        let t = tags(&["B-PER", "I-PER"]);
        assert_eq!(normalize_iob2(&t), t);
        assert_eq!(normalize_iob2(&tags(&["I-PER", "I-PER"])), tags(&["B-PER", "I-PER"]));
        assert_eq!(normalize_iob2(&tags(&["I-PER", "I-ORG"])), tags(&["B-PER", "B-ORG"]));
    }

    #[test]
    fn erase_examples() {
        assert_eq!(
            erase_types(&tags(&["B-PER", "I-PER", "O"])),
            tags(&["B-ENT", "I-ENT", "O"])
        );
        assert_eq!(erase_types(&tags(&["B-PER", "B-ORG"])), tags(&["B-ENT", "B-ENT"]));
        assert_eq!(erase_types(&tags(&["I-PER", "I-ORG"])), tags(&["B-ENT", "B-ENT"]));
    }

    #[test]
    fn exhaustive_agreement_with_oracle() {
        let seqs = all_sequences(6);
        assert_eq!(seqs.len(), 1 + 5 + 25 + 125 + 625 + 3125 + 15625);
        for s in &seqs {
            let spans = extract_chunks(s);
            assert_eq!(spans, oracle(s), "{s:?}");

            let bounds = |v: &[EntitySpan]| v.iter().map(|x| (x.start, x.end)).collect::<Vec<_>>();
            assert_eq!(bounds(&extract_chunks(&erase_types(s))), bounds(&spans));

            let norm = normalize_iob2(s);
            assert_eq!(extract_chunks(&norm), spans);
            assert_eq!(normalize_iob2(&norm), norm);
        }
    }

    fn arb_tags() -> impl Strategy<Value = Vec<Tag>> {
        let tag = prop_oneof![
            Just(Tag::Outside),
            "[A-D]".prop_map(Tag::Begin),
            "[A-D]".prop_map(Tag::Inside),
        ];
        prop::collection::vec(tag, 0..30)
    }

    proptest! {
        #[test]
        fn spans_sorted_disjoint_in_bounds(t in arb_tags()) {
            let spans = extract_chunks(&t);
            let mut prev_end = 0;
            for s in &spans {
                prop_assert!(s.start >= prev_end);
                prop_assert!(s.start < s.end && s.end <= t.len());
                prev_end = s.end;
            }
        }
    }

    #[test]
    fn span_text_joins_tokens() {
        let toks = ["New", "York", "City"];
        assert_eq!(span_text(&toks, &EntitySpan::new("LOC", 0, 2)), "New York");
    }
}
