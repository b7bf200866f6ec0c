//! IOB tags.

use alloc::string::{String, ToString};
use core::fmt;
use core::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A single IOB tag: `O`, `B-<type>` or `I-<type>`.
///
/// The derived ordering is only used for map keys; label ids come from
/// [`crate::LabelLookup`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Tag {
    Outside,
    Begin(String),
    Inside(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid tag {0:?}")]
pub struct TagParseError(pub String);

impl Tag {
    pub fn begin(entity_type: impl Into<String>) -> Tag {
        Tag::Begin(entity_type.into())
    }

    pub fn inside(entity_type: impl Into<String>) -> Tag {
        Tag::Inside(entity_type.into())
    }

    pub fn is_outside(&self) -> bool {
        matches!(self, Tag::Outside)
    }

    /// `'O'`, `'B'` or `'I'`.
    pub fn prefix(&self) -> char {
        match self {
            Tag::Outside => 'O',
            Tag::Begin(_) => 'B',
            Tag::Inside(_) => 'I',
        }
    }

    pub fn entity_type(&self) -> Option<&str> {
        match self {
            Tag::Outside => None,
            Tag::Begin(t) | Tag::Inside(t) => Some(t),
        }
    }

    /// Same prefix, new entity type. `O` stays `O`.
    pub fn with_type(&self, entity_type: &str) -> Tag {
        match self {
            Tag::Outside => Tag::Outside,
            Tag::Begin(_) => Tag::Begin(entity_type.to_string()),
            Tag::Inside(_) => Tag::Inside(entity_type.to_string()),
        }
    }
}

fn valid_entity_type(s: &str) -> bool {
    !s.is_empty() && !s.chars().any(char::is_whitespace)
}

impl FromStr for Tag {
    type Err = TagParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "O" {
            return Ok(Tag::Outside);
        }
        let err = || TagParseError(s.to_string());
        let (prefix, entity_type) = s.split_once('-').ok_or_else(err)?;
        if !valid_entity_type(entity_type) {
            return Err(err());
        }
        match prefix {
            "B" => Ok(Tag::Begin(entity_type.to_string())),
            "I" => Ok(Tag::Inside(entity_type.to_string())),
            _ => Err(err()),
        }
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tag::Outside => f.write_str("O"),
            Tag::Begin(t) => write!(f, "B-{t}"),
            Tag::Inside(t) => write!(f, "I-{t}"),
        }
    }
}

impl TryFrom<String> for Tag {
    type Error = TagParseError;

    fn try_from(value: String) -> Result<Self, Self::Error> {
        value.parse()
    }
}

impl From<Tag> for String {
    fn from(tag: Tag) -> String {
        tag.to_string()
    }
}

/// Parses a list of tag strings, panicking on malformed input. Test helper.
#[cfg(test)]
pub(crate) fn tags(items: &[&str]) -> alloc::vec::Vec<Tag> {
    items.iter().map(|s| s.parse().unwrap()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_the_three_shapes() {
        assert_eq!("O".parse::<Tag>().unwrap(), Tag::Outside);
        assert_eq!("B-ORG".parse::<Tag>().unwrap(), Tag::begin("ORG"));
        assert_eq!("I-MISC".parse::<Tag>().unwrap(), Tag::inside("MISC"));
        // entity types may themselves contain dashes
        assert_eq!("B-B-X".parse::<Tag>().unwrap(), Tag::begin("B-X"));
    }

    #[test]
    fn rejects_malformed() {
        for bad in ["", "o", "B", "B-", "X-PER", "B-P ER", "BPER", "O-PER", "b-PER"] {
            assert!(bad.parse::<Tag>().is_err(), "{bad:?} accepted");
        }
    }

    proptest! {
        #[test]
        fn display_round_trips(prefix in 0u8..3, ty in "[A-Za-z0-9_.-]{1,8}") {
            let tag = match prefix {
                0 => Tag::Outside,
                1 => Tag::Begin(ty),
                _ => Tag::Inside(ty),
            };
            prop_assert_eq!(tag.to_string().parse::<Tag>().unwrap(), tag);
        }
    }
}
