//! Tokenization, coarse tagging, lemmatization and verb inflection for
//! English question text.

mod conll;
mod morph;
mod sentences;
mod tagger;
mod tokenize;
pub mod words;

use std::io;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use conll::{parse_conll, read_conll};
pub use morph::{detect_form, inflect, load_verb_exceptions, VerbLemmatizer, IRREGULAR_VERBS};
pub use sentences::sentence_split;
pub use tagger::{DocumentCasing, Tagger};
pub use tokenize::{tokenize, RawToken};

#[derive(Debug, Error)]
pub enum TextprocError {
    #[error("cannot read {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
}

/// Coarse part-of-speech tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Pos {
    Verb,
    Aux,
    Noun,
    Other,
}

impl Pos {
    pub fn is_verbal(self) -> bool {
        matches!(self, Pos::Verb | Pos::Aux)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Pos::Verb => "VERB",
            Pos::Aux => "AUX",
            Pos::Noun => "NOUN",
            Pos::Other => "OTHER",
        }
    }
}

impl std::str::FromStr for Pos {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "VERB" => Ok(Pos::Verb),
            "AUX" => Ok(Pos::Aux),
            "NOUN" => Ok(Pos::Noun),
            "OTHER" => Ok(Pos::Other),
            other => Err(format!("unknown coarse tag {other:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum VerbForm {
    #[serde(rename = "BASE")]
    Base,
    #[serde(rename = "THIRD_SG")]
    ThirdSg,
    #[serde(rename = "PAST")]
    Past,
    #[serde(rename = "GERUND")]
    Gerund,
    #[serde(rename = "PAST_PART")]
    PastPart,
    #[serde(rename = "NONE")]
    NotVerb,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Token {
    pub surface: String,
    /// Byte offsets `[start, end)` into the raw text.
    pub char_span: (usize, usize),
    pub lemma: String,
    pub pos: Pos,
    pub is_named_entity: bool,
    pub verb_form: VerbForm,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaggedQuestion {
    pub raw: String,
    pub tokens: Vec<Token>,
}

impl TaggedQuestion {
    pub fn surfaces(&self) -> Vec<&str> {
        self.tokens.iter().map(|t| t.surface.as_str()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn tagged_tokens_respect_invariants(text in "[A-Za-z ,.?'!-]{0,80}") {
            let tagged = Tagger::default().tag_text(&text);
            let mut last_end = 0;
            for tok in &tagged.tokens {
                prop_assert_eq!(&text[tok.char_span.0..tok.char_span.1], tok.surface.as_str());
                prop_assert!(tok.char_span.0 >= last_end);
                prop_assert!(tok.char_span.0 < tok.char_span.1);
                last_end = tok.char_span.1;
                prop_assert_eq!(tok.verb_form != VerbForm::NotVerb, tok.pos.is_verbal());
                prop_assert!(!tok.is_named_entity || tok.pos == Pos::Noun);
            }
        }
    }
}
