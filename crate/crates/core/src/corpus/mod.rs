//! QA datasets: SQuAD v1.1 ingestion and output, the noun-uniqueness
//! diagnosis, and the synthetic unique/contrast corpora.

mod contrast;
mod squad;
mod uniqueness;

use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use contrast::{generate_contrast_corpus, ContrastSpec};
pub use squad::{load_squad, parse_squad, to_squad_json, write_squad};
pub use uniqueness::{noun_uniqueness_scan, ContextUniqueness, UniquenessReport};

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("I/O on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid JSON: {0}")]
    Json(String),
    #[error("schema violation at {path}: {message}")]
    Schema { path: String, message: String },
    #[error("unanswerable question at {0}: only SQuAD v1.1 is supported")]
    Unanswerable(String),
    #[error("contrast spec: {0}")]
    Spec(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Provenance {
    SquadFile,
    SyntheticUnique,
    SyntheticContrast,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Answer {
    pub text: String,
    /// Offset in characters (Unicode scalar values) into the context.
    pub answer_start: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QaItem {
    pub id: String,
    pub title: String,
    pub context: String,
    pub question: String,
    pub answers: Vec<Answer>,
}

impl QaItem {
    /// Byte range of answer `k` in the context.
    pub fn answer_byte_span(&self, k: usize) -> Option<(usize, usize)> {
        let a = self.answers.get(k)?;
        let start = char_to_byte(&self.context, a.answer_start)?;
        let end = start + a.text.len();
        (self.context.get(start..end) == Some(a.text.as_str())).then_some((start, end))
    }
}

pub(crate) fn char_to_byte(text: &str, chars: usize) -> Option<usize> {
    if chars == text.chars().count() {
        return Some(text.len());
    }
    text.char_indices().nth(chars).map(|(b, _)| b)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QaDataset {
    pub items: Vec<QaItem>,
    pub provenance: Provenance,
}

impl QaDataset {
    /// Distinct (title, context) pairs in order of first appearance, with
    /// the indices of their items.
    pub fn contexts(&self) -> Vec<(&str, &str, Vec<usize>)> {
        let mut out: Vec<(&str, &str, Vec<usize>)> = Vec::new();
        let mut seen: std::collections::HashMap<(&str, &str), usize> = std::collections::HashMap::new();
        for (i, item) in self.items.iter().enumerate() {
            let key = (item.title.as_str(), item.context.as_str());
            match seen.get(&key) {
                Some(&k) => out[k].2.push(i),
                None => {
                    seen.insert(key, out.len());
                    out.push((key.0, key.1, vec![i]));
                }
            }
        }
        out
    }

    /// Splits by context: the last `round(n * fraction)` contexts are held
    /// out, so no passage is shared between the two parts.
    pub fn split_by_context(&self, fraction: f64) -> (QaDataset, QaDataset) {
        let contexts = self.contexts();
        let held = ((contexts.len() as f64) * fraction.clamp(0.0, 1.0)).round() as usize;
        let cut = contexts.len() - held;
        let pick = |range: std::ops::Range<usize>| QaDataset {
            items: contexts[range]
                .iter()
                .flat_map(|(_, _, idx)| idx.iter().map(|&i| self.items[i].clone()))
                .collect(),
            provenance: self.provenance,
        };
        (pick(0..cut), pick(cut..contexts.len()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn item(id: &str, ctx: &str) -> QaItem {
        QaItem {
            id: id.into(),
            title: "t".into(),
            context: ctx.into(),
            question: "q?".into(),
            answers: vec![Answer { text: ctx[..1].into(), answer_start: 0 }],
        }
    }

    #[test]
    fn split_keeps_contexts_whole() {
        let ds = QaDataset {
            items: vec![item("1", "A."), item("2", "A."), item("3", "B."), item("4", "C."), item("5", "D.")],
            provenance: Provenance::SquadFile,
        };
        let (train, held) = ds.split_by_context(0.5);
        assert_eq!(train.items.iter().map(|i| i.id.as_str()).collect::<Vec<_>>(), ["1", "2", "3"]);
        assert_eq!(held.items.len(), 2);
    }

    #[test]
    fn byte_spans_follow_characters() {
        let it = QaItem {
            id: "x".into(),
            title: "t".into(),
            context: "Caf\u{e9} de Flore in 1887".into(),
            question: "When?".into(),
            answers: vec![Answer { text: "1887".into(), answer_start: 17 }],
        };
        let (s, e) = it.answer_byte_span(0).unwrap();
        assert_eq!(&it.context[s..e], "1887");
    }
}
