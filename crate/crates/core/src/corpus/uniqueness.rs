use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::QaDataset;
use crate::textproc::{sentence_split, tokenize, DocumentCasing, Pos, Tagger};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContextUniqueness {
    /// Position of the context among the dataset's distinct contexts.
    pub context_index: usize,
    pub title: String,
    /// Noun lemma -> number of distinct sentences containing it.
    pub noun_sentence_counts: BTreeMap<String, usize>,
    /// Share of distinct nouns that occur in exactly one sentence; 1.0 for a
    /// context without nouns.
    pub uniqueness_fraction: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UniquenessReport {
    pub per_context: Vec<ContextUniqueness>,
    /// Mean of the per-context fractions (1.0 for an empty dataset).
    pub corpus_fraction: f64,
}

fn scan_context(tagger: &Tagger, context: &str) -> BTreeMap<String, usize> {
    let spans = sentence_split(context);
    let raw = tokenize(context);
    let tagged = tagger.tag(context, &raw, &DocumentCasing::from_text(context));
    let mut sentences: BTreeMap<String, BTreeSet<usize>> = BTreeMap::new();
    for tok in tagged.tokens.iter().filter(|t| t.pos == Pos::Noun) {
        let sentence = spans
            .iter()
            .position(|&(s, e)| tok.char_span.0 >= s && tok.char_span.0 < e)
            .unwrap_or(0);
        sentences.entry(tok.lemma.clone()).or_default().insert(sentence);
    }
    sentences.into_iter().map(|(lemma, s)| (lemma, s.len())).collect()
}

pub fn noun_uniqueness_scan(dataset: &QaDataset, tagger: &Tagger) -> UniquenessReport {
    let per_context: Vec<ContextUniqueness> = dataset
        .contexts()
        .into_iter()
        .enumerate()
        .map(|(context_index, (title, context, _))| {
            let counts = scan_context(tagger, context);
            let unique = counts.values().filter(|&&n| n == 1).count();
            let uniqueness_fraction = if counts.is_empty() {
                1.0
            } else {
                unique as f64 / counts.len() as f64
            };
            ContextUniqueness {
                context_index,
                title: title.to_string(),
                noun_sentence_counts: counts,
                uniqueness_fraction,
            }
        })
        .collect();
    let corpus_fraction = if per_context.is_empty() {
        1.0
    } else {
        per_context.iter().map(|c| c.uniqueness_fraction).sum::<f64>() / per_context.len() as f64
    };
    UniquenessReport { per_context, corpus_fraction }
}
