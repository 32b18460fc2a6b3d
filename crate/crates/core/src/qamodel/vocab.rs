use std::collections::{BTreeSet, HashMap};

use crate::textproc::{tokenize, RawToken};

pub const UNK_TOKEN: &str = "<unk>";
pub const NUM_TOKEN: &str = "<num>";

/// Lowercased token vocabulary; all-digit tokens share [`NUM_TOKEN`] and
/// unseen tokens map to [`UNK_TOKEN`] (id 0).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vocabulary {
    tokens: Vec<String>,
    index: HashMap<String, u32>,
}

impl Vocabulary {
    pub fn normalize(surface: &str) -> String {
        if !surface.is_empty() && surface.chars().all(|c| c.is_ascii_digit()) {
            NUM_TOKEN.to_string()
        } else {
            surface.to_lowercase()
        }
    }

    /// Sorted vocabulary over every token of `texts`, after the two
    /// reserved entries.
    pub fn build<'a>(texts: impl IntoIterator<Item = &'a str>) -> Self {
        let mut words = BTreeSet::new();
        for text in texts {
            for tok in tokenize(text) {
                words.insert(Self::normalize(&tok.surface));
            }
        }
        words.remove(UNK_TOKEN);
        words.remove(NUM_TOKEN);
        let tokens = [UNK_TOKEN.to_string(), NUM_TOKEN.to_string()]
            .into_iter()
            .chain(words)
            .collect();
        Self::from_tokens(tokens).expect("reserved tokens lead the list")
    }

    /// Rebuilds a vocabulary from its id-ordered token list.
    pub fn from_tokens(tokens: Vec<String>) -> Result<Self, String> {
        if tokens.first().map(String::as_str) != Some(UNK_TOKEN) {
            return Err(format!("vocabulary must start with {UNK_TOKEN}"));
        }
        let mut index = HashMap::with_capacity(tokens.len());
        for (i, t) in tokens.iter().enumerate() {
            if index.insert(t.clone(), i as u32).is_some() {
                return Err(format!("duplicate vocabulary entry {t:?}"));
            }
        }
        Ok(Vocabulary { tokens, index })
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn id(&self, surface: &str) -> u32 {
        self.index.get(&Self::normalize(surface)).copied().unwrap_or(0)
    }

    pub fn encode(&self, text: &str) -> (Vec<u32>, Vec<RawToken>) {
        let raw = tokenize(text);
        (raw.iter().map(|t| self.id(&t.surface)).collect(), raw)
    }
}
