//! Deterministic lexicon + rule tagger.
//!
//! Rules, applied in order to each token:
//!
//! 1. tokens without letters or digits, numbers, and negation/possessive
//!    clitics are `OTHER`;
//! 2. a capitalized token that does not start a sentence is a named-entity
//!    `NOUN`;
//! 3. auxiliaries (forms of be/do/have and the modals) are `AUX`;
//! 4. closed-class function words are `OTHER`;
//! 5. a capitalized sentence-initial token whose lowercase form never occurs
//!    in the document is a named-entity `NOUN`;
//! 6. the embedded lexicon gives a majority tag, overridden by a preceding
//!    determiner (-> `NOUN`) or a preceding `to`/modal (-> `VERB`);
//! 7. unknown words fall back to suffix shape, verb-lemma validation and the
//!    previous token; anything left over is `OTHER`.
//!
//! Named-entity status is a capitalization heuristic, not a learned
//! recognizer.

use std::collections::HashSet;

use super::morph::{detect_form, VerbLemmatizer};
use super::tokenize::{tokenize, RawToken};
use super::words::{self, auxiliary, lexicon_tag, DETERMINERS, FUNCTION_WORDS};
use super::{Pos, TaggedQuestion, Token, VerbForm};
use crate::lexicon::WordNetIndex;

const NOUN_SUFFIXES: &[&str] = &[
    "tion", "sion", "ment", "ness", "ity", "ism", "ist", "ance", "ence", "ship", "hood", "dom",
    "ture", "logy", "graphy", "ery", "ory",
];
const ADJ_SUFFIXES: &[&str] = &["ous", "ful", "ive", "able", "ible", "less", "ish", "ical"];
const SUBJECT_WORDS: &[&str] = &[
    "i", "you", "he", "she", "it", "we", "they", "who", "what", "which", "that",
];
const MODALS: &[&str] = &[
    "will", "would", "can", "could", "shall", "should", "may", "might", "must", "to",
];

/// Lowercase forms observed in a document, used to decide whether a
/// sentence-initial capitalized word is a proper noun.
#[derive(Debug, Clone, Default)]
pub struct DocumentCasing {
    lowercase_seen: HashSet<String>,
}

impl DocumentCasing {
    pub fn from_text(text: &str) -> Self {
        let lowercase_seen = tokenize(text)
            .into_iter()
            .filter(|t| t.surface.chars().next().is_some_and(char::is_lowercase))
            .map(|t| t.surface)
            .collect();
        DocumentCasing { lowercase_seen }
    }

    pub fn never_lowercase(&self, lower: &str) -> bool {
        !self.lowercase_seen.contains(lower)
    }
}

#[derive(Debug, Clone, Default)]
pub struct Tagger {
    lemmatizer: VerbLemmatizer,
}

impl Tagger {
    /// Tagger whose verb lemmatization is validated against WordNet lemmas.
    pub fn with_wordnet(index: &WordNetIndex) -> Self {
        let mut lemmatizer = VerbLemmatizer::default();
        lemmatizer.add_known(index.verb_lemmas());
        Tagger { lemmatizer }
    }

    pub fn with_lemmatizer(lemmatizer: VerbLemmatizer) -> Self {
        Tagger { lemmatizer }
    }

    pub fn lemmatizer(&self) -> &VerbLemmatizer {
        &self.lemmatizer
    }

    pub fn lemmatizer_mut(&mut self) -> &mut VerbLemmatizer {
        &mut self.lemmatizer
    }

    /// Tokenizes and tags `raw`, using `raw` itself as the casing document.
    pub fn tag_text(&self, raw: &str) -> TaggedQuestion {
        let tokens = tokenize(raw);
        self.tag(raw, &tokens, &DocumentCasing::from_text(raw))
    }

    pub fn tag(&self, raw: &str, tokens: &[RawToken], casing: &DocumentCasing) -> TaggedQuestion {
        let mut tagged: Vec<Token> = Vec::with_capacity(tokens.len());
        for (i, tok) in tokens.iter().enumerate() {
            let prev = tagged.last();
            let next = tokens.get(i + 1).map(|t| t.surface.as_str());
            let (pos, is_named_entity, lemma, aux_form) = self.classify(tok, prev, next, casing);
            let verb_form = match (pos, aux_form) {
                (Pos::Aux, Some(form)) => form,
                (Pos::Verb, _) => detect_form(&normalize(&tok.surface), &lemma),
                _ => VerbForm::NotVerb,
            };
            tagged.push(Token {
                surface: tok.surface.clone(),
                char_span: tok.span,
                lemma,
                pos,
                is_named_entity,
                verb_form,
            });
        }
        TaggedQuestion {
            raw: raw.to_string(),
            tokens: tagged,
        }
    }

    fn classify(
        &self,
        tok: &RawToken,
        prev: Option<&Token>,
        next: Option<&str>,
        casing: &DocumentCasing,
    ) -> (Pos, bool, String, Option<VerbForm>) {
        let lower = normalize(&tok.surface);
        let other = |lemma: String| (Pos::Other, false, lemma, None);
        let Some(first) = tok.surface.chars().next() else {
            return other(lower);
        };
        if !tok.surface.chars().any(char::is_alphanumeric) || first.is_ascii_digit() {
            return other(lower);
        }
        if matches!(lower.as_str(), "n't" | "not" | "'s") {
            return other(lower);
        }
        let sentence_start = prev.is_none_or(|p| matches!(p.surface.as_str(), "." | "!" | "?"));
        let capitalized = first.is_uppercase();
        if capitalized && !sentence_start && lower != "i" {
            return (Pos::Noun, true, lower, None);
        }
        if let Some((lemma, form)) = auxiliary(&lower) {
            let needs_negation = matches!(lower.as_str(), "ca" | "wo");
            if !needs_negation || next.is_some_and(|n| normalize(n) == "n't") {
                return (Pos::Aux, false, lemma.to_string(), Some(form));
            }
        }
        if FUNCTION_WORDS.contains(&lower.as_str()) || DETERMINERS.contains(&lower.as_str()) {
            return other(lower);
        }
        if capitalized && casing.never_lowercase(&lower) && lexicon_tag(&lower).is_none() {
            return (Pos::Noun, true, lower, None);
        }

        let prev_lower = prev.map(|p| normalize(&p.surface)).unwrap_or_default();
        let after_determiner = DETERMINERS.contains(&prev_lower.as_str());
        let after_modal = MODALS.contains(&prev_lower.as_str());
        let noun = |lemma: String| (Pos::Noun, false, lemma, None);
        let verb = |lemma: String| (Pos::Verb, false, lemma, None);

        match lexicon_tag(&lower) {
            Some(Pos::Noun) if after_modal && self.lemmatizer.is_known(&lower) => {
                return verb(lower);
            }
            Some(Pos::Noun) => return noun(lower),
            Some(Pos::Verb) if after_determiner => return noun(lower),
            Some(Pos::Verb) => return verb(lower),
            Some(_) => return other(lower),
            None => {}
        }
        let noun_lemma = self.noun_lemma(&lower);
        if noun_lemma != lower && lexicon_tag(&noun_lemma) == Some(Pos::Noun) {
            return noun(noun_lemma);
        }
        let verb_lemma = self.lemmatizer.lemmatize_known(&lower);
        if let Some(lemma) = &verb_lemma {
            if lexicon_tag(lemma) == Some(Pos::Verb) && !after_determiner {
                return verb(lemma.clone());
            }
        }

        if NOUN_SUFFIXES.iter().any(|s| lower.ends_with(s)) {
            return noun(noun_lemma);
        }
        if lower.ends_with("ly") || ADJ_SUFFIXES.iter().any(|s| lower.ends_with(s)) {
            return other(lower);
        }
        let licenses_verb = prev.is_some_and(|p| matches!(p.pos, Pos::Noun | Pos::Aux))
            || SUBJECT_WORDS.contains(&prev_lower.as_str())
            || after_modal;
        match verb_lemma {
            Some(_) if after_determiner => noun(noun_lemma),
            Some(lemma) if lemma == lower => {
                if licenses_verb {
                    verb(lemma)
                } else {
                    other(lower)
                }
            }
            Some(lemma) if lower.ends_with('s') => {
                if licenses_verb {
                    verb(lemma)
                } else {
                    noun(noun_lemma)
                }
            }
            Some(lemma) => verb(lemma),
            None if after_determiner => noun(noun_lemma),
            None => other(lower),
        }
    }

    /// Singular lemma for a lowercase noun.
    pub fn noun_lemma(&self, lower: &str) -> String {
        if let Some(&(_, lemma)) = words::IRREGULAR_PLURALS.iter().find(|(p, _)| *p == lower) {
            return lemma.to_string();
        }
        if lexicon_tag(lower).is_some() || lower.len() <= 3 {
            return lower.to_string();
        }
        if let Some(stem) = lower.strip_suffix("ies") {
            return format!("{stem}y");
        }
        for suffix in ["sses", "ches", "shes", "xes", "zes"] {
            if lower.ends_with(suffix) {
                return lower[..lower.len() - 2].to_string();
            }
        }
        if lower.ends_with('s') && !["ss", "us", "is"].iter().any(|s| lower.ends_with(s)) {
            return lower[..lower.len() - 1].to_string();
        }
        lower.to_string()
    }
}

fn normalize(surface: &str) -> String {
    surface.replace('\u{2019}', "'").to_lowercase()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lexicon::load_wordnet;

    fn wordnet_tagger() -> Tagger {
        let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/../../data/wordnet-3.0");
        Tagger::with_wordnet(&load_wordnet(dir).unwrap())
    }

    fn find<'a>(q: &'a TaggedQuestion, surface: &str) -> &'a Token {
        q.tokens.iter().find(|t| t.surface == surface).unwrap()
    }

    #[test]
    fn table_one_questions() {
        let tagger = wordnet_tagger();
        let q = tagger.tag_text("Which art museum does Notre Dame administer?");
        let does = find(&q, "does");
        assert_eq!((does.pos, does.verb_form), (Pos::Aux, VerbForm::ThirdSg));
        let dame = find(&q, "Dame");
        assert_eq!((dame.pos, dame.is_named_entity), (Pos::Noun, true));
        assert_eq!(find(&q, "administer").pos, Pos::Verb);
        assert_eq!(find(&q, "museum").pos, Pos::Noun);

        let q = tagger.tag_text(
            "How many teams participate in the Notre Dame Bookstore Basketball tournament?",
        );
        let participate = find(&q, "participate");
        assert_eq!((participate.pos, participate.verb_form), (Pos::Verb, VerbForm::Base));
        assert_eq!(participate.lemma, "participate");
        let teams = find(&q, "teams");
        assert_eq!((teams.pos, teams.lemma.as_str()), (Pos::Noun, "team"));
        assert_eq!(find(&q, "tournament").pos, Pos::Noun);
    }

    #[test]
    fn named_entities_and_casing() {
        let tagger = Tagger::default();
        let text = "Alice bought the book in 1874. Then Alice sold the book.";
        let q = tagger.tag_text(text);
        let alice = &q.tokens[0];
        assert_eq!((alice.pos, alice.is_named_entity), (Pos::Noun, true));
        let bought = find(&q, "bought");
        assert_eq!((bought.pos, bought.lemma.as_str()), (Pos::Verb, "buy"));
        assert_eq!(bought.verb_form, VerbForm::Past);
        assert_eq!(find(&q, "book").pos, Pos::Noun);
        assert!(!find(&q, "book").is_named_entity);
        assert_eq!(find(&q, "1874").pos, Pos::Other);
        // sentence-initial word that also occurs lowercase is not a name
        let q = tagger.tag_text("Books are here. I like books.");
        assert!(!q.tokens[0].is_named_entity);
    }

    #[test]
    fn question_verbs_in_do_support() {
        let tagger = Tagger::default();
        let q = tagger.tag_text("When did Alice buy the book?");
        let tags: Vec<Pos> = q.tokens.iter().map(|t| t.pos).collect();
        assert_eq!(
            tags,
            [Pos::Other, Pos::Aux, Pos::Noun, Pos::Verb, Pos::Other, Pos::Noun, Pos::Other]
        );
        assert_eq!(q.tokens[1].verb_form, VerbForm::Past);
    }

    #[test]
    fn negated_auxiliaries() {
        let q = Tagger::default().tag_text("Why can't it isn't?");
        assert_eq!(q.tokens[1].pos, Pos::Aux);
        assert_eq!(q.tokens[1].lemma, "can");
        assert_eq!(q.tokens[2].pos, Pos::Other);
    }

    #[test]
    fn unknown_words() {
        let tagger = wordnet_tagger();
        let q = tagger.tag_text("the glorble of many zorbs");
        assert_eq!(q.tokens[1].pos, Pos::Noun);
        assert_eq!(q.tokens[4].pos, Pos::Noun);
        let q = tagger.tag_text("glorble");
        assert_eq!(q.tokens[0].pos, Pos::Other);
        let q = tagger.tag_text("Which company acquired the team?");
        assert_eq!(find(&q, "acquired").pos, Pos::Verb);
        assert_eq!(find(&q, "acquired").lemma, "acquire");
    }

    #[test]
    fn noun_lemmas() {
        let tagger = Tagger::default();
        assert_eq!(tagger.noun_lemma("cities"), "city");
        assert_eq!(tagger.noun_lemma("churches"), "church");
        assert_eq!(tagger.noun_lemma("books"), "book");
        assert_eq!(tagger.noun_lemma("campus"), "campus");
        assert_eq!(tagger.noun_lemma("women"), "woman");
    }
}
