//! Meaning-reversing question perturbations.
//!
//! One site per question, chosen by priority: a verb with a WordNet antonym,
//! then an auxiliary to negate, then a verb replaced by a random pool verb.

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lexicon::{lemma_key, WordNetIndex};
use crate::seeding::derive_seed;
use crate::textproc::{inflect, Pos, TaggedQuestion, VerbForm};

#[derive(Debug, Error)]
pub enum PerturbError {
    #[error("auxiliary {0:?} is not negatable")]
    NotNegatable(String),
    #[error("verb pool is empty")]
    EmptyVerbPool,
    #[error("reading verb pool {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Strategy {
    Antonym,
    AuxNegation,
    RandomFallback,
    Unchanged,
}

impl Strategy {
    pub const ALL: [Strategy; 4] = [
        Strategy::Antonym,
        Strategy::AuxNegation,
        Strategy::RandomFallback,
        Strategy::Unchanged,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Strategy::Antonym => "ANTONYM",
            Strategy::AuxNegation => "AUX_NEGATION",
            Strategy::RandomFallback => "RANDOM_FALLBACK",
            Strategy::Unchanged => "UNCHANGED",
        }
    }
}

const NEGATIONS: &[(&str, &str)] = &[
    ("is", "isn't"),
    ("are", "aren't"),
    ("was", "wasn't"),
    ("were", "weren't"),
    ("does", "doesn't"),
    ("do", "don't"),
    ("did", "didn't"),
    ("has", "hasn't"),
    ("have", "haven't"),
    ("had", "hadn't"),
    ("can", "can't"),
    ("could", "couldn't"),
    ("will", "won't"),
    ("would", "wouldn't"),
    ("should", "shouldn't"),
    ("must", "mustn't"),
    ("may", "may not"),
    ("might", "might not"),
];

/// True when `s` is one of the negated forms the table produces.
pub fn is_negation_form(s: &str) -> bool {
    NEGATIONS.iter().any(|(_, neg)| *neg == s)
}

/// Negated surface of a positive auxiliary, keeping the case of its first
/// letter.
pub fn negate_aux(aux_surface: &str) -> Result<String, PerturbError> {
    let lower = aux_surface.to_lowercase();
    let (_, negated) = NEGATIONS
        .iter()
        .find(|(pos, _)| *pos == lower)
        .ok_or_else(|| PerturbError::NotNegatable(aux_surface.to_string()))?;
    Ok(match_case(aux_surface, negated))
}

fn match_case(original: &str, replacement: &str) -> String {
    let upper = original.chars().next().is_some_and(char::is_uppercase);
    let mut chars = replacement.chars();
    match (upper, chars.next()) {
        (true, Some(first)) => first.to_uppercase().chain(chars).collect(),
        _ => replacement.to_string(),
    }
}

/// Which site to perturb and how.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PerturbationPlan {
    pub strategy: Strategy,
    pub target: Option<usize>,
    /// Antonym lemma for the ANTONYM strategy.
    pub antonym: Option<String>,
}

impl PerturbationPlan {
    fn unchanged() -> Self {
        PerturbationPlan {
            strategy: Strategy::Unchanged,
            target: None,
            antonym: None,
        }
    }
}

fn is_negated_at(tagged: &TaggedQuestion, aux: usize) -> bool {
    let surface = tagged.tokens[aux].surface.to_lowercase();
    if matches!(surface.as_str(), "ca" | "wo" | "cannot") {
        return true;
    }
    tagged.tokens.get(aux + 1).is_some_and(|next| {
        let n = next.surface.to_lowercase().replace('\u{2019}', "'");
        n == "n't" || n == "not"
    })
}

pub fn select_target(tagged: &TaggedQuestion, index: &WordNetIndex) -> PerturbationPlan {
    let verbs = || {
        tagged
            .tokens
            .iter()
            .enumerate()
            .filter(|(_, t)| t.pos == Pos::Verb)
    };
    for (i, tok) in verbs() {
        if let Some(antonym) = index.antonym_of(&tok.lemma).into_iter().next() {
            return PerturbationPlan {
                strategy: Strategy::Antonym,
                target: Some(i),
                antonym: Some(antonym),
            };
        }
    }
    if let Some(i) = tagged.tokens.iter().position(|t| t.pos == Pos::Aux) {
        let negatable = negate_aux(&tagged.tokens[i].surface).is_ok();
        if is_negated_at(tagged, i) || !negatable {
            return PerturbationPlan::unchanged();
        }
        return PerturbationPlan {
            strategy: Strategy::AuxNegation,
            target: Some(i),
            antonym: None,
        };
    }
    if let Some((i, _)) = verbs().next() {
        return PerturbationPlan {
            strategy: Strategy::RandomFallback,
            target: Some(i),
            antonym: None,
        };
    }
    PerturbationPlan::unchanged()
}

#[derive(Debug, Clone, PartialEq)]
pub struct PerturbedQuestion {
    pub original: TaggedQuestion,
    pub perturbed_text: String,
    pub strategy: Strategy,
    pub target_token_index: Option<usize>,
    pub replacement: Option<String>,
    pub rng_seed: u64,
}

/// Ordered universe of verb lemmas for random replacement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerbPool(Vec<String>);

impl VerbPool {
    pub const DEFAULT_SIZE: usize = 100;

    pub fn new(lemmas: Vec<String>) -> Result<Self, PerturbError> {
        let mut seen = std::collections::HashSet::new();
        let lemmas: Vec<String> = lemmas
            .into_iter()
            .map(|l| lemma_key(&l))
            .filter(|l| !l.is_empty() && seen.insert(l.clone()))
            .collect();
        if lemmas.is_empty() {
            return Err(PerturbError::EmptyVerbPool);
        }
        Ok(VerbPool(lemmas))
    }

    /// One lemma per line; blank lines are skipped.
    pub fn from_file(path: impl AsRef<Path>) -> Result<Self, PerturbError> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|source| PerturbError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::new(text.lines().map(str::trim).map(String::from).collect())
    }

    /// The `size` most frequent non-auxiliary verb lemmas, ties broken
    /// alphabetically.
    pub fn from_questions<'a>(
        questions: impl IntoIterator<Item = &'a TaggedQuestion>,
        size: usize,
    ) -> Result<Self, PerturbError> {
        let mut counts: HashMap<&str, usize> = HashMap::new();
        for q in questions {
            for t in q.tokens.iter().filter(|t| t.pos == Pos::Verb) {
                *counts.entry(t.lemma.as_str()).or_default() += 1;
            }
        }
        let mut ranked: Vec<(&str, usize)> = counts.into_iter().collect();
        ranked.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(b.0)));
        Self::new(ranked.into_iter().take(size).map(|(l, _)| l.to_string()).collect())
    }

    pub fn lemmas(&self) -> &[String] {
        &self.0
    }

    pub fn contains(&self, lemma: &str) -> bool {
        self.0.iter().any(|l| l == lemma)
    }

    /// Uniform draw, avoiding `exclude` whenever another lemma exists.
    fn draw(&self, exclude: &str, rng: &mut impl Rng) -> &str {
        let options: Vec<&String> = self.0.iter().filter(|l| *l != exclude).collect();
        if options.is_empty() {
            &self.0[rng.gen_range(0..self.0.len())]
        } else {
            options[rng.gen_range(0..options.len())]
        }
    }
}

/// Applies the plan chosen by [`select_target`]. Random draws are seeded by
/// `(seed, question_id)`, so results do not depend on processing order.
pub fn negate_question(
    tagged: &TaggedQuestion,
    question_id: &str,
    index: &WordNetIndex,
    verb_pool: &VerbPool,
    seed: u64,
) -> PerturbedQuestion {
    let rng_seed = derive_seed(seed, question_id);
    let plan = select_target(tagged, index);
    let unchanged = || PerturbedQuestion {
        original: tagged.clone(),
        perturbed_text: tagged.raw.clone(),
        strategy: Strategy::Unchanged,
        target_token_index: None,
        replacement: None,
        rng_seed,
    };
    let Some(target) = plan.target else {
        return unchanged();
    };
    let token = &tagged.tokens[target];
    let form = match token.verb_form {
        VerbForm::NotVerb => VerbForm::Base,
        f => f,
    };
    let (replacement, surface) = match plan.strategy {
        Strategy::Antonym => {
            let lemma = plan.antonym.expect("antonym plan carries a lemma");
            let surface = match_case(&token.surface, &inflect(&lemma, form));
            (lemma, surface)
        }
        Strategy::AuxNegation => match negate_aux(&token.surface) {
            Ok(neg) => (neg.to_lowercase(), neg),
            Err(_) => return unchanged(),
        },
        Strategy::RandomFallback => {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(rng_seed);
            let lemma = verb_pool.draw(&token.lemma, &mut rng).to_string();
            let surface = match_case(&token.surface, &inflect(&lemma, form));
            (lemma, surface)
        }
        Strategy::Unchanged => return unchanged(),
    };
    let (start, end) = token.char_span;
    let perturbed_text = format!("{}{}{}", &tagged.raw[..start], surface, &tagged.raw[end..]);
    PerturbedQuestion {
        original: tagged.clone(),
        perturbed_text,
        strategy: plan.strategy,
        target_token_index: Some(target),
        replacement: Some(replacement),
        rng_seed,
    }
}

/// One line of the perturbation JSONL output.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PerturbationRecord {
    pub id: String,
    pub original: String,
    pub perturbed: String,
    pub strategy: Strategy,
    pub target_index: Option<usize>,
    pub replacement: Option<String>,
    pub seed: u64,
}

impl PerturbationRecord {
    pub fn new(id: &str, p: &PerturbedQuestion) -> Self {
        PerturbationRecord {
            id: id.to_string(),
            original: p.original.raw.clone(),
            perturbed: p.perturbed_text.clone(),
            strategy: p.strategy,
            target_index: p.target_token_index,
            replacement: p.replacement.clone(),
            seed: p.rng_seed,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lexicon::fixture;
    use crate::textproc::Tagger;
    use proptest::prelude::{any, prop_assert, prop_assert_eq, prop_oneof, proptest, Just};

    fn fixture_index() -> WordNetIndex {
        WordNetIndex::parse(fixture::INDEX, fixture::DATA).unwrap()
    }

    fn pool() -> VerbPool {
        VerbPool::new(vec!["sing".into(), "walk".into(), "take".into()]).unwrap()
    }

    #[test]
    fn aux_negation_table() {
        assert_eq!(negate_aux("is").unwrap(), "isn't");
        assert_eq!(negate_aux("does").unwrap(), "doesn't");
        assert_eq!(negate_aux("may").unwrap(), "may not");
        assert_eq!(negate_aux("Does").unwrap(), "Doesn't");
        assert_eq!(negate_aux("Will").unwrap(), "Won't");
        assert!(matches!(negate_aux("isn't"), Err(PerturbError::NotNegatable(_))));
        assert!(negate_aux("been").is_err());
    }

    #[test]
    fn antonym_has_priority() {
        let tagger = Tagger::default();
        let q = tagger.tag_text("Why does the price rise?");
        let plan = select_target(&q, &fixture_index());
        assert_eq!(plan.strategy, Strategy::Antonym);
        assert_eq!(plan.target, Some(4));
        let p = negate_question(&q, "q", &fixture_index(), &pool(), 0);
        assert_eq!(p.perturbed_text, "Why does the price fall?");
    }

    #[test]
    fn inflects_antonym() {
        let tagger = Tagger::default();
        let q = tagger.tag_text("When did prices rise and who rose?");
        let p = negate_question(&q, "q", &fixture_index(), &pool(), 0);
        assert_eq!(p.perturbed_text, "When did prices fall and who rose?");
        let q = tagger.tag_text("Who rose?");
        let p = negate_question(&q, "q", &fixture_index(), &pool(), 0);
        assert_eq!(p.perturbed_text, "Who fell?");
    }

    #[test]
    fn aux_then_random_then_unchanged() {
        let tagger = Tagger::default();
        let idx = fixture_index();
        let q = tagger.tag_text("Which museum does Notre Dame administer?");
        let p = negate_question(&q, "q", &idx, &pool(), 0);
        assert_eq!(p.strategy, Strategy::AuxNegation);
        assert_eq!(p.perturbed_text, "Which museum doesn't Notre Dame administer?");

        let q = tagger.tag_text("Who administered the museum?");
        let p = negate_question(&q, "q", &idx, &pool(), 0);
        assert_eq!(p.strategy, Strategy::RandomFallback);
        let r = p.replacement.clone().unwrap();
        assert!(pool().contains(&r));
        assert!(p.perturbed_text.starts_with("Who ") && p.perturbed_text.ends_with(" the museum?"));

        let q = tagger.tag_text("What about the roof?");
        let p = negate_question(&q, "q", &idx, &pool(), 0);
        assert_eq!(p.strategy, Strategy::Unchanged);
        assert_eq!(p.perturbed_text, q.raw);
    }

    #[test]
    fn negated_aux_is_unchanged() {
        let tagger = Tagger::default();
        let q = tagger.tag_text("Why doesn't Notre Dame administer it?");
        let p = negate_question(&q, "q", &fixture_index(), &pool(), 0);
        assert_eq!(p.strategy, Strategy::Unchanged);
        assert_eq!(p.target_token_index, None);
    }

    #[test]
    fn random_fallback_avoids_original_lemma() {
        let tagger = Tagger::default();
        let q = tagger.tag_text("Who sang?");
        let pool = VerbPool::new(vec!["sing".into(), "walk".into()]).unwrap();
        for seed in 0..20 {
            let p = negate_question(&q, "q", &fixture_index(), &pool, seed);
            assert_eq!(p.replacement.as_deref(), Some("walk"));
            assert_eq!(p.perturbed_text, "Who walked?");
        }
    }

    #[test]
    fn pool_from_questions_ranks_by_frequency() {
        let tagger = Tagger::default();
        let qs: Vec<_> = ["Who sang?", "Who walked?", "Who sings?", "Did it walk?", "Who took it?"]
            .iter()
            .map(|s| tagger.tag_text(s))
            .collect();
        let pool = VerbPool::from_questions(&qs, 2).unwrap();
        assert_eq!(pool.lemmas(), ["sing", "walk"]);
        assert!(VerbPool::from_questions(&[], 10).is_err());
    }

    #[test]
    fn record_serializes_strategy_names() {
        let tagger = Tagger::default();
        let q = tagger.tag_text("Who rose?");
        let p = negate_question(&q, "id1", &fixture_index(), &pool(), 3);
        let json = serde_json::to_string(&PerturbationRecord::new("id1", &p)).unwrap();
        assert!(json.contains("\"strategy\":\"ANTONYM\""), "{json}");
        assert!(json.contains("\"target_index\":1"), "{json}");
    }

    proptest! {
        #[test]
        fn locality_and_determinism(words in proptest::collection::vec(
            prop_oneof![
                Just("rose"), Just("rise"), Just("sang"), Just("does"), Just("is"),
                Just("the"), Just("museum"), Just("Paris"), Just("walked"), Just("of"),
            ], 1..8), seed in any::<u64>(), id in "[a-z0-9]{1,6}")
        {
            let raw = format!("{}?", words.join(" "));
            let tagger = Tagger::default();
            let q = tagger.tag_text(&raw);
            let idx = fixture_index();
            let a = negate_question(&q, &id, &idx, &pool(), seed);
            let b = negate_question(&q, &id, &idx, &pool(), seed);
            prop_assert_eq!(&a, &b);
            prop_assert_eq!(a.strategy == Strategy::Unchanged, a.target_token_index.is_none());
            if let Some(t) = a.target_token_index {
                let (s, e) = q.tokens[t].char_span;
                prop_assert_eq!(&a.perturbed_text[..s], &raw[..s]);
                let tail = raw.len() - e;
                prop_assert_eq!(&a.perturbed_text[a.perturbed_text.len() - tail..], &raw[e..]);
                let r = a.replacement.clone().unwrap();
                match a.strategy {
                    Strategy::Antonym => prop_assert!(idx.antonym_of(&q.tokens[t].lemma).contains(&r)),
                    Strategy::AuxNegation => prop_assert!(is_negation_form(&r)),
                    Strategy::RandomFallback => prop_assert!(pool().contains(&r)),
                    Strategy::Unchanged => unreachable!(),
                }
            } else {
                prop_assert_eq!(&a.perturbed_text, &raw);
            }
        }
    }
}
