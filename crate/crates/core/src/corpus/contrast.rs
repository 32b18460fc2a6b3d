use std::collections::HashSet;

use rand::seq::{index::sample, SliceRandom};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{Answer, CorpusError, Provenance, QaDataset, QaItem};
use crate::seeding::rng_for;
use crate::textproc::{inflect, VerbForm};

const PERSONS: &[&str] = &[
    "Alice", "Bob", "Carol", "David", "Emma", "Frank", "Grace", "Henry", "Irene", "Jack",
    "Karen", "Liam", "Maria", "Nathan", "Olivia", "Peter", "Quentin", "Rachel", "Samuel",
    "Tina", "Victor", "Wendy", "Xavier", "Yvonne", "Zachary", "Amelia", "Brian", "Chloe",
    "Daniel", "Ella", "Felix", "Hannah", "Isaac", "Julia", "Kevin", "Laura", "Martin", "Nora",
    "Oscar", "Paula",
];

const OBJECTS: &[&str] = &[
    "book", "car", "house", "lamp", "cup", "pen", "chair", "table", "bike", "boat", "clock",
    "coat", "desk", "drum", "guitar", "hat", "kite", "ladder", "map", "mirror", "piano",
    "radio", "rope", "sofa", "stove", "tent", "truck", "violin", "wagon", "basket", "blanket",
    "bottle", "camera", "candle", "carpet", "helmet", "jacket", "kettle", "lantern", "statue",
];

/// Verb pairs whose first WordNet antonym is the partner, in both directions.
const VERB_PAIRS: &[(&str, &str)] = &[
    ("buy", "sell"),
    ("lend", "borrow"),
    ("push", "pull"),
    ("raise", "lower"),
    ("accept", "reject"),
    ("remember", "forget"),
    ("hire", "fire"),
    ("include", "exclude"),
    ("love", "hate"),
    ("open", "close"),
    ("import", "export"),
    ("attack", "defend"),
];

/// Sizes, vocabularies and templates of the synthetic corpora.
///
/// Sentence templates use `{subject}`, `{verb_past}`, `{object}` and
/// `{year}`; question templates use `{subject}`, `{verb}` and `{object}`.
/// The gold answer is always the year.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ContrastSpec {
    pub contexts: usize,
    pub sentences_per_context: usize,
    pub persons: Vec<String>,
    pub objects: Vec<String>,
    pub verb_pairs: Vec<(String, String)>,
    pub year_range: (u32, u32),
    /// All sentences of a unique-variant context use one verb, so that
    /// nothing but the nouns tells them apart.
    pub unique_shared_verb: bool,
    pub sentence_template: String,
    pub question_template: String,
}

impl Default for ContrastSpec {
    fn default() -> Self {
        ContrastSpec {
            contexts: 1280,
            sentences_per_context: 4,
            persons: PERSONS.iter().map(|s| s.to_string()).collect(),
            objects: OBJECTS.iter().map(|s| s.to_string()).collect(),
            verb_pairs: VERB_PAIRS.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect(),
            year_range: (1800, 1999),
            unique_shared_verb: true,
            sentence_template: "{subject} {verb_past} the {object} in {year}.".into(),
            question_template: "When did {subject} {verb} the {object}?".into(),
        }
    }
}

impl ContrastSpec {
    fn validate(&self) -> Result<(), CorpusError> {
        let err = |m: String| Err(CorpusError::Spec(m));
        let s = self.sentences_per_context;
        if s == 0 {
            return err("sentences_per_context must be at least 1".into());
        }
        if s % 2 != 0 {
            return err("sentences_per_context must be even to pair verbs".into());
        }
        if self.persons.len() < s || self.objects.len() < s {
            return err(format!(
                "{s} sentences per context need at least {s} persons and {s} objects (have {} and {})",
                self.persons.len(),
                self.objects.len()
            ));
        }
        let distinct = |v: &[String]| v.iter().collect::<HashSet<_>>().len() == v.len();
        if !distinct(&self.persons) || !distinct(&self.objects) {
            return err("persons and objects must not repeat".into());
        }
        if self.verb_pairs.is_empty() {
            return err("at least one verb pair is required".into());
        }
        let (lo, hi) = self.year_range;
        if hi < lo || ((hi - lo + 1) as usize) < s {
            return err(format!("year range {lo}..={hi} is too small for {s} sentences"));
        }
        for key in ["{subject}", "{verb_past}", "{object}", "{year}"] {
            if !self.sentence_template.contains(key) {
                return err(format!("sentence_template lacks {key}"));
            }
        }
        for key in ["{subject}", "{verb}", "{object}"] {
            if !self.question_template.contains(key) {
                return err(format!("question_template lacks {key}"));
            }
        }
        Ok(())
    }
}

struct Fact<'a> {
    subject: &'a str,
    verb: &'a str,
    object: &'a str,
    year: u32,
}

fn fill(template: &str, fact: &Fact) -> (String, Option<usize>) {
    let filled = template
        .replace("{subject}", fact.subject)
        .replace("{verb_past}", &inflect(fact.verb, VerbForm::Past))
        .replace("{verb}", fact.verb)
        .replace("{object}", fact.object);
    let year_at = filled.find("{year}");
    (filled.replace("{year}", &fact.year.to_string()), year_at)
}

fn pick<'a>(pool: &'a [String], n: usize, rng: &mut ChaCha8Rng) -> Vec<&'a str> {
    sample(rng, pool.len(), n).into_iter().map(|i| pool[i].as_str()).collect()
}

fn years(spec: &ContrastSpec, rng: &mut ChaCha8Rng) -> Vec<u32> {
    let (lo, hi) = spec.year_range;
    sample(rng, (hi - lo + 1) as usize, spec.sentences_per_context)
        .into_iter()
        .map(|i| lo + i as u32)
        .collect()
}

fn build_context(
    spec: &ContrastSpec,
    facts: &[Fact],
    c: usize,
    prefix: &str,
    title: &str,
) -> Vec<QaItem> {
    let mut context = String::new();
    let mut year_offsets = Vec::new();
    for fact in facts {
        if !context.is_empty() {
            context.push(' ');
        }
        let (sentence, year_at) = fill(&spec.sentence_template, fact);
        let at = year_at.expect("validated template");
        year_offsets.push(context[..].chars().count() + sentence[..at].chars().count());
        context.push_str(&sentence);
    }
    facts
        .iter()
        .zip(year_offsets)
        .enumerate()
        .map(|(k, (fact, answer_start))| QaItem {
            id: format!("{prefix}{c:04}q{k}"),
            title: title.to_string(),
            context: context.clone(),
            question: fill(&spec.question_template, fact).0,
            answers: vec![Answer { text: fact.year.to_string(), answer_start }],
        })
        .collect()
}

/// Generates the unique-noun and the contrast variant of the synthetic
/// corpus. In the unique variant every sentence has its own subject and
/// object (and by default the context shares one verb), so nouns alone
/// locate the answer. In the contrast variant
/// sentences come in pairs that share subject and object and differ only in
/// opposed verbs, so only the verb locates the answer.
pub fn generate_contrast_corpus(
    spec: &ContrastSpec,
    seed: u64,
) -> Result<(QaDataset, QaDataset), CorpusError> {
    spec.validate()?;
    let s = spec.sentences_per_context;
    let mut unique_items = Vec::new();
    let mut contrast_items = Vec::new();
    let mut urng = rng_for(seed, "unique");
    let mut crng = rng_for(seed, "contrast");
    for c in 0..spec.contexts {
        let persons = pick(&spec.persons, s, &mut urng);
        let objects = pick(&spec.objects, s, &mut urng);
        let ys = years(spec, &mut urng);
        let mut draw_verb = || {
            let (a, b) = &spec.verb_pairs[urng.gen_range(0..spec.verb_pairs.len())];
            if urng.gen::<bool>() {
                a.as_str()
            } else {
                b.as_str()
            }
        };
        let shared = draw_verb();
        let facts: Vec<Fact> = (0..s)
            .map(|k| {
                let verb = if spec.unique_shared_verb { shared } else { draw_verb() };
                Fact { subject: persons[k], verb, object: objects[k], year: ys[k] }
            })
            .collect();
        unique_items.extend(build_context(spec, &facts, c, "u", &format!("unique-{c:04}")));

        let groups = s / 2;
        let persons = pick(&spec.persons, groups, &mut crng);
        let objects = pick(&spec.objects, groups, &mut crng);
        let ys = years(spec, &mut crng);
        let pairs: Vec<&(String, String)> = if spec.verb_pairs.len() >= groups {
            pick_pairs(&spec.verb_pairs, groups, &mut crng)
        } else {
            (0..groups)
                .map(|_| &spec.verb_pairs[crng.gen_range(0..spec.verb_pairs.len())])
                .collect()
        };
        let mut facts: Vec<Fact> = Vec::with_capacity(s);
        for g in 0..groups {
            for (k, verb) in [&pairs[g].0, &pairs[g].1].into_iter().enumerate() {
                facts.push(Fact { subject: persons[g], verb, object: objects[g], year: ys[2 * g + k] });
            }
        }
        facts.shuffle(&mut crng);
        contrast_items.extend(build_context(spec, &facts, c, "c", &format!("contrast-{c:04}")));
    }
    Ok((
        QaDataset { items: unique_items, provenance: Provenance::SyntheticUnique },
        QaDataset { items: contrast_items, provenance: Provenance::SyntheticContrast },
    ))
}

fn pick_pairs<'a>(pairs: &'a [(String, String)], n: usize, rng: &mut ChaCha8Rng) -> Vec<&'a (String, String)> {
    sample(rng, pairs.len(), n).into_iter().map(|i| &pairs[i]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{noun_uniqueness_scan, parse_squad, to_squad_json};
    use crate::textproc::Tagger;

    fn small(contexts: usize) -> ContrastSpec {
        ContrastSpec { contexts, sentences_per_context: 2, ..Default::default() }
    }

    #[test]
    fn unique_variant_has_disjoint_nouns() {
        let (unique, _) = generate_contrast_corpus(&small(1), 1).unwrap();
        assert_eq!(unique.items.len(), 2);
        let r = noun_uniqueness_scan(&unique, &Tagger::default());
        assert_eq!(r.per_context[0].uniqueness_fraction, 1.0);
        assert_eq!(r.per_context[0].noun_sentence_counts.len(), 4);
    }

    #[test]
    fn contrast_variant_repeats_nouns() {
        let (_, contrast) = generate_contrast_corpus(&small(1), 1).unwrap();
        let r = noun_uniqueness_scan(&contrast, &Tagger::default());
        assert_eq!(r.per_context[0].uniqueness_fraction, 0.0);
        let [a, b] = &contrast.items[..] else { panic!() };
        assert_ne!(a.question, b.question);
        assert_ne!(a.answers[0], b.answers[0]);
    }

    #[test]
    fn answers_anchor_and_round_trip() {
        let spec = ContrastSpec { contexts: 30, ..Default::default() };
        let (unique, contrast) = generate_contrast_corpus(&spec, 42).unwrap();
        for ds in [&unique, &contrast] {
            assert_eq!(ds.items.len(), 120);
            for item in &ds.items {
                assert!(item.answer_byte_span(0).is_some(), "{item:?}");
            }
            let (back, warnings) = parse_squad(&to_squad_json(ds)).unwrap();
            assert!(warnings.is_empty());
            assert_eq!(&back, ds);
        }
        let r = noun_uniqueness_scan(&unique, &Tagger::default());
        assert!(r.per_context.iter().all(|c| c.uniqueness_fraction == 1.0));
        let again = generate_contrast_corpus(&spec, 42).unwrap();
        assert_eq!(to_squad_json(&again.0), to_squad_json(&unique));
        assert_eq!(to_squad_json(&again.1), to_squad_json(&contrast));
    }

    #[test]
    fn contrast_pairs_have_distinct_answers() {
        let spec = ContrastSpec { contexts: 20, ..Default::default() };
        let (_, contrast) = generate_contrast_corpus(&spec, 5).unwrap();
        for (_, _, idx) in contrast.contexts() {
            for &i in &idx {
                for &j in &idx {
                    let (a, b) = (&contrast.items[i], &contrast.items[j]);
                    if i != j && a.question.split(' ').nth(2) == b.question.split(' ').nth(2) {
                        assert_ne!(a.answers[0].text, b.answers[0].text);
                    }
                }
            }
        }
    }

    #[test]
    fn rejects_small_vocabularies() {
        let spec = ContrastSpec { persons: vec!["Ann".into()], ..small(1) };
        assert!(matches!(generate_contrast_corpus(&spec, 0), Err(CorpusError::Spec(_))));
        let spec = ContrastSpec { sentences_per_context: 3, ..Default::default() };
        assert!(generate_contrast_corpus(&spec, 0).is_err());
        let spec = ContrastSpec { year_range: (1900, 1900), ..small(1) };
        assert!(generate_contrast_corpus(&spec, 0).is_err());
    }
}
