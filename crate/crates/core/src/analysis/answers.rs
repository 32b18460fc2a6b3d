use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::AnalysisError;

/// Lowercases, strips punctuation, drops the articles a/an/the and collapses
/// whitespace.
pub fn normalize_answer(text: &str) -> String {
    let lower = text.to_lowercase();
    let stripped: String = lower
        .chars()
        .filter(|c| !(c.is_ascii_punctuation() || is_unicode_punct(*c)))
        .collect();
    stripped
        .split_whitespace()
        .filter(|w| !matches!(*w, "a" | "an" | "the"))
        .collect::<Vec<_>>()
        .join(" ")
}

fn is_unicode_punct(c: char) -> bool {
    matches!(
        c,
        '\u{2018}' | '\u{2019}' | '\u{201c}' | '\u{201d}' | '\u{2013}' | '\u{2014}' | '\u{2026}'
    )
}

fn token_counts(s: &str) -> HashMap<&str, usize> {
    let mut m = HashMap::new();
    for w in s.split_whitespace() {
        *m.entry(w).or_default() += 1;
    }
    m
}

fn contained(small: &HashMap<&str, usize>, big: &HashMap<&str, usize>) -> bool {
    small.iter().all(|(w, n)| big.get(w).is_some_and(|m| m >= n))
}

/// Equal after normalization, or one answer's token multiset is contained in
/// the other's. An empty answer only matches another empty answer.
pub fn answers_match(a: &str, b: &str) -> bool {
    let (na, nb) = (normalize_answer(a), normalize_answer(b));
    if na == nb {
        return true;
    }
    if na.is_empty() || nb.is_empty() {
        return false;
    }
    let (ca, cb) = (token_counts(&na), token_counts(&nb));
    contained(&ca, &cb) || contained(&cb, &ca)
}

/// A model answer with its softmax certainty.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoredAnswer {
    pub text: String,
    pub certainty: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnswerPair {
    pub id: String,
    pub original: ScoredAnswer,
    pub perturbed: ScoredAnswer,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuestionMatch {
    pub id: String,
    pub matched: bool,
    pub answer_original: String,
    pub answer_perturbed: String,
    pub certainty_original: f64,
    pub certainty_perturbed: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchReport {
    pub total: usize,
    pub matched: usize,
    pub match_rate: f64,
    pub mean_certainty_original: f64,
    pub mean_certainty_perturbed: f64,
    pub per_question: Vec<QuestionMatch>,
}

pub fn match_rate(pairs: &[AnswerPair]) -> Result<MatchReport, AnalysisError> {
    if pairs.is_empty() {
        return Err(AnalysisError::Empty("answer pairs"));
    }
    let per_question: Vec<QuestionMatch> = pairs
        .iter()
        .map(|p| QuestionMatch {
            id: p.id.clone(),
            matched: answers_match(&p.original.text, &p.perturbed.text),
            answer_original: p.original.text.clone(),
            answer_perturbed: p.perturbed.text.clone(),
            certainty_original: p.original.certainty,
            certainty_perturbed: p.perturbed.certainty,
        })
        .collect();
    let total = pairs.len();
    let matched = per_question.iter().filter(|q| q.matched).count();
    let n = total as f64;
    Ok(MatchReport {
        total,
        matched,
        match_rate: matched as f64 / n,
        mean_certainty_original: per_question.iter().map(|q| q.certainty_original).sum::<f64>() / n,
        mean_certainty_perturbed: per_question.iter().map(|q| q.certainty_perturbed).sum::<f64>() / n,
        per_question,
    })
}
