//! Pre-tagged input: `surface<TAB>lemma<TAB>pos<TAB>ne_flag`, one token per
//! line, blank line between questions.

use std::fs;
use std::path::Path;

use super::morph::detect_form;
use super::words::auxiliary;
use super::{Pos, TaggedQuestion, TextprocError, Token, VerbForm};

pub fn read_conll(path: impl AsRef<Path>) -> Result<Vec<TaggedQuestion>, TextprocError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| TextprocError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_conll(&text)
}

/// Parses pre-tagged questions. The raw text of each question is its
/// surfaces joined by single spaces.
pub fn parse_conll(text: &str) -> Result<Vec<TaggedQuestion>, TextprocError> {
    let mut questions = Vec::new();
    let mut current = TaggedQuestion {
        raw: String::new(),
        tokens: Vec::new(),
    };
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() {
            if !current.tokens.is_empty() {
                questions.push(std::mem::replace(
                    &mut current,
                    TaggedQuestion {
                        raw: String::new(),
                        tokens: Vec::new(),
                    },
                ));
            }
            continue;
        }
        let err = |message: String| TextprocError::Format {
            line: lineno + 1,
            message,
        };
        let cols: Vec<&str> = line.split('\t').collect();
        let [surface, lemma, pos, ne] = cols[..] else {
            return Err(err(format!("expected 4 tab-separated columns, found {}", cols.len())));
        };
        if surface.is_empty() || surface.chars().any(char::is_whitespace) {
            return Err(err(format!("invalid surface {surface:?}")));
        }
        let pos: Pos = pos.parse().map_err(err)?;
        let is_named_entity = match ne.to_ascii_lowercase().as_str() {
            "1" | "true" | "yes" | "ne" => true,
            "0" | "false" | "no" | "o" | "" => false,
            other => return Err(err(format!("invalid named-entity flag {other:?}"))),
        };
        if is_named_entity && pos != Pos::Noun {
            return Err(err("named-entity flag on a non-noun token".into()));
        }
        let verb_form = match pos {
            Pos::Aux => auxiliary(&surface.to_lowercase())
                .map(|(_, form)| form)
                .unwrap_or_else(|| detect_form(surface, lemma)),
            Pos::Verb => detect_form(surface, lemma),
            _ => VerbForm::NotVerb,
        };
        if !current.raw.is_empty() {
            current.raw.push(' ');
        }
        let start = current.raw.len();
        current.raw.push_str(surface);
        current.tokens.push(Token {
            surface: surface.to_string(),
            char_span: (start, current.raw.len()),
            lemma: lemma.to_lowercase(),
            pos,
            is_named_entity,
            verb_form,
        });
    }
    if !current.tokens.is_empty() {
        questions.push(current);
    }
    Ok(questions)
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "Which\twhich\tOTHER\t0\nmuseum\tmuseum\tNOUN\t0\ndoes\tdo\tAUX\t0\n\
Notre\tnotre\tNOUN\t1\nadminister\tadminister\tVERB\t0\n?\t?\tOTHER\t0\n\n\
Who\twho\tOTHER\t0\nwent\tgo\tVERB\t0\n?\t?\tOTHER\t0\n";

    #[test]
    fn parses_two_questions() {
        let qs = parse_conll(SAMPLE).unwrap();
        assert_eq!(qs.len(), 2);
        assert_eq!(qs[0].raw, "Which museum does Notre administer ?");
        assert_eq!(qs[0].tokens[2].verb_form, VerbForm::ThirdSg);
        assert!(qs[0].tokens[3].is_named_entity);
        assert_eq!(qs[1].tokens[1].verb_form, VerbForm::Past);
        for q in &qs {
            for t in &q.tokens {
                assert_eq!(&q.raw[t.char_span.0..t.char_span.1], t.surface);
            }
        }
    }

    #[test]
    fn rejects_bad_rows() {
        let err = parse_conll("a\tb\tADJ\t0\n").unwrap_err();
        assert!(err.to_string().contains("line 1"), "{err}");
        assert!(parse_conll("a\tb\tOTHER\n").is_err());
        assert!(parse_conll("run\trun\tVERB\t1\n").is_err());
    }
}
