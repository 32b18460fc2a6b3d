use std::fs;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;

use super::{char_to_byte, Answer, CorpusError, Provenance, QaDataset, QaItem};

pub fn load_squad(path: impl AsRef<Path>) -> Result<(QaDataset, Vec<String>), CorpusError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| CorpusError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_squad(&text)
}

fn schema(path: &str, message: impl Into<String>) -> CorpusError {
    CorpusError::Schema { path: path.to_string(), message: message.into() }
}

fn field<'a>(obj: &'a Value, key: &str, path: &str) -> Result<&'a Value, CorpusError> {
    obj.as_object()
        .ok_or_else(|| schema(path, "expected an object"))?
        .get(key)
        .ok_or_else(|| schema(path, format!("missing field {key:?}")))
}

fn array<'a>(obj: &'a Value, key: &str, path: &str) -> Result<&'a Vec<Value>, CorpusError> {
    field(obj, key, path)?
        .as_array()
        .ok_or_else(|| schema(&format!("{path}.{key}"), "expected an array"))
}

fn string<'a>(obj: &'a Value, key: &str, path: &str) -> Result<&'a str, CorpusError> {
    field(obj, key, path)?
        .as_str()
        .ok_or_else(|| schema(&format!("{path}.{key}"), "expected a string"))
}

/// Parses SQuAD v1.1 JSON into a flat dataset. Answers whose offset does not
/// point at their text are re-anchored at the first occurrence (or dropped
/// when the text is absent); each fix produces a warning.
pub fn parse_squad(text: &str) -> Result<(QaDataset, Vec<String>), CorpusError> {
    let root: Value = serde_json::from_str(text).map_err(|e| CorpusError::Json(e.to_string()))?;
    let provenance = match root.get("provenance") {
        None => Provenance::SquadFile,
        Some(v) => serde_json::from_value(v.clone())
            .map_err(|e| schema("provenance", e.to_string()))?,
    };
    let mut items = Vec::new();
    let mut warnings = Vec::new();
    for (a, article) in array(&root, "data", "$")?.iter().enumerate() {
        let apath = format!("data[{a}]");
        let title = match article.get("title") {
            None => String::new(),
            Some(v) => v
                .as_str()
                .ok_or_else(|| schema(&format!("{apath}.title"), "expected a string"))?
                .to_string(),
        };
        for (p, para) in array(article, "paragraphs", &apath)?.iter().enumerate() {
            let ppath = format!("{apath}.paragraphs[{p}]");
            let context = string(para, "context", &ppath)?;
            for (q, qa) in array(para, "qas", &ppath)?.iter().enumerate() {
                let qpath = format!("{ppath}.qas[{q}]");
                if qa.get("is_impossible").and_then(Value::as_bool) == Some(true) {
                    return Err(CorpusError::Unanswerable(qpath));
                }
                let id = string(qa, "id", &qpath)?.to_string();
                let question = string(qa, "question", &qpath)?.to_string();
                let mut answers = Vec::new();
                for (k, ans) in array(qa, "answers", &qpath)?.iter().enumerate() {
                    let kpath = format!("{qpath}.answers[{k}]");
                    let text = string(ans, "text", &kpath)?.to_string();
                    let start = field(ans, "answer_start", &kpath)?
                        .as_u64()
                        .ok_or_else(|| schema(&format!("{kpath}.answer_start"), "expected a non-negative integer"))?
                        as usize;
                    match anchor(context, &text, start) {
                        Some(fixed) if fixed == start => answers.push(Answer { text, answer_start: start }),
                        Some(fixed) => {
                            warnings.push(format!(
                                "{id}: answer {k} offset {start} corrected to {fixed} ({kpath})"
                            ));
                            answers.push(Answer { text, answer_start: fixed });
                        }
                        None => warnings.push(format!(
                            "{id}: answer {k} text {text:?} not found in context, dropped ({kpath})"
                        )),
                    }
                }
                if answers.is_empty() {
                    warnings.push(format!("{id}: no valid answers, question dropped ({qpath})"));
                    continue;
                }
                items.push(QaItem { id, title: title.clone(), context: context.to_string(), question, answers });
            }
        }
    }
    Ok((QaDataset { items, provenance }, warnings))
}

/// Character offset of `text` in `context`: `start` if it already points
/// there, otherwise the first occurrence.
fn anchor(context: &str, text: &str, start: usize) -> Option<usize> {
    if text.is_empty() {
        return None;
    }
    if let Some(b) = char_to_byte(context, start) {
        if context[b..].starts_with(text) {
            return Some(start);
        }
    }
    context.find(text).map(|b| context[..b].chars().count())
}

#[derive(Serialize)]
struct OutAnswer<'a> {
    text: &'a str,
    answer_start: usize,
}

#[derive(Serialize)]
struct OutQa<'a> {
    id: &'a str,
    question: &'a str,
    answers: Vec<OutAnswer<'a>>,
}

#[derive(Serialize)]
struct OutParagraph<'a> {
    context: &'a str,
    qas: Vec<OutQa<'a>>,
}

#[derive(Serialize)]
struct OutArticle<'a> {
    title: &'a str,
    paragraphs: Vec<OutParagraph<'a>>,
}

#[derive(Serialize)]
struct OutFile<'a> {
    version: &'static str,
    provenance: Provenance,
    data: Vec<OutArticle<'a>>,
}

/// SQuAD v1.1 JSON; consecutive items sharing a title form one article and
/// consecutive items sharing a context form one paragraph.
pub fn to_squad_json(dataset: &QaDataset) -> String {
    let mut data: Vec<OutArticle> = Vec::new();
    for item in &dataset.items {
        if data.last().map(|a| a.title) != Some(item.title.as_str()) {
            data.push(OutArticle { title: &item.title, paragraphs: Vec::new() });
        }
        let article = data.last_mut().expect("pushed above");
        if article.paragraphs.last().map(|p| p.context) != Some(item.context.as_str()) {
            article.paragraphs.push(OutParagraph { context: &item.context, qas: Vec::new() });
        }
        article.paragraphs.last_mut().expect("pushed above").qas.push(OutQa {
            id: &item.id,
            question: &item.question,
            answers: item
                .answers
                .iter()
                .map(|a| OutAnswer { text: &a.text, answer_start: a.answer_start })
                .collect(),
        });
    }
    let file = OutFile { version: "1.1", provenance: dataset.provenance, data };
    serde_json::to_string_pretty(&file).expect("plain data serializes")
}

pub fn write_squad(dataset: &QaDataset, path: impl AsRef<Path>) -> Result<(), CorpusError> {
    let path = path.as_ref();
    fs::write(path, to_squad_json(dataset)).map_err(|source| CorpusError::Io {
        path: path.to_path_buf(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIXTURE: &str = r#"{"version": "1.1", "data": [{"title": "Notre Dame", "paragraphs": [
        {"context": "The art museum is the Snite Museum. It opened in 1980.",
         "qas": [{"id": "a1", "question": "Which museum?", "answers": [{"text": "Snite Museum", "answer_start": 22}]},
                 {"id": "a2", "question": "When did it open?", "answers": [{"text": "1980", "answer_start": 49}]}]},
        {"context": "Teams participate in the Bookstore tournament.",
         "qas": [{"id": "a3", "question": "What tournament?", "answers": [{"text": "Bookstore tournament", "answer_start": 25}]}]}
    ]}]}"#;

    #[test]
    fn flattens_fixture() {
        let (ds, warnings) = parse_squad(FIXTURE).unwrap();
        assert_eq!(ds.items.len(), 3);
        assert!(warnings.is_empty(), "{warnings:?}");
        assert_eq!(ds.provenance, Provenance::SquadFile);
        assert_eq!(ds.items[2].title, "Notre Dame");
        assert_eq!(ds.contexts().len(), 2);
    }

    #[test]
    fn corrects_off_by_one_offset() {
        let text = FIXTURE.replace("\"answer_start\": 49", "\"answer_start\": 50");
        let (ds, warnings) = parse_squad(&text).unwrap();
        assert_eq!(ds.items.len(), 3);
        assert_eq!(ds.items[1].answers[0].answer_start, 49);
        assert_eq!(warnings.len(), 1);
        assert!(warnings[0].contains("a2"));
    }

    #[test]
    fn drops_missing_answer() {
        let text = FIXTURE.replace("\"text\": \"1980\"", "\"text\": \"1981\"");
        let (ds, warnings) = parse_squad(&text).unwrap();
        assert_eq!(ds.items.len(), 2);
        assert_eq!(warnings.len(), 2);
    }

    #[test]
    fn empty_data_is_empty_dataset() {
        let (ds, w) = parse_squad(r#"{"data": []}"#).unwrap();
        assert!(ds.items.is_empty() && w.is_empty());
    }

    #[test]
    fn schema_errors_carry_path() {
        let text = FIXTURE.replace("\"question\": \"What tournament?\", ", "");
        let err = parse_squad(&text).unwrap_err().to_string();
        assert!(err.contains("data[0].paragraphs[1].qas[0]"), "{err}");
        let err = parse_squad(r#"{"data": [{"paragraphs": [{"context": 3, "qas": []}]}]}"#).unwrap_err();
        assert!(err.to_string().contains("data[0].paragraphs[0].context"), "{err}");
        assert!(matches!(parse_squad("{"), Err(CorpusError::Json(_))));
    }

    #[test]
    fn rejects_unanswerable() {
        let text = r#"{"data": [{"title": "t", "paragraphs": [{"context": "c", "qas": [
            {"id": "x", "question": "q", "answers": [], "is_impossible": true}]}]}]}"#;
        assert!(matches!(parse_squad(text), Err(CorpusError::Unanswerable(_))));
    }

    #[test]
    fn writer_round_trips() {
        let (ds, _) = parse_squad(FIXTURE).unwrap();
        let (back, w) = parse_squad(&to_squad_json(&ds)).unwrap();
        assert!(w.is_empty());
        assert_eq!(back, ds);
    }
}
