use serde::{Deserialize, Serialize};

use super::{Model, ModelError, ProbeTrace, TrainingExample, Vocabulary};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnswerPrediction {
    /// Context slice covered by `span`.
    pub text: String,
    /// Inclusive token indices into the context.
    pub span: (usize, usize),
    pub certainty: f64,
}

/// Contract for any reader under probe: answer a question over a context
/// and expose the internals the analyses need.
pub trait QaProbe: Sync {
    fn probe(&self, question: &str, context: &str) -> Result<(AnswerPrediction, ProbeTrace), ModelError>;
}

/// The reference model together with its vocabulary.
#[derive(Debug, Clone, PartialEq)]
pub struct Reader {
    pub model: Model,
    pub vocab: Vocabulary,
}

impl Reader {
    pub fn new(model: Model, vocab: Vocabulary) -> Result<Self, ModelError> {
        if model.config().vocab_size != vocab.len() {
            return Err(ModelError::Config(format!(
                "model expects {} vocabulary entries, vocabulary has {}",
                model.config().vocab_size,
                vocab.len()
            )));
        }
        Ok(Reader { model, vocab })
    }

    /// Converts a question and a byte range of the answer in `context` into
    /// token ids and an inclusive token span. `None` if the answer does not
    /// cover any context token.
    pub fn example(
        &self,
        id: &str,
        question: &str,
        context: &str,
        answer_bytes: (usize, usize),
    ) -> Option<TrainingExample> {
        let (q, _) = self.vocab.encode(question);
        let (c, raw) = self.vocab.encode(context);
        let (lo, hi) = answer_bytes;
        let start = raw.iter().position(|t| t.span.1 > lo)?;
        let end = raw.iter().rposition(|t| t.span.0 < hi)?;
        if q.is_empty() || start > end {
            return None;
        }
        Some(TrainingExample {
            id: id.to_string(),
            question: q,
            context: c,
            start,
            end,
        })
    }
}

impl QaProbe for Reader {
    fn probe(&self, question: &str, context: &str) -> Result<(AnswerPrediction, ProbeTrace), ModelError> {
        let (q_ids, q_raw) = self.vocab.encode(question);
        let (c_ids, c_raw) = self.vocab.encode(context);
        let p = self.model.predict_span(&q_ids, &c_ids)?;
        let (i, j) = p.span;
        let answer = AnswerPrediction {
            text: context[c_raw[i].span.0..c_raw[j].span.1].to_string(),
            span: p.span,
            certainty: p.certainty,
        };
        let trace = ProbeTrace {
            question_ids: q_ids,
            question_tokens: q_raw.into_iter().map(|t| t.surface).collect(),
            attention_logits: p.encoding.attention_logits,
            attention_weights: p.encoding.attention_weights,
            hidden: p.encoding.hidden,
            answer_span: p.span,
            certainty: p.certainty,
        };
        Ok((answer, trace))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qamodel::ModelConfig;

    fn reader() -> Reader {
        let vocab = Vocabulary::build(["Alice bought the book in 1854. Bob sold a car in 1901.", "When did Alice buy the book?"]);
        let model = Model::new(ModelConfig { vocab_size: vocab.len(), ..Default::default() }).unwrap();
        Reader::new(model, vocab).unwrap()
    }

    #[test]
    fn answer_text_is_context_slice() {
        let r = reader();
        let ctx = "Alice bought the book in 1854. Bob sold a car in 1901.";
        let (ans, trace) = r.probe("When did Alice buy the book?", ctx).unwrap();
        let (_, raw) = r.vocab.encode(ctx);
        assert_eq!(ans.text, &ctx[raw[ans.span.0].span.0..raw[ans.span.1].span.1]);
        assert_eq!(trace.question_tokens.len(), 7);
        assert_eq!(trace.hidden.len(), 3);
    }

    #[test]
    fn example_alignment() {
        let r = reader();
        let ctx = "Alice bought the book in 1854. Bob sold a car in 1901.";
        let start = ctx.find("1901").unwrap();
        let ex = r.example("q", "When did Bob sell the car?", ctx, (start, start + 4)).unwrap();
        assert_eq!((ex.start, ex.end), (12, 12));
        assert!(r.example("q", "x", ctx, (ctx.len(), ctx.len())).is_none());
    }
}
