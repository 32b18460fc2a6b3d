//! Probe interface for extractive QA readers and a small reference reader:
//! a stacked unidirectional LSTM shared by question and context, question
//! self-attention pooling, and bilinear start/end span scoring.

mod checkpoint;
mod gradcheck;
mod network;
mod params;
mod reader;
mod train;
mod vocab;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use checkpoint::{load_checkpoint, save_checkpoint, CHECKPOINT_FORMAT, CHECKPOINT_VERSION};
pub use gradcheck::{grad_check, relative_error, GradCheckReport, GroupCoverage};
pub use network::softmax;
pub use params::{ParamGroup, ParamLayout};
pub use reader::{AnswerPrediction, QaProbe, Reader};
pub use train::{train, TrainReport, TrainingExample};
pub use vocab::{Vocabulary, NUM_TOKEN, UNK_TOKEN};

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("invalid model config: {0}")]
    Config(String),
    #[error("token id {id} outside vocabulary of size {vocab_size}")]
    UnknownToken { id: u32, vocab_size: usize },
    #[error("empty {0}")]
    EmptyInput(&'static str),
    #[error("gold span ({start}, {end}) invalid for context of {len} tokens in example {id}")]
    BadSpan { id: String, start: usize, end: usize, len: usize },
    #[error("non-finite loss {loss} at epoch {epoch}, step {step} (example {example})")]
    NonFiniteLoss { epoch: usize, step: usize, example: String, loss: f64 },
    #[error("checkpoint {path}: {message}")]
    Checkpoint { path: String, message: String },
    #[error("I/O on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ModelConfig {
    pub vocab_size: usize,
    pub embed_dim: usize,
    pub hidden_dim: usize,
    pub num_layers: usize,
    pub max_span: usize,
    pub seed: u64,
    pub learning_rate: f64,
    /// Multiplied into the learning rate after every epoch.
    pub lr_decay: f64,
    pub epochs: usize,
    pub batch_size: usize,
    /// Global gradient-norm clipping threshold; 0 disables clipping.
    pub clip_norm: f64,
}

impl Default for ModelConfig {
    fn default() -> Self {
        ModelConfig {
            vocab_size: 0,
            embed_dim: 32,
            hidden_dim: 32,
            num_layers: 3,
            max_span: 15,
            seed: 0,
            learning_rate: 0.005,
            lr_decay: 0.9,
            epochs: 20,
            batch_size: 16,
            clip_norm: 5.0,
        }
    }
}

impl ModelConfig {
    pub fn validate(&self) -> Result<(), ModelError> {
        let dims = [
            ("vocab_size", self.vocab_size),
            ("embed_dim", self.embed_dim),
            ("hidden_dim", self.hidden_dim),
            ("num_layers", self.num_layers),
            ("max_span", self.max_span),
            ("batch_size", self.batch_size),
        ];
        if let Some((name, _)) = dims.iter().find(|(_, v)| *v == 0) {
            return Err(ModelError::Config(format!("{name} must be at least 1")));
        }
        if !(self.learning_rate.is_finite() && self.learning_rate > 0.0) {
            return Err(ModelError::Config("learning_rate must be positive".into()));
        }
        if !(self.lr_decay.is_finite() && self.lr_decay > 0.0 && self.lr_decay <= 1.0) {
            return Err(ModelError::Config("lr_decay must lie in (0, 1]".into()));
        }
        if !(self.clip_norm.is_finite() && self.clip_norm >= 0.0) {
            return Err(ModelError::Config("clip_norm must be non-negative".into()));
        }
        Ok(())
    }
}

/// Everything the question encoder exposes for one question.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuestionEncoding {
    /// `[layer][token][hidden_dim]`
    pub hidden: Vec<Vec<Vec<f64>>>,
    pub attention_logits: Vec<f64>,
    pub attention_weights: Vec<f64>,
    pub pooled: Vec<f64>,
}

/// What a probe run records for one question.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeTrace {
    pub question_ids: Vec<u32>,
    pub question_tokens: Vec<String>,
    pub attention_logits: Vec<f64>,
    pub attention_weights: Vec<f64>,
    /// `[layer][token][hidden_dim]`
    pub hidden: Vec<Vec<Vec<f64>>>,
    pub answer_span: (usize, usize),
    pub certainty: f64,
}

/// The reference reader's parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct Model {
    config: ModelConfig,
    layout: ParamLayout,
    params: Vec<f64>,
}

/// Raw span prediction over token ids.
#[derive(Debug, Clone, PartialEq)]
pub struct SpanPrediction {
    pub span: (usize, usize),
    pub certainty: f64,
    pub encoding: QuestionEncoding,
}

impl Model {
    pub fn new(config: ModelConfig) -> Result<Self, ModelError> {
        config.validate()?;
        let layout = ParamLayout::new(&config);
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        let params = layout.initialize(&mut rng);
        Ok(Model { config, layout, params })
    }

    pub(crate) fn from_parts(config: ModelConfig, params: Vec<f64>) -> Result<Self, ModelError> {
        config.validate()?;
        let layout = ParamLayout::new(&config);
        if params.len() != layout.total() {
            return Err(ModelError::Config(format!(
                "expected {} parameters, found {}",
                layout.total(),
                params.len()
            )));
        }
        Ok(Model { config, layout, params })
    }

    pub fn config(&self) -> &ModelConfig {
        &self.config
    }

    pub fn layout(&self) -> &ParamLayout {
        &self.layout
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn params_mut(&mut self) -> &mut [f64] {
        &mut self.params
    }

    /// FNV-1a over the parameter bit patterns.
    pub fn checksum(&self) -> u64 {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for p in &self.params {
            for b in p.to_bits().to_le_bytes() {
                h ^= u64::from(b);
                h = h.wrapping_mul(0x0000_0100_0000_01b3);
            }
        }
        h
    }

    fn check_ids(&self, ids: &[u32], what: &'static str) -> Result<(), ModelError> {
        if ids.is_empty() {
            return Err(ModelError::EmptyInput(what));
        }
        let vocab_size = self.config.vocab_size;
        match ids.iter().find(|&&id| id as usize >= vocab_size) {
            Some(&id) => Err(ModelError::UnknownToken { id, vocab_size }),
            None => Ok(()),
        }
    }

    pub fn encode_question(&self, ids: &[u32]) -> Result<QuestionEncoding, ModelError> {
        self.check_ids(ids, "question")?;
        let pass = network::question_forward(&self.params, &self.layout, ids, self.config.hidden_dim);
        Ok(encoding_of(&pass, self.config.hidden_dim))
    }

    pub fn predict_span(&self, question: &[u32], context: &[u32]) -> Result<SpanPrediction, ModelError> {
        self.check_ids(question, "question")?;
        self.check_ids(context, "context")?;
        let hd = self.config.hidden_dim;
        let pass = network::span_forward(&self.params, &self.layout, question, context, hd);
        let ps = softmax(&pass.start_scores);
        let pe = softmax(&pass.end_scores);
        let (i, j, certainty) = network::best_span(&ps, &pe, self.config.max_span);
        Ok(SpanPrediction {
            span: (i, j),
            certainty,
            encoding: encoding_of(&pass.question, hd),
        })
    }

    /// Loss of one example and its gradient, added into `grad`.
    pub fn loss_and_grad(&self, example: &TrainingExample, grad: &mut [f64]) -> Result<f64, ModelError> {
        self.check_example(example)?;
        let hd = self.config.hidden_dim;
        let pass = network::span_forward(&self.params, &self.layout, &example.question, &example.context, hd);
        pass.backward(&self.params, &self.layout, hd, example.start, example.end, grad);
        Ok(pass.loss(example.start, example.end))
    }

    pub fn loss(&self, example: &TrainingExample) -> Result<f64, ModelError> {
        self.check_example(example)?;
        let hd = self.config.hidden_dim;
        let pass = network::span_forward(&self.params, &self.layout, &example.question, &example.context, hd);
        Ok(pass.loss(example.start, example.end))
    }

    /// [`Model::loss`] minus the constant `2 ln(context length)`.
    pub fn centered_loss(&self, example: &TrainingExample) -> Result<f64, ModelError> {
        self.check_example(example)?;
        let hd = self.config.hidden_dim;
        let pass = network::span_forward(&self.params, &self.layout, &example.question, &example.context, hd);
        Ok(pass.centered_loss(example.start, example.end))
    }

    fn check_example(&self, ex: &TrainingExample) -> Result<(), ModelError> {
        self.check_ids(&ex.question, "question")?;
        self.check_ids(&ex.context, "context")?;
        if ex.start > ex.end || ex.end >= ex.context.len() {
            return Err(ModelError::BadSpan {
                id: ex.id.clone(),
                start: ex.start,
                end: ex.end,
                len: ex.context.len(),
            });
        }
        Ok(())
    }
}

fn encoding_of(pass: &network::QuestionPass, hd: usize) -> QuestionEncoding {
    let hidden = pass
        .stack
        .layers
        .iter()
        .map(|layer| layer.hidden.chunks(hd).map(<[f64]>::to_vec).collect())
        .collect();
    QuestionEncoding {
        hidden,
        attention_logits: pass.logits.clone(),
        attention_weights: pass.weights.clone(),
        pooled: pass.pooled.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn config(vocab: usize) -> ModelConfig {
        ModelConfig { vocab_size: vocab, embed_dim: 6, hidden_dim: 5, num_layers: 3, ..Default::default() }
    }

    #[test]
    fn init_is_deterministic_and_validated() {
        let a = Model::new(config(10)).unwrap();
        let b = Model::new(config(10)).unwrap();
        assert_eq!(a.checksum(), b.checksum());
        let c = Model::new(ModelConfig { seed: 1, ..config(10) }).unwrap();
        assert_ne!(a.checksum(), c.checksum());
        assert!(matches!(Model::new(config(0)), Err(ModelError::Config(_))));
        assert!(Model::new(ModelConfig { num_layers: 0, ..config(3) }).is_err());
    }

    #[test]
    fn wide_hidden_shape() {
        let m = Model::new(ModelConfig { vocab_size: 4, hidden_dim: 256, ..Default::default() }).unwrap();
        let enc = m.encode_question(&[1, 2, 3, 0, 1]).unwrap();
        assert_eq!(enc.hidden.len(), 3);
        assert!(enc.hidden.iter().all(|l| l.len() == 5 && l.iter().all(|v| v.len() == 256)));
    }

    #[test]
    fn encode_edge_cases() {
        let mut m = Model::new(config(10)).unwrap();
        assert_eq!(m.encode_question(&[3]).unwrap().attention_weights, vec![1.0]);
        assert!(matches!(m.encode_question(&[10]), Err(ModelError::UnknownToken { .. })));
        assert!(m.encode_question(&[]).is_err());
        let att = m.layout().attention().range();
        m.params_mut()[att].fill(0.0);
        let enc = m.encode_question(&[1, 2, 3, 4]).unwrap();
        assert!(enc.attention_weights.iter().all(|w| (w - 0.25).abs() < 1e-15));
    }

    #[test]
    fn single_token_context() {
        let m = Model::new(config(10)).unwrap();
        let p = m.predict_span(&[1, 2], &[5]).unwrap();
        assert_eq!(p.span, (0, 0));
        assert_eq!(p.certainty, 1.0);
    }

    proptest! {
        #[test]
        fn spans_are_legal(q in proptest::collection::vec(0u32..10, 1..6), c in proptest::collection::vec(0u32..10, 1..40)) {
            let m = Model::new(config(10)).unwrap();
            let p = m.predict_span(&q, &c).unwrap();
            prop_assert!(p.span.0 <= p.span.1 && p.span.1 < c.len());
            prop_assert!(p.span.1 - p.span.0 < m.config().max_span);
            prop_assert!((0.0..=1.0).contains(&p.certainty));
            let sum: f64 = p.encoding.attention_weights.iter().sum();
            prop_assert!((sum - 1.0).abs() < 1e-9);
        }
    }
}
