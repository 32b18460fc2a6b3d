//! Statistical battery: answer matching, attention aggregation by part of
//! speech, and vector/series statistics.

mod answers;
mod attention;
mod stats;

use thiserror::Error;

pub use answers::{answers_match, match_rate, normalize_answer, AnswerPair, MatchReport, QuestionMatch, ScoredAnswer};
pub use attention::{
    aggregate_attention_by_pos, AttentionObservation, PosAttentionRow, PosAttentionTable, PosCategory,
};
pub use stats::{
    entropy, fractional_ranks, kolmogorov_survival, ks_two_sample, pearson, spearman, variance, KsResult,
};

#[derive(Debug, Error, PartialEq)]
pub enum AnalysisError {
    #[error("empty {0}")]
    Empty(&'static str),
    #[error("degenerate vector: all entries are zero")]
    Degenerate,
    #[error("zero variance")]
    ZeroVariance,
    #[error("all values tied")]
    AllTied,
    #[error("series lengths differ: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("need at least 2 points, got {0}")]
    TooShort(usize),
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
    #[error("question {id}: {logits} attention logits for {tokens} tokens")]
    Misaligned { id: String, logits: usize, tokens: usize },
}
