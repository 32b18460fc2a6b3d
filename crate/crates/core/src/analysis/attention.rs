use serde::{Deserialize, Serialize};

use super::AnalysisError;
use crate::textproc::{Pos, TaggedQuestion, Token};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum PosCategory {
    TotalVerbs,
    TotalNouns,
    OtherPos,
    AuxVerbs,
    NonAuxVerbs,
    NonNeNouns,
    NeNouns,
}

impl PosCategory {
    /// Row order of the attention table.
    pub const ALL: [PosCategory; 7] = [
        PosCategory::TotalVerbs,
        PosCategory::TotalNouns,
        PosCategory::OtherPos,
        PosCategory::AuxVerbs,
        PosCategory::NonAuxVerbs,
        PosCategory::NonNeNouns,
        PosCategory::NeNouns,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            PosCategory::TotalVerbs => "TOTAL_VERBS",
            PosCategory::TotalNouns => "TOTAL_NOUNS",
            PosCategory::OtherPos => "OTHER_POS",
            PosCategory::AuxVerbs => "AUX_VERBS",
            PosCategory::NonAuxVerbs => "NON_AUX_VERBS",
            PosCategory::NonNeNouns => "NON_NE_NOUNS",
            PosCategory::NeNouns => "NE_NOUNS",
        }
    }

    /// Every category a token falls into: one total row plus one sub-row.
    pub fn of(token: &Token) -> &'static [PosCategory] {
        match (token.pos, token.is_named_entity) {
            (Pos::Aux, _) => &[PosCategory::TotalVerbs, PosCategory::AuxVerbs],
            (Pos::Verb, _) => &[PosCategory::TotalVerbs, PosCategory::NonAuxVerbs],
            (Pos::Noun, true) => &[PosCategory::TotalNouns, PosCategory::NeNouns],
            (Pos::Noun, false) => &[PosCategory::TotalNouns, PosCategory::NonNeNouns],
            (Pos::Other, _) => &[PosCategory::OtherPos],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PosAttentionRow {
    pub category: PosCategory,
    /// Mean |attention logit|; `None` when the category has no tokens.
    pub mean_abs_attention: Option<f64>,
    pub token_count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PosAttentionTable {
    pub rows: Vec<PosAttentionRow>,
}

impl PosAttentionTable {
    pub fn row(&self, category: PosCategory) -> &PosAttentionRow {
        self.rows
            .iter()
            .find(|r| r.category == category)
            .expect("table holds every category")
    }
}

/// Attention logits of one question alongside its tagging.
#[derive(Debug, Clone, Copy)]
pub struct AttentionObservation<'a> {
    pub id: &'a str,
    pub tagged: &'a TaggedQuestion,
    pub logits: &'a [f64],
}

/// Token-level mean of |logit| per category, pooled over all questions.
pub fn aggregate_attention_by_pos<'a>(
    observations: impl IntoIterator<Item = AttentionObservation<'a>>,
) -> Result<PosAttentionTable, AnalysisError> {
    let mut sums = [0.0f64; 7];
    let mut counts = [0usize; 7];
    for obs in observations {
        if obs.logits.len() != obs.tagged.tokens.len() {
            return Err(AnalysisError::Misaligned {
                id: obs.id.to_string(),
                logits: obs.logits.len(),
                tokens: obs.tagged.tokens.len(),
            });
        }
        for (token, logit) in obs.tagged.tokens.iter().zip(obs.logits) {
            if !logit.is_finite() {
                return Err(AnalysisError::NonFinite("attention logit"));
            }
            for cat in PosCategory::of(token) {
                let k = *cat as usize;
                sums[k] += logit.abs();
                counts[k] += 1;
            }
        }
    }
    let rows = PosCategory::ALL
        .iter()
        .map(|&category| {
            let k = category as usize;
            PosAttentionRow {
                category,
                mean_abs_attention: (counts[k] > 0).then(|| sums[k] / counts[k] as f64),
                token_count: counts[k],
            }
        })
        .collect();
    Ok(PosAttentionTable { rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::textproc::Tagger;

    #[test]
    fn single_noun_uses_absolute_logit() {
        let q = Tagger::default().tag_text("Which museum?");
        let logits = [0.5, -2.0, 0.0];
        let t = aggregate_attention_by_pos([AttentionObservation { id: "a", tagged: &q, logits: &logits }]).unwrap();
        assert_eq!(t.row(PosCategory::TotalNouns).mean_abs_attention, Some(2.0));
        assert_eq!(t.row(PosCategory::TotalVerbs).mean_abs_attention, None);
        assert_eq!(t.rows.len(), 7);
    }

    #[test]
    fn verbs_pool_across_questions() {
        let tagger = Tagger::default();
        let q1 = tagger.tag_text("Who sang?");
        let q2 = tagger.tag_text("Who walked?");
        let t = aggregate_attention_by_pos([
            AttentionObservation { id: "1", tagged: &q1, logits: &[0.0, 1.0, 0.0] },
            AttentionObservation { id: "2", tagged: &q2, logits: &[0.0, -3.0, 0.0] },
        ])
        .unwrap();
        assert_eq!(t.row(PosCategory::TotalVerbs).mean_abs_attention, Some(2.0));
        assert_eq!(t.row(PosCategory::NonAuxVerbs).token_count, 2);
    }

    #[test]
    fn count_identities_and_misalignment() {
        let tagger = Tagger::default();
        let q = tagger.tag_text("Which art museum does Notre Dame administer?");
        let logits: Vec<f64> = (0..q.tokens.len()).map(|i| i as f64 - 3.0).collect();
        let t = aggregate_attention_by_pos([AttentionObservation { id: "x", tagged: &q, logits: &logits }]).unwrap();
        let c = |k| t.row(k).token_count;
        assert_eq!(c(PosCategory::TotalVerbs), c(PosCategory::AuxVerbs) + c(PosCategory::NonAuxVerbs));
        assert_eq!(c(PosCategory::TotalNouns), c(PosCategory::NeNouns) + c(PosCategory::NonNeNouns));
        assert_eq!(c(PosCategory::TotalVerbs) + c(PosCategory::TotalNouns) + c(PosCategory::OtherPos), q.tokens.len());
        assert_eq!(c(PosCategory::NeNouns), 2);

        let err = aggregate_attention_by_pos([AttentionObservation { id: "q17", tagged: &q, logits: &[1.0] }]).unwrap_err();
        assert!(err.to_string().contains("q17"));
    }
}
