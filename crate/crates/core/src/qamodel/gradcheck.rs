use rand::seq::index::sample;
use serde::{Deserialize, Serialize};

use super::{Model, ModelError, TrainingExample};
use crate::seeding::rng_for;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupCoverage {
    pub group: String,
    pub sampled: usize,
    pub max_relative_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GradCheckReport {
    pub epsilon: f64,
    pub checked: usize,
    pub max_relative_error: f64,
    pub groups: Vec<GroupCoverage>,
}

/// `|a - n| / max(|a|, |n|)`, defined as 0 when both are 0.
pub fn relative_error(analytic: f64, numeric: f64) -> f64 {
    let denom = analytic.abs().max(numeric.abs());
    if denom == 0.0 {
        0.0
    } else {
        (analytic - numeric).abs() / denom
    }
}

/// Compares analytic gradients against central differences of the centered
/// loss on at least `samples` parameters spread over every parameter group.
/// Embedding samples are drawn from rows of tokens that occur in the example.
pub fn grad_check(
    model: &Model,
    example: &TrainingExample,
    epsilon: f64,
    samples: usize,
    seed: u64,
) -> Result<GradCheckReport, ModelError> {
    let mut analytic = vec![0.0; model.params().len()];
    model.loss_and_grad(example, &mut analytic)?;

    let layout = model.layout().clone();
    let candidates: Vec<Vec<usize>> = layout
        .groups
        .iter()
        .enumerate()
        .map(|(g_idx, group)| {
            if g_idx == 0 {
                let mut rows: Vec<u32> = example.question.iter().chain(&example.context).copied().collect();
                rows.sort_unstable();
                rows.dedup();
                rows.iter()
                    .flat_map(|&r| {
                        let start = group.offset + r as usize * group.cols;
                        start..start + group.cols
                    })
                    .collect()
            } else {
                group.range().collect()
            }
        })
        .collect();

    // smallest groups first, so that their unused share moves to larger ones
    let mut quota = vec![0; candidates.len()];
    let mut by_size: Vec<usize> = (0..candidates.len()).collect();
    by_size.sort_by_key(|&g| candidates[g].len());
    let mut remaining = samples;
    for (done, &g) in by_size.iter().enumerate() {
        let share = remaining.div_ceil(by_size.len() - done).max(1);
        quota[g] = share.min(candidates[g].len());
        remaining = remaining.saturating_sub(quota[g]);
    }

    let mut probe = model.clone();
    let mut groups = Vec::new();
    let mut checked = 0;
    for (g_idx, group) in layout.groups.iter().enumerate() {
        let pool = &candidates[g_idx];
        let mut rng = rng_for(seed, &group.name);
        let mut worst: f64 = 0.0;
        for k in sample(&mut rng, pool.len(), quota[g_idx]).into_iter() {
            let p = pool[k];
            let orig = probe.params()[p];
            probe.params_mut()[p] = orig + epsilon;
            let plus = probe.centered_loss(example)?;
            probe.params_mut()[p] = orig - epsilon;
            let minus = probe.centered_loss(example)?;
            probe.params_mut()[p] = orig;
            let numeric = (plus - minus) / (2.0 * epsilon);
            worst = worst.max(relative_error(analytic[p], numeric));
        }
        checked += quota[g_idx];
        groups.push(GroupCoverage { group: group.name.clone(), sampled: quota[g_idx], max_relative_error: worst });
    }
    let max_relative_error = groups.iter().map(|g| g.max_relative_error).fold(0.0, f64::max);
    Ok(GradCheckReport { epsilon, checked, max_relative_error, groups })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qamodel::ModelConfig;

    #[test]
    fn degenerate_denominator() {
        assert_eq!(relative_error(0.0, 0.0), 0.0);
        assert_eq!(relative_error(1.0, 0.0), 1.0);
    }

    #[test]
    fn small_model_passes() {
        let m = Model::new(ModelConfig { vocab_size: 9, embed_dim: 4, hidden_dim: 4, ..Default::default() }).unwrap();
        let ex = TrainingExample { id: "x".into(), question: vec![1, 2, 3], context: vec![4, 5, 6, 7, 8], start: 1, end: 3 };
        let r = grad_check(&m, &ex, 1e-5, 200, 0).unwrap();
        assert_eq!(r.groups.len(), 10);
        assert!(r.checked >= 200);
        assert!(r.groups.iter().all(|g| g.sampled > 0));
        assert!(r.max_relative_error < 1e-4, "{r:#?}");
    }
}
