use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::{Model, ModelError};
use crate::seeding::rng_for;

/// A question/context pair with an inclusive gold token span.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrainingExample {
    pub id: String,
    pub question: Vec<u32>,
    pub context: Vec<u32>,
    pub start: usize,
    pub end: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainReport {
    /// Mean loss of every optimizer step, in order.
    pub step_losses: Vec<f64>,
    /// Mean loss over each epoch.
    pub epoch_losses: Vec<f64>,
}

impl TrainReport {
    /// Trailing moving average of the step losses over `window` steps.
    pub fn moving_average(&self, window: usize) -> Vec<f64> {
        let w = window.max(1);
        self.step_losses
            .windows(w)
            .map(|s| s.iter().sum::<f64>() / w as f64)
            .collect()
    }
}

struct Adam {
    m: Vec<f64>,
    v: Vec<f64>,
    t: i32,
}

impl Adam {
    const BETA1: f64 = 0.9;
    const BETA2: f64 = 0.999;
    const EPS: f64 = 1e-8;

    fn new(n: usize) -> Self {
        Adam { m: vec![0.0; n], v: vec![0.0; n], t: 0 }
    }

    fn step(&mut self, params: &mut [f64], grad: &[f64], lr: f64) {
        self.t += 1;
        let bc1 = 1.0 - Self::BETA1.powi(self.t);
        let bc2 = 1.0 - Self::BETA2.powi(self.t);
        let step = lr * bc2.sqrt() / bc1;
        for (((p, g), m), v) in params.iter_mut().zip(grad).zip(&mut self.m).zip(&mut self.v) {
            *m = Self::BETA1 * *m + (1.0 - Self::BETA1) * g;
            *v = Self::BETA2 * *v + (1.0 - Self::BETA2) * g * g;
            *p -= step * *m / (v.sqrt() + Self::EPS);
        }
    }
}

/// Minimizes the start+end negative log-likelihood with Adam on minibatches.
/// The shuffle of each epoch is derived from the model seed, so runs are
/// reproducible bit for bit.
pub fn train(model: &mut Model, examples: &[TrainingExample]) -> Result<TrainReport, ModelError> {
    let config = model.config().clone();
    let mut report = TrainReport { step_losses: Vec::new(), epoch_losses: Vec::new() };
    if config.epochs == 0 || examples.is_empty() {
        return Ok(report);
    }
    for ex in examples {
        model.check_example(ex)?;
    }
    let n = model.params().len();
    let mut adam = Adam::new(n);
    let mut grad = vec![0.0; n];
    let mut order: Vec<usize> = (0..examples.len()).collect();
    let mut lr = config.learning_rate;
    for epoch in 0..config.epochs {
        let mut rng = rng_for(config.seed, &format!("epoch-{epoch}"));
        order.shuffle(&mut rng);
        let mut epoch_sum = 0.0;
        for batch in order.chunks(config.batch_size) {
            grad.fill(0.0);
            let mut batch_loss = 0.0;
            for &k in batch {
                let loss = model.loss_and_grad(&examples[k], &mut grad)?;
                if !loss.is_finite() {
                    return Err(ModelError::NonFiniteLoss {
                        epoch,
                        step: report.step_losses.len(),
                        example: examples[k].id.clone(),
                        loss,
                    });
                }
                batch_loss += loss;
            }
            let scale = 1.0 / batch.len() as f64;
            grad.iter_mut().for_each(|g| *g *= scale);
            if config.clip_norm > 0.0 {
                let norm = grad.iter().map(|g| g * g).sum::<f64>().sqrt();
                if norm > config.clip_norm {
                    let s = config.clip_norm / norm;
                    grad.iter_mut().for_each(|g| *g *= s);
                }
            }
            adam.step(model.params_mut(), &grad, lr);
            epoch_sum += batch_loss;
            report.step_losses.push(batch_loss * scale);
        }
        let mean = epoch_sum / examples.len() as f64;
        log::debug!("epoch {epoch}: mean loss {mean:.6}");
        report.epoch_losses.push(mean);
        lr *= config.lr_decay;
    }
    Ok(report)
}
