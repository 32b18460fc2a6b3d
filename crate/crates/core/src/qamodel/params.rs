use rand::Rng;
use serde::{Deserialize, Serialize};

use super::ModelConfig;

/// A named block of the flat parameter vector, stored row-major.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamGroup {
    pub name: String,
    pub offset: usize,
    pub rows: usize,
    pub cols: usize,
    /// Bound of the uniform initializer is `1 / sqrt(fan_in)`.
    pub fan_in: usize,
}

impl ParamGroup {
    pub fn len(&self) -> usize {
        self.rows * self.cols
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn range(&self) -> std::ops::Range<usize> {
        self.offset..self.offset + self.len()
    }
}

/// Layout: embedding; per layer the LSTM gate matrix `[4H x (in + H)]`
/// (gate rows in i, f, g, o order) and its bias; attention vector;
/// start and end bilinear matrices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamLayout {
    pub groups: Vec<ParamGroup>,
    pub num_layers: usize,
}

impl ParamLayout {
    pub fn new(config: &ModelConfig) -> Self {
        let (e, h, l) = (config.embed_dim, config.hidden_dim, config.num_layers);
        let mut groups = Vec::new();
        let mut offset = 0;
        let mut push = |name: String, rows: usize, cols: usize, fan_in: usize| {
            groups.push(ParamGroup { name, offset, rows, cols, fan_in });
            offset += rows * cols;
        };
        push("embedding".into(), config.vocab_size, e, 1);
        for layer in 0..l {
            let input = if layer == 0 { e } else { h };
            push(format!("lstm.{layer}.weight"), 4 * h, input + h, input + h);
            push(format!("lstm.{layer}.bias"), 1, 4 * h, input + h);
        }
        push("attention".into(), 1, h, h);
        push("start_bilinear".into(), h, h, h);
        push("end_bilinear".into(), h, h, h);
        ParamLayout { groups, num_layers: l }
    }

    pub fn total(&self) -> usize {
        self.groups.last().map_or(0, |g| g.offset + g.len())
    }

    pub fn embedding(&self) -> &ParamGroup {
        &self.groups[0]
    }

    pub fn lstm_weight(&self, layer: usize) -> &ParamGroup {
        &self.groups[1 + 2 * layer]
    }

    pub fn lstm_bias(&self, layer: usize) -> &ParamGroup {
        &self.groups[2 + 2 * layer]
    }

    pub fn attention(&self) -> &ParamGroup {
        &self.groups[1 + 2 * self.num_layers]
    }

    pub fn start_bilinear(&self) -> &ParamGroup {
        &self.groups[2 + 2 * self.num_layers]
    }

    pub fn end_bilinear(&self) -> &ParamGroup {
        &self.groups[3 + 2 * self.num_layers]
    }

    /// Draws every parameter uniformly from `±1/sqrt(fan_in)`, group by group
    /// in layout order.
    pub fn initialize(&self, rng: &mut impl Rng) -> Vec<f64> {
        let mut params = Vec::with_capacity(self.total());
        for g in &self.groups {
            let bound = 1.0 / (g.fan_in as f64).sqrt();
            params.extend((0..g.len()).map(|_| rng.gen_range(-bound..bound)));
        }
        params
    }
}
