//! Forward and backward passes of the reference reader.

use super::params::ParamLayout;

fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

/// Numerically stable softmax.
pub fn softmax(v: &[f64]) -> Vec<f64> {
    let max = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = v.iter().map(|x| (x - max).exp()).collect();
    let sum: f64 = exps.iter().sum();
    exps.into_iter().map(|e| e / sum).collect()
}

/// `ln(mean(exp(v)))`, i.e. log-sum-exp minus `ln(len)`. Written with
/// `expm1`/`ln_1p` so that small scores keep full relative precision.
fn log_mean_exp(v: &[f64]) -> f64 {
    let max = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mean = v.iter().map(|x| (x - max).exp_m1()).sum::<f64>() / v.len() as f64;
    max + mean.ln_1p()
}

/// Activations of one LSTM layer over a sequence, all `[T x dim]` row-major.
pub(crate) struct LayerCache {
    in_dim: usize,
    input: Vec<f64>,
    /// post-activation gates i, f, g, o
    gates: Vec<f64>,
    cell: Vec<f64>,
    pub(crate) hidden: Vec<f64>,
}

pub(crate) struct StackCache {
    ids: Vec<u32>,
    pub(crate) layers: Vec<LayerCache>,
}

impl StackCache {
    pub(crate) fn len(&self) -> usize {
        self.ids.len()
    }

    pub(crate) fn top(&self) -> &[f64] {
        &self.layers.last().expect("at least one layer").hidden
    }
}

fn layer_forward(w: &[f64], b: &[f64], input: Vec<f64>, in_dim: usize, hd: usize) -> LayerCache {
    let steps = input.len() / in_dim;
    let cols = in_dim + hd;
    let mut gates = vec![0.0; steps * 4 * hd];
    let mut cell = vec![0.0; steps * hd];
    let mut hidden = vec![0.0; steps * hd];
    let mut xh = vec![0.0; cols];
    for t in 0..steps {
        xh[..in_dim].copy_from_slice(&input[t * in_dim..(t + 1) * in_dim]);
        if t > 0 {
            xh[in_dim..].copy_from_slice(&hidden[(t - 1) * hd..t * hd]);
        }
        let g = &mut gates[t * 4 * hd..(t + 1) * 4 * hd];
        for (r, z) in g.iter_mut().enumerate() {
            *z = b[r] + dot(&w[r * cols..(r + 1) * cols], &xh);
        }
        for k in 0..hd {
            let i = sigmoid(g[k]);
            let f = sigmoid(g[hd + k]);
            let gg = g[2 * hd + k].tanh();
            let o = sigmoid(g[3 * hd + k]);
            g[k] = i;
            g[hd + k] = f;
            g[2 * hd + k] = gg;
            g[3 * hd + k] = o;
            let c_prev = if t > 0 { cell[(t - 1) * hd + k] } else { 0.0 };
            let c = f * c_prev + i * gg;
            cell[t * hd + k] = c;
            hidden[t * hd + k] = o * c.tanh();
        }
    }
    LayerCache { in_dim, input, gates, cell, hidden }
}

/// Backpropagates `dh_out` (gradient w.r.t. this layer's outputs) through
/// time, accumulating weight gradients and returning the input gradient.
fn layer_backward(
    w: &[f64],
    cache: &LayerCache,
    hd: usize,
    dh_out: &[f64],
    dw: &mut [f64],
    db: &mut [f64],
) -> Vec<f64> {
    let in_dim = cache.in_dim;
    let cols = in_dim + hd;
    let steps = cache.input.len() / in_dim;
    let mut dx = vec![0.0; steps * in_dim];
    let mut dh_next = vec![0.0; hd];
    let mut dc_next = vec![0.0; hd];
    let mut dz = vec![0.0; 4 * hd];
    let mut xh = vec![0.0; cols];
    let mut dxh = vec![0.0; cols];
    for t in (0..steps).rev() {
        let g = &cache.gates[t * 4 * hd..(t + 1) * 4 * hd];
        for k in 0..hd {
            let (i, f, gg, o) = (g[k], g[hd + k], g[2 * hd + k], g[3 * hd + k]);
            let tc = cache.cell[t * hd + k].tanh();
            let c_prev = if t > 0 { cache.cell[(t - 1) * hd + k] } else { 0.0 };
            let dh = dh_out[t * hd + k] + dh_next[k];
            let dc = dh * o * (1.0 - tc * tc) + dc_next[k];
            dc_next[k] = dc * f;
            dz[k] = dc * gg * i * (1.0 - i);
            dz[hd + k] = dc * c_prev * f * (1.0 - f);
            dz[2 * hd + k] = dc * i * (1.0 - gg * gg);
            dz[3 * hd + k] = dh * tc * o * (1.0 - o);
        }
        xh[..in_dim].copy_from_slice(&cache.input[t * in_dim..(t + 1) * in_dim]);
        if t > 0 {
            xh[in_dim..].copy_from_slice(&cache.hidden[(t - 1) * hd..t * hd]);
        } else {
            xh[in_dim..].fill(0.0);
        }
        dxh.fill(0.0);
        for (r, &d) in dz.iter().enumerate() {
            if d == 0.0 {
                continue;
            }
            db[r] += d;
            let row = r * cols..(r + 1) * cols;
            axpy(d, &xh, &mut dw[row.clone()]);
            axpy(d, &w[row], &mut dxh);
        }
        dx[t * in_dim..(t + 1) * in_dim].copy_from_slice(&dxh[..in_dim]);
        dh_next.copy_from_slice(&dxh[in_dim..]);
    }
    dx
}

pub(crate) fn stack_forward(params: &[f64], layout: &ParamLayout, ids: &[u32], hd: usize) -> StackCache {
    let emb = layout.embedding();
    let e = emb.cols;
    let mut input = Vec::with_capacity(ids.len() * e);
    for &id in ids {
        let start = emb.offset + id as usize * e;
        input.extend_from_slice(&params[start..start + e]);
    }
    let mut layers: Vec<LayerCache> = Vec::with_capacity(layout.num_layers);
    let mut in_dim = e;
    for l in 0..layout.num_layers {
        let w = &params[layout.lstm_weight(l).range()];
        let b = &params[layout.lstm_bias(l).range()];
        let cache = layer_forward(w, b, input, in_dim, hd);
        input = cache.hidden.clone();
        in_dim = hd;
        layers.push(cache);
    }
    StackCache { ids: ids.to_vec(), layers }
}

fn stack_backward(
    params: &[f64],
    layout: &ParamLayout,
    cache: &StackCache,
    hd: usize,
    dh_top: Vec<f64>,
    grad: &mut [f64],
) {
    let mut dh = dh_top;
    for l in (0..layout.num_layers).rev() {
        let wg = layout.lstm_weight(l).range();
        let bg = layout.lstm_bias(l).range();
        // weight and bias groups are adjacent, so split once
        let (dw, rest) = grad[wg.start..bg.end].split_at_mut(wg.len());
        dh = layer_backward(&params[wg], &cache.layers[l], hd, &dh, dw, rest);
    }
    let emb = layout.embedding();
    let e = emb.cols;
    for (t, &id) in cache.ids.iter().enumerate() {
        let start = emb.offset + id as usize * e;
        axpy(1.0, &dh[t * e..(t + 1) * e], &mut grad[start..start + e]);
    }
}

/// Question-side result: top-layer attention and pooled vector.
pub(crate) struct QuestionPass {
    pub(crate) stack: StackCache,
    pub(crate) logits: Vec<f64>,
    pub(crate) weights: Vec<f64>,
    pub(crate) pooled: Vec<f64>,
}

pub(crate) fn question_forward(params: &[f64], layout: &ParamLayout, ids: &[u32], hd: usize) -> QuestionPass {
    let stack = stack_forward(params, layout, ids, hd);
    let w = &params[layout.attention().range()];
    let top = stack.top();
    let logits: Vec<f64> = (0..ids.len()).map(|j| dot(w, &top[j * hd..(j + 1) * hd])).collect();
    let weights = softmax(&logits);
    let mut pooled = vec![0.0; hd];
    for (j, b) in weights.iter().enumerate() {
        axpy(*b, &top[j * hd..(j + 1) * hd], &mut pooled);
    }
    QuestionPass { stack, logits, weights, pooled }
}

fn matvec(m: &[f64], v: &[f64], rows: usize) -> Vec<f64> {
    let cols = v.len();
    (0..rows).map(|r| dot(&m[r * cols..(r + 1) * cols], v)).collect()
}

pub(crate) struct SpanPass {
    pub(crate) question: QuestionPass,
    context: StackCache,
    u_start: Vec<f64>,
    u_end: Vec<f64>,
    pub(crate) start_scores: Vec<f64>,
    pub(crate) end_scores: Vec<f64>,
}

pub(crate) fn span_forward(
    params: &[f64],
    layout: &ParamLayout,
    question: &[u32],
    context: &[u32],
    hd: usize,
) -> SpanPass {
    let question = question_forward(params, layout, question, hd);
    let context = stack_forward(params, layout, context, hd);
    let u_start = matvec(&params[layout.start_bilinear().range()], &question.pooled, hd);
    let u_end = matvec(&params[layout.end_bilinear().range()], &question.pooled, hd);
    let top = context.top();
    let n = context.len();
    let start_scores = (0..n).map(|i| dot(&top[i * hd..(i + 1) * hd], &u_start)).collect();
    let end_scores = (0..n).map(|i| dot(&top[i * hd..(i + 1) * hd], &u_end)).collect();
    SpanPass { question, context, u_start, u_end, start_scores, end_scores }
}

impl SpanPass {
    /// `-log P_start(start) - log P_end(end)`.
    pub(crate) fn loss(&self, start: usize, end: usize) -> f64 {
        self.centered_loss(start, end) + 2.0 * (self.start_scores.len() as f64).ln()
    }

    /// The loss minus its uniform-prediction value `2 ln n`. Same gradient,
    /// but without the large constant that swamps finite differences.
    pub(crate) fn centered_loss(&self, start: usize, end: usize) -> f64 {
        (log_mean_exp(&self.start_scores) - self.start_scores[start])
            + (log_mean_exp(&self.end_scores) - self.end_scores[end])
    }

    /// Accumulates the gradient of [`SpanPass::loss`] into `grad`.
    pub(crate) fn backward(
        &self,
        params: &[f64],
        layout: &ParamLayout,
        hd: usize,
        start: usize,
        end: usize,
        grad: &mut [f64],
    ) {
        let mut ds = softmax(&self.start_scores);
        ds[start] -= 1.0;
        let mut de = softmax(&self.end_scores);
        de[end] -= 1.0;

        let top = self.context.top();
        let n = self.context.len();
        let mut dctx = vec![0.0; n * hd];
        let mut du_s = vec![0.0; hd];
        let mut du_e = vec![0.0; hd];
        for i in 0..n {
            let c = &top[i * hd..(i + 1) * hd];
            let row = &mut dctx[i * hd..(i + 1) * hd];
            axpy(ds[i], &self.u_start, row);
            axpy(de[i], &self.u_end, row);
            axpy(ds[i], c, &mut du_s);
            axpy(de[i], c, &mut du_e);
        }

        let q = &self.question;
        let mut dpooled = vec![0.0; hd];
        for (group, du) in [(layout.start_bilinear(), &du_s), (layout.end_bilinear(), &du_e)] {
            let m = &params[group.range()];
            for r in 0..hd {
                axpy(du[r], &q.pooled, &mut grad[group.offset + r * hd..group.offset + (r + 1) * hd]);
                axpy(du[r], &m[r * hd..(r + 1) * hd], &mut dpooled);
            }
        }

        let qtop = q.stack.top();
        let tq = q.stack.len();
        let mut dq = vec![0.0; tq * hd];
        let dweights: Vec<f64> = (0..tq).map(|j| dot(&qtop[j * hd..(j + 1) * hd], &dpooled)).collect();
        let mean: f64 = q.weights.iter().zip(&dweights).map(|(b, d)| b * d).sum();
        let att = layout.attention();
        let w = &params[att.range()];
        for j in 0..tq {
            let dlogit = q.weights[j] * (dweights[j] - mean);
            let h = &qtop[j * hd..(j + 1) * hd];
            axpy(dlogit, h, &mut grad[att.range()]);
            let row = &mut dq[j * hd..(j + 1) * hd];
            axpy(q.weights[j], &dpooled, row);
            axpy(dlogit, w, row);
        }

        stack_backward(params, layout, &self.context, hd, dctx, grad);
        stack_backward(params, layout, &q.stack, hd, dq, grad);
    }
}

/// Best span `(i, j)` with `i <= j < i + max_span`, scored by
/// `P_start(i) * P_end(j)`; ties keep the earliest span.
pub(crate) fn best_span(p_start: &[f64], p_end: &[f64], max_span: usize) -> (usize, usize, f64) {
    let n = p_start.len();
    let mut best = (0, 0, f64::NEG_INFINITY);
    for i in 0..n {
        for j in i..n.min(i + max_span.max(1)) {
            let score = p_start[i] * p_end[j];
            if score > best.2 {
                best = (i, j, score);
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn softmax_is_shift_invariant() {
        let a = softmax(&[1.0, 2.0, -3.0]);
        let b = softmax(&[101.0, 102.0, 97.0]);
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-12);
        }
        assert!((a.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn span_search_respects_limit() {
        let ps = [0.1, 0.8, 0.1];
        let pe = [0.7, 0.1, 0.2];
        assert_eq!(best_span(&ps, &pe, 15).0..best_span(&ps, &pe, 15).1 + 1, 1..3);
        let (i, j, _) = best_span(&ps, &pe, 1);
        assert_eq!(i, j);
        assert_eq!(best_span(&[1.0], &[1.0], 15), (0, 0, 1.0));
    }
}
