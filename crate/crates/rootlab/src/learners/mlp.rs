//! Dense feed-forward network trained with softmax cross-entropy and
//! per-parameter adaptive moment updates.
//!
//! Expects z-scored inputs. Training holds out a stratified validation slice
//! for early stopping on balanced accuracy (best weights are restored), and
//! every stochastic choice (init, shuffles, split) derives from the fit seed,
//! so a fit is a pure function of (data, config, seed).

use serde::{Deserialize, Serialize};

use super::metrics::balanced_accuracy;
use crate::data::Matrix;
use crate::dataset::split::stratified_split;
use crate::error::{Error, Result};
use crate::seeding::{self, TAG_INIT, TAG_SHUFFLE, TAG_SPLIT};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MlpConfig {
    pub hidden: Vec<usize>,
    pub epochs: usize,
    pub batch: usize,
    pub learning_rate: f64,
    /// Fraction of the training rows held out for early stopping.
    pub val_fraction: f64,
    /// Epochs without validation improvement before stopping.
    pub patience: usize,
}

impl Default for MlpConfig {
    fn default() -> Self {
        MlpConfig {
            hidden: vec![16, 16],
            epochs: 200,
            batch: 128,
            learning_rate: 1e-3,
            val_fraction: 0.1,
            patience: 20,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DenseLayer {
    /// Row-major (out_dim x in_dim).
    pub w: Vec<f64>,
    pub b: Vec<f64>,
    pub in_dim: usize,
    pub out_dim: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MlpModel {
    pub layers: Vec<DenseLayer>,
    pub n_classes: usize,
}

/// Adam state per layer.
struct Moments {
    mw: Vec<f64>,
    vw: Vec<f64>,
    mb: Vec<f64>,
    vb: Vec<f64>,
}

const BETA1: f64 = 0.9;
const BETA2: f64 = 0.999;
const ADAM_EPS: f64 = 1e-8;

/// Per-layer forward: dst = act(W src + b), rectified except on the output.
fn forward_layer(layer: &DenseLayer, src: &[f64], dst: &mut [f64], batch: usize, relu: bool) {
    let (din, dout) = (layer.in_dim, layer.out_dim);
    for s in 0..batch {
        let xi = &src[s * din..(s + 1) * din];
        let oi = &mut dst[s * dout..(s + 1) * dout];
        for (o, out) in oi.iter_mut().enumerate() {
            let wrow = &layer.w[o * din..(o + 1) * din];
            let mut acc = layer.b[o];
            for (w, x) in wrow.iter().zip(xi) {
                acc += w * x;
            }
            *out = if relu && acc < 0.0 { 0.0 } else { acc };
        }
    }
}

fn softmax_rows(logits: &mut [f64], k: usize, batch: usize) {
    for row in logits.chunks_exact_mut(k).take(batch) {
        let m = row.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mut z = 0.0;
        for v in row.iter_mut() {
            *v = (*v - m).exp();
            z += *v;
        }
        for v in row.iter_mut() {
            *v /= z;
        }
    }
}

impl MlpModel {
    /// Freshly initialized (untrained) network with He-style random weights.
    pub fn init(n_inputs: usize, hidden: &[usize], n_classes: usize, seed: u64) -> Result<MlpModel> {
        let mut dims = vec![n_inputs];
        dims.extend_from_slice(hidden);
        dims.push(n_classes);
        let mut rng = seeding::rng(seed, &[TAG_INIT]);
        use rand_distr::{Distribution, Normal};
        let mut layers = Vec::with_capacity(dims.len() - 1);
        for w in dims.windows(2) {
            let (din, dout) = (w[0], w[1]);
            let normal = Normal::new(0.0, (2.0 / din as f64).sqrt())
                .map_err(|e| Error::BadData(e.to_string()))?;
            layers.push(DenseLayer {
                w: (0..din * dout).map(|_| normal.sample(&mut rng)).collect(),
                b: vec![0.0; dout],
                in_dim: din,
                out_dim: dout,
            });
        }
        Ok(MlpModel { layers, n_classes })
    }

    fn dims(&self) -> Vec<usize> {
        let mut dims = vec![self.layers[0].in_dim];
        dims.extend(self.layers.iter().map(|l| l.out_dim));
        dims
    }

    fn logits_into(&self, rows: &Matrix, idx: &[usize], acts: &mut [Vec<f64>]) {
        let batch = idx.len();
        for (s, &i) in idx.iter().enumerate() {
            let din = self.layers[0].in_dim;
            acts[0][s * din..(s + 1) * din].copy_from_slice(rows.row(i));
        }
        let n_layers = self.layers.len();
        for (l, layer) in self.layers.iter().enumerate() {
            let (head, tail) = acts.split_at_mut(l + 1);
            forward_layer(layer, &head[l], &mut tail[0], batch, l + 1 < n_layers);
        }
    }

    pub fn predict(&self, x: &Matrix) -> Vec<u8> {
        let k = self.n_classes;
        let dims = self.dims();
        let mut acts: Vec<Vec<f64>> = dims.iter().map(|&d| vec![0.0; d]).collect();
        let mut out = Vec::with_capacity(x.n_rows());
        for i in 0..x.n_rows() {
            self.logits_into(x, &[i], &mut acts);
            let logits = &acts[acts.len() - 1][..k];
            let mut best = 0usize;
            for (c, &v) in logits.iter().enumerate() {
                if v > logits[best] {
                    best = c;
                }
            }
            out.push(best as u8);
        }
        out
    }

    /// Mean cross-entropy and parameter gradients over one batch; used by
    /// training and by the finite-difference gradient check.
    fn batch_loss_and_grads(
        &self,
        x: &Matrix,
        y: &[u8],
        idx: &[usize],
        acts: &mut [Vec<f64>],
        deltas: &mut [Vec<f64>],
        grads: &mut [(Vec<f64>, Vec<f64>)],
    ) -> f64 {
        let batch = idx.len();
        let k = self.n_classes;
        self.logits_into(x, idx, acts);

        let last = acts.len() - 1;
        let logits = &mut acts[last];
        let mut loss = 0.0;
        {
            let probs = logits;
            softmax_rows(probs, k, batch);
            for (s, &i) in idx.iter().enumerate() {
                loss -= probs[s * k + y[i] as usize].max(1e-300).ln();
            }
            loss /= batch as f64;
            let dl = &mut deltas[last - 1];
            for (s, &i) in idx.iter().enumerate() {
                for c in 0..k {
                    let one_hot = (y[i] as usize == c) as u8 as f64;
                    dl[s * k + c] = (probs[s * k + c] - one_hot) / batch as f64;
                }
            }
        }

        for l in (0..self.layers.len()).rev() {
            let layer = &self.layers[l];
            let (din, dout) = (layer.in_dim, layer.out_dim);
            let (gw, gb) = &mut grads[l];
            gw.iter_mut().for_each(|v| *v = 0.0);
            gb.iter_mut().for_each(|v| *v = 0.0);
            for s in 0..batch {
                let prev = &acts[l][s * din..(s + 1) * din];
                let delta = &deltas[l][s * dout..(s + 1) * dout];
                for o in 0..dout {
                    let d = delta[o];
                    if d == 0.0 {
                        continue;
                    }
                    gb[o] += d;
                    let grow = &mut gw[o * din..(o + 1) * din];
                    for (g, &p) in grow.iter_mut().zip(prev) {
                        *g += d * p;
                    }
                }
            }
            if l > 0 {
                // Propagate into the previous delta buffer and apply the
                // rectifier mask (activation > 0).
                let (dprev_slice, dcur_slice) = deltas.split_at_mut(l);
                let dprev = &mut dprev_slice[l - 1];
                let dcur = &dcur_slice[0];
                for s in 0..batch {
                    let dp = &mut dprev[s * din..(s + 1) * din];
                    dp.iter_mut().for_each(|v| *v = 0.0);
                    let dc = &dcur[s * dout..(s + 1) * dout];
                    for (o, &d) in dc.iter().enumerate() {
                        if d == 0.0 {
                            continue;
                        }
                        let wrow = &layer.w[o * din..(o + 1) * din];
                        for (dpv, &w) in dp.iter_mut().zip(wrow) {
                            *dpv += d * w;
                        }
                    }
                    let prev = &acts[l][s * din..(s + 1) * din];
                    for (dpv, &a) in dp.iter_mut().zip(prev) {
                        if a <= 0.0 {
                            *dpv = 0.0;
                        }
                    }
                }
            }
        }
        loss
    }

    /// Largest relative deviation between analytic layer gradients and
    /// central finite differences on the given batch. Verification utility;
    /// a healthy backward pass stays under ~1e-6 for f64.
    pub fn gradient_check(&mut self, x: &Matrix, y: &[u8]) -> f64 {
        let dims = self.dims();
        let batch = x.n_rows();
        let idx: Vec<usize> = (0..batch).collect();
        let mut acts: Vec<Vec<f64>> = dims.iter().map(|&d| vec![0.0; batch * d]).collect();
        let mut deltas: Vec<Vec<f64>> =
            dims[1..].iter().map(|&d| vec![0.0; batch * d]).collect();
        let mut grads: Vec<(Vec<f64>, Vec<f64>)> = self
            .layers
            .iter()
            .map(|l| (vec![0.0; l.w.len()], vec![0.0; l.b.len()]))
            .collect();
        let _ = self.batch_loss_and_grads(x, y, &idx, &mut acts, &mut deltas, &mut grads);
        let analytic = grads.clone();

        let h = 1e-6;
        let mut worst: f64 = 0.0;
        for l in 0..self.layers.len() {
            for p in 0..self.layers[l].w.len() {
                let orig = self.layers[l].w[p];
                self.layers[l].w[p] = orig + h;
                let lp = self.batch_loss_and_grads(x, y, &idx, &mut acts, &mut deltas, &mut grads);
                self.layers[l].w[p] = orig - h;
                let lm = self.batch_loss_and_grads(x, y, &idx, &mut acts, &mut deltas, &mut grads);
                self.layers[l].w[p] = orig;
                let fd = (lp - lm) / (2.0 * h);
                worst = worst.max((fd - analytic[l].0[p]).abs() / (1.0 + fd.abs()));
            }
            for p in 0..self.layers[l].b.len() {
                let orig = self.layers[l].b[p];
                self.layers[l].b[p] = orig + h;
                let lp = self.batch_loss_and_grads(x, y, &idx, &mut acts, &mut deltas, &mut grads);
                self.layers[l].b[p] = orig - h;
                let lm = self.batch_loss_and_grads(x, y, &idx, &mut acts, &mut deltas, &mut grads);
                self.layers[l].b[p] = orig;
                let fd = (lp - lm) / (2.0 * h);
                worst = worst.max((fd - analytic[l].1[p]).abs() / (1.0 + fd.abs()));
            }
        }
        worst
    }

    /// Train on z-scored features. Fails if the loss turns non-finite
    /// (suggesting a smaller learning rate).
    pub fn fit(
        x: &Matrix,
        y: &[u8],
        n_classes: usize,
        cfg: &MlpConfig,
        seed: u64,
    ) -> Result<MlpModel> {
        if x.n_rows() == 0 {
            return Err(Error::BadData("cannot fit an MLP on zero rows".into()));
        }
        let mut model = MlpModel::init(x.n_cols(), &cfg.hidden, n_classes, seed)?;
        let dims = model.dims();

        // Early-stopping split.
        let (train_idx, val_idx) = if cfg.val_fraction > 0.0 && x.n_rows() >= 10 {
            stratified_split(y, cfg.val_fraction, seeding::mix(seed, &[TAG_SPLIT]))?
        } else {
            ((0..x.n_rows()).collect(), Vec::new())
        };
        let y_val: Vec<u8> = val_idx.iter().map(|&i| y[i]).collect();

        let batch_cap = cfg.batch.max(1).min(train_idx.len().max(1));
        let mut acts: Vec<Vec<f64>> = dims.iter().map(|&d| vec![0.0; batch_cap * d]).collect();
        let mut deltas: Vec<Vec<f64>> =
            dims[1..].iter().map(|&d| vec![0.0; batch_cap * d]).collect();
        let mut grads: Vec<(Vec<f64>, Vec<f64>)> = model
            .layers
            .iter()
            .map(|l| (vec![0.0; l.w.len()], vec![0.0; l.b.len()]))
            .collect();
        let mut moments: Vec<Moments> = model
            .layers
            .iter()
            .map(|l| Moments {
                mw: vec![0.0; l.w.len()],
                vw: vec![0.0; l.w.len()],
                mb: vec![0.0; l.b.len()],
                vb: vec![0.0; l.b.len()],
            })
            .collect();

        let mut order = train_idx.clone();
        let mut best: Option<(f64, Vec<DenseLayer>)> = None;
        let mut stale_epochs = 0usize;
        let mut t = 0u64;

        for epoch in 0..cfg.epochs {
            use rand::seq::SliceRandom;
            let mut shuffle_rng = seeding::rng(seed, &[TAG_SHUFFLE, epoch as u64]);
            order.shuffle(&mut shuffle_rng);

            for chunk in order.chunks(batch_cap) {
                let loss = model.batch_loss_and_grads(x, y, chunk, &mut acts, &mut deltas, &mut grads);
                if !loss.is_finite() {
                    return Err(Error::Diverged(format!(
                        "non-finite training loss at epoch {epoch}; try a smaller learning rate"
                    )));
                }
                t += 1;
                let bc1 = 1.0 - BETA1.powi(t as i32);
                let bc2 = 1.0 - BETA2.powi(t as i32);
                for (l, layer) in model.layers.iter_mut().enumerate() {
                    let m = &mut moments[l];
                    let (gw, gb) = &grads[l];
                    for (((w, g), mw), vw) in
                        layer.w.iter_mut().zip(gw).zip(m.mw.iter_mut()).zip(m.vw.iter_mut())
                    {
                        *mw = BETA1 * *mw + (1.0 - BETA1) * g;
                        *vw = BETA2 * *vw + (1.0 - BETA2) * g * g;
                        *w -= cfg.learning_rate * (*mw / bc1) / ((*vw / bc2).sqrt() + ADAM_EPS);
                    }
                    for (((b, g), mb), vb) in
                        layer.b.iter_mut().zip(gb).zip(m.mb.iter_mut()).zip(m.vb.iter_mut())
                    {
                        *mb = BETA1 * *mb + (1.0 - BETA1) * g;
                        *vb = BETA2 * *vb + (1.0 - BETA2) * g * g;
                        *b -= cfg.learning_rate * (*mb / bc1) / ((*vb / bc2).sqrt() + ADAM_EPS);
                    }
                }
            }

            if !val_idx.is_empty() {
                let val_x = x.select_rows(&val_idx);
                let score = balanced_accuracy(&y_val, &model.predict(&val_x))?;
                if best.as_ref().is_none_or(|(b, _)| score > *b) {
                    best = Some((score, model.layers.clone()));
                    stale_epochs = 0;
                } else {
                    stale_epochs += 1;
                    if stale_epochs >= cfg.patience {
                        break;
                    }
                }
            }
        }

        if let Some((_, layers)) = best {
            model.layers = layers;
        }
        Ok(model)
    }
}
