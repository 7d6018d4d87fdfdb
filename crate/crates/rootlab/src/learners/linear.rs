//! Multinomial logistic regression trained by full-batch gradient descent
//! with backtracking line search. Expects z-scored inputs.

use serde::{Deserialize, Serialize};

use crate::data::Matrix;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogRegConfig {
    pub l2: f64,
    pub max_iters: usize,
}

impl Default for LogRegConfig {
    fn default() -> Self {
        LogRegConfig { l2: 1e-4, max_iters: 500 }
    }
}

/// Gradient-norm convergence threshold.
pub const GRAD_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogRegModel {
    /// Row-major (n_classes x n_features).
    pub weights: Vec<f64>,
    pub bias: Vec<f64>,
    pub n_classes: usize,
    pub n_features: usize,
}

fn softmax_in_place(scores: &mut [f64]) {
    let m = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut z = 0.0;
    for v in scores.iter_mut() {
        *v = (*v - m).exp();
        z += *v;
    }
    for v in scores.iter_mut() {
        *v /= z;
    }
}

impl LogRegModel {
    fn scores_row(&self, row: &[f64]) -> Vec<f64> {
        let d = self.n_features;
        (0..self.n_classes)
            .map(|k| {
                let wrow = &self.weights[k * d..(k + 1) * d];
                let mut acc = self.bias[k];
                for (w, x) in wrow.iter().zip(row) {
                    acc += w * x;
                }
                acc
            })
            .collect()
    }

    /// Mean cross-entropy with L2 penalty on the weights (bias unpenalized),
    /// plus the full gradient.
    pub fn loss_grad(&self, x: &Matrix, y: &[u8], l2: f64) -> (f64, Vec<f64>, Vec<f64>) {
        let n = x.n_rows();
        let d = self.n_features;
        let k = self.n_classes;
        let mut loss = 0.0;
        let mut gw = vec![0.0; k * d];
        let mut gb = vec![0.0; k];
        for i in 0..n {
            let row = x.row(i);
            let mut p = self.scores_row(row);
            softmax_in_place(&mut p);
            loss -= p[y[i] as usize].max(1e-300).ln();
            for (c, pc) in p.iter().enumerate() {
                let delta = pc - ((y[i] as usize == c) as u8 as f64);
                gb[c] += delta;
                let grow = &mut gw[c * d..(c + 1) * d];
                for (g, &xv) in grow.iter_mut().zip(row) {
                    *g += delta * xv;
                }
            }
        }
        loss /= n as f64;
        for g in gw.iter_mut() {
            *g /= n as f64;
        }
        for g in gb.iter_mut() {
            *g /= n as f64;
        }
        let mut penalty = 0.0;
        for (g, &w) in gw.iter_mut().zip(&self.weights) {
            penalty += w * w;
            *g += l2 * w;
        }
        loss += 0.5 * l2 * penalty;
        (loss, gw, gb)
    }

    /// Full-batch gradient descent with Armijo backtracking until the
    /// gradient norm falls under [`GRAD_TOL`] or the iteration cap.
    pub fn fit(x: &Matrix, y: &[u8], n_classes: usize, cfg: LogRegConfig) -> Result<LogRegModel> {
        let d = x.n_cols();
        let mut model = LogRegModel {
            weights: vec![0.0; n_classes * d],
            bias: vec![0.0; n_classes],
            n_classes,
            n_features: d,
        };
        let mut step = 1.0f64;
        for _ in 0..cfg.max_iters {
            let (loss, gw, gb) = model.loss_grad(x, y, cfg.l2);
            if !loss.is_finite() {
                return Err(Error::Diverged("non-finite logistic loss".into()));
            }
            let grad_sq: f64 =
                gw.iter().map(|g| g * g).sum::<f64>() + gb.iter().map(|g| g * g).sum::<f64>();
            if grad_sq.sqrt() < GRAD_TOL {
                break;
            }
            // Backtracking: shrink until the Armijo condition holds.
            step = (step * 2.0).min(16.0);
            let mut accepted = false;
            for _ in 0..60 {
                let mut cand = model.clone();
                for (w, g) in cand.weights.iter_mut().zip(&gw) {
                    *w -= step * g;
                }
                for (b, g) in cand.bias.iter_mut().zip(&gb) {
                    *b -= step * g;
                }
                let (cand_loss, _, _) = cand.loss_grad(x, y, cfg.l2);
                if cand_loss.is_finite() && cand_loss <= loss - 0.5 * step * grad_sq {
                    model = cand;
                    accepted = true;
                    break;
                }
                step *= 0.5;
            }
            if !accepted {
                break; // step underflow: no further progress possible
            }
        }
        Ok(model)
    }

    pub fn predict_row(&self, row: &[f64]) -> u8 {
        let scores = self.scores_row(row);
        let mut best = 0usize;
        for (c, &s) in scores.iter().enumerate() {
            if s > scores[best] {
                best = c;
            }
        }
        best as u8
    }

    pub fn predict(&self, x: &Matrix) -> Vec<u8> {
        (0..x.n_rows()).map(|i| self.predict_row(x.row(i))).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn separable_toy_reaches_full_accuracy() {
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        let mut rng = crate::seeding::rng(51, &[]);
        use rand::Rng;
        for _ in 0..100 {
            let a: f64 = rng.random_range(-1.0..1.0);
            let b: f64 = rng.random_range(-1.0..1.0);
            rows.push(vec![a, b]);
            labels.push((a > 0.0) as u8);
        }
        let x = Matrix::from_rows(&rows).unwrap();
        let m = LogRegModel::fit(&x, &labels, 2, LogRegConfig { l2: 1e-6, max_iters: 400 })
            .unwrap();
        assert_eq!(m.predict(&x), labels);
    }

    #[test]
    fn analytic_gradient_matches_finite_differences() {
        let x = Matrix::from_rows(&[
            vec![0.3, -1.2],
            vec![-0.7, 0.4],
            vec![1.5, 0.9],
            vec![-0.2, -0.5],
        ])
        .unwrap();
        let y = vec![0u8, 1, 2, 1];
        let mut m = LogRegModel {
            weights: vec![0.1, -0.2, 0.05, 0.3, -0.4, 0.2],
            bias: vec![0.01, -0.02, 0.0],
            n_classes: 3,
            n_features: 2,
        };
        let l2 = 1e-3;
        let (_, gw, gb) = m.loss_grad(&x, &y, l2);
        let h = 1e-5;
        for p in 0..m.weights.len() {
            let orig = m.weights[p];
            m.weights[p] = orig + h;
            let (lp, _, _) = m.loss_grad(&x, &y, l2);
            m.weights[p] = orig - h;
            let (lm, _, _) = m.loss_grad(&x, &y, l2);
            m.weights[p] = orig;
            let fd = (lp - lm) / (2.0 * h);
            assert!((fd - gw[p]).abs() < 1e-6, "weight {p}: fd {fd} vs analytic {}", gw[p]);
        }
        for p in 0..m.bias.len() {
            let orig = m.bias[p];
            m.bias[p] = orig + h;
            let (lp, _, _) = m.loss_grad(&x, &y, l2);
            m.bias[p] = orig - h;
            let (lm, _, _) = m.loss_grad(&x, &y, l2);
            m.bias[p] = orig;
            let fd = (lp - lm) / (2.0 * h);
            assert!((fd - gb[p]).abs() < 1e-6, "bias {p}: fd {fd} vs analytic {}", gb[p]);
        }
    }

    #[test]
    fn argmax_invariant_under_score_shift() {
        let m = LogRegModel {
            weights: vec![0.5, -0.3, -0.1, 0.8],
            bias: vec![0.2, -0.2],
            n_classes: 2,
            n_features: 2,
        };
        let mut shifted = m.clone();
        for b in shifted.bias.iter_mut() {
            *b += 7.5;
        }
        let x = Matrix::from_rows(&[vec![0.1, 0.9], vec![-1.0, 0.3], vec![2.0, -2.0]]).unwrap();
        assert_eq!(m.predict(&x), shifted.predict(&x));
    }
}
