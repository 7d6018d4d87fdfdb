//! Multiclass gradient boosting with softmax residuals.
//!
//! Each round fits one squared-error regression tree per class to the softmax
//! residual (one-hot minus predicted probability); leaf values take the
//! standard multiclass Newton step. Scores start at the log class priors, so
//! zero rounds predict the majority class.

use serde::{Deserialize, Serialize};

use crate::data::Matrix;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GbmConfig {
    pub n_rounds: usize,
    pub learning_rate: f64,
    pub max_depth: usize,
    pub min_leaf: usize,
}

impl Default for GbmConfig {
    fn default() -> Self {
        GbmConfig { n_rounds: 100, learning_rate: 0.1, max_depth: 3, min_leaf: 5 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
enum RegNode {
    Split { feature: usize, threshold: f64, left: usize, right: usize },
    Leaf { value: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegTree {
    nodes: Vec<RegNode>,
}

struct RegBuilder<'a> {
    x: &'a Matrix,
    targets: &'a [f64],
    hessians: &'a [f64],
    leaf_scale: f64,
    cfg: GbmConfig,
    nodes: Vec<RegNode>,
    scratch: Vec<(f64, f64)>,
}

impl<'a> RegBuilder<'a> {
    fn leaf_value(&self, idx: &[usize]) -> f64 {
        let num: f64 = idx.iter().map(|&i| self.targets[i]).sum();
        let den: f64 = idx.iter().map(|&i| self.hessians[i]).sum();
        if den.abs() < 1e-12 {
            0.0
        } else {
            self.leaf_scale * num / den
        }
    }

    /// Best squared-error split: maximize (sum_L)^2/n_L + (sum_R)^2/n_R.
    fn best_split(&mut self, idx: &[usize]) -> Option<(usize, f64)> {
        let n = idx.len();
        if n < 2 * self.cfg.min_leaf {
            return None;
        }
        let total: f64 = idx.iter().map(|&i| self.targets[i]).sum();
        let mut best: Option<(usize, f64, f64)> = None;
        for f in 0..self.x.n_cols() {
            self.scratch.clear();
            self.scratch.extend(idx.iter().map(|&i| (self.x.get(i, f), self.targets[i])));
            self.scratch.sort_unstable_by(|a, b| a.0.total_cmp(&b.0));
            let mut sum_left = 0.0;
            for i in 0..n - 1 {
                sum_left += self.scratch[i].1;
                let v = self.scratch[i].0;
                let next = self.scratch[i + 1].0;
                if v >= next {
                    continue;
                }
                let n_left = i + 1;
                let n_right = n - n_left;
                if n_left < self.cfg.min_leaf || n_right < self.cfg.min_leaf {
                    continue;
                }
                let sum_right = total - sum_left;
                let score = sum_left * sum_left / n_left as f64
                    + sum_right * sum_right / n_right as f64;
                if best.is_none_or(|(_, _, s)| score > s) {
                    best = Some((f, 0.5 * (v + next), score));
                }
            }
        }
        best.map(|(f, t, _)| (f, t))
    }

    fn build(&mut self, idx: Vec<usize>, depth: usize) -> usize {
        let split = if depth < self.cfg.max_depth { self.best_split(&idx) } else { None };
        match split {
            None => {
                self.nodes.push(RegNode::Leaf { value: self.leaf_value(&idx) });
                self.nodes.len() - 1
            }
            Some((feature, threshold)) => {
                let (l_idx, r_idx): (Vec<usize>, Vec<usize>) =
                    idx.into_iter().partition(|&i| self.x.get(i, feature) <= threshold);
                let pos = self.nodes.len();
                self.nodes.push(RegNode::Split { feature, threshold, left: 0, right: 0 });
                let l = self.build(l_idx, depth + 1);
                let r = self.build(r_idx, depth + 1);
                if let RegNode::Split { left, right, .. } = &mut self.nodes[pos] {
                    *left = l;
                    *right = r;
                }
                pos
            }
        }
    }
}

impl RegTree {
    fn predict_row(&self, row: &[f64]) -> f64 {
        let mut at = 0usize;
        loop {
            match &self.nodes[at] {
                RegNode::Leaf { value } => return *value,
                RegNode::Split { feature, threshold, left, right } => {
                    at = if row[*feature] <= *threshold { *left } else { *right };
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GbmModel {
    pub n_classes: usize,
    base_scores: Vec<f64>,
    /// `rounds[r][k]` is the round-r tree for class k.
    rounds: Vec<Vec<RegTree>>,
    learning_rate: f64,
    /// Mean train cross-entropy after each round (index 0 = priors only).
    pub train_loss_trace: Vec<f64>,
}

fn softmax_rows(scores: &mut [f64], n_classes: usize) {
    for row in scores.chunks_exact_mut(n_classes) {
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

impl GbmModel {
    pub fn fit(x: &Matrix, y: &[u8], n_classes: usize, cfg: GbmConfig) -> GbmModel {
        let n = x.n_rows();
        let k = n_classes;
        let leaf_scale = (k as f64 - 1.0) / k as f64;

        let mut counts = vec![0usize; k];
        for &label in y {
            counts[label as usize] += 1;
        }
        let base_scores: Vec<f64> =
            counts.iter().map(|&c| ((c.max(1)) as f64 / n as f64).ln()).collect();

        let mut scores: Vec<f64> = Vec::with_capacity(n * k);
        for _ in 0..n {
            scores.extend_from_slice(&base_scores);
        }

        let mean_ce = |probs: &[f64]| -> f64 {
            y.iter()
                .enumerate()
                .map(|(i, &label)| -(probs[i * k + label as usize].max(1e-300)).ln())
                .sum::<f64>()
                / n as f64
        };

        let mut probs = scores.clone();
        softmax_rows(&mut probs, k);
        let mut train_loss_trace = vec![mean_ce(&probs)];

        let mut rounds = Vec::with_capacity(cfg.n_rounds);
        let mut targets = vec![0.0; n];
        let mut hessians = vec![0.0; n];
        let all_idx: Vec<usize> = (0..n).collect();
        for _ in 0..cfg.n_rounds {
            let mut round_trees = Vec::with_capacity(k);
            for class in 0..k {
                for i in 0..n {
                    let p = probs[i * k + class];
                    let one_hot = (y[i] as usize == class) as u8 as f64;
                    targets[i] = one_hot - p;
                    hessians[i] = p.abs().max(1e-12) * (1.0 - p.abs());
                }
                let mut builder = RegBuilder {
                    x,
                    targets: &targets,
                    hessians: &hessians,
                    leaf_scale,
                    cfg,
                    nodes: Vec::new(),
                    scratch: Vec::new(),
                };
                builder.build(all_idx.clone(), 0);
                let tree = RegTree { nodes: builder.nodes };
                for i in 0..n {
                    scores[i * k + class] += cfg.learning_rate * tree.predict_row(x.row(i));
                }
                round_trees.push(tree);
            }
            rounds.push(round_trees);
            probs.copy_from_slice(&scores);
            softmax_rows(&mut probs, k);
            train_loss_trace.push(mean_ce(&probs));
        }

        GbmModel {
            n_classes: k,
            base_scores,
            rounds,
            learning_rate: cfg.learning_rate,
            train_loss_trace,
        }
    }

    pub fn decision_scores(&self, row: &[f64]) -> Vec<f64> {
        let mut scores = self.base_scores.clone();
        for round in &self.rounds {
            for (k, tree) in round.iter().enumerate() {
                scores[k] += self.learning_rate * tree.predict_row(row);
            }
        }
        scores
    }

    pub fn predict_row(&self, row: &[f64]) -> u8 {
        let scores = self.decision_scores(row);
        let mut best = 0usize;
        for (c, &s) in scores.iter().enumerate() {
            if s > scores[best] {
                best = c;
            }
        }
        best as u8
    }

    pub fn predict(&self, x: &Matrix) -> Vec<u8> {
        use rayon::prelude::*;
        (0..x.n_rows()).into_par_iter().map(|i| self.predict_row(x.row(i))).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy() -> (Matrix, Vec<u8>) {
        use rand::Rng;
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        let mut rng = crate::seeding::rng(41, &[]);
        for _ in 0..200 {
            let a: f64 = rng.random_range(-1.0..1.0);
            let b: f64 = rng.random_range(-1.0..1.0);
            rows.push(vec![a, b]);
            labels.push(if a + b > 0.5 {
                2u8
            } else if a + b > -0.5 {
                1
            } else {
                0
            });
        }
        (Matrix::from_rows(&rows).unwrap(), labels)
    }

    #[test]
    fn zero_rounds_predicts_majority() {
        let x = Matrix::from_rows(&[vec![0.0], vec![1.0], vec![2.0], vec![3.0]]).unwrap();
        let y = vec![1u8, 1, 1, 0];
        let m = GbmModel::fit(&x, &y, 2, GbmConfig { n_rounds: 0, ..Default::default() });
        assert_eq!(m.predict(&x), vec![1, 1, 1, 1]);
    }

    #[test]
    fn train_loss_non_increasing() {
        let (x, y) = toy();
        let m = GbmModel::fit(
            &x,
            &y,
            3,
            GbmConfig { n_rounds: 40, learning_rate: 0.1, max_depth: 3, min_leaf: 2 },
        );
        for w in m.train_loss_trace.windows(2) {
            assert!(w[1] <= w[0] + 1e-9, "loss increased: {} -> {}", w[0], w[1]);
        }
    }

    #[test]
    fn fits_the_toy_problem() {
        let (x, y) = toy();
        let m = GbmModel::fit(
            &x,
            &y,
            3,
            GbmConfig { n_rounds: 60, learning_rate: 0.2, max_depth: 3, min_leaf: 2 },
        );
        let acc = crate::learners::metrics::agreement(&m.predict(&x), &y).unwrap();
        assert!(acc > 0.93, "train accuracy {acc}");
    }
}
