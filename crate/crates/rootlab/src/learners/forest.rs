//! Random forest: bagged CART trees with per-split feature subsampling.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::tree::{TreeConfig, TreeModel};
use crate::data::Matrix;
use crate::seeding::{self, TAG_BOOTSTRAP, TAG_TREE};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ForestConfig {
    pub n_trees: usize,
    pub max_depth: usize,
    pub min_leaf: usize,
    /// Draw each tree's rows with replacement (off: every tree sees all rows).
    pub bootstrap: bool,
    /// Candidate features per split; None means floor(sqrt(n_features)).
    pub n_candidate_features: Option<usize>,
}

impl Default for ForestConfig {
    fn default() -> Self {
        ForestConfig {
            n_trees: 300,
            max_depth: 10,
            min_leaf: 1,
            bootstrap: true,
            n_candidate_features: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForestModel {
    pub trees: Vec<TreeModel>,
    pub n_classes: usize,
}

/// Sample `m` distinct feature indices by partial Fisher–Yates.
fn sample_features(n_features: usize, m: usize, rng: &mut impl Rng) -> Vec<usize> {
    let mut pool: Vec<usize> = (0..n_features).collect();
    for i in 0..m.min(n_features) {
        let j = rng.random_range(i..n_features);
        pool.swap(i, j);
    }
    pool.truncate(m.min(n_features));
    pool
}

impl ForestModel {
    /// Fit `n_trees` trees, each on a bootstrap sample with
    /// `floor(sqrt(n_features))` candidate features per split. Deterministic
    /// under `seed`: each tree derives its own RNG substream, so the rayon
    /// schedule cannot affect results.
    pub fn fit(x: &Matrix, y: &[u8], n_classes: usize, cfg: ForestConfig, seed: u64) -> ForestModel {
        let n = x.n_rows();
        let m = cfg
            .n_candidate_features
            .unwrap_or_else(|| (x.n_cols() as f64).sqrt().floor() as usize)
            .clamp(1, x.n_cols());
        let tree_cfg = TreeConfig { max_depth: cfg.max_depth, min_leaf: cfg.min_leaf };
        let trees: Vec<TreeModel> = (0..cfg.n_trees)
            .into_par_iter()
            .map(|t| {
                let idx: Vec<usize> = if cfg.bootstrap {
                    let mut boot_rng = seeding::rng(seed, &[TAG_BOOTSTRAP, t as u64]);
                    (0..n).map(|_| boot_rng.random_range(0..n)).collect()
                } else {
                    (0..n).collect()
                };
                let mut split_rng = seeding::rng(seed, &[TAG_TREE, t as u64]);
                TreeModel::fit_on(x, y, idx, n_classes, tree_cfg, move |d| {
                    sample_features(d, m, &mut split_rng)
                })
            })
            .collect();
        ForestModel { trees, n_classes }
    }

    pub fn predict_row(&self, row: &[f64]) -> u8 {
        let mut votes = vec![0u32; self.n_classes];
        for t in &self.trees {
            votes[t.predict_row(row) as usize] += 1;
        }
        let mut best = 0usize;
        for (c, &v) in votes.iter().enumerate() {
            if v > votes[best] {
                best = c;
            }
        }
        best as u8
    }

    pub fn predict(&self, x: &Matrix) -> Vec<u8> {
        (0..x.n_rows()).map(|i| self.predict_row(x.row(i))).collect()
    }
}
