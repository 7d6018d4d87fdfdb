//! CART decision tree with Gini impurity.
//!
//! Split search scans every candidate feature and every midpoint between
//! consecutive distinct sorted values; ties are broken toward the lowest
//! feature index and then the lowest threshold (the scan keeps the first
//! strict minimum). Leaves predict the majority class, ties toward the lowest
//! class id.

use serde::{Deserialize, Serialize};

use crate::data::Matrix;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TreeConfig {
    pub max_depth: usize,
    /// Minimum rows in each child of a split.
    pub min_leaf: usize,
}

impl Default for TreeConfig {
    fn default() -> Self {
        TreeConfig { max_depth: 12, min_leaf: 5 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum TreeNode {
    Split { feature: usize, threshold: f64, left: usize, right: usize },
    Leaf { class: u8, counts: Vec<u32> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeModel {
    nodes: Vec<TreeNode>,
    pub n_classes: usize,
    pub n_features: usize,
    /// Impurity importance per feature, normalized to sum 1 (all zeros for a
    /// split-free stump).
    pub feature_importance: Vec<f64>,
}

struct BestSplit {
    feature: usize,
    threshold: f64,
    weighted_gini: f64,
}

struct Builder<'a, F: FnMut(usize) -> Vec<usize>> {
    x: &'a Matrix,
    y: &'a [u8],
    n_classes: usize,
    cfg: TreeConfig,
    feature_picker: F,
    nodes: Vec<TreeNode>,
    importance: Vec<f64>,
    n_total: usize,
    scratch: Vec<(f64, u8)>,
}

fn class_counts(y: &[u8], idx: &[usize], n_classes: usize) -> Vec<u32> {
    let mut counts = vec![0u32; n_classes];
    for &i in idx {
        counts[y[i] as usize] += 1;
    }
    counts
}

fn majority(counts: &[u32]) -> u8 {
    let mut best = 0usize;
    for (c, &n) in counts.iter().enumerate() {
        if n > counts[best] {
            best = c;
        }
    }
    best as u8
}

fn gini(counts: &[u32], n: usize) -> f64 {
    let s: u64 = counts.iter().map(|&c| c as u64 * c as u64).sum();
    1.0 - s as f64 / (n as f64 * n as f64)
}

impl<'a, F: FnMut(usize) -> Vec<usize>> Builder<'a, F> {
    fn best_split(&mut self, idx: &[usize], counts: &[u32]) -> Option<BestSplit> {
        let n = idx.len();
        if n < 2 * self.cfg.min_leaf {
            return None;
        }
        let mut features = (self.feature_picker)(self.x.n_cols());
        features.sort_unstable();
        features.dedup();

        let mut best: Option<BestSplit> = None;
        let mut left = vec![0u32; self.n_classes];
        for &f in &features {
            self.scratch.clear();
            self.scratch.extend(idx.iter().map(|&i| (self.x.get(i, f), self.y[i])));
            self.scratch.sort_unstable_by(|a, b| a.0.total_cmp(&b.0));

            left.iter_mut().for_each(|c| *c = 0);
            // Incremental sums of squared class counts on each side.
            let mut sq_left: u64 = 0;
            let mut sq_right: u64 = counts.iter().map(|&c| c as u64 * c as u64).sum();
            for i in 0..n - 1 {
                let (v, label) = self.scratch[i];
                let c = label as usize;
                sq_left += 2 * left[c] as u64 + 1;
                let right_count = counts[c] - left[c] - 1;
                sq_right -= 2 * right_count as u64 + 1;
                left[c] += 1;

                let next = self.scratch[i + 1].0;
                if v >= next {
                    continue;
                }
                let n_left = i + 1;
                let n_right = n - n_left;
                if n_left < self.cfg.min_leaf || n_right < self.cfg.min_leaf {
                    continue;
                }
                // n_side * gini_side = n_side - sq_side / n_side
                let weighted = (n_left as f64 - sq_left as f64 / n_left as f64)
                    + (n_right as f64 - sq_right as f64 / n_right as f64);
                let weighted_gini = weighted / n as f64;
                if best.as_ref().is_none_or(|b| weighted_gini < b.weighted_gini) {
                    best = Some(BestSplit {
                        feature: f,
                        threshold: 0.5 * (v + next),
                        weighted_gini,
                    });
                }
            }
        }
        best
    }

    fn build(&mut self, idx: Vec<usize>, depth: usize) -> usize {
        let counts = class_counts(self.y, &idx, self.n_classes);
        let n = idx.len();
        let node_gini = gini(&counts, n);

        let split = if node_gini > 0.0 && depth < self.cfg.max_depth {
            self.best_split(&idx, &counts)
        } else {
            None
        };

        match split {
            None => {
                self.nodes.push(TreeNode::Leaf { class: majority(&counts), counts });
                self.nodes.len() - 1
            }
            Some(s) => {
                self.importance[s.feature] += n as f64 / self.n_total as f64
                    * (node_gini - s.weighted_gini);
                let (left_idx, right_idx): (Vec<usize>, Vec<usize>) =
                    idx.into_iter().partition(|&i| self.x.get(i, s.feature) <= s.threshold);
                let pos = self.nodes.len();
                self.nodes.push(TreeNode::Split {
                    feature: s.feature,
                    threshold: s.threshold,
                    left: 0,
                    right: 0,
                });
                let l = self.build(left_idx, depth + 1);
                let r = self.build(right_idx, depth + 1);
                if let TreeNode::Split { left, right, .. } = &mut self.nodes[pos] {
                    *left = l;
                    *right = r;
                }
                pos
            }
        }
    }
}

impl TreeModel {
    /// Fit on all rows with the full feature set.
    pub fn fit(x: &Matrix, y: &[u8], n_classes: usize, cfg: TreeConfig) -> TreeModel {
        let idx: Vec<usize> = (0..x.n_rows()).collect();
        TreeModel::fit_on(x, y, idx, n_classes, cfg, |d| (0..d).collect())
    }

    /// Fit on the given rows with a per-split candidate-feature picker
    /// (random forests pass a sampler; the picker runs in deterministic DFS
    /// build order).
    pub fn fit_on(
        x: &Matrix,
        y: &[u8],
        idx: Vec<usize>,
        n_classes: usize,
        cfg: TreeConfig,
        feature_picker: impl FnMut(usize) -> Vec<usize>,
    ) -> TreeModel {
        let n_total = idx.len().max(1);
        let mut b = Builder {
            x,
            y,
            n_classes,
            cfg,
            feature_picker,
            nodes: Vec::new(),
            importance: vec![0.0; x.n_cols()],
            n_total,
            scratch: Vec::new(),
        };
        b.build(idx, 0);
        let total: f64 = b.importance.iter().sum();
        if total > 0.0 {
            b.importance.iter_mut().for_each(|v| *v /= total);
        }
        TreeModel {
            nodes: b.nodes,
            n_classes,
            n_features: x.n_cols(),
            feature_importance: b.importance,
        }
    }

    pub fn predict_row(&self, row: &[f64]) -> u8 {
        let mut at = 0usize;
        loop {
            match &self.nodes[at] {
                TreeNode::Leaf { class, .. } => return *class,
                TreeNode::Split { feature, threshold, left, right } => {
                    at = if row[*feature] <= *threshold { *left } else { *right };
                }
            }
        }
    }

    pub fn predict(&self, x: &Matrix) -> Vec<u8> {
        (0..x.n_rows()).map(|i| self.predict_row(x.row(i))).collect()
    }

    pub fn nodes(&self) -> &[TreeNode] {
        &self.nodes
    }

    pub fn root(&self) -> &TreeNode {
        &self.nodes[0]
    }

    pub fn depth(&self) -> usize {
        fn walk(nodes: &[TreeNode], at: usize) -> usize {
            match &nodes[at] {
                TreeNode::Leaf { .. } => 0,
                TreeNode::Split { left, right, .. } => {
                    1 + walk(nodes, *left).max(walk(nodes, *right))
                }
            }
        }
        walk(&self.nodes, 0)
    }

    /// Split thresholds used on the given feature, in DFS order.
    pub fn thresholds_on(&self, feature: usize) -> Vec<f64> {
        self.nodes
            .iter()
            .filter_map(|n| match n {
                TreeNode::Split { feature: f, threshold, .. } if *f == feature => Some(*threshold),
                _ => None,
            })
            .collect()
    }
}
