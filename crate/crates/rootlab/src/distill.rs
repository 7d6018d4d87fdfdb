//! NN→tree knowledge distillation, feature importance, and rule extraction.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::{select_labels, Matrix};
use crate::dataset::split::stratified_split;
use crate::dataset::LabeledDataset;
use crate::error::{Error, Result};
use crate::learners::{
    agreement, balanced_accuracy, fit, ModelSpec, TrainedModel, TreeModel, TreeNode,
};
use crate::seeding::{self, TAG_PERM, TAG_SPLIT, TAG_TRAIN};

/// Distillation recipe: teacher network, surrogate tree shape, split, and
/// importance estimation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistillConfig {
    pub nn: ModelSpec,
    pub tree_depth: usize,
    pub tree_min_leaf: usize,
    pub test_fraction: f64,
    pub importance_repeats: usize,
    pub seed: u64,
}

impl DistillConfig {
    pub fn new(seed: u64) -> DistillConfig {
        DistillConfig {
            nn: ModelSpec::mlp_default(),
            tree_depth: 4,
            tree_min_leaf: 20,
            test_fraction: 0.2,
            importance_repeats: 5,
            seed,
        }
    }
}

/// Outcome of one distillation run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistillReport {
    pub nn_test_balanced_accuracy: f64,
    /// Agreement between surrogate and network on the held-out rows.
    pub tree_fidelity: f64,
    /// Surrogate balanced accuracy against ground truth on the held-out rows.
    pub tree_standalone: f64,
    /// Permutation-importance shares of the surrogate (sum to 1).
    pub importance: BTreeMap<String, f64>,
    /// Gini impurity-importance shares of the surrogate (sum to 1).
    pub impurity_importance: BTreeMap<String, f64>,
    pub rules_text: String,
}

/// Train the teacher on true labels, relabel the training rows with its
/// predictions, fit the surrogate tree on those predictions, and measure
/// fidelity (tree vs teacher) and standalone accuracy (tree vs truth) on the
/// held-out split.
pub fn distill(ds: &LabeledDataset, cfg: &DistillConfig) -> Result<DistillReport> {
    let classes: std::collections::BTreeSet<u8> = ds.labels.iter().copied().collect();
    if classes.len() < 2 {
        return Err(Error::BadData("distillation needs at least two classes".into()));
    }
    let x = ds.select_features(&ds.feature_names)?;
    let (train, test) = stratified_split(
        &ds.labels,
        cfg.test_fraction,
        seeding::mix(cfg.seed, &[TAG_SPLIT]),
    )?;
    let x_train = x.select_rows(&train);
    let y_train = select_labels(&ds.labels, &train);
    let x_test = x.select_rows(&test);
    let y_test = select_labels(&ds.labels, &test);

    let teacher = fit(
        &cfg.nn,
        &x_train,
        &y_train,
        ds.n_classes(),
        ds.feature_names.clone(),
        seeding::mix(cfg.seed, &[TAG_TRAIN, 0]),
    )?;
    let teacher_train_labels = teacher.predict(&x_train)?;
    let teacher_test_labels = teacher.predict(&x_test)?;

    let surrogate_spec =
        ModelSpec::Tree { max_depth: cfg.tree_depth, min_leaf: cfg.tree_min_leaf };
    let surrogate = fit(
        &surrogate_spec,
        &x_train,
        &teacher_train_labels,
        ds.n_classes(),
        ds.feature_names.clone(),
        seeding::mix(cfg.seed, &[TAG_TRAIN, 1]),
    )?;
    let surrogate_test_labels = surrogate.predict(&x_test)?;

    let nn_test_balanced_accuracy = balanced_accuracy(&y_test, &teacher_test_labels)?;
    let tree_fidelity = agreement(&surrogate_test_labels, &teacher_test_labels)?;
    let tree_standalone = balanced_accuracy(&y_test, &surrogate_test_labels)?;

    let importance = permutation_importance(
        &surrogate,
        &x_test,
        &y_test,
        seeding::mix(cfg.seed, &[TAG_PERM]),
        cfg.importance_repeats,
    )?;

    let tree = surrogate.as_tree().expect("surrogate is a tree by construction");
    let impurity_importance: BTreeMap<String, f64> = ds
        .feature_names
        .iter()
        .cloned()
        .zip(tree.feature_importance.iter().copied())
        .collect();

    let rules_text = extract_rules(tree, &ds.feature_names);

    Ok(DistillReport {
        nn_test_balanced_accuracy,
        tree_fidelity,
        tree_standalone,
        importance,
        impurity_importance,
        rules_text,
    })
}

/// Mean balanced-accuracy drop per feature over `repeats` independent
/// within-column shuffles, clamped at zero and normalized to shares.
///
/// A feature that is constant across rows shuffles to itself, drops nothing,
/// and gets share 0. If no feature produces a positive drop the shares are
/// all zero rather than an arbitrary split.
pub fn permutation_importance(
    model: &TrainedModel,
    x: &Matrix,
    y: &[u8],
    seed: u64,
    repeats: usize,
) -> Result<BTreeMap<String, f64>> {
    if repeats == 0 {
        return Err(Error::BadData("permutation importance needs repeats >= 1".into()));
    }
    let baseline = balanced_accuracy(y, &model.predict(x)?)?;
    let n = x.n_rows();
    let n_features = x.n_cols();

    let drops: Vec<f64> = (0..n_features)
        .into_par_iter()
        .map(|f| -> Result<f64> {
            let mut total = 0.0;
            for rep in 0..repeats {
                let mut rng = seeding::rng(seed, &[TAG_PERM, f as u64, rep as u64]);
                let mut perm: Vec<usize> = (0..n).collect();
                perm.shuffle(&mut rng);
                let mut shuffled = x.clone();
                for (i, &j) in perm.iter().enumerate() {
                    shuffled.set(i, f, x.get(j, f));
                }
                let score = balanced_accuracy(y, &model.predict(&shuffled)?)?;
                total += baseline - score;
            }
            Ok((total / repeats as f64).max(0.0))
        })
        .collect::<Result<Vec<f64>>>()?;

    let total: f64 = drops.iter().sum();
    let shares = drops
        .into_iter()
        .map(|d| if total > 0.0 { d / total } else { 0.0 })
        .collect::<Vec<f64>>();
    Ok(model.feature_names.iter().cloned().zip(shares).collect())
}

fn purity(counts: &[u32]) -> f64 {
    let total: u32 = counts.iter().sum();
    if total == 0 {
        return 1.0;
    }
    *counts.iter().max().expect("nonempty counts") as f64 / total as f64
}

/// Human-readable if/else rendering of a fitted tree. Thresholds print with
/// the shortest decimal that parses back to the exact split value, so
/// re-evaluating the printed rules reproduces the tree bit-for-bit.
pub fn extract_rules(tree: &TreeModel, feature_names: &[String]) -> String {
    fn walk(
        nodes: &[TreeNode],
        at: usize,
        names: &[String],
        depth: usize,
        out: &mut String,
    ) {
        let pad = "    ".repeat(depth);
        match &nodes[at] {
            TreeNode::Leaf { class, counts } => {
                let n: u32 = counts.iter().sum();
                out.push_str(&format!(
                    "{pad}predict class {class}  (purity {:.1}%, n={n})\n",
                    purity(counts) * 100.0
                ));
            }
            TreeNode::Split { feature, threshold, left, right } => {
                out.push_str(&format!("{pad}if {} <= {} {{\n", names[*feature], threshold));
                walk(nodes, *left, names, depth + 1, out);
                out.push_str(&format!("{pad}}} else {{\n"));
                walk(nodes, *right, names, depth + 1, out);
                out.push_str(&format!("{pad}}}\n"));
            }
        }
    }
    let mut out = String::new();
    walk(tree.nodes(), 0, feature_names, 0, &mut out);
    out
}
