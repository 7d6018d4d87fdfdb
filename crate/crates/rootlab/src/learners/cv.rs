//! Stratified cross-validation over multiple seeds.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::metrics::balanced_accuracy;
use super::{fit, ModelSpec};
use crate::data::select_labels;
use crate::dataset::split::stratified_kfold;
use crate::dataset::LabeledDataset;
use crate::error::Result;
use crate::seeding::{self, TAG_TRAIN};

/// Per-fold balanced-accuracy scores with their normal-approximation 95% CI.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub per_fold_scores: Vec<f64>,
    pub mean: f64,
    pub ci95: f64,
    pub n_seeds: usize,
    pub k_folds: usize,
}

impl EvalReport {
    pub fn from_scores(scores: Vec<f64>, n_seeds: usize, k_folds: usize) -> EvalReport {
        let n = scores.len().max(1) as f64;
        let mean = scores.iter().sum::<f64>() / n;
        let ci95 = if scores.len() > 1 {
            let var =
                scores.iter().map(|s| (s - mean) * (s - mean)).sum::<f64>() / (n - 1.0);
            1.96 * var.sqrt() / n.sqrt()
        } else {
            0.0
        };
        EvalReport { per_fold_scores: scores, mean, ci95, n_seeds, k_folds }
    }
}

/// k-fold stratified cross-validation repeated over `seeds`.
///
/// For each seed the dataset is partitioned once; each fold trains a fresh
/// model (train seed derived from seed and fold) on the selected feature
/// columns and scores balanced accuracy on the held-out fold. Scores are
/// collected in (seed, fold) order, so the report is deterministic no matter
/// how the fold jobs are scheduled.
pub fn cross_validate(
    ds: &LabeledDataset,
    spec: &ModelSpec,
    feature_cols: &[String],
    k: usize,
    seeds: &[u64],
) -> Result<EvalReport> {
    let x = ds.select_features(feature_cols)?;
    let n_classes = ds.n_classes();

    let mut jobs = Vec::with_capacity(seeds.len() * k);
    for &seed in seeds {
        let folds = stratified_kfold(&ds.labels, k, seed)?;
        for (fold_idx, fold) in folds.into_iter().enumerate() {
            jobs.push((seed, fold_idx, fold));
        }
    }

    let scores: Vec<f64> = jobs
        .into_par_iter()
        .map(|(seed, fold_idx, (train, test))| {
            let x_train = x.select_rows(&train);
            let y_train = select_labels(&ds.labels, &train);
            let x_test = x.select_rows(&test);
            let y_test = select_labels(&ds.labels, &test);
            let train_seed = seeding::mix(seed, &[TAG_TRAIN, fold_idx as u64]);
            let model =
                fit(spec, &x_train, &y_train, n_classes, feature_cols.to_vec(), train_seed)?;
            let pred = model.predict(&x_test)?;
            balanced_accuracy(&y_test, &pred)
        })
        .collect::<Result<Vec<f64>>>()?;

    Ok(EvalReport::from_scores(scores, seeds.len(), k))
}
