//! Robustness protocols: out-of-distribution extrapolation, data efficiency,
//! and input-noise sweeps comparing raw-coefficient networks against
//! invariant-feature decision trees across degrees 2–5.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::select_labels;
use crate::dataset::split::{stratified_kfold, stratified_subsample};
use crate::dataset::{add_noise, generate, DatasetConfig, LabeledDataset};
use crate::error::{Error, Result};
use crate::learners::{balanced_accuracy, cv::EvalReport, fit, ModelSpec, TrainedModel};
use crate::seeding::{self, TAG_NOISE, TAG_SUBSAMPLE, TAG_TEST_SET, TAG_TRAIN};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Protocol {
    Ood,
    Efficiency,
    Noise,
}

impl Protocol {
    pub fn name(&self) -> &'static str {
        match self {
            Protocol::Ood => "ood",
            Protocol::Efficiency => "efficiency",
            Protocol::Noise => "noise",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    RawNn,
    InvariantTree,
}

impl ModelKind {
    pub const BOTH: [ModelKind; 2] = [ModelKind::RawNn, ModelKind::InvariantTree];

    pub fn name(&self) -> &'static str {
        match self {
            ModelKind::RawNn => "raw_nn",
            ModelKind::InvariantTree => "invariant_tree",
        }
    }
}

/// Grid recipe for the three protocols.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StressConfig {
    pub degrees: Vec<usize>,
    pub ood_ranges: Vec<f64>,
    pub train_sizes: Vec<usize>,
    pub noise_sigmas: Vec<f64>,
    pub seeds: Vec<u64>,
    pub k_folds: usize,
    /// Rows in every held-out evaluation set.
    pub test_n: usize,
    /// Subsample draws per (size, seed) cell in the efficiency protocol.
    pub efficiency_replicates: usize,
}

impl Default for StressConfig {
    fn default() -> Self {
        StressConfig {
            degrees: vec![2, 3, 4, 5],
            ood_ranges: vec![10.0, 20.0, 50.0, 100.0],
            train_sizes: vec![25, 50, 100, 500, 1000, 5000],
            noise_sigmas: vec![0.0, 0.1, 0.5, 1.0, 2.0],
            seeds: vec![0, 1, 2],
            k_folds: 5,
            test_n: 5000,
            efficiency_replicates: 5,
        }
    }
}

impl StressConfig {
    pub fn validate(&self) -> Result<()> {
        if self.degrees.iter().any(|d| !(2..=5).contains(d)) {
            return Err(Error::BadData("stress degrees must lie in 2..=5".into()));
        }
        let increasing = |xs: &[f64]| xs.windows(2).all(|w| w[0] < w[1]);
        if !increasing(&self.ood_ranges) {
            return Err(Error::BadData("ood ranges must be strictly increasing".into()));
        }
        if !self.train_sizes.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::BadData("train sizes must be strictly increasing".into()));
        }
        if !increasing(&self.noise_sigmas) {
            return Err(Error::BadData("noise sigmas must be strictly increasing".into()));
        }
        if self.ood_ranges.first() != Some(&10.0) {
            return Err(Error::BadData(
                "the first OOD range must equal the training range bound (10)".into(),
            ));
        }
        if self.k_folds < 2 {
            return Err(Error::BadData("k_folds must be >= 2".into()));
        }
        Ok(())
    }
}

/// Invariant feature selection per degree: the quadratic ratio, the cubic
/// ratio, the quartic invariants with their sign indicators, and the quintic
/// critical-point family.
pub fn invariant_features_for(degree: usize) -> Result<Vec<String>> {
    match degree {
        2 => Ok(vec!["disc_ratio".into()]),
        3 => Ok(vec!["beta2_alpha3".into()]),
        4 => Ok(["inv_i", "inv_j", "delta_like", "sign_i", "sign_delta", "sign_p", "sign_d"]
            .iter()
            .map(|s| s.to_string())
            .collect()),
        5 => Ok(crate::features::FeatureFamily::CriticalPoints
            .feature_names()
            .iter()
            .map(|s| s.to_string())
            .collect()),
        d => Err(Error::InvalidDegree(d)),
    }
}

/// Raw-coefficient columns per degree.
pub fn raw_features_for(degree: usize) -> Result<Vec<String>> {
    crate::dataset::raw_feature_names(degree, degree >= 3)
}

fn model_spec_for(kind: ModelKind, degree: usize) -> ModelSpec {
    match kind {
        ModelKind::RawNn => ModelSpec::mlp_default(),
        ModelKind::InvariantTree => {
            if degree <= 3 {
                ModelSpec::tree_invariant_default()
            } else {
                ModelSpec::tree_deep_default()
            }
        }
    }
}

fn feature_cols_for(kind: ModelKind, degree: usize) -> Result<Vec<String>> {
    match kind {
        ModelKind::RawNn => raw_features_for(degree),
        ModelKind::InvariantTree => invariant_features_for(degree),
    }
}

/// One cell of the stress grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StressCell {
    pub protocol: Protocol,
    pub degree: usize,
    pub model_kind: ModelKind,
    /// Sweep coordinate: range bound, training-set size, or noise sigma.
    pub x: f64,
    pub mean: f64,
    pub ci95: f64,
    pub n_scores: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct StressReport {
    pub cells: Vec<StressCell>,
    /// Class-coverage repairs that fired while subsampling tiny train sets.
    pub n_coverage_repairs: usize,
}

impl StressReport {
    pub fn merge(&mut self, other: StressReport) {
        self.cells.extend(other.cells);
        self.n_coverage_repairs += other.n_coverage_repairs;
    }

    pub fn cell(&self, protocol: Protocol, degree: usize, kind: ModelKind, x: f64) -> Option<&StressCell> {
        self.cells.iter().find(|c| {
            c.protocol == protocol && c.degree == degree && c.model_kind == kind && c.x == x
        })
    }

    /// Tidy CSV: one row per cell.
    pub fn to_tidy_csv(&self) -> String {
        let mut out = String::from("protocol,degree,model,x,mean,ci95,n\n");
        for c in &self.cells {
            out.push_str(&format!(
                "{},{},{},{},{:.6},{:.6},{}\n",
                c.protocol.name(),
                c.degree,
                c.model_kind.name(),
                c.x,
                c.mean,
                c.ci95,
                c.n_scores
            ));
        }
        out
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

fn train_config(degree: usize, seed: u64) -> Result<DatasetConfig> {
    DatasetConfig::for_degree(degree, seed)
}

fn test_config(degree: usize, seed: u64, n: usize, range: f64) -> Result<DatasetConfig> {
    let mut cfg = DatasetConfig::for_degree(degree, seed)?;
    cfg.n_samples = n;
    cfg.coeff_range = (-range, range);
    Ok(cfg)
}

/// Fit both model kinds on the given training rows.
fn fit_both(
    ds: &LabeledDataset,
    rows: &[usize],
    degree: usize,
    train_seed: u64,
) -> Result<Vec<(ModelKind, TrainedModel)>> {
    ModelKind::BOTH
        .iter()
        .map(|&kind| {
            let cols = feature_cols_for(kind, degree)?;
            let x = ds.select_features(&cols)?.select_rows(rows);
            let y = select_labels(&ds.labels, rows);
            let spec = model_spec_for(kind, degree);
            let model = fit(&spec, &x, &y, ds.n_classes(), cols, train_seed)?;
            Ok((kind, model))
        })
        .collect()
}

fn eval_kind(
    model: &TrainedModel,
    kind: ModelKind,
    degree: usize,
    test: &LabeledDataset,
) -> Result<f64> {
    let cols = feature_cols_for(kind, degree)?;
    let x = test.select_features(&cols)?;
    balanced_accuracy(&test.labels, &model.predict(&x)?)
}

/// Per-grid-point fold scores keyed by (model kind, x-coordinate bits).
type PointScores = Vec<((ModelKind, u64), Vec<f64>)>;

fn cells_from_scores(
    protocol: Protocol,
    degree: usize,
    scores: PointScores,
    xs: &[f64],
    n_seeds: usize,
    k: usize,
) -> Vec<StressCell> {
    // scores holds ((kind, x_bits), fold scores) per grid point.
    xs.iter()
        .flat_map(|&x| {
            ModelKind::BOTH.iter().map(move |&kind| (x, kind))
        })
        .map(|(x, kind)| {
            let collected: Vec<f64> = scores
                .iter()
                .filter(|((k2, xb), _)| *k2 == kind && *xb == x.to_bits())
                .flat_map(|(_, s)| s.iter().copied())
                .collect();
            let n_scores = collected.len();
            let rep = EvalReport::from_scores(collected, n_seeds, k);
            StressCell { protocol, degree, model_kind: kind, x, mean: rep.mean, ci95: rep.ci95, n_scores }
        })
        .collect()
}

/// OOD protocol: train both kinds on ±10 data under k-fold CV, evaluate every
/// fold model on fresh test sets drawn from each wider coefficient range
/// (labels always come from the clean generating polynomials).
pub fn ood_sweep(cfg: &StressConfig) -> Result<StressReport> {
    cfg.validate()?;
    let mut report = StressReport::default();
    for &degree in &cfg.degrees {
        let mut jobs = Vec::new();
        for (si, &seed) in cfg.seeds.iter().enumerate() {
            jobs.push((si as u64, seed));
        }
        let per_seed: Vec<PointScores> = jobs
            .par_iter()
            .map(|&(si, seed)| -> Result<PointScores> {
                let train = generate(&train_config(degree, seeding::mix(seed, &[TAG_TRAIN, degree as u64]))?)?;
                let folds = stratified_kfold(&train.labels, cfg.k_folds, seed)?;
                let models: Vec<Vec<(ModelKind, TrainedModel)>> = folds
                    .par_iter()
                    .enumerate()
                    .map(|(fi, (train_rows, _))| {
                        fit_both(&train, train_rows, degree, seeding::mix(seed, &[TAG_TRAIN, fi as u64]))
                    })
                    .collect::<Result<_>>()?;
                let mut out = Vec::new();
                for &range in &cfg.ood_ranges {
                    let test_seed = seeding::mix(seed, &[TAG_TEST_SET, degree as u64, range.to_bits()]);
                    let test = generate(&test_config(degree, test_seed, cfg.test_n, range)?)?;
                    for &kind in &ModelKind::BOTH {
                        let mut scores = Vec::with_capacity(models.len());
                        for fold_models in &models {
                            let model = &fold_models.iter().find(|(k, _)| *k == kind).expect("both kinds fitted").1;
                            scores.push(eval_kind(model, kind, degree, &test)?);
                        }
                        out.push(((kind, range.to_bits()), scores));
                    }
                }
                let _ = si;
                Ok(out)
            })
            .collect::<Result<_>>()?;
        let flat: PointScores = per_seed.into_iter().flatten().collect();
        report.cells.extend(cells_from_scores(
            Protocol::Ood,
            degree,
            flat,
            &cfg.ood_ranges,
            cfg.seeds.len(),
            cfg.k_folds,
        ));
    }
    Ok(report)
}

/// Data-efficiency protocol: train on stratified subsamples of each size and
/// evaluate on one fixed fresh test set per seed; repairs that force class
/// coverage in tiny subsamples are counted on the report.
pub fn data_efficiency_sweep(cfg: &StressConfig) -> Result<StressReport> {
    cfg.validate()?;
    let mut report = StressReport::default();
    for &degree in &cfg.degrees {
        let results: Vec<(PointScores, usize)> = cfg
            .seeds
            .par_iter()
            .map(|&seed| -> Result<(PointScores, usize)> {
                let pool = generate(&train_config(degree, seeding::mix(seed, &[TAG_TRAIN, degree as u64]))?)?;
                let test_seed = seeding::mix(seed, &[TAG_TEST_SET, degree as u64]);
                let test = generate(&test_config(degree, test_seed, cfg.test_n, 10.0)?)?;
                let mut out = Vec::new();
                let mut repairs = 0usize;
                for &n in &cfg.train_sizes {
                    let reps: Vec<(Vec<(ModelKind, f64)>, bool)> = (0..cfg.efficiency_replicates)
                        .into_par_iter()
                        .map(|rep| -> Result<(Vec<(ModelKind, f64)>, bool)> {
                            let (rows, repaired) = stratified_subsample(
                                &pool.labels,
                                n,
                                seeding::mix(seed, &[TAG_SUBSAMPLE, n as u64, rep as u64]),
                            )?;
                            let models = fit_both(
                                &pool,
                                &rows,
                                degree,
                                seeding::mix(seed, &[TAG_TRAIN, n as u64, rep as u64]),
                            )?;
                            let mut scored = Vec::new();
                            for (kind, model) in &models {
                                scored.push((*kind, eval_kind(model, *kind, degree, &test)?));
                            }
                            Ok((scored, repaired))
                        })
                        .collect::<Result<_>>()?;
                    for &kind in &ModelKind::BOTH {
                        let scores: Vec<f64> = reps
                            .iter()
                            .flat_map(|(s, _)| s.iter().filter(|(k, _)| *k == kind).map(|(_, v)| *v))
                            .collect();
                        out.push(((kind, (n as f64).to_bits()), scores));
                    }
                    repairs += reps.iter().filter(|(_, r)| *r).count();
                }
                Ok((out, repairs))
            })
            .collect::<Result<_>>()?;
        let mut flat = Vec::new();
        for (scores, repairs) in results {
            flat.extend(scores);
            report.n_coverage_repairs += repairs;
        }
        let xs: Vec<f64> = cfg.train_sizes.iter().map(|&n| n as f64).collect();
        report.cells.extend(cells_from_scores(
            Protocol::Efficiency,
            degree,
            flat,
            &xs,
            cfg.seeds.len(),
            cfg.efficiency_replicates,
        ));
    }
    Ok(report)
}

/// Noise protocol: train on clean ±10 data under k-fold CV, evaluate on a
/// fresh test set corrupted with Gaussian coefficient noise at each sigma.
/// Invariant features are recomputed from the noisy coefficients; labels stay
/// bound to the clean polynomials.
pub fn noise_sweep(cfg: &StressConfig) -> Result<StressReport> {
    cfg.validate()?;
    let mut report = StressReport::default();
    for &degree in &cfg.degrees {
        let per_seed: Vec<PointScores> = cfg
            .seeds
            .par_iter()
            .map(|&seed| -> Result<PointScores> {
                let train = generate(&train_config(degree, seeding::mix(seed, &[TAG_TRAIN, degree as u64]))?)?;
                let folds = stratified_kfold(&train.labels, cfg.k_folds, seed)?;
                let models: Vec<Vec<(ModelKind, TrainedModel)>> = folds
                    .par_iter()
                    .enumerate()
                    .map(|(fi, (train_rows, _))| {
                        fit_both(&train, train_rows, degree, seeding::mix(seed, &[TAG_TRAIN, fi as u64]))
                    })
                    .collect::<Result<_>>()?;
                let test_seed = seeding::mix(seed, &[TAG_TEST_SET, degree as u64]);
                let clean = generate(&test_config(degree, test_seed, cfg.test_n, 10.0)?)?;
                let mut out = Vec::new();
                for (qi, &sigma) in cfg.noise_sigmas.iter().enumerate() {
                    let noisy = add_noise(&clean, sigma, seeding::mix(seed, &[TAG_NOISE, qi as u64]))?;
                    for &kind in &ModelKind::BOTH {
                        let mut scores = Vec::with_capacity(models.len());
                        for fold_models in &models {
                            let model = &fold_models.iter().find(|(k, _)| *k == kind).expect("both kinds fitted").1;
                            scores.push(eval_kind(model, kind, degree, &noisy)?);
                        }
                        out.push(((kind, sigma.to_bits()), scores));
                    }
                }
                Ok(out)
            })
            .collect::<Result<_>>()?;
        let flat: PointScores = per_seed.into_iter().flatten().collect();
        report.cells.extend(cells_from_scores(
            Protocol::Noise,
            degree,
            flat,
            &cfg.noise_sigmas,
            cfg.seeds.len(),
            cfg.k_folds,
        ));
    }
    Ok(report)
}

/// All three protocols merged into one report.
pub fn run_all(cfg: &StressConfig) -> Result<StressReport> {
    let mut report = ood_sweep(cfg)?;
    report.merge(data_efficiency_sweep(cfg)?);
    report.merge(noise_sweep(cfg)?);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::features::DiscriminantFeatures;

    #[test]
    fn quartic_invariant_selection_names_exist() {
        let known = DiscriminantFeatures::names(4).unwrap();
        for name in invariant_features_for(4).unwrap() {
            assert!(known.contains(&name.as_str()), "{name} not a quartic feature");
        }
    }

    fn tiny_cfg() -> StressConfig {
        StressConfig {
            degrees: vec![2],
            ood_ranges: vec![10.0, 20.0],
            train_sizes: vec![25, 50],
            noise_sigmas: vec![0.0, 0.5],
            seeds: vec![0],
            k_folds: 2,
            test_n: 300,
            efficiency_replicates: 2,
        }
    }

    #[test]
    fn config_validation() {
        let mut cfg = tiny_cfg();
        cfg.ood_ranges = vec![20.0, 10.0];
        assert!(cfg.validate().is_err());
        let mut cfg = tiny_cfg();
        cfg.ood_ranges = vec![20.0, 50.0];
        assert!(cfg.validate().is_err(), "first range must be the training bound");
        let mut cfg = tiny_cfg();
        cfg.degrees = vec![6];
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn invariant_selection_per_degree() {
        assert_eq!(invariant_features_for(2).unwrap(), vec!["disc_ratio"]);
        assert_eq!(invariant_features_for(3).unwrap(), vec!["beta2_alpha3"]);
        assert!(invariant_features_for(4).unwrap().contains(&"sign_delta".to_string()));
        assert!(invariant_features_for(5).unwrap().contains(&"crit8".to_string()));
        assert!(invariant_features_for(6).is_err());
    }

    #[test]
    fn ood_smoke_runs_and_is_deterministic() {
        // Degree 2 with a tiny grid; also checks the ±10 cell is exactly the
        // in-distribution evaluation (same pipeline, R = training bound).
        let cfg = tiny_cfg();
        let a = ood_sweep(&cfg).unwrap();
        let b = ood_sweep(&cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.cells.len(), 2 * 2); // 2 ranges x 2 kinds
        let cell = a.cell(Protocol::Ood, 2, ModelKind::InvariantTree, 10.0).unwrap();
        assert!(cell.mean > 0.9, "invariant tree in-distribution mean {}", cell.mean);
    }

    #[test]
    fn noise_zero_sigma_matches_clean_eval() {
        let cfg = tiny_cfg();
        let rep = noise_sweep(&cfg).unwrap();
        let clean = rep.cell(Protocol::Noise, 2, ModelKind::InvariantTree, 0.0).unwrap();
        assert!(clean.mean > 0.9, "clean degree-2 invariant tree mean {}", clean.mean);
    }

    #[test]
    fn efficiency_grid_complete() {
        let cfg = tiny_cfg();
        let rep = data_efficiency_sweep(&cfg).unwrap();
        assert_eq!(rep.cells.len(), 2 * 2);
        for cell in &rep.cells {
            assert_eq!(cell.n_scores, 2); // one seed x two replicates
            assert!(cell.mean > 0.0 && cell.mean <= 1.0);
        }
    }

    #[test]
    fn tidy_csv_shape() {
        let cfg = tiny_cfg();
        let rep = ood_sweep(&cfg).unwrap();
        let csv = rep.to_tidy_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "protocol,degree,model,x,mean,ci95,n");
        assert_eq!(lines.len(), 1 + rep.cells.len());
        assert!(lines[1].starts_with("ood,2,"));
    }
}
