//! From-scratch model families, metrics, and cross-validation.

pub mod cv;
pub mod forest;
pub mod gbm;
pub mod linear;
pub mod metrics;
pub mod mlp;
pub mod scaler;
pub mod tree;

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::data::Matrix;
use crate::error::{Error, Result};

pub use cv::{cross_validate, EvalReport};
pub use forest::{ForestConfig, ForestModel};
pub use gbm::{GbmConfig, GbmModel};
pub use linear::{LogRegConfig, LogRegModel};
pub use metrics::{agreement, balanced_accuracy};
pub use mlp::{MlpConfig, MlpModel};
pub use scaler::Standardizer;
pub use tree::{TreeConfig, TreeModel, TreeNode};

/// On-disk model format version.
pub const MODEL_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelFamily {
    Tree,
    Forest,
    Gbm,
    LogReg,
    Mlp,
}

impl ModelFamily {
    pub fn name(&self) -> &'static str {
        match self {
            ModelFamily::Tree => "tree",
            ModelFamily::Forest => "forest",
            ModelFamily::Gbm => "gbm",
            ModelFamily::LogReg => "logreg",
            ModelFamily::Mlp => "mlp",
        }
    }

    pub fn parse(name: &str) -> Result<ModelFamily> {
        match name {
            "tree" => Ok(ModelFamily::Tree),
            "forest" | "rf" => Ok(ModelFamily::Forest),
            "gbm" => Ok(ModelFamily::Gbm),
            "logreg" => Ok(ModelFamily::LogReg),
            "mlp" | "nn" => Ok(ModelFamily::Mlp),
            other => Err(Error::BadData(format!("unknown model family '{other}'"))),
        }
    }
}

/// Hyperparameters for one fit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum ModelSpec {
    Tree { max_depth: usize, min_leaf: usize },
    Forest { n_trees: usize, max_depth: usize, min_leaf: usize },
    Gbm { n_rounds: usize, learning_rate: f64, max_depth: usize, min_leaf: usize },
    LogReg { l2: f64, max_iters: usize },
    Mlp { hidden: Vec<usize>, epochs: usize, batch: usize, learning_rate: f64 },
}

impl ModelSpec {
    pub fn family(&self) -> ModelFamily {
        match self {
            ModelSpec::Tree { .. } => ModelFamily::Tree,
            ModelSpec::Forest { .. } => ModelFamily::Forest,
            ModelSpec::Gbm { .. } => ModelFamily::Gbm,
            ModelSpec::LogReg { .. } => ModelFamily::LogReg,
            ModelSpec::Mlp { .. } => ModelFamily::Mlp,
        }
    }

    /// Raw-coefficient tree setting (the Table-4-style operating point).
    pub fn tree_default() -> ModelSpec {
        ModelSpec::Tree { max_depth: 8, min_leaf: 20 }
    }

    /// Shallow tree for single-invariant runs (one discriminant feature).
    /// min_leaf 1 keeps the rare ratio-above-threshold leaf learnable from a
    /// few dozen samples.
    pub fn tree_invariant_default() -> ModelSpec {
        ModelSpec::Tree { max_depth: 4, min_leaf: 1 }
    }

    /// Deeper tree for multi-feature invariant runs (quartic invariants,
    /// quintic critical-point family).
    pub fn tree_deep_default() -> ModelSpec {
        ModelSpec::Tree { max_depth: 12, min_leaf: 5 }
    }

    /// Weaker tree used in the screening pass.
    pub fn tree_screening() -> ModelSpec {
        ModelSpec::Tree { max_depth: 5, min_leaf: 5 }
    }

    pub fn forest_default() -> ModelSpec {
        let d = ForestConfig::default();
        ModelSpec::Forest { n_trees: d.n_trees, max_depth: d.max_depth, min_leaf: d.min_leaf }
    }

    pub fn gbm_default() -> ModelSpec {
        let d = GbmConfig::default();
        ModelSpec::Gbm {
            n_rounds: d.n_rounds,
            learning_rate: d.learning_rate,
            max_depth: d.max_depth,
            min_leaf: d.min_leaf,
        }
    }

    pub fn logreg_default() -> ModelSpec {
        let d = LogRegConfig::default();
        ModelSpec::LogReg { l2: d.l2, max_iters: d.max_iters }
    }

    pub fn mlp_default() -> ModelSpec {
        let d = MlpConfig::default();
        ModelSpec::Mlp {
            hidden: d.hidden,
            epochs: d.epochs,
            batch: d.batch,
            learning_rate: d.learning_rate,
        }
    }

    pub fn default_for(family: ModelFamily) -> ModelSpec {
        match family {
            ModelFamily::Tree => ModelSpec::tree_default(),
            ModelFamily::Forest => ModelSpec::forest_default(),
            ModelFamily::Gbm => ModelSpec::gbm_default(),
            ModelFamily::LogReg => ModelSpec::logreg_default(),
            ModelFamily::Mlp => ModelSpec::mlp_default(),
        }
    }
}

/// Family-specific learned parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModelParams {
    Tree(TreeModel),
    Forest(ForestModel),
    Gbm(GbmModel),
    LogReg(LogRegModel),
    Mlp(MlpModel),
}

/// A fitted model plus everything needed to reproduce and apply it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainedModel {
    pub family: ModelFamily,
    pub feature_names: Vec<String>,
    /// Present exactly for the gradient-trained families (logreg, mlp).
    pub standardization: Option<Standardizer>,
    pub train_seed: u64,
    pub params: ModelParams,
}

/// Fit one model. Gradient-trained families are z-scored internally; the
/// standardizer is stored on the model and applied again at prediction time.
pub fn fit(
    spec: &ModelSpec,
    x: &Matrix,
    y: &[u8],
    n_classes: usize,
    feature_names: Vec<String>,
    seed: u64,
) -> Result<TrainedModel> {
    if x.n_rows() != y.len() {
        return Err(Error::BadData(format!(
            "feature rows ({}) and labels ({}) differ",
            x.n_rows(),
            y.len()
        )));
    }
    if x.n_cols() != feature_names.len() {
        return Err(Error::BadData(format!(
            "feature columns ({}) and names ({}) differ",
            x.n_cols(),
            feature_names.len()
        )));
    }
    let (params, standardization) = match spec {
        ModelSpec::Tree { max_depth, min_leaf } => {
            let cfg = TreeConfig { max_depth: *max_depth, min_leaf: *min_leaf };
            (ModelParams::Tree(TreeModel::fit(x, y, n_classes, cfg)), None)
        }
        ModelSpec::Forest { n_trees, max_depth, min_leaf } => {
            let cfg = ForestConfig {
                n_trees: *n_trees,
                max_depth: *max_depth,
                min_leaf: *min_leaf,
                ..Default::default()
            };
            (ModelParams::Forest(ForestModel::fit(x, y, n_classes, cfg, seed)), None)
        }
        ModelSpec::Gbm { n_rounds, learning_rate, max_depth, min_leaf } => {
            let cfg = GbmConfig {
                n_rounds: *n_rounds,
                learning_rate: *learning_rate,
                max_depth: *max_depth,
                min_leaf: *min_leaf,
            };
            (ModelParams::Gbm(GbmModel::fit(x, y, n_classes, cfg)), None)
        }
        ModelSpec::LogReg { l2, max_iters } => {
            let scaler = Standardizer::fit(x);
            let xs = scaler.transform(x);
            let cfg = LogRegConfig { l2: *l2, max_iters: *max_iters };
            (ModelParams::LogReg(LogRegModel::fit(&xs, y, n_classes, cfg)?), Some(scaler))
        }
        ModelSpec::Mlp { hidden, epochs, batch, learning_rate } => {
            let scaler = Standardizer::fit(x);
            let xs = scaler.transform(x);
            let cfg = MlpConfig {
                hidden: hidden.clone(),
                epochs: *epochs,
                batch: *batch,
                learning_rate: *learning_rate,
                ..Default::default()
            };
            (ModelParams::Mlp(MlpModel::fit(&xs, y, n_classes, &cfg, seed)?), Some(scaler))
        }
    };
    Ok(TrainedModel {
        family: spec.family(),
        feature_names,
        standardization,
        train_seed: seed,
        params,
    })
}

impl TrainedModel {
    /// Predict class labels; `x` must carry exactly the training columns.
    pub fn predict(&self, x: &Matrix) -> Result<Vec<u8>> {
        if x.n_cols() != self.feature_names.len() {
            return Err(Error::BadData(format!(
                "model expects {} feature columns, got {}",
                self.feature_names.len(),
                x.n_cols()
            )));
        }
        let scaled;
        let input = match &self.standardization {
            Some(s) => {
                scaled = s.transform(x);
                &scaled
            }
            None => x,
        };
        Ok(match &self.params {
            ModelParams::Tree(m) => m.predict(input),
            ModelParams::Forest(m) => m.predict(input),
            ModelParams::Gbm(m) => m.predict(input),
            ModelParams::LogReg(m) => m.predict(input),
            ModelParams::Mlp(m) => m.predict(input),
        })
    }

    pub fn n_classes(&self) -> usize {
        match &self.params {
            ModelParams::Tree(m) => m.n_classes,
            ModelParams::Forest(m) => m.n_classes,
            ModelParams::Gbm(m) => m.n_classes,
            ModelParams::LogReg(m) => m.n_classes,
            ModelParams::Mlp(m) => m.n_classes,
        }
    }

    /// The underlying CART tree, when this model is one.
    pub fn as_tree(&self) -> Option<&TreeModel> {
        match &self.params {
            ModelParams::Tree(t) => Some(t),
            _ => None,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        let envelope = serde_json::json!({
            "format_version": MODEL_FORMAT_VERSION,
            "model": self,
        });
        Ok(serde_json::to_string_pretty(&envelope)?)
    }

    pub fn from_json(text: &str) -> Result<TrainedModel> {
        let envelope: serde_json::Value = serde_json::from_str(text)?;
        let version = envelope
            .get("format_version")
            .and_then(|v| v.as_u64())
            .ok_or_else(|| Error::Serde("missing format_version".into()))?;
        if version != MODEL_FORMAT_VERSION as u64 {
            return Err(Error::Serde(format!(
                "unsupported model format version {version} (expected {MODEL_FORMAT_VERSION})"
            )));
        }
        let model = envelope
            .get("model")
            .ok_or_else(|| Error::Serde("missing model body".into()))?;
        Ok(serde_json::from_value(model.clone())?)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<TrainedModel> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("cannot read {}: {e}", path.display())))?;
        TrainedModel::from_json(&text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy() -> (Matrix, Vec<u8>) {
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        let mut rng = crate::seeding::rng(71, &[]);
        use rand::Rng;
        for _ in 0..80 {
            let a: f64 = rng.random_range(-2.0..2.0);
            let b: f64 = rng.random_range(-2.0..2.0);
            rows.push(vec![a, b]);
            labels.push((a - b > 0.0) as u8);
        }
        (Matrix::from_rows(&rows).unwrap(), labels)
    }

    #[test]
    fn standardizer_presence_matches_family() {
        let (x, y) = toy();
        let names = vec!["f0".to_string(), "f1".to_string()];
        for spec in [
            ModelSpec::tree_default(),
            ModelSpec::Forest { n_trees: 5, max_depth: 4, min_leaf: 1 },
            ModelSpec::Gbm { n_rounds: 3, learning_rate: 0.1, max_depth: 2, min_leaf: 1 },
        ] {
            let m = fit(&spec, &x, &y, 2, names.clone(), 0).unwrap();
            assert!(m.standardization.is_none(), "{:?}", m.family);
        }
        for spec in [
            ModelSpec::LogReg { l2: 1e-4, max_iters: 50 },
            ModelSpec::Mlp { hidden: vec![4], epochs: 5, batch: 16, learning_rate: 1e-2 },
        ] {
            let m = fit(&spec, &x, &y, 2, names.clone(), 0).unwrap();
            assert!(m.standardization.is_some(), "{:?}", m.family);
        }
    }

    #[test]
    fn json_round_trip_preserves_predictions() {
        let (x, y) = toy();
        let names = vec!["f0".to_string(), "f1".to_string()];
        for spec in [
            ModelSpec::Tree { max_depth: 4, min_leaf: 2 },
            ModelSpec::Forest { n_trees: 7, max_depth: 4, min_leaf: 1 },
            ModelSpec::Gbm { n_rounds: 5, learning_rate: 0.2, max_depth: 2, min_leaf: 2 },
            ModelSpec::LogReg { l2: 1e-4, max_iters: 60 },
            ModelSpec::Mlp { hidden: vec![6], epochs: 8, batch: 16, learning_rate: 1e-2 },
        ] {
            let m = fit(&spec, &x, &y, 2, names.clone(), 3).unwrap();
            let text = m.to_json().unwrap();
            let back = TrainedModel::from_json(&text).unwrap();
            assert_eq!(back, m);
            assert_eq!(back.predict(&x).unwrap(), m.predict(&x).unwrap());
        }
    }

    #[test]
    fn version_mismatch_rejected() {
        let (x, y) = toy();
        let m = fit(
            &ModelSpec::Tree { max_depth: 2, min_leaf: 1 },
            &x,
            &y,
            2,
            vec!["f0".into(), "f1".into()],
            0,
        )
        .unwrap();
        let text = m.to_json().unwrap().replace("\"format_version\": 1", "\"format_version\": 99");
        assert!(TrainedModel::from_json(&text).is_err());
    }

    #[test]
    fn wrong_column_count_rejected_at_predict() {
        let (x, y) = toy();
        let m = fit(
            &ModelSpec::Tree { max_depth: 2, min_leaf: 1 },
            &x,
            &y,
            2,
            vec!["f0".into(), "f1".into()],
            0,
        )
        .unwrap();
        let narrow = x.select_cols(&[0]);
        assert!(m.predict(&narrow).is_err());
    }
}
