//! A from-scratch pool of seeded base classifiers, the MCC evaluation
//! metric, and pool-diversity machinery (output-difference distances and
//! agglomerative clustering).

mod adaboost;
mod diversity;
mod forest;
mod knn;
mod linear;
mod metrics;
mod mlp;
mod nb;
mod rule_list;
mod tree;

pub use diversity::{cluster_pool, cod_distance, CodMatrix, Dendrogram, PoolClustering};
pub use linear::{
    train_linear_svm, train_linear_svm_default, train_logistic, train_logistic_default,
    LinearModel,
};
pub use metrics::mcc;
pub use tree::{DecisionTree, Node, SplitCriterion, TreeConfig};

use crate::data::{Dataset, Features};
use crate::error::{Error, Result};
use crate::rng::{derive, derived_rng};
use adaboost::AdaBoostState;
use forest::{ForestConfig, ForestState};
use knn::KnnState;
use mlp::{MlpConfig, MlpState};
use nb::GaussianNbState;
use rule_list::RuleListState;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// The classification algorithms the pool can draw from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    Knn,
    GaussianNb,
    Cart,
    Logistic,
    LinearSvm,
    Mlp,
    RandomForest,
    AdaboostStumps,
    GreedyRuleList,
}

impl Algorithm {
    pub const ALL: [Algorithm; 9] = [
        Algorithm::Knn,
        Algorithm::GaussianNb,
        Algorithm::Cart,
        Algorithm::Logistic,
        Algorithm::LinearSvm,
        Algorithm::Mlp,
        Algorithm::RandomForest,
        Algorithm::AdaboostStumps,
        Algorithm::GreedyRuleList,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Knn => "knn",
            Algorithm::GaussianNb => "gaussian_nb",
            Algorithm::Cart => "cart",
            Algorithm::Logistic => "logistic",
            Algorithm::LinearSvm => "linear_svm",
            Algorithm::Mlp => "mlp",
            Algorithm::RandomForest => "random_forest",
            Algorithm::AdaboostStumps => "adaboost_stumps",
            Algorithm::GreedyRuleList => "greedy_rule_list",
        }
    }

    /// Hyperparameter names `fit` accepts for this algorithm.
    fn allowed_params(self) -> &'static [&'static str] {
        match self {
            Algorithm::Knn => &["k"],
            Algorithm::GaussianNb => &[],
            Algorithm::Cart => &["max_depth"],
            Algorithm::Logistic | Algorithm::LinearSvm => &["epochs", "lambda"],
            Algorithm::Mlp => &["hidden", "epochs", "batch", "lr"],
            Algorithm::RandomForest => &["trees", "bootstrap", "max_features", "max_depth"],
            Algorithm::AdaboostStumps => &["rounds"],
            Algorithm::GreedyRuleList => &["depth"],
        }
    }
}

/// A pool entry: algorithm, hyperparameter overrides, and a seed.
///
/// Unset hyperparameters fall back to fixed defaults (k=5, 50 trees, 50
/// boosting rounds, 10 hidden units, 200 epochs, rule depth 5).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LearnerSpec {
    pub algorithm: Algorithm,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub hyperparameters: BTreeMap<String, f64>,
    #[serde(default)]
    pub seed: u64,
}

impl LearnerSpec {
    pub fn new(algorithm: Algorithm, seed: u64) -> Self {
        Self {
            algorithm,
            hyperparameters: BTreeMap::new(),
            seed,
        }
    }

    pub fn with(mut self, name: &str, value: f64) -> Self {
        self.hyperparameters.insert(name.into(), value);
        self
    }

    fn param(&self, name: &str) -> Option<f64> {
        self.hyperparameters.get(name).copied()
    }

    fn param_usize(&self, name: &str, default: usize) -> Result<usize> {
        match self.param(name) {
            None => Ok(default),
            Some(v) if v >= 1.0 && v.fract() == 0.0 => Ok(v as usize),
            Some(v) => Err(Error::InvalidLearnerSpec(format!(
                "{}.{name} must be a positive integer, got {v}",
                self.algorithm.name()
            ))),
        }
    }

    fn validate(&self) -> Result<()> {
        let allowed = self.algorithm.allowed_params();
        for name in self.hyperparameters.keys() {
            if !allowed.contains(&name.as_str()) {
                return Err(Error::InvalidLearnerSpec(format!(
                    "{} does not take hyperparameter {name:?} (accepted: {allowed:?})",
                    self.algorithm.name()
                )));
            }
        }
        Ok(())
    }
}

/// The nine-learner default pool, one of each algorithm, with per-learner
/// seeds derived from the run seed.
pub fn default_pool(seed: u64) -> Vec<LearnerSpec> {
    Algorithm::ALL
        .iter()
        .enumerate()
        .map(|(i, &algorithm)| LearnerSpec::new(algorithm, derive(seed, "pool", &[i as u64])))
        .collect()
}

/// Impurity-decrease feature importances from a default 50-tree forest.
/// Normalized per tree, then averaged; sums to 1 unless every tree is a
/// bare leaf.
pub fn forest_feature_importances(train: &Dataset, seed: u64) -> Result<Vec<f64>> {
    train.require_both_classes()?;
    Ok(ForestState::fit(train, &ForestConfig::default(), seed).feature_importances())
}

#[derive(Debug, Clone)]
enum FittedState {
    Knn(KnnState),
    Nb(GaussianNbState),
    Tree(DecisionTree),
    Linear(LinearModel),
    Mlp(MlpState),
    Forest(ForestState),
    Ada(AdaBoostState),
    RuleList(RuleListState),
}

/// A fitted classifier, immutable after `fit`.
#[derive(Debug, Clone)]
pub struct Model {
    spec: LearnerSpec,
    n_features: usize,
    fingerprint: String,
    state: FittedState,
}

/// One test-time prediction, tagged with where it came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PredictionRecord {
    pub instance: usize,
    pub repeat: usize,
    pub fold: usize,
    pub learner: usize,
    pub predicted: u8,
    pub actual: u8,
}

/// Train a classifier. Requires both classes in `train`; deterministic
/// given (spec, seed, data).
pub fn fit(spec: &LearnerSpec, train: &Dataset) -> Result<Model> {
    spec.validate()?;
    train.require_both_classes()?;
    let state = match spec.algorithm {
        Algorithm::Knn => FittedState::Knn(KnnState::fit(
            train.features().clone(),
            train.labels().to_vec(),
            spec.param_usize("k", 5)?,
        )),
        Algorithm::GaussianNb => FittedState::Nb(GaussianNbState::fit(train)),
        Algorithm::Cart => {
            let max_depth = spec.param("max_depth").map(|_| spec.param_usize("max_depth", 0)).transpose()?;
            let indices: Vec<usize> = (0..train.n_instances()).collect();
            FittedState::Tree(DecisionTree::fit(
                train.features(),
                train.labels(),
                &indices,
                TreeConfig {
                    criterion: SplitCriterion::Gini,
                    max_depth,
                    feature_sample: None,
                },
                None,
            ))
        }
        Algorithm::Logistic => FittedState::Linear(linear::train_logistic(
            train,
            spec.param_usize("epochs", 200)?,
            positive_param(spec, "lambda", 1e-4)?,
        )),
        Algorithm::LinearSvm => FittedState::Linear(linear::train_linear_svm(
            train,
            spec.param_usize("epochs", 200)?,
            positive_param(spec, "lambda", 1e-4)?,
        )),
        Algorithm::Mlp => {
            let config = MlpConfig {
                hidden: spec.param_usize("hidden", 10)?,
                epochs: spec.param_usize("epochs", 200)?,
                batch: spec.param_usize("batch", 32)?,
                learning_rate: positive_param(spec, "lr", 0.1)?,
            };
            FittedState::Mlp(MlpState::fit(
                train,
                &config,
                &mut derived_rng(spec.seed, "mlp", &[]),
            ))
        }
        Algorithm::RandomForest => {
            let config = ForestConfig {
                trees: spec.param_usize("trees", 50)?,
                bootstrap: spec.param("bootstrap").map_or(true, |v| v != 0.0),
                max_features: spec
                    .param("max_features")
                    .map(|_| spec.param_usize("max_features", 0))
                    .transpose()?,
                max_depth: spec
                    .param("max_depth")
                    .map(|_| spec.param_usize("max_depth", 0))
                    .transpose()?,
            };
            FittedState::Forest(ForestState::fit(train, &config, spec.seed))
        }
        Algorithm::AdaboostStumps => {
            FittedState::Ada(AdaBoostState::fit(train, spec.param_usize("rounds", 50)?))
        }
        Algorithm::GreedyRuleList => {
            FittedState::RuleList(RuleListState::fit(train, spec.param_usize("depth", 5)?))
        }
    };
    Ok(Model {
        spec: spec.clone(),
        n_features: train.n_features(),
        fingerprint: train.id().to_string(),
        state,
    })
}

fn positive_param(spec: &LearnerSpec, name: &str, default: f64) -> Result<f64> {
    match spec.param(name) {
        None => Ok(default),
        Some(v) if v > 0.0 && v.is_finite() => Ok(v),
        Some(v) => Err(Error::InvalidLearnerSpec(format!(
            "{}.{name} must be positive, got {v}",
            spec.algorithm.name()
        ))),
    }
}

impl Model {
    pub fn spec(&self) -> &LearnerSpec {
        &self.spec
    }

    pub fn fingerprint(&self) -> &str {
        &self.fingerprint
    }

    /// Predict labels for a table of rows with the training width.
    pub fn predict(&self, rows: &Features) -> Result<Vec<u8>> {
        if rows.n_cols() != self.n_features {
            return Err(Error::WidthMismatch {
                expected: self.n_features,
                got: rows.n_cols(),
            });
        }
        Ok((0..rows.n_rows())
            .map(|i| self.predict_row(rows.row(i)))
            .collect())
    }

    pub fn predict_dataset(&self, data: &Dataset) -> Result<Vec<u8>> {
        self.predict(data.features())
    }

    fn predict_row(&self, row: &[f64]) -> u8 {
        match &self.state {
            FittedState::Knn(s) => s.predict_row(row),
            FittedState::Nb(s) => s.predict_row(row),
            FittedState::Tree(s) => s.predict_row(row),
            FittedState::Linear(s) => s.predict_row(row),
            FittedState::Mlp(s) => s.predict_row(row),
            FittedState::Forest(s) => s.predict_row(row),
            FittedState::Ada(s) => s.predict_row(row),
            FittedState::RuleList(s) => s.predict_row(row),
        }
    }
}
