//! The two hardness-aware training aids: bagging with hardness-weighted
//! bootstraps, and complexity-guided selection of a preprocessing
//! pipeline.

mod ensemble;
mod plan;

pub use ensemble::{
    hmsmote_bagging_train, selection_probabilities, smote_bagging_train, EnsembleModel,
    SelectionDistribution,
};
pub use plan::{adaptive_preprocess, CandidateScore, PreprocessPlan, StageDecision};
