//! Training-set preparation: class rebalancing (SMOTE and friends, random
//! undersampling, hybrid cleaners) and feature selection. Both halves
//! operate on a training split only and report warnings instead of failing
//! when a method degenerates on small or clean data.

mod resample;
mod select;

pub(crate) use resample::minority_label;
pub use resample::{resample, ResampleMethod, ResampleSpec, Resampled};
pub use select::{select_features, FeatureSelectSpec, FeatureSelection, SelectMethod};
