//! Dataset representation, ingestion, normalization, fold planning, and
//! distances. Everything downstream builds on the types here.

mod dataset;
mod distance;
mod folds;
mod io;
mod normalize;

pub use dataset::{Dataset, Features};
pub use distance::{distance_matrix, euclidean, DistanceMatrix};
pub use folds::{stratified_folds, EvaluationPlan};
pub use io::{load_dataset, LoadOptions};
pub use normalize::{apply_normalizer, fit_normalizer, NormKind, NormalizationSpec};
