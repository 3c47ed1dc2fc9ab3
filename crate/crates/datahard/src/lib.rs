//! Instance hardness and dataset complexity analysis for binary
//! classification data.
//!
//! The crate answers two questions about a labeled dataset: *how hard is
//! each instance to classify correctly*, and *what structural properties
//! make the dataset as a whole difficult*. It estimates per-instance
//! hardness with a cross-validated pool of classifiers, computes
//! per-instance hardness measures and dataset-level complexity measures,
//! and puts both to work in hardness-aware ensemble training and
//! automatic preprocessing pipeline selection.

pub mod adaptive;
pub mod complexity;
pub mod data;
pub mod error;
pub mod hardness;
pub mod learners;
pub mod preprocess;
pub mod rng;
pub mod stats;

pub use error::{Error, Result};
