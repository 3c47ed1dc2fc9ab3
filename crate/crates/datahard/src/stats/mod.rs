//! Rank correlation, hardness distribution summaries, paired tests, and
//! multi-dataset report assembly.

mod spearman;

pub use spearman::{midranks, spearman, spearman_rho, CorrelationBand, SpearmanResult};
