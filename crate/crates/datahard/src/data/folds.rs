use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::rng::Rng;
use rand::Rng as _;
use serde::{Deserialize, Serialize};

/// Cross-validation shape: `folds`-fold, repeated `repeats` times.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvaluationPlan {
    pub folds: usize,
    pub repeats: usize,
    pub seed: u64,
}

impl Default for EvaluationPlan {
    fn default() -> Self {
        Self {
            folds: 5,
            repeats: 5,
            seed: 42,
        }
    }
}

/// Seeded stratified k-fold split. Returns `folds` index lists that
/// partition `0..n`, with each class spread across folds as evenly as
/// possible (per-class fold counts differ by at most one).
///
/// Instances of each class are first placed in a canonical order (sorted
/// by feature content, then label, then index) before the seeded shuffle,
/// so the split depends on what the rows contain rather than the order
/// they arrived in. Fold lists keep their dealt order.
pub fn stratified_folds(data: &Dataset, folds: usize, rng: &mut Rng) -> Result<Vec<Vec<usize>>> {
    if folds < 2 {
        return Err(Error::InvalidArgument(format!(
            "need at least 2 folds, got {folds}"
        )));
    }
    let canonical = data.canonical_order();
    let mut out = vec![Vec::new(); folds];
    for class in [0u8, 1u8] {
        let mut members: Vec<usize> = canonical
            .iter()
            .copied()
            .filter(|&i| data.label(i) == class)
            .collect();
        if members.is_empty() {
            continue;
        }
        if members.len() < folds {
            return Err(Error::ClassTooSmall {
                class,
                count: members.len(),
                folds,
            });
        }
        // Positional Fisher-Yates over the canonical sequence.
        for k in (1..members.len()).rev() {
            let j = rng.gen_range(0..=k);
            members.swap(k, j);
        }
        let offset = rng.gen_range(0..folds);
        for (pos, idx) in members.into_iter().enumerate() {
            out[(offset + pos) % folds].push(idx);
        }
    }
    Ok(out)
}
