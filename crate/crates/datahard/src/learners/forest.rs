use crate::data::Dataset;
use crate::learners::tree::{DecisionTree, SplitCriterion, TreeConfig};
use crate::rng::{derived_rng, Rng};
use rand::Rng as _;

/// Bagged Gini trees with per-split feature subsampling.
#[derive(Debug, Clone)]
pub struct ForestState {
    trees: Vec<DecisionTree>,
}

pub struct ForestConfig {
    pub trees: usize,
    pub bootstrap: bool,
    /// Candidate features per split; `None` means ⌊√m⌋ (at least 1).
    pub max_features: Option<usize>,
    pub max_depth: Option<usize>,
}

impl Default for ForestConfig {
    fn default() -> Self {
        Self {
            trees: 50,
            bootstrap: true,
            max_features: None,
            max_depth: None,
        }
    }
}

impl ForestState {
    pub fn fit(train: &Dataset, config: &ForestConfig, seed: u64) -> Self {
        let (n, m) = (train.n_instances(), train.n_features());
        let feature_sample = config
            .max_features
            .unwrap_or_else(|| (m as f64).sqrt().floor().max(1.0) as usize)
            .min(m);
        let tree_config = TreeConfig {
            criterion: SplitCriterion::Gini,
            max_depth: config.max_depth,
            feature_sample: Some(feature_sample),
        };
        let trees = (0..config.trees)
            .map(|t| {
                let mut rng: Rng = derived_rng(seed, "forest-tree", &[t as u64]);
                let indices: Vec<usize> = if config.bootstrap {
                    (0..n).map(|_| rng.gen_range(0..n)).collect()
                } else {
                    (0..n).collect()
                };
                DecisionTree::fit(
                    train.features(),
                    train.labels(),
                    &indices,
                    tree_config,
                    Some(&mut rng),
                )
            })
            .collect();
        Self { trees }
    }

    pub fn predict_row(&self, row: &[f64]) -> u8 {
        let votes: usize = self
            .trees
            .iter()
            .map(|t| t.predict_row(row) as usize)
            .sum();
        u8::from(2 * votes >= self.trees.len())
    }

    /// Mean of the per-tree normalized impurity importances.
    pub fn feature_importances(&self) -> Vec<f64> {
        let m = match self.trees.first() {
            Some(t) => t.feature_importances(SplitCriterion::Gini).len(),
            None => return Vec::new(),
        };
        let mut acc = vec![0.0; m];
        for tree in &self.trees {
            for (a, v) in acc.iter_mut().zip(tree.feature_importances(SplitCriterion::Gini)) {
                *a += v;
            }
        }
        for a in &mut acc {
            *a /= self.trees.len() as f64;
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn blobs() -> Dataset {
        let rows: Vec<Vec<f64>> = (0..12)
            .map(|i| vec![i as f64 * 0.2, (i * i % 5) as f64])
            .chain((0..12).map(|i| vec![8.0 + i as f64 * 0.2, (i * i % 7) as f64]))
            .collect();
        let labels: Vec<u8> = (0..24).map(|i| u8::from(i >= 12)).collect();
        Dataset::from_rows(&rows, &labels, "blobs").unwrap()
    }

    #[test]
    fn fits_separable_data() {
        let d = blobs();
        let f = ForestState::fit(&d, &ForestConfig::default(), 11);
        for i in 0..d.n_instances() {
            assert_eq!(f.predict_row(d.row(i)), d.label(i));
        }
    }

    #[test]
    fn deterministic_per_seed() {
        let d = blobs();
        let a = ForestState::fit(&d, &ForestConfig::default(), 11);
        let b = ForestState::fit(&d, &ForestConfig::default(), 11);
        for i in 0..d.n_instances() {
            assert_eq!(a.predict_row(d.row(i)), b.predict_row(d.row(i)));
        }
    }
}
