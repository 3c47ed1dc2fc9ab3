use crate::data::Dataset;

/// An axis-aligned depth-1 classifier.
#[derive(Debug, Clone)]
pub enum Stump {
    Threshold {
        feature: usize,
        threshold: f64,
        /// Label for rows with value ≤ threshold; the other side gets 1−label.
        left_label: u8,
    },
    Constant(u8),
}

impl Stump {
    pub fn predict_row(&self, row: &[f64]) -> u8 {
        match self {
            Stump::Threshold {
                feature,
                threshold,
                left_label,
            } => {
                if row[*feature] <= *threshold {
                    *left_label
                } else {
                    1 - *left_label
                }
            }
            Stump::Constant(label) => *label,
        }
    }
}

/// Discrete AdaBoost over decision stumps.
#[derive(Debug, Clone)]
pub struct AdaBoostState {
    rounds: Vec<(Stump, f64)>,
}

/// Minimum-weighted-error stump. Ties resolve toward the lower feature
/// index, then lower threshold, then the left-side-0 polarity.
fn best_stump(train: &Dataset, weights: &[f64]) -> (Stump, f64) {
    let total_pos: f64 = (0..train.n_instances())
        .filter(|&i| train.label(i) == 1)
        .map(|i| weights[i])
        .sum();
    let total: f64 = weights.iter().sum();
    let mut best: Option<(Stump, f64)> = None;
    for f in 0..train.n_features() {
        let mut vals: Vec<(f64, u8, f64)> = (0..train.n_instances())
            .map(|i| (train.features().get(i, f), train.label(i), weights[i]))
            .collect();
        vals.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        // Scan split positions between distinct values, tracking the
        // weight of each class on the left.
        let (mut left_pos, mut left_all) = (0f64, 0f64);
        for w in 0..vals.len() - 1 {
            left_all += vals[w].2;
            if vals[w].1 == 1 {
                left_pos += vals[w].2;
            }
            if vals[w].0 == vals[w + 1].0 {
                continue;
            }
            let threshold = (vals[w].0 + vals[w + 1].0) / 2.0;
            // Polarity left→0/right→1 errs on left positives and right negatives.
            let err_left0 = left_pos + (total - left_all) - (total_pos - left_pos);
            let err_left1 = total - err_left0;
            for (left_label, err) in [(0u8, err_left0), (1u8, err_left1)] {
                if best.as_ref().is_none_or(|(_, e)| err < *e) {
                    best = Some((
                        Stump::Threshold {
                            feature: f,
                            threshold,
                            left_label,
                        },
                        err,
                    ));
                }
            }
        }
    }
    best.unwrap_or_else(|| {
        // Every feature is constant: predict the heavier class.
        let label = u8::from(total_pos > total - total_pos);
        (Stump::Constant(label), total_pos.min(total - total_pos))
    })
}

impl AdaBoostState {
    pub fn fit(train: &Dataset, max_rounds: usize) -> Self {
        let n = train.n_instances();
        let mut weights = vec![1.0 / n as f64; n];
        let mut rounds = Vec::new();
        for _ in 0..max_rounds {
            let (stump, err) = best_stump(train, &weights);
            if err >= 0.5 - 1e-12 {
                break;
            }
            let err = err.max(1e-16);
            let alpha = 0.5 * ((1.0 - err) / err).ln();
            let constant = matches!(stump, Stump::Constant(_));
            for (i, w) in weights.iter_mut().enumerate() {
                let correct = stump.predict_row(train.row(i)) == train.label(i);
                *w *= if correct { (-alpha).exp() } else { alpha.exp() };
            }
            let z: f64 = weights.iter().sum();
            for w in &mut weights {
                *w /= z;
            }
            rounds.push((stump, alpha));
            if err <= 1e-12 || constant {
                break;
            }
        }
        if rounds.is_empty() {
            let (pos, neg) = train.class_counts();
            rounds.push((Stump::Constant(u8::from(pos > neg)), 1.0));
        }
        Self { rounds }
    }

    #[cfg_attr(not(test), allow(dead_code))]
    pub fn n_rounds(&self) -> usize {
        self.rounds.len()
    }

    /// Weighted-vote score in ±1 terms; ≥ 0 predicts the positive class.
    fn score(&self, row: &[f64]) -> f64 {
        self.rounds
            .iter()
            .map(|(s, alpha)| alpha * if s.predict_row(row) == 1 { 1.0 } else { -1.0 })
            .sum()
    }

    pub fn predict_row(&self, row: &[f64]) -> u8 {
        u8::from(self.score(row) >= 0.0)
    }

    /// The ensemble truncated to its first `k` rounds.
    #[cfg_attr(not(test), allow(dead_code))]
    pub fn prefix(&self, k: usize) -> Self {
        Self {
            rounds: self.rounds[..k.min(self.rounds.len())].to_vec(),
        }
    }
}
