use crate::data::{Dataset, Features};
use crate::error::{Error, Result};
use crate::hardness::{instance_measures, MeasureContext, DEFAULT_K, MEASURE_NAMES};
use crate::learners::{fit, LearnerSpec, Model};
use crate::preprocess::{minority_label, resample, ResampleMethod, ResampleSpec};
use crate::rng::{derive, derived_rng, Rng};
use rand::Rng as _;
use rayon::prelude::*;

/// How many redraws a degenerate bootstrap gets before training fails.
const REDRAW_CAP: usize = 10;

/// Weighted bootstrap distribution over the instances of one class.
///
/// Probabilities come from `f(x) = 1/n + (1 − h(x))`, normalized, so a
/// harder instance is drawn less often but never with probability zero.
#[derive(Debug, Clone, PartialEq)]
pub struct SelectionDistribution {
    indices: Vec<usize>,
    probabilities: Vec<f64>,
    cumulative: Vec<f64>,
}

/// Build the selection distribution for one class. `hardness` is aligned
/// with `class_instances` and must lie in `[0, 1]`.
pub fn selection_probabilities(
    class_instances: &[usize],
    hardness: &[f64],
) -> Result<SelectionDistribution> {
    if class_instances.is_empty() {
        return Err(Error::InvalidArgument(
            "selection distribution over an empty class".into(),
        ));
    }
    if class_instances.len() != hardness.len() {
        return Err(Error::InvalidArgument(format!(
            "{} instances but {} hardness values",
            class_instances.len(),
            hardness.len()
        )));
    }
    if let Some(h) = hardness.iter().find(|h| !(0.0..=1.0).contains(*h)) {
        return Err(Error::InvalidArgument(format!(
            "hardness {h} outside [0, 1]"
        )));
    }
    // Work with n·f = 1 + n(1 − h): same distribution, but the textbook
    // cases (hardness [1, 0, 0] → p = [1/9, 4/9, 4/9]) come out exact.
    let n = class_instances.len() as f64;
    let weights: Vec<f64> = hardness.iter().map(|&h| 1.0 + n * (1.0 - h)).collect();
    let total: f64 = weights.iter().sum();
    let probabilities: Vec<f64> = weights.iter().map(|w| w / total).collect();
    let mut acc = 0.0;
    let cumulative = probabilities
        .iter()
        .map(|p| {
            acc += p;
            acc
        })
        .collect();
    Ok(SelectionDistribution {
        indices: class_instances.to_vec(),
        probabilities,
        cumulative,
    })
}

impl SelectionDistribution {
    /// Dataset-level instance indices this distribution covers.
    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    /// Probability per instance, same order as [`indices`](Self::indices).
    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    /// Draw one dataset-level index. One uniform variate per call.
    pub fn sample(&self, rng: &mut Rng) -> usize {
        let u: f64 = rng.gen_range(0.0..1.0);
        let at = self.cumulative.partition_point(|&c| c <= u);
        self.indices[at.min(self.indices.len() - 1)]
    }
}

/// A bagged ensemble voting by mean base-model prediction.
#[derive(Debug)]
pub struct EnsembleModel {
    models: Vec<Model>,
    /// Hardness measure that weighted the bootstraps; `None` for the
    /// uniform baseline.
    pub measure: Option<String>,
    pub seed: u64,
}

impl EnsembleModel {
    pub fn n_estimators(&self) -> usize {
        self.models.len()
    }

    /// Mean base-model vote per row, in `[0, 1]`.
    pub fn vote_fraction(&self, rows: &Features) -> Result<Vec<f64>> {
        let mut sums = vec![0.0; rows.n_rows()];
        for model in &self.models {
            for (s, p) in sums.iter_mut().zip(model.predict(rows)?) {
                *s += f64::from(p);
            }
        }
        let n = self.models.len() as f64;
        Ok(sums.into_iter().map(|s| s / n).collect())
    }

    /// Majority vote; exact ties go to the positive class.
    pub fn predict(&self, rows: &Features) -> Result<Vec<u8>> {
        Ok(self
            .vote_fraction(rows)?
            .into_iter()
            .map(|f| u8::from(f >= 0.5))
            .collect())
    }

    pub fn predict_dataset(&self, data: &Dataset) -> Result<Vec<u8>> {
        self.predict(data.features())
    }
}

/// Resolve a hardness-measure name (case-insensitive; `lsc_i` is accepted
/// for the instance-level LSC) to its column.
fn measure_column(name: &str) -> Result<usize> {
    let mut needle = name.to_ascii_lowercase();
    if needle == "lsc_i" {
        needle = "lsc".into();
    }
    MEASURE_NAMES
        .iter()
        .position(|m| m.to_ascii_lowercase() == needle)
        .ok_or_else(|| {
            Error::InvalidArgument(format!(
                "unknown hardness measure {name:?} (one of {MEASURE_NAMES:?})"
            ))
        })
}

/// Hardness-weighted SMOTE-Bagging. Per-instance hardness is measured
/// once on the full training set, turned into per-class selection
/// distributions, and each bootstrap keeps the original class counts
/// before SMOTE balances it.
pub fn hmsmote_bagging_train(
    train: &Dataset,
    measure: &str,
    n_estimators: usize,
    base: &LearnerSpec,
    seed: u64,
) -> Result<EnsembleModel> {
    let column = measure_column(measure)?;
    let ctx = MeasureContext::build(train, DEFAULT_K, seed)?;
    let rows = instance_measures(train, &ctx)?;
    let hardness: Vec<f64> = rows.iter().map(|r| r.values()[column]).collect();
    train_with_hardness(
        train,
        &hardness,
        Some(MEASURE_NAMES[column].to_string()),
        n_estimators,
        base,
        seed,
    )
}

/// The uniform-bootstrap baseline: identical to
/// [`hmsmote_bagging_train`] with hardness pinned to zero.
pub fn smote_bagging_train(
    train: &Dataset,
    n_estimators: usize,
    base: &LearnerSpec,
    seed: u64,
) -> Result<EnsembleModel> {
    let hardness = vec![0.0; train.n_instances()];
    train_with_hardness(train, &hardness, None, n_estimators, base, seed)
}

fn train_with_hardness(
    train: &Dataset,
    hardness: &[f64],
    measure: Option<String>,
    n_estimators: usize,
    base: &LearnerSpec,
    seed: u64,
) -> Result<EnsembleModel> {
    if n_estimators == 0 {
        return Err(Error::InvalidArgument("ensemble needs at least one estimator".into()));
    }
    let bags = bootstrap_indices(train, hardness, n_estimators, seed)?;
    let models = bags
        .into_par_iter()
        .enumerate()
        .map(|(b, bag)| {
            let balanced = build_bag(train, &bag, b, seed)?;
            let mut spec = base.clone();
            spec.seed = derive(seed, "bag-fit", &[b as u64]);
            fit(&spec, &balanced)
        })
        .collect::<Result<Vec<Model>>>()?;
    Ok(EnsembleModel { models, measure, seed })
}

/// Draw every bag's indices up front from one sequential stream, so the
/// sequence depends only on (train, hardness, seed).
fn bootstrap_indices(
    train: &Dataset,
    hardness: &[f64],
    n_estimators: usize,
    seed: u64,
) -> Result<Vec<Vec<usize>>> {
    train.require_both_classes()?;
    if hardness.len() != train.n_instances() {
        return Err(Error::InvalidArgument(format!(
            "{} hardness values for {} instances",
            hardness.len(),
            train.n_instances()
        )));
    }
    let minority = minority_label(train);
    let classes = [minority, 1 - minority];
    let dists = classes
        .iter()
        .map(|&c| {
            let idx = train.class_indices(c);
            let h: Vec<f64> = idx.iter().map(|&i| hardness[i]).collect();
            selection_probabilities(&idx, &h)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut rng = derived_rng(seed, "bagging-draw", &[]);
    (0..n_estimators)
        .map(|_| draw_bag(train, &dists, &mut rng))
        .collect()
}

/// One bootstrap: |minority| draws from the minority distribution, then
/// |majority| from the majority one. A single-class result is redrawn.
fn draw_bag(train: &Dataset, dists: &[SelectionDistribution], rng: &mut Rng) -> Result<Vec<usize>> {
    for _ in 0..REDRAW_CAP {
        let mut bag = Vec::with_capacity(train.n_instances());
        for dist in dists {
            for _ in 0..dist.indices().len() {
                bag.push(dist.sample(rng));
            }
        }
        let first = train.label(bag[0]);
        if bag.iter().any(|&i| train.label(i) != first) {
            return Ok(bag);
        }
    }
    Err(Error::InvalidArgument(format!(
        "bootstrap stayed single-class after {REDRAW_CAP} redraws"
    )))
}

/// Materialize one bag and SMOTE it to balance.
fn build_bag(train: &Dataset, bag: &[usize], b: usize, seed: u64) -> Result<Dataset> {
    let subset = train.subset(bag, format!("{}-bag{b}", train.id()))?;
    let spec = ResampleSpec::new(ResampleMethod::Smote, derive(seed, "bag-smote", &[b as u64]));
    Ok(resample(&subset, &spec)?.data)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::learners::{mcc, Algorithm};
    use approx::assert_relative_eq;

    fn blobs(n_per_class: usize) -> Dataset {
        let rows: Vec<Vec<f64>> = (0..2 * n_per_class)
            .map(|i| {
                let t = i as f64;
                let base = if i < n_per_class { 0.0 } else { 10.0 };
                vec![base + (t * 1.7).sin() * 0.5, base + (t * 2.3).cos() * 0.5]
            })
            .collect();
        let labels: Vec<u8> = (0..2 * n_per_class)
            .map(|i| u8::from(i >= n_per_class))
            .collect();
        Dataset::from_rows(&rows, &labels, "blobs").unwrap()
    }

    /// 14 negatives, 6 positives, positives clustered together.
    fn imbalanced() -> Dataset {
        let rows: Vec<Vec<f64>> = (0..20)
            .map(|i| {
                let t = i as f64;
                let base = if i < 14 { 0.0 } else { 6.0 };
                vec![base + (t * 1.1).sin(), base + (t * 1.9).cos()]
            })
            .collect();
        let labels: Vec<u8> = (0..20).map(|i| u8::from(i >= 14)).collect();
        Dataset::from_rows(&rows, &labels, "imb").unwrap()
    }

    #[test]
    fn hand_computed_probabilities() {
        let dist = selection_probabilities(&[3, 7, 9], &[1.0, 0.0, 0.0]).unwrap();
        assert_eq!(dist.probabilities(), &[1.0 / 9.0, 4.0 / 9.0, 4.0 / 9.0]);
        assert_eq!(dist.indices(), &[3, 7, 9]);
    }

    #[test]
    fn constant_hardness_is_uniform() {
        let dist = selection_probabilities(&[0, 1, 2, 3], &[0.5; 4]).unwrap();
        assert_eq!(dist.probabilities(), &[0.25; 4]);
        let sum: f64 = selection_probabilities(&[0, 1, 2, 3, 4, 5, 6], &[0.37; 7])
            .unwrap()
            .probabilities()
            .iter()
            .sum();
        assert_relative_eq!(sum, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn hardest_instance_keeps_positive_probability() {
        let dist = selection_probabilities(&[0, 1], &[1.0, 0.0]).unwrap();
        assert!(dist.probabilities()[0] > 0.0);
        assert!(dist.probabilities()[0] < dist.probabilities()[1]);
    }

    #[test]
    fn probability_is_anti_monotone_in_hardness() {
        let h = [0.9, 0.1, 0.4, 0.40001, 0.0];
        let dist = selection_probabilities(&[0, 1, 2, 3, 4], &h).unwrap();
        let p = dist.probabilities();
        for i in 0..h.len() {
            for j in 0..h.len() {
                if h[i] > h[j] {
                    assert!(p[i] < p[j], "h {} vs {} gave p {} vs {}", h[i], h[j], p[i], p[j]);
                }
            }
        }
    }

    #[test]
    fn empty_class_and_bad_hardness_are_rejected() {
        assert!(selection_probabilities(&[], &[]).is_err());
        assert!(selection_probabilities(&[0], &[1.5]).is_err());
        assert!(selection_probabilities(&[0, 1], &[0.0]).is_err());
    }

    #[test]
    fn zero_hardness_shares_the_baseline_draw_path() {
        let d = blobs(10);
        let zeros = vec![0.0; d.n_instances()];
        // kDN on wide-margin blobs is 0 everywhere, so the weighted and
        // uniform draws must consume randomness identically.
        let ctx = MeasureContext::build(&d, DEFAULT_K, 4).unwrap();
        let kdn: Vec<f64> = instance_measures(&d, &ctx)
            .unwrap()
            .iter()
            .map(|r| r.kdn)
            .collect();
        assert!(kdn.iter().all(|&v| v == 0.0));
        let a = bootstrap_indices(&d, &kdn, 6, 4).unwrap();
        let b = bootstrap_indices(&d, &zeros, 6, 4).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn bags_keep_class_counts_then_smote_balances() {
        let d = imbalanced();
        let bags = bootstrap_indices(&d, &vec![0.2; 20], 5, 9).unwrap();
        for (b, bag) in bags.iter().enumerate() {
            assert_eq!(bag.len(), 20);
            let pos = bag.iter().filter(|&&i| d.label(i) == 1).count();
            assert_eq!(pos, 6, "bag kept the original class counts");
            let balanced = build_bag(&d, bag, b, 9).unwrap();
            let (p, n) = balanced.class_counts();
            assert_eq!(p, n, "bag {b} is balanced after SMOTE");
        }
    }

    #[test]
    fn draws_differ_between_bags_and_follow_the_weights() {
        let d = imbalanced();
        // Hardness 1 for instance 0 of the majority class: it should
        // appear far less often than its uniform share.
        let mut h = vec![0.0; 20];
        h[0] = 1.0;
        let bags = bootstrap_indices(&d, &h, 40, 11).unwrap();
        assert!(bags.windows(2).any(|w| w[0] != w[1]));
        let hits = bags.iter().flatten().filter(|&&i| i == 0).count();
        // Uniform draws would pick it 14·40/14 = 40 times in expectation;
        // its weight is 1 against 15 for each easy peer (≈ 3 expected).
        assert!(hits < 16, "hard instance drawn {hits} times, uniform expectation 40");
    }

    #[test]
    fn single_cart_on_separable_blobs_is_perfect() {
        let d = blobs(10);
        let base = LearnerSpec::new(Algorithm::Cart, 0);
        let model = hmsmote_bagging_train(&d, "kDN", 1, &base, 7).unwrap();
        let preds = model.predict_dataset(&d).unwrap();
        assert_relative_eq!(mcc(&preds, d.labels()).unwrap(), 1.0);
        assert_eq!(model.n_estimators(), 1);
        assert_eq!(model.measure.as_deref(), Some("kDN"));
    }

    #[test]
    fn vote_fraction_stays_in_unit_interval_and_thresholds() {
        let d = imbalanced();
        let base = LearnerSpec::new(Algorithm::Knn, 0);
        let model = smote_bagging_train(&d, 7, &base, 3).unwrap();
        let votes = model.vote_fraction(d.features()).unwrap();
        let preds = model.predict(d.features()).unwrap();
        for (v, p) in votes.iter().zip(preds) {
            assert!((0.0..=1.0).contains(v));
            assert_eq!(p, u8::from(*v >= 0.5));
        }
        assert!(model.measure.is_none());
    }

    #[test]
    fn ensembles_are_reproducible() {
        let d = imbalanced();
        let base = LearnerSpec::new(Algorithm::Cart, 0);
        let a = hmsmote_bagging_train(&d, "ds", 5, &base, 21).unwrap();
        let b = hmsmote_bagging_train(&d, "ds", 5, &base, 21).unwrap();
        assert_eq!(
            a.predict_dataset(&d).unwrap(),
            b.predict_dataset(&d).unwrap()
        );
        let c = hmsmote_bagging_train(&d, "ds", 5, &base, 22).unwrap();
        let _ = c.predict_dataset(&d).unwrap();
    }

    #[test]
    fn unknown_measure_is_rejected() {
        let d = blobs(5);
        let base = LearnerSpec::new(Algorithm::Cart, 0);
        let err = hmsmote_bagging_train(&d, "nope", 3, &base, 1).unwrap_err();
        assert!(err.to_string().contains("unknown hardness measure"));
        assert!(measure_column("LSC_i").is_ok());
        assert!(measure_column("td_p").is_ok());
    }

    #[test]
    fn zero_estimators_is_rejected() {
        let d = blobs(5);
        let base = LearnerSpec::new(Algorithm::Cart, 0);
        assert!(smote_bagging_train(&d, 0, &base, 1).is_err());
    }
}
