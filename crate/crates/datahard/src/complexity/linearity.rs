use crate::data::{Dataset, Features};
use crate::error::Result;
use crate::learners::train_linear_svm_default;
use crate::rng::derived_rng;
use rand::Rng as _;

/// How far the dataset is from linearly separable, measured through a
/// linear classifier trained on it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearityMeasures {
    /// Normalized sum of margin distances of misclassified instances.
    pub l1: f64,
    /// Training error rate of the linear classifier.
    pub l2: f64,
    /// Error rate on midpoints of same-class pairs.
    pub l3: f64,
}

pub fn linearity_measures(data: &Dataset, seed: u64) -> Result<LinearityMeasures> {
    data.require_both_classes()?;
    let model = train_linear_svm_default(data);
    let n = data.n_instances();
    let mut errors = 0usize;
    let mut distance_sum = 0.0;
    let norm = model
        .weights
        .iter()
        .map(|w| w * w)
        .sum::<f64>()
        .sqrt()
        .max(1e-12);
    for i in 0..n {
        let z = model.decision(data.row(i));
        if model.predict_row(data.row(i)) != data.label(i) {
            errors += 1;
            distance_sum += z.abs() / norm;
        }
    }
    let l2 = errors as f64 / n as f64;
    let s = distance_sum / n as f64;
    let l1 = s / (1.0 + s);

    let interpolants = interpolated_set(data, seed, "l3-interp");
    let wrong = interpolants
        .iter()
        .filter(|(row, label)| model.predict_row(row) != *label)
        .count();
    let l3 = wrong as f64 / interpolants.len() as f64;
    Ok(LinearityMeasures { l1, l2, l3 })
}

/// One synthetic point per original instance: the midpoint of two
/// uniformly drawn members of that instance's class (drawn with
/// replacement, so singleton classes reproduce their point).
pub(crate) fn interpolated_set(data: &Dataset, seed: u64, label: &str) -> Vec<(Vec<f64>, u8)> {
    let mut rng = derived_rng(seed, label, &[]);
    let members = [data.class_indices(0), data.class_indices(1)];
    (0..data.n_instances())
        .map(|i| {
            let class = data.label(i);
            let pool = &members[class as usize];
            let a = data.row(pool[rng.gen_range(0..pool.len())]);
            let b = data.row(pool[rng.gen_range(0..pool.len())]);
            let row: Vec<f64> = a.iter().zip(b).map(|(x, y)| 0.5 * (x + y)).collect();
            (row, class)
        })
        .collect()
}

pub(crate) fn interpolated_features(points: &[(Vec<f64>, u8)]) -> (Features, Vec<u8>) {
    let rows: Vec<Vec<f64>> = points.iter().map(|(r, _)| r.clone()).collect();
    let labels: Vec<u8> = points.iter().map(|&(_, l)| l).collect();
    (Features::from_rows(&rows).expect("midpoints of finite rows are finite"), labels)
}
