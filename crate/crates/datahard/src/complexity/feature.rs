use crate::data::Dataset;
use crate::error::Result;
use nalgebra::{DMatrix, DVector};

/// Feature-based complexity: discriminant ratios and range overlap.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeatureMeasures {
    /// 1/(1 + max discriminant ratio over features).
    pub f1: f64,
    /// Same ratio after projecting onto the Fisher direction.
    pub f1v: f64,
    /// Product over features of the class-range overlap fraction.
    pub f2: f64,
    /// 1 − the best single feature's separable-instance fraction.
    pub f3: f64,
    /// Remaining-instance fraction after features separate greedily.
    pub f4: f64,
}

pub fn feature_measures(data: &Dataset) -> Result<FeatureMeasures> {
    data.require_both_classes()?;
    let m = data.n_features();
    let r_max = (0..m)
        .map(|j| discriminant_ratio(&data.features().column(j), data.labels()))
        .fold(0.0f64, f64::max);
    let f1 = 1.0 / (1.0 + r_max);
    let f1v = fisher_projection_ratio(data).map_or(1.0, |r| 1.0 / (1.0 + r));

    let mut f2 = 1.0;
    let mut best_separable = 0usize;
    for j in 0..m {
        let col = data.features().column(j);
        let (r0, r1) = class_ranges(&col, data.labels());
        f2 *= overlap_fraction(r0, r1);
        best_separable = best_separable.max(separable_count(&col, r0, r1));
    }
    let n = data.n_instances();
    let f3 = 1.0 - best_separable as f64 / n as f64;
    let f4 = collective_remaining(data) as f64 / n as f64;
    Ok(FeatureMeasures { f1, f1v, f2, f3, f4 })
}

/// Between-class over within-class sum of squares for one feature.
/// A feature constant within both classes scores 0 when the class means
/// agree and +inf when they differ (it separates perfectly).
fn discriminant_ratio(col: &[f64], labels: &[u8]) -> f64 {
    let n = col.len() as f64;
    let grand = col.iter().sum::<f64>() / n;
    let mut between = 0.0;
    let mut within = 0.0;
    for class in [0u8, 1u8] {
        let members: Vec<f64> = col
            .iter()
            .zip(labels)
            .filter(|&(_, &l)| l == class)
            .map(|(&v, _)| v)
            .collect();
        let mean = members.iter().sum::<f64>() / members.len() as f64;
        between += members.len() as f64 * (mean - grand) * (mean - grand);
        within += members.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>();
    }
    if within == 0.0 {
        if between == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        between / within
    }
}

/// Discriminant ratio of the data projected onto the pooled-covariance
/// Fisher direction w = S⁻¹(μ₀ − μ₁), ridge 1e−6. `None` if the solve
/// fails outright.
fn fisher_projection_ratio(data: &Dataset) -> Option<f64> {
    let m = data.n_features();
    let mut means = [DVector::zeros(m), DVector::zeros(m)];
    let mut counts = [0usize; 2];
    for i in 0..data.n_instances() {
        let c = data.label(i) as usize;
        counts[c] += 1;
        for (j, &v) in data.row(i).iter().enumerate() {
            means[c][j] += v;
        }
    }
    for c in 0..2 {
        means[c] /= counts[c] as f64;
    }
    let mut pooled = DMatrix::zeros(m, m);
    for i in 0..data.n_instances() {
        let c = data.label(i) as usize;
        let centered = DVector::from_row_slice(data.row(i)) - &means[c];
        pooled += &centered * centered.transpose();
    }
    // Scale cancels in the projected ratio; the ridge keeps it solvable.
    pooled /= (data.n_instances().max(3) - 2) as f64;
    for d in 0..m {
        pooled[(d, d)] += 1e-6;
    }
    let w = pooled.lu().solve(&(&means[0] - &means[1]))?;
    let projected: Vec<f64> = (0..data.n_instances())
        .map(|i| DVector::from_row_slice(data.row(i)).dot(&w))
        .collect();
    Some(discriminant_ratio(&projected, data.labels()))
}

fn class_ranges(col: &[f64], labels: &[u8]) -> ((f64, f64), (f64, f64)) {
    let mut ranges = [(f64::INFINITY, f64::NEG_INFINITY); 2];
    for (&v, &l) in col.iter().zip(labels) {
        let r = &mut ranges[l as usize];
        r.0 = r.0.min(v);
        r.1 = r.1.max(v);
    }
    (ranges[0], ranges[1])
}

/// Overlap length over total length of two class ranges. A feature that is
/// one constant for everything overlaps completely.
fn overlap_fraction(r0: (f64, f64), r1: (f64, f64)) -> f64 {
    let overlap = (r0.1.min(r1.1) - r0.0.max(r1.0)).max(0.0);
    let total = r0.1.max(r1.1) - r0.0.min(r1.0);
    if total == 0.0 {
        1.0
    } else {
        overlap / total
    }
}

/// Instances outside the two ranges' common region — classifiable by this
/// feature alone.
fn separable_count(col: &[f64], r0: (f64, f64), r1: (f64, f64)) -> usize {
    let lo = r0.0.max(r1.0);
    let hi = r0.1.min(r1.1);
    col.iter().filter(|&&v| v < lo || v > hi).count()
}

/// Greedy collective efficiency: repeatedly let the feature separating the
/// most remaining instances (ties to the lower index) claim them, dropping
/// the feature afterwards. Returns how many instances no feature could
/// separate.
fn collective_remaining(data: &Dataset) -> usize {
    let m = data.n_features();
    let mut remaining: Vec<usize> = (0..data.n_instances()).collect();
    let mut unused: Vec<usize> = (0..m).collect();
    while !remaining.is_empty() && !unused.is_empty() {
        // (separated count, feature, survivors); first maximum wins ties.
        let mut best: Option<(usize, usize, Vec<usize>)> = None;
        for &j in &unused {
            let col: Vec<f64> = remaining.iter().map(|&i| data.row(i)[j]).collect();
            let labels: Vec<u8> = remaining.iter().map(|&i| data.label(i)).collect();
            let (r0, r1) = class_ranges(&col, &labels);
            let lo = r0.0.max(r1.0);
            let hi = r0.1.min(r1.1);
            let kept: Vec<usize> = remaining
                .iter()
                .copied()
                .filter(|&i| {
                    let v = data.row(i)[j];
                    v >= lo && v <= hi
                })
                .collect();
            let separated = remaining.len() - kept.len();
            if best.as_ref().is_none_or(|&(s, _, _)| separated > s) {
                best = Some((separated, j, kept));
            }
        }
        let (separated, feature, kept) = best.unwrap();
        if separated == 0 {
            break;
        }
        remaining = kept;
        unused.retain(|&j| j != feature);
    }
    remaining.len()
}
