use crate::data::{apply_normalizer, fit_normalizer, Dataset, NormKind};
use nalgebra::DMatrix;

/// Dimensionality measures: raw and PCA-reduced feature counts against
/// the sample size.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DimensionalityMeasures {
    /// Features per instance, m/n.
    pub t2: f64,
    /// PCA components covering 95% of variance, per instance.
    pub t3: f64,
    /// Same component count as a fraction of m.
    pub t4: f64,
}

pub fn dimensionality_measures(data: &Dataset) -> DimensionalityMeasures {
    let n = data.n_instances();
    let m = data.n_features();
    let kept = pca_components_95(data);
    DimensionalityMeasures {
        t2: m as f64 / n as f64,
        t3: kept as f64 / n as f64,
        t4: kept as f64 / m as f64,
    }
}

/// Number of principal components of the standardized features needed to
/// reach 95% of total variance. A dataset with no variance needs none.
fn pca_components_95(data: &Dataset) -> usize {
    let spec = fit_normalizer(data, NormKind::Standard);
    let scaled = apply_normalizer(&spec, data).expect("scaling preserves shape");
    let n = scaled.n_instances();
    let m = scaled.n_features();
    let x = DMatrix::from_fn(n, m, |i, j| scaled.features().get(i, j));
    let cov = (x.transpose() * &x) / (n.max(2) - 1) as f64;
    let mut eigen: Vec<f64> = cov
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .map(|&v| v.max(0.0))
        .collect();
    eigen.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let total: f64 = eigen.iter().sum();
    if total <= 1e-12 {
        return 0;
    }
    let mut acc = 0.0;
    for (k, v) in eigen.iter().enumerate() {
        acc += v;
        if acc >= 0.95 * total {
            return k + 1;
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn duplicated_feature_halves_t4() {
        let rows: Vec<Vec<f64>> = (0..8).map(|i| vec![i as f64, i as f64]).collect();
        let labels = vec![0, 0, 0, 0, 1, 1, 1, 1];
        let d = Dataset::from_rows(&rows, &labels, "dup").unwrap();
        let m = dimensionality_measures(&d);
        assert_relative_eq!(m.t2, 2.0 / 8.0);
        assert_relative_eq!(m.t3, 1.0 / 8.0);
        assert_relative_eq!(m.t4, 0.5);
    }

    #[test]
    fn single_feature_needs_itself() {
        let rows: Vec<Vec<f64>> = (0..6).map(|i| vec![i as f64]).collect();
        let d = Dataset::from_rows(&rows, &[0, 0, 0, 1, 1, 1], "one").unwrap();
        let m = dimensionality_measures(&d);
        assert_relative_eq!(m.t4, 1.0);
        assert_relative_eq!(m.t3, 1.0 / 6.0);
    }

    #[test]
    fn orthogonal_directions_both_count() {
        // Two uncorrelated, equal-variance columns: the first component
        // explains only half of the variance.
        let rows = vec![
            vec![1.0, 1.0],
            vec![-1.0, 1.0],
            vec![1.0, -1.0],
            vec![-1.0, -1.0],
        ];
        let d = Dataset::from_rows(&rows, &[0, 1, 0, 1], "orth").unwrap();
        let m = dimensionality_measures(&d);
        assert_relative_eq!(m.t4, 1.0);
    }

    #[test]
    fn rank_three_data_needs_three_components() {
        // Twenty columns mixing three latent signals, plus noise far
        // below the 5% residual budget.
        let rows: Vec<Vec<f64>> = (0..100)
            .map(|i| {
                let t = i as f64;
                let z = [
                    (0.37 * t + 0.4).sin(),
                    (0.91 * t).cos(),
                    (1.73 * t + 2.0).sin(),
                ];
                (0..20)
                    .map(|j| z[j % 3] + 0.001 * (17.3 * t * (j + 1) as f64).sin())
                    .collect()
            })
            .collect();
        let labels: Vec<u8> = (0..100).map(|i| (i % 2) as u8).collect();
        let d = Dataset::from_rows(&rows, &labels, "rank3").unwrap();
        let m = dimensionality_measures(&d);
        assert_relative_eq!(m.t2, 0.2);
        assert_relative_eq!(m.t3, 0.03);
        assert_relative_eq!(m.t4, 0.15);
    }

    #[test]
    fn constant_data_needs_no_components() {
        let rows = vec![vec![3.0, 3.0]; 4];
        let d = Dataset::from_rows(&rows, &[0, 0, 1, 1], "flat").unwrap();
        let m = dimensionality_measures(&d);
        assert_relative_eq!(m.t3, 0.0);
        assert_relative_eq!(m.t4, 0.0);
        assert_relative_eq!(m.t2, 0.5);
    }
}
