use crate::data::Dataset;

/// Gaussian naive Bayes with per-feature class-conditional normals.
#[derive(Debug, Clone)]
pub struct GaussianNbState {
    log_priors: [f64; 2],
    /// Per class, per feature.
    means: [Vec<f64>; 2],
    vars: [Vec<f64>; 2],
}

impl GaussianNbState {
    /// Population means/variances per class; every variance is padded by
    /// 1e−9 × the largest overall feature variance so constant features
    /// stay usable.
    pub fn fit(train: &Dataset) -> Self {
        let m = train.n_features();
        let n = train.n_instances() as f64;
        let mut overall_max_var = 0f64;
        for j in 0..m {
            let col = train.features().column(j);
            let mean = col.iter().sum::<f64>() / n;
            let var = col.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
            overall_max_var = overall_max_var.max(var);
        }
        let smoothing = 1e-9 * overall_max_var.max(1.0);

        let mut log_priors = [0f64; 2];
        let mut means = [vec![0.0; m], vec![0.0; m]];
        let mut vars = [vec![0.0; m], vec![0.0; m]];
        for class in 0..2u8 {
            let idx = train.class_indices(class);
            let nc = idx.len() as f64;
            log_priors[class as usize] = (nc / n).ln();
            for j in 0..m {
                let mean = idx.iter().map(|&i| train.features().get(i, j)).sum::<f64>() / nc;
                let var = idx
                    .iter()
                    .map(|&i| {
                        let d = train.features().get(i, j) - mean;
                        d * d
                    })
                    .sum::<f64>()
                    / nc;
                means[class as usize][j] = mean;
                vars[class as usize][j] = var + smoothing;
            }
        }
        Self {
            log_priors,
            means,
            vars,
        }
    }

    pub fn predict_row(&self, row: &[f64]) -> u8 {
        let score = |class: usize| {
            let mut s = self.log_priors[class];
            for (j, &x) in row.iter().enumerate() {
                let var = self.vars[class][j];
                let d = x - self.means[class][j];
                s += -0.5 * (2.0 * std::f64::consts::PI * var).ln() - d * d / (2.0 * var);
            }
            s
        };
        // Ties go to class 0.
        u8::from(score(1) > score(0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn separates_shifted_blobs() {
        let rows: Vec<Vec<f64>> = (0..10)
            .map(|i| vec![i as f64 * 0.1])
            .chain((0..10).map(|i| vec![10.0 + i as f64 * 0.1]))
            .collect();
        let labels: Vec<u8> = (0..20).map(|i| u8::from(i >= 10)).collect();
        let d = Dataset::from_rows(&rows, &labels, "blobs").unwrap();
        let nb = GaussianNbState::fit(&d);
        for i in 0..20 {
            assert_eq!(nb.predict_row(d.row(i)), d.label(i));
        }
    }

    #[test]
    fn constant_feature_does_not_break() {
        let d = Dataset::from_rows(
            &[vec![1.0, 0.0], vec![1.0, 1.0], vec![1.0, 9.0], vec![1.0, 10.0]],
            &[0, 0, 1, 1],
            "const",
        )
        .unwrap();
        let nb = GaussianNbState::fit(&d);
        assert_eq!(nb.predict_row(&[1.0, 0.5]), 0);
        assert_eq!(nb.predict_row(&[1.0, 9.5]), 1);
    }
}
