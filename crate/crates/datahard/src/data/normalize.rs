use crate::data::{Dataset, Features};
use crate::error::Result;
use serde::{Deserialize, Serialize};

/// Feature scaling family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormKind {
    /// Subtract the mean, divide by the population standard deviation.
    Standard,
    /// Map the observed range onto `[0, 1]`.
    MinMax,
    /// Leave features untouched.
    None,
}

/// Fitted per-feature scaling parameters.
///
/// For `Standard`, `shift` holds means and `scale` holds population
/// standard deviations; for `MinMax`, minima and ranges. A feature whose
/// `scale` is zero (constant on the fitting data) maps to 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormalizationSpec {
    pub kind: NormKind,
    pub shift: Vec<f64>,
    pub scale: Vec<f64>,
}

/// Fit scaling parameters on a dataset (typically the training portion).
pub fn fit_normalizer(data: &Dataset, kind: NormKind) -> NormalizationSpec {
    let (n, m) = (data.n_instances(), data.n_features());
    let mut shift = vec![0.0; m];
    let mut scale = vec![1.0; m];
    match kind {
        NormKind::None => {
            scale = vec![1.0; m];
        }
        NormKind::Standard => {
            for j in 0..m {
                let col = data.features().column(j);
                let mean = col.iter().sum::<f64>() / n as f64;
                let var = col.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n as f64;
                shift[j] = mean;
                scale[j] = var.sqrt();
            }
        }
        NormKind::MinMax => {
            for j in 0..m {
                let col = data.features().column(j);
                let lo = col.iter().cloned().fold(f64::INFINITY, f64::min);
                let hi = col.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                shift[j] = lo;
                scale[j] = hi - lo;
            }
        }
    }
    NormalizationSpec { kind, shift, scale }
}

/// Apply fitted scaling to a dataset (its own or held-out rows).
pub fn apply_normalizer(spec: &NormalizationSpec, data: &Dataset) -> Result<Dataset> {
    if matches!(spec.kind, NormKind::None) {
        return Ok(data.clone());
    }
    let (n, m) = (data.n_instances(), data.n_features());
    let mut values = Vec::with_capacity(n * m);
    for i in 0..n {
        for (j, &v) in data.row(i).iter().enumerate() {
            values.push(if spec.scale[j] == 0.0 {
                0.0
            } else {
                (v - spec.shift[j]) / spec.scale[j]
            });
        }
    }
    data.with_features(Features::new(values, n, m)?, data.id())
}


#[cfg(test)]
impl Dataset {
    fn get_value(&self, i: usize, j: usize) -> f64 {
        self.features().get(i, j)
    }
}
