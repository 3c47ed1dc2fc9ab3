use crate::data::Dataset;

/// Class-balance measures. Both sit at 0 for a perfectly balanced
/// dataset and grow toward 1 with skew.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BalanceDatasetMeasures {
    /// Entropy deficit: 1 − H(class proportions)/log₂(2).
    pub c1: f64,
    /// Imbalance-ratio form: 1 − 1/IR.
    pub c2: f64,
    /// True when one class is absent; both measures then read 1.
    pub single_class: bool,
}

pub fn balance_dataset_measures(data: &Dataset) -> BalanceDatasetMeasures {
    let (pos, neg) = data.class_counts();
    if pos == 0 || neg == 0 {
        return BalanceDatasetMeasures { c1: 1.0, c2: 1.0, single_class: true };
    }
    let n = (pos + neg) as f64;
    let entropy: f64 = [pos, neg]
        .iter()
        .map(|&c| {
            let p = c as f64 / n;
            -p * p.log2()
        })
        .sum();
    let ir = 0.5 * (pos as f64 / neg as f64 + neg as f64 / pos as f64);
    BalanceDatasetMeasures { c1: 1.0 - entropy, c2: 1.0 - 1.0 / ir, single_class: false }
}
