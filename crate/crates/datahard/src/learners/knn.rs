use crate::data::{euclidean, Features};

/// Plain k-nearest-neighbor state: the training rows themselves.
#[derive(Debug, Clone)]
pub struct KnnState {
    features: Features,
    labels: Vec<u8>,
    k: usize,
}

impl KnnState {
    pub fn fit(features: Features, labels: Vec<u8>, k: usize) -> Self {
        Self {
            features,
            labels,
            k,
        }
    }

    pub fn predict_row(&self, row: &[f64]) -> u8 {
        let mut order: Vec<(f64, usize)> = (0..self.features.n_rows())
            .map(|i| (euclidean(row, self.features.row(i)), i))
            .collect();
        order.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)));
        let k = self.k.min(order.len());
        let votes = order[..k]
            .iter()
            .filter(|(_, i)| self.labels[*i] == 1)
            .count();
        match (2 * votes).cmp(&k) {
            std::cmp::Ordering::Greater => 1,
            std::cmp::Ordering::Less => 0,
            // Vote tie: side with the single nearest neighbor.
            std::cmp::Ordering::Equal => self.labels[order[0].1],
        }
    }
}
