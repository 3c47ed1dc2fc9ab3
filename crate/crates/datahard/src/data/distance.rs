use crate::data::Dataset;

/// Euclidean distance between two equal-length vectors.
pub fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Full pairwise Euclidean distance matrix, stored densely.
///
/// Symmetric with a zero diagonal by construction: each pair is computed
/// once and mirrored.
#[derive(Debug, Clone)]
pub struct DistanceMatrix {
    values: Vec<f64>,
    n: usize,
}

impl DistanceMatrix {
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n + j]
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Distances from instance `i` to all instances (including itself).
    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.n..(i + 1) * self.n]
    }

    /// Largest pairwise distance in the matrix (0 for a single instance).
    pub fn max(&self) -> f64 {
        self.values.iter().cloned().fold(0.0, f64::max)
    }

    /// Indices `j != i` sorted by `(distance to i, j)` ascending.
    pub fn neighbors_of(&self, i: usize) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.n).filter(|&j| j != i).collect();
        order.sort_by(|&a, &b| {
            self.get(i, a)
                .partial_cmp(&self.get(i, b))
                .unwrap()
                .then(a.cmp(&b))
        });
        order
    }
}

/// Pairwise Euclidean distances over a dataset's feature rows.
pub fn distance_matrix(data: &Dataset) -> DistanceMatrix {
    let n = data.n_instances();
    let mut values = vec![0.0; n * n];
    for i in 0..n {
        for j in (i + 1)..n {
            let d = euclidean(data.row(i), data.row(j));
            values[i * n + j] = d;
            values[j * n + i] = d;
        }
    }
    DistanceMatrix { values, n }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::Dataset;

    fn square() -> Dataset {
        Dataset::from_rows(
            &[vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0]],
            &[0, 0, 1, 1],
            "square",
        )
        .unwrap()
    }

    #[test]
    fn symmetric_zero_diagonal() {
        let m = distance_matrix(&square());
        for i in 0..4 {
            assert_eq!(m.get(i, i), 0.0);
            for j in 0..4 {
                assert_eq!(m.get(i, j), m.get(j, i));
            }
        }
        assert_eq!(m.get(0, 1), 1.0);
        assert!((m.get(0, 3) - 2f64.sqrt()).abs() < 1e-12);
        assert!((m.max() - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn neighbor_order_breaks_ties_by_index() {
        let m = distance_matrix(&square());
        // Instance 0 is at distance 1 from both 1 and 2; 1 comes first.
        assert_eq!(m.neighbors_of(0), vec![1, 2, 3]);
    }
}
