use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// A dense row-major feature table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Features {
    values: Vec<f64>,
    rows: usize,
    cols: usize,
}

impl Features {
    /// Build from row-major values. Every value must be finite.
    pub fn new(values: Vec<f64>, rows: usize, cols: usize) -> Result<Self> {
        if values.len() != rows * cols {
            return Err(Error::InvalidDataset(format!(
                "feature buffer has {} values, expected {}x{}",
                values.len(),
                rows,
                cols
            )));
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidDataset(format!(
                "non-finite feature value at row {}, column {}",
                pos / cols,
                pos % cols
            )));
        }
        Ok(Self { values, rows, cols })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != m) {
            return Err(Error::InvalidDataset("ragged rows".into()));
        }
        Features::new(rows.concat(), n, m)
    }

    pub fn n_rows(&self) -> usize {
        self.rows
    }

    pub fn n_cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.cols..(i + 1) * self.cols]
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.cols + j]
    }

    pub fn rows_iter(&self) -> impl Iterator<Item = &[f64]> {
        self.values.chunks_exact(self.cols.max(1))
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    /// New table keeping only `kept` columns, in the given order.
    pub fn select_columns(&self, kept: &[usize]) -> Result<Self> {
        if let Some(&bad) = kept.iter().find(|&&j| j >= self.cols) {
            return Err(Error::InvalidArgument(format!(
                "column index {bad} out of range for width {}",
                self.cols
            )));
        }
        let mut values = Vec::with_capacity(self.rows * kept.len());
        for i in 0..self.rows {
            let row = self.row(i);
            values.extend(kept.iter().map(|&j| row[j]));
        }
        Features::new(values, self.rows, kept.len())
    }
}

/// An immutable numeric feature table with binary labels.
///
/// Labels are `{0, 1}` with 1 the positive (by convention, minority) class.
/// Construction validates shape and finiteness; operations that need both
/// classes check that at their own boundary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    features: Features,
    labels: Vec<u8>,
    feature_names: Vec<String>,
    id: String,
}

impl Dataset {
    pub fn new(
        features: Features,
        labels: Vec<u8>,
        feature_names: Vec<String>,
        id: impl Into<String>,
    ) -> Result<Self> {
        if features.n_rows() < 2 {
            return Err(Error::InvalidDataset(format!(
                "need at least 2 instances, got {}",
                features.n_rows()
            )));
        }
        if features.n_cols() == 0 {
            return Err(Error::InvalidDataset("need at least 1 feature".into()));
        }
        if labels.len() != features.n_rows() {
            return Err(Error::InvalidDataset(format!(
                "{} labels for {} rows",
                labels.len(),
                features.n_rows()
            )));
        }
        if let Some(&bad) = labels.iter().find(|&&l| l > 1) {
            return Err(Error::InvalidDataset(format!(
                "label {bad} outside {{0,1}}"
            )));
        }
        if feature_names.len() != features.n_cols() {
            return Err(Error::InvalidDataset(format!(
                "{} feature names for {} columns",
                feature_names.len(),
                features.n_cols()
            )));
        }
        Ok(Self {
            features,
            labels,
            feature_names,
            id: id.into(),
        })
    }

    /// Convenience constructor with generated feature names.
    pub fn from_rows(rows: &[Vec<f64>], labels: &[u8], id: impl Into<String>) -> Result<Self> {
        let features = Features::from_rows(rows)?;
        let names = (0..features.n_cols()).map(|j| format!("f{j}")).collect();
        Dataset::new(features, labels.to_vec(), names, id)
    }

    pub fn n_instances(&self) -> usize {
        self.features.n_rows()
    }

    pub fn n_features(&self) -> usize {
        self.features.n_cols()
    }

    pub fn features(&self) -> &Features {
        &self.features
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> u8 {
        self.labels[i]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        self.features.row(i)
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    /// Count of instances labeled 1 and 0.
    pub fn class_counts(&self) -> (usize, usize) {
        let pos = self.labels.iter().filter(|&&l| l == 1).count();
        (pos, self.labels.len() - pos)
    }

    /// Indices of instances with the given label.
    pub fn class_indices(&self, label: u8) -> Vec<usize> {
        (0..self.n_instances())
            .filter(|&i| self.labels[i] == label)
            .collect()
    }

    /// Error unless both classes are present.
    pub fn require_both_classes(&self) -> Result<()> {
        let (pos, neg) = self.class_counts();
        if pos == 0 {
            return Err(Error::SingleClass(0));
        }
        if neg == 0 {
            return Err(Error::SingleClass(1));
        }
        Ok(())
    }

    /// New dataset with the selected rows, in the given order.
    pub fn subset(&self, indices: &[usize], id: impl Into<String>) -> Result<Self> {
        let mut values = Vec::with_capacity(indices.len() * self.n_features());
        let mut labels = Vec::with_capacity(indices.len());
        for &i in indices {
            if i >= self.n_instances() {
                return Err(Error::InvalidArgument(format!(
                    "row index {i} out of range for {} instances",
                    self.n_instances()
                )));
            }
            values.extend_from_slice(self.row(i));
            labels.push(self.labels[i]);
        }
        Dataset::new(
            Features::new(values, indices.len(), self.n_features())?,
            labels,
            self.feature_names.clone(),
            id,
        )
    }

    /// New dataset keeping only the given feature columns.
    pub fn select_features(&self, kept: &[usize], id: impl Into<String>) -> Result<Self> {
        let features = self.features.select_columns(kept)?;
        let names = kept.iter().map(|&j| self.feature_names[j].clone()).collect();
        Dataset::new(features, self.labels.clone(), names, id)
    }

    /// Replace the feature table, keeping labels and names.
    pub(crate) fn with_features(&self, features: Features, id: impl Into<String>) -> Result<Self> {
        Dataset::new(
            features,
            self.labels.clone(),
            self.feature_names.clone(),
            id,
        )
    }

    /// Permutation of row indices ordering instances by feature content,
    /// then label, then original index. Used where results must not depend
    /// on the order rows happened to arrive in.
    pub fn canonical_order(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.n_instances()).collect();
        order.sort_by(|&a, &b| {
            let (ra, rb) = (self.row(a), self.row(b));
            for (va, vb) in ra.iter().zip(rb) {
                match va.partial_cmp(vb) {
                    Some(std::cmp::Ordering::Equal) | None => continue,
                    Some(ord) => return ord,
                }
            }
            self.labels[a].cmp(&self.labels[b]).then(a.cmp(&b))
        });
        order
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_finite() {
        let err = Dataset::from_rows(&[vec![1.0, 2.0], vec![f64::NAN, 0.0]], &[0, 1], "t");
        assert!(err.is_err());
    }

    #[test]
    fn rejects_too_small() {
        assert!(Dataset::from_rows(&[vec![1.0]], &[0], "t").is_err());
        assert!(Dataset::from_rows(&[vec![], vec![]], &[0, 1], "t").is_err());
    }

    #[test]
    fn rejects_bad_labels() {
        assert!(Dataset::from_rows(&[vec![1.0], vec![2.0]], &[0, 2], "t").is_err());
    }

    #[test]
    fn subset_and_select() {
        let d = Dataset::from_rows(
            &[vec![1.0, 10.0], vec![2.0, 20.0], vec![3.0, 30.0]],
            &[0, 1, 0],
            "t",
        )
        .unwrap();
        let s = d.subset(&[2, 0], "s").unwrap();
        assert_eq!(s.row(0), &[3.0, 30.0]);
        assert_eq!(s.labels(), &[0, 0]);
        let f = d.select_features(&[1], "f").unwrap();
        assert_eq!(f.row(1), &[20.0]);
        assert_eq!(f.feature_names(), &["f1".to_string()]);
    }

    #[test]
    fn canonical_order_sorts_by_content() {
        let d = Dataset::from_rows(
            &[vec![3.0], vec![1.0], vec![2.0], vec![1.0]],
            &[0, 1, 0, 0],
            "t",
        )
        .unwrap();
        // 1.0 rows first (label 0 before label 1 on ties), then 2.0, then 3.0.
        assert_eq!(d.canonical_order(), vec![3, 1, 2, 0]);
    }
}
