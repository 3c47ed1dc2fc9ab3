use crate::complexity::linearity::{interpolated_features, interpolated_set};
use crate::data::{distance_matrix, euclidean, Dataset};
use crate::error::{Error, Result};
use crate::hardness::prim_mst;

/// Neighborhood-structure complexity of a whole dataset.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NeighborhoodDatasetMeasures {
    /// Fraction of vertices touching a cross-class MST edge.
    pub n1: f64,
    /// s/(1+s) for s = Σ nearest-same / Σ nearest-other distances.
    pub n2: f64,
    /// Leave-one-out 1-NN error rate.
    pub n3: f64,
    /// 1-NN error rate on midpoints of same-class pairs.
    pub n4: f64,
    /// Hyperspheres left after containment absorption, over n.
    pub t1: f64,
    /// 1 − mean local-set cardinality / n.
    pub lsc: f64,
}

pub fn neighborhood_dataset_measures(
    data: &Dataset,
    seed: u64,
) -> Result<NeighborhoodDatasetMeasures> {
    data.require_both_classes()?;
    let n = data.n_instances();
    if n < 3 {
        return Err(Error::InvalidArgument(format!(
            "neighborhood measures need n ≥ 3, got {n}"
        )));
    }
    let dist = distance_matrix(data);

    let mut borderline = vec![false; n];
    for &(a, b) in &prim_mst(&dist) {
        if data.label(a) != data.label(b) {
            borderline[a] = true;
            borderline[b] = true;
        }
    }
    let n1 = borderline.iter().filter(|&&b| b).count() as f64 / n as f64;

    // Nearest same-class and other-class distances; instances without a
    // same-class peer are left out of both sums.
    let mut intra_sum = 0.0;
    let mut extra_sum = 0.0;
    for i in 0..n {
        let mut intra: Option<f64> = None;
        let mut extra = f64::INFINITY;
        for j in 0..n {
            if j == i {
                continue;
            }
            let d = dist.get(i, j);
            if data.label(j) == data.label(i) {
                intra = Some(intra.map_or(d, |v: f64| v.min(d)));
            } else {
                extra = extra.min(d);
            }
        }
        if let Some(d) = intra {
            intra_sum += d;
            extra_sum += extra;
        }
    }
    let n2 = if extra_sum == 0.0 {
        if intra_sum == 0.0 {
            0.5
        } else {
            1.0
        }
    } else {
        let s = intra_sum / extra_sum;
        s / (1.0 + s)
    };

    let loo_errors = (0..n)
        .filter(|&i| data.label(dist.neighbors_of(i)[0]) != data.label(i))
        .count();
    let n3 = loo_errors as f64 / n as f64;

    let (rows, labels) = interpolated_features(&interpolated_set(data, seed, "n4-interp"));
    let n4_errors = (0..rows.n_rows())
        .filter(|&p| {
            let row = rows.row(p);
            let nearest = (0..n)
                .map(|j| (euclidean(row, data.row(j)), j))
                .min_by(|a, b| a.partial_cmp(b).unwrap())
                .unwrap()
                .1;
            data.label(nearest) != labels[p]
        })
        .count();
    let n4 = n4_errors as f64 / rows.n_rows() as f64;

    // Hypersphere per instance with radius = nearest-enemy distance; a
    // sphere wholly inside a larger one (or an equal one of lower index)
    // is absorbed.
    let radius: Vec<f64> = (0..n)
        .map(|i| {
            (0..n)
                .filter(|&j| data.label(j) != data.label(i))
                .map(|j| dist.get(i, j))
                .fold(f64::INFINITY, f64::min)
        })
        .collect();
    let absorbed = (0..n)
        .filter(|&i| {
            (0..n).any(|j| {
                j != i
                    && dist.get(i, j) + radius[i] <= radius[j]
                    && (radius[j] > radius[i] || j < i)
            })
        })
        .count();
    let t1 = (n - absorbed) as f64 / n as f64;

    let ls_total: usize = (0..n)
        .map(|i| (0..n).filter(|&z| z != i && dist.get(i, z) < radius[i]).count())
        .sum();
    let lsc = 1.0 - ls_total as f64 / (n * n) as f64;

    Ok(NeighborhoodDatasetMeasures { n1, n2, n3, n4, t1, lsc })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn xor_checkerboard_fools_nearest_neighbors() {
        let d = Dataset::from_rows(
            &[vec![0.0, 0.0], vec![1.0, 1.0], vec![0.0, 1.0], vec![1.0, 0.0]],
            &[0, 0, 1, 1],
            "xor",
        )
        .unwrap();
        let m = neighborhood_dataset_measures(&d, 3).unwrap();
        assert_relative_eq!(m.n3, 1.0);
        assert_relative_eq!(m.n1, 1.0);
    }

    #[test]
    fn separated_clusters_hand_values() {
        // {0, 1} vs {10, 11} on a line.
        let d = Dataset::from_rows(
            &[vec![0.0], vec![1.0], vec![10.0], vec![11.0]],
            &[0, 0, 1, 1],
            "pair",
        )
        .unwrap();
        let m = neighborhood_dataset_measures(&d, 3).unwrap();
        assert_relative_eq!(m.n3, 0.0);
        // One cross edge (1)-(10): two borderline vertices of four.
        assert_relative_eq!(m.n1, 0.5);
        // intra = 1 each (sum 4); extra = 10, 9, 9, 10 (sum 38).
        let s = 4.0 / 38.0;
        assert_relative_eq!(m.n2, s / (1.0 + s), epsilon = 1e-12);
        // Radii 10, 9, 9, 10: the inner spheres absorb into the outer.
        assert_relative_eq!(m.t1, 0.5);
        // Each local set holds just the same-class peer (enemy distances
        // land exactly on the radius and strict < excludes them).
        assert_relative_eq!(m.lsc, 1.0 - 4.0 / 16.0);
        assert_relative_eq!(m.n4, 0.0);
    }

    #[test]
    fn tight_clusters_lsc_hand_value() {
        // Five per class, all intra distances below the class gap.
        let rows: Vec<Vec<f64>> = (0..5)
            .map(|i| vec![i as f64 * 0.1])
            .chain((0..5).map(|i| vec![10.0 + i as f64 * 0.1]))
            .collect();
        let labels: Vec<u8> = (0..10).map(|i| u8::from(i >= 5)).collect();
        let d = Dataset::from_rows(&rows, &labels, "tight").unwrap();
        let m = neighborhood_dataset_measures(&d, 3).unwrap();
        // Every local set holds the 4 same-class peers: LSC = 1 − 40/100.
        assert_relative_eq!(m.lsc, 0.6);
    }

    #[test]
    fn rejects_tiny_data() {
        let d = Dataset::from_rows(&[vec![0.0], vec![1.0]], &[0, 1], "tiny").unwrap();
        assert!(neighborhood_dataset_measures(&d, 3).is_err());
    }
}
