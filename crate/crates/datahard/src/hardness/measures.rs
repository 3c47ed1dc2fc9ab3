use crate::data::Dataset;
use crate::error::Result;
use crate::hardness::context::MeasureContext;
use serde::{Deserialize, Serialize};

/// The instance-hardness measures for one instance, each in [0, 1] with
/// higher values meaning harder.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InstanceMeasureRow {
    /// Fraction of the k nearest neighbors with a different class.
    pub kdn: f64,
    /// Disjunct size, inverted: 1 − (|disjunct|−1)/(max|disjunct|−1).
    pub ds: f64,
    /// Disjunct class fraction on the pruned tree, inverted.
    pub dcp: f64,
    /// Leaf depth / max leaf depth on the pruned tree.
    pub td_p: f64,
    /// Leaf depth / max leaf depth on the unpruned tree.
    pub td_u: f64,
    /// 1 − own-class share of kernel-density class likelihood.
    pub cl: f64,
    /// 1 − n_class / n_majority.
    pub mv: f64,
    /// 1 − n_class / n.
    pub cb: f64,
    /// Fraction of features inside the opposite class's value range.
    pub f1: f64,
    /// Fraction of the instance's MST edges that cross classes.
    pub n1: f64,
    /// r/(1+r) for r = nearest-same-class over nearest-other-class distance.
    pub n2: f64,
    /// 1 − |LS(x)| / (n_class − 1).
    pub lsc: f64,
    /// 1 − nearest-enemy distance / max distance from x.
    pub lsr: f64,
    /// 1 − (local sets containing x) / (n_class − 1).
    pub u: f64,
    /// (instances whose nearest enemy is x) / n_opposite.
    pub h: f64,
}

/// Measure names in report-column order.
pub const MEASURE_NAMES: [&str; 15] = [
    "kDN", "DS", "DCP", "TD_P", "TD_U", "CL", "MV", "CB", "F1", "N1", "N2", "LSC", "LSR", "U", "H",
];

impl InstanceMeasureRow {
    /// Values in [`MEASURE_NAMES`] order.
    pub fn values(&self) -> [f64; 15] {
        [
            self.kdn, self.ds, self.dcp, self.td_p, self.td_u, self.cl, self.mv, self.cb, self.f1,
            self.n1, self.n2, self.lsc, self.lsr, self.u, self.h,
        ]
    }
}

/// All fifteen measures for every instance.
pub fn instance_measures(data: &Dataset, ctx: &MeasureContext) -> Result<Vec<InstanceMeasureRow>> {
    let n = data.n_instances();
    let neighborhood = neighborhood_measures(data, ctx);
    let tree = tree_measures(data, ctx);
    let cl = likelihood_measures(data)?;
    let balance = balance_measures(data)?;
    let overlap = feature_overlap_measure(data)?;
    Ok((0..n)
        .map(|i| InstanceMeasureRow {
            kdn: neighborhood.kdn[i],
            ds: tree.ds[i],
            dcp: tree.dcp[i],
            td_p: tree.td_p[i],
            td_u: tree.td_u[i],
            cl: cl[i],
            mv: balance.mv[i],
            cb: balance.cb[i],
            f1: overlap[i],
            n1: neighborhood.n1[i],
            n2: neighborhood.n2[i],
            lsc: neighborhood.lsc[i],
            lsr: neighborhood.lsr[i],
            u: neighborhood.u[i],
            h: neighborhood.h[i],
        })
        .collect())
}

pub struct NeighborhoodMeasures {
    pub kdn: Vec<f64>,
    pub n1: Vec<f64>,
    pub n2: Vec<f64>,
    pub lsc: Vec<f64>,
    pub lsr: Vec<f64>,
    pub u: Vec<f64>,
    pub h: Vec<f64>,
}

/// Distance- and local-set-based measures.
pub fn neighborhood_measures(data: &Dataset, ctx: &MeasureContext) -> NeighborhoodMeasures {
    let n = data.n_instances();
    let (pos, neg) = data.class_counts();
    let class_count = |label: u8| if label == 1 { pos } else { neg };

    let mut out = NeighborhoodMeasures {
        kdn: Vec::with_capacity(n),
        n1: Vec::with_capacity(n),
        n2: Vec::with_capacity(n),
        lsc: Vec::with_capacity(n),
        lsr: Vec::with_capacity(n),
        u: Vec::with_capacity(n),
        h: Vec::with_capacity(n),
    };
    for x in 0..n {
        let label = data.label(x);
        let own = class_count(label);
        let other = n - own;

        let neighbors = ctx.dist.neighbors_of(x);
        let diff = neighbors[..ctx.k]
            .iter()
            .filter(|&&z| data.label(z) != label)
            .count();
        out.kdn.push(diff as f64 / ctx.k as f64);

        let (mut incident, mut crossing) = (0usize, 0usize);
        for (a, b) in ctx.mst_edges_of(x) {
            incident += 1;
            if data.label(a) != data.label(b) {
                crossing += 1;
            }
        }
        out.n1.push(crossing as f64 / incident as f64);

        let d_extra = ctx.dist.get(x, ctx.ne[x]);
        let d_intra = (0..n)
            .filter(|&z| z != x && data.label(z) == label)
            .map(|z| ctx.dist.get(x, z))
            .fold(f64::INFINITY, f64::min);
        out.n2.push(if d_intra.is_infinite() {
            1.0 // no same-class peer at all
        } else if d_extra == 0.0 {
            if d_intra == 0.0 {
                0.5
            } else {
                1.0
            }
        } else {
            let r = d_intra / d_extra;
            r / (1.0 + r)
        });

        let peers = own.saturating_sub(1);
        out.lsc.push(if peers == 0 {
            1.0
        } else {
            1.0 - ctx.ls_size[x] as f64 / peers as f64
        });
        out.u.push(if peers == 0 {
            1.0
        } else {
            1.0 - ctx.in_ls_count[x] as f64 / peers as f64
        });

        let max_d = ctx.dist.row(x).iter().cloned().fold(0.0, f64::max);
        out.lsr.push(if max_d == 0.0 {
            1.0 // every point coincides, total overlap
        } else {
            1.0 - d_extra / max_d
        });

        out.h.push(ctx.ne_pointed[x] as f64 / other as f64);
    }
    out
}

pub struct TreeMeasures {
    pub ds: Vec<f64>,
    pub dcp: Vec<f64>,
    pub td_p: Vec<f64>,
    pub td_u: Vec<f64>,
}

/// Disjunct and depth measures. A disjunct is the full set of instances
/// routed to one leaf; DS reads the unpruned tree, DCP the pruned one.
pub fn tree_measures(data: &Dataset, ctx: &MeasureContext) -> TreeMeasures {
    let n = data.n_instances();
    let route = |tree: &crate::learners::DecisionTree| -> Vec<usize> {
        (0..n).map(|i| tree.leaf_index(data.row(i))).collect()
    };
    let unpruned_leaf = route(&ctx.unpruned);
    let pruned_leaf = route(&ctx.pruned);

    use std::collections::HashMap;
    let mut unpruned_size: HashMap<usize, usize> = HashMap::new();
    for &leaf in &unpruned_leaf {
        *unpruned_size.entry(leaf).or_default() += 1;
    }
    let max_size = unpruned_size.values().copied().max().unwrap_or(1);

    let mut pruned_counts: HashMap<usize, [usize; 2]> = HashMap::new();
    for (i, &leaf) in pruned_leaf.iter().enumerate() {
        pruned_counts.entry(leaf).or_default()[data.label(i) as usize] += 1;
    }

    let max_depth_u = ctx.unpruned.max_leaf_depth();
    let max_depth_p = ctx.pruned.max_leaf_depth();

    let mut out = TreeMeasures {
        ds: Vec::with_capacity(n),
        dcp: Vec::with_capacity(n),
        td_p: Vec::with_capacity(n),
        td_u: Vec::with_capacity(n),
    };
    for i in 0..n {
        let size = unpruned_size[&unpruned_leaf[i]];
        out.ds.push(if max_size == 1 {
            1.0
        } else {
            1.0 - (size - 1) as f64 / (max_size - 1) as f64
        });

        let counts = pruned_counts[&pruned_leaf[i]];
        let total = (counts[0] + counts[1]) as f64;
        let same = counts[data.label(i) as usize] as f64;
        out.dcp.push(1.0 - same / total);

        let norm = |leaf: usize, tree: &crate::learners::DecisionTree, max: usize| {
            if max == 0 {
                0.0
            } else {
                tree.node(leaf).depth() as f64 / max as f64
            }
        };
        out.td_p.push(norm(pruned_leaf[i], &ctx.pruned, max_depth_p));
        out.td_u.push(norm(unpruned_leaf[i], &ctx.unpruned, max_depth_u));
    }
    out
}

/// Class likelihood, inverted: 1 − CL(x, class(x)) / Σ_c CL(x, c), where
/// CL multiplies per-feature Gaussian kernel density estimates under an
/// independence assumption. Bandwidths follow Silverman's rule per
/// feature per class, floored at 1e−6; computation stays in log space.
pub fn likelihood_measures(data: &Dataset) -> Result<Vec<f64>> {
    data.require_both_classes()?;
    let n = data.n_instances();
    let m = data.n_features();
    let by_class: [Vec<usize>; 2] = [data.class_indices(0), data.class_indices(1)];
    // Per class, per feature: (bandwidth, member values).
    let mut kde: Vec<Vec<(f64, Vec<f64>)>> = Vec::with_capacity(2);
    for members in &by_class {
        let mut feats = Vec::with_capacity(m);
        for j in 0..m {
            let values: Vec<f64> = members.iter().map(|&i| data.features().get(i, j)).collect();
            feats.push((silverman_bandwidth(&values), values));
        }
        kde.push(feats);
    }

    let log_density = |class: usize, x: &[f64]| -> f64 {
        let nc = by_class[class].len() as f64;
        (0..m)
            .map(|j| {
                let (h, values) = &kde[class][j];
                let terms: Vec<f64> = values
                    .iter()
                    .map(|v| {
                        let z = (x[j] - v) / h;
                        -0.5 * z * z
                    })
                    .collect();
                log_sum_exp(&terms) - (nc * h * (2.0 * std::f64::consts::PI).sqrt()).ln()
            })
            .sum()
    };

    Ok((0..n)
        .map(|i| {
            let row = data.row(i);
            let own = log_density(data.label(i) as usize, row);
            let both = log_sum_exp(&[log_density(0, row), log_density(1, row)]);
            if both.is_infinite() {
                0.5 // no density signal from either class
            } else {
                1.0 - (own - both).exp()
            }
        })
        .collect())
}

/// Silverman's robust rule: 0.9·min(σ, IQR/1.34)·n^(−1/5), with the σ-only
/// form when the IQR degenerates to zero, floored at 1e−6.
fn silverman_bandwidth(values: &[f64]) -> f64 {
    let n = values.len() as f64;
    if values.len() < 2 {
        return 1e-6;
    }
    let mean = values.iter().sum::<f64>() / n;
    let sd = (values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0)).sqrt();
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let quantile = |p: f64| {
        let pos = p * (sorted.len() - 1) as f64;
        let lo = pos.floor() as usize;
        let hi = pos.ceil() as usize;
        sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
    };
    let iqr = quantile(0.75) - quantile(0.25);
    let spread = if iqr > 0.0 { sd.min(iqr / 1.34) } else { sd };
    (0.9 * spread * n.powf(-0.2)).max(1e-6)
}

fn log_sum_exp(terms: &[f64]) -> f64 {
    let max = terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if max.is_infinite() {
        return max;
    }
    max + terms.iter().map(|t| (t - max).exp()).sum::<f64>().ln()
}

pub struct BalanceMeasures {
    pub mv: Vec<f64>,
    pub cb: Vec<f64>,
}

/// Class-share measures: identical for all members of a class.
pub fn balance_measures(data: &Dataset) -> Result<BalanceMeasures> {
    data.require_both_classes()?;
    let n = data.n_instances() as f64;
    let (pos, neg) = data.class_counts();
    let n_maj = pos.max(neg) as f64;
    let share = |label: u8| if label == 1 { pos } else { neg } as f64;
    let mv = data
        .labels()
        .iter()
        .map(|&l| 1.0 - share(l) / n_maj)
        .collect();
    let cb = data.labels().iter().map(|&l| 1.0 - share(l) / n).collect();
    Ok(BalanceMeasures { mv, cb })
}

/// Fraction of features on which an instance falls inside the opposite
/// class's [min, max] value range.
pub fn feature_overlap_measure(data: &Dataset) -> Result<Vec<f64>> {
    data.require_both_classes()?;
    let m = data.n_features();
    // Per class, per feature (min, max).
    let mut ranges = [vec![(f64::INFINITY, f64::NEG_INFINITY); m], vec![(f64::INFINITY, f64::NEG_INFINITY); m]];
    for i in 0..data.n_instances() {
        let class = data.label(i) as usize;
        for (j, &v) in data.row(i).iter().enumerate() {
            let r = &mut ranges[class][j];
            r.0 = r.0.min(v);
            r.1 = r.1.max(v);
        }
    }
    Ok((0..data.n_instances())
        .map(|i| {
            let opposite = &ranges[1 - data.label(i) as usize];
            let inside = data
                .row(i)
                .iter()
                .zip(opposite)
                .filter(|(&v, &(lo, hi))| v >= lo && v <= hi)
                .count();
            inside as f64 / m as f64
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hardness::context::MeasureContext;
    use approx::assert_relative_eq;

    /// Two tight clusters: 0A 0.1A 0.2A | 1B 1.1B 1.2B.
    fn clusters() -> Dataset {
        Dataset::from_rows(
            &[vec![0.0], vec![0.1], vec![0.2], vec![1.0], vec![1.1], vec![1.2]],
            &[0, 0, 0, 1, 1, 1],
            "clusters",
        )
        .unwrap()
    }

    #[test]
    fn kdn_counts_cross_class_neighbors() {
        let d = clusters();
        let ctx = MeasureContext::build(&d, 3, 1).unwrap();
        let m = neighborhood_measures(&d, &ctx);
        // Instance 0's 3 nearest: 0.1, 0.2 (same), 1.0 (different).
        assert_relative_eq!(m.kdn[0], 1.0 / 3.0);
    }

    #[test]
    fn n1_zero_when_all_edges_same_class() {
        let d = clusters();
        let ctx = MeasureContext::build(&d, 3, 1).unwrap();
        let m = neighborhood_measures(&d, &ctx);
        // The 1-D MST is the path; instance 0's single edge is to 0.1.
        assert_relative_eq!(m.n1[0], 0.0);
        // Instances 2 and 3 share the lone crossing edge.
        assert!(m.n1[2] > 0.0 && m.n1[3] > 0.0);
    }

    #[test]
    fn h_zero_for_non_enemies() {
        let d = clusters();
        let ctx = MeasureContext::build(&d, 3, 1).unwrap();
        let m = neighborhood_measures(&d, &ctx);
        // Only 2 and 3 are anyone's nearest enemy here.
        assert_relative_eq!(m.h[0], 0.0);
        assert_relative_eq!(m.h[1], 0.0);
        assert_relative_eq!(m.h[2], 1.0); // all three of class B point at 2
        assert_relative_eq!(m.h[3], 1.0);
    }

    #[test]
    fn n2_ratio_behaviour() {
        let d = clusters();
        let ctx = MeasureContext::build(&d, 3, 1).unwrap();
        let m = neighborhood_measures(&d, &ctx);
        // Instance 0: nearest same 0.1, nearest enemy 1.0 → r = 0.1.
        assert_relative_eq!(m.n2[0], 0.1 / 1.1, epsilon = 1e-12);
        // Deep interior instances are easier than the boundary pair.
        assert!(m.n2[0] < m.n2[2]);
    }

    #[test]
    fn balance_on_90_10_split() {
        let rows: Vec<Vec<f64>> = (0..10).map(|i| vec![i as f64]).collect();
        let labels = vec![0, 0, 0, 0, 0, 0, 0, 0, 0, 1];
        let d = Dataset::from_rows(&rows, &labels, "t").unwrap();
        let b = balance_measures(&d).unwrap();
        assert_relative_eq!(b.mv[0], 0.0);
        assert_relative_eq!(b.mv[9], 1.0 - 1.0 / 9.0, epsilon = 1e-12);
        assert_relative_eq!(b.cb[9], 0.9);
        assert_relative_eq!(b.cb[0], 0.1);
    }

    #[test]
    fn overlap_counts_features() {
        let d = Dataset::from_rows(
            &[
                vec![0.0, 0.0, 0.0, 0.0],
                vec![1.0, 1.0, 1.0, 1.0],
                vec![0.5, 1.5, 5.0, 5.0],
                vec![2.0, 0.7, 9.0, 9.0],
            ],
            &[0, 0, 1, 1],
            "t",
        )
        .unwrap();
        let f1 = feature_overlap_measure(&d).unwrap();
        // Instance 1: features 0,1 inside class-1 ranges, 2,3 outside.
        assert_relative_eq!(f1[1], 0.5);
        // Instance 3: only feature 1 inside class-0 range [0,1].
        assert_relative_eq!(f1[3], 0.25);
    }

    #[test]
    fn cl_symmetry_at_midpoint() {
        // Mirror-image classes around 0; the boundary pair is ambiguous.
        let d = Dataset::from_rows(
            &[vec![-3.0], vec![-2.0], vec![-1.0], vec![1.0], vec![2.0], vec![3.0]],
            &[0, 0, 0, 1, 1, 1],
            "mirror",
        )
        .unwrap();
        let cl = likelihood_measures(&d).unwrap();
        // Symmetric instances have symmetric values.
        assert_relative_eq!(cl[0], cl[5], epsilon = 1e-9);
        assert_relative_eq!(cl[2], cl[3], epsilon = 1e-9);
        // Interior instances are clearly their own class's.
        assert!(cl[1] < 0.5);
        // The boundary instance is harder than the far one.
        assert!(cl[2] > cl[0]);
    }

    #[test]
    fn tree_measures_on_separable_data() {
        let d = clusters();
        let ctx = MeasureContext::build(&d, 3, 1).unwrap();
        let t = tree_measures(&d, &ctx);
        // One split separates the clusters: every disjunct has size 3.
        for i in 0..6 {
            assert_relative_eq!(t.ds[i], 0.0);
            assert_relative_eq!(t.dcp[i], 0.0);
            assert_relative_eq!(t.td_u[i], 1.0);
        }
    }

    #[test]
    fn all_measures_within_bounds() {
        let rows: Vec<Vec<f64>> = (0..40)
            .map(|i| vec![(i * 13 % 17) as f64, (i * 5 % 11) as f64])
            .collect();
        let labels: Vec<u8> = (0..40).map(|i| u8::from(i % 4 == 0)).collect();
        let d = Dataset::from_rows(&rows, &labels, "mixed").unwrap();
        let ctx = MeasureContext::build(&d, 5, 1).unwrap();
        for row in instance_measures(&d, &ctx).unwrap() {
            for (name, v) in MEASURE_NAMES.iter().zip(row.values()) {
                assert!((0.0..=1.0).contains(&v), "{name} = {v} out of bounds");
            }
        }
    }
}
