use crate::data::{distance_matrix, Dataset, DistanceMatrix};
use crate::error::{Error, Result};
use crate::learners::{DecisionTree, SplitCriterion, TreeConfig};
use crate::rng::derived_rng;
use rand::Rng as _;

/// Shared per-dataset state the instance measures read: distances, the
/// minimum spanning tree, nearest enemies, local sets, and the pair of
/// decision trees (unpruned and holdout-pruned).
///
/// Local set: LS(x) = {z ≠ x : d(x,z) < d(x, ne(x))} where ne(x) is x's
/// nearest opposite-class instance. Every member is necessarily of x's
/// own class.
pub struct MeasureContext {
    pub k: usize,
    pub dist: DistanceMatrix,
    /// n−1 MST edges as (lo, hi) index pairs.
    pub mst_edges: Vec<(usize, usize)>,
    /// Nearest enemy per instance, ties to the lower index.
    pub ne: Vec<usize>,
    /// |LS(x)| per instance.
    pub ls_size: Vec<usize>,
    /// |{z : x ∈ LS(z)}| per instance.
    pub in_ls_count: Vec<usize>,
    /// |{z : ne(z) = x}| per instance.
    pub ne_pointed: Vec<usize>,
    /// Entropy tree grown on all instances to purity.
    pub unpruned: DecisionTree,
    /// Entropy tree grown on a seeded stratified 70% and reduced-error
    /// pruned against the remaining 30%.
    pub pruned: DecisionTree,
}

impl MeasureContext {
    pub fn build(data: &Dataset, k: usize, seed: u64) -> Result<Self> {
        data.require_both_classes()?;
        let n = data.n_instances();
        if n <= k {
            return Err(Error::InvalidArgument(format!(
                "neighborhood measures need n > k, got n={n}, k={k}"
            )));
        }
        let dist = distance_matrix(data);
        let mst_edges = prim_mst(&dist);

        let mut ne = vec![0usize; n];
        for i in 0..n {
            let mut best: Option<(f64, usize)> = None;
            for j in 0..n {
                if data.label(j) == data.label(i) {
                    continue;
                }
                let key = (dist.get(i, j), j);
                if best.is_none_or(|b| (key.0, key.1) < b) {
                    best = Some(key);
                }
            }
            ne[i] = best.unwrap().1;
        }

        let mut ls_size = vec![0usize; n];
        let mut in_ls_count = vec![0usize; n];
        let mut ne_pointed = vec![0usize; n];
        for i in 0..n {
            let radius = dist.get(i, ne[i]);
            for z in 0..n {
                if z != i && dist.get(i, z) < radius {
                    ls_size[i] += 1;
                    in_ls_count[z] += 1;
                }
            }
            ne_pointed[ne[i]] += 1;
        }

        let all: Vec<usize> = (0..n).collect();
        let unpruned = DecisionTree::fit(
            data.features(),
            data.labels(),
            &all,
            TreeConfig::unlimited(SplitCriterion::Entropy),
            None,
        );
        let pruned = build_pruned(data, seed);

        Ok(Self {
            k,
            dist,
            mst_edges,
            ne,
            ls_size,
            in_ls_count,
            ne_pointed,
            unpruned,
            pruned,
        })
    }

    /// MST edges incident to `x`.
    pub fn mst_edges_of(&self, x: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.mst_edges
            .iter()
            .copied()
            .filter(move |&(a, b)| a == x || b == x)
    }
}

/// Grow on a seeded stratified 70% split, reduced-error prune against the
/// held-out 30%. Classes too small to hold anything out skip pruning.
fn build_pruned(data: &Dataset, seed: u64) -> DecisionTree {
    let mut rng = derived_rng(seed, "prune-split", &[]);
    let canonical = data.canonical_order();
    let mut grow_idx = Vec::new();
    let mut holdout_idx = Vec::new();
    for class in [0u8, 1u8] {
        let mut members: Vec<usize> = canonical
            .iter()
            .copied()
            .filter(|&i| data.label(i) == class)
            .collect();
        for pos in (1..members.len()).rev() {
            let j = rng.gen_range(0..=pos);
            members.swap(pos, j);
        }
        let keep = (((members.len() as f64) * 0.7).round() as usize).clamp(1, members.len());
        grow_idx.extend(&members[..keep]);
        holdout_idx.extend(&members[keep..]);
    }
    let config = TreeConfig::unlimited(SplitCriterion::Entropy);
    let mut tree = DecisionTree::fit(data.features(), data.labels(), &grow_idx, config, None);
    if !holdout_idx.is_empty() {
        let holdout = data
            .subset(&holdout_idx, format!("{}-prune-holdout", data.id()))
            .expect("indices are in range");
        tree.prune_reduced_error(holdout.features(), holdout.labels());
    }
    tree
}

/// Prim's algorithm over the dense distance matrix, started at 0.
/// Equal-weight ties resolve toward the smallest (lo, hi) index pair.
pub(crate) fn prim_mst(dist: &DistanceMatrix) -> Vec<(usize, usize)> {
    let n = dist.n();
    let edge_key = |a: usize, b: usize| (dist.get(a, b), a.min(b), a.max(b));
    let mut in_tree = vec![false; n];
    in_tree[0] = true;
    // Best crossing edge per outside node, keyed for tie-breaking.
    let mut best: Vec<(f64, usize, usize)> = (0..n).map(|j| edge_key(0, j)).collect();
    let mut edges = Vec::with_capacity(n - 1);
    for _ in 1..n {
        let next = (0..n)
            .filter(|&j| !in_tree[j])
            .min_by(|&a, &b| best[a].partial_cmp(&best[b]).unwrap())
            .unwrap();
        let (_, lo, hi) = best[next];
        edges.push((lo, hi));
        in_tree[next] = true;
        for j in 0..n {
            if !in_tree[j] {
                let key = edge_key(next, j);
                if key.partial_cmp(&best[j]) == Some(std::cmp::Ordering::Less) {
                    best[j] = key;
                }
            }
        }
    }
    edges
}
