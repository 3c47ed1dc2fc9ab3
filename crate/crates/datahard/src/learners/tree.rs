use crate::data::Features;
use crate::rng::Rng;
use rand::Rng as _;

/// Split quality criterion for tree growth.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplitCriterion {
    Gini,
    Entropy,
}

impl SplitCriterion {
    pub(crate) fn impurity(self, counts: [usize; 2]) -> f64 {
        let n = (counts[0] + counts[1]) as f64;
        if n == 0.0 {
            return 0.0;
        }
        let p0 = counts[0] as f64 / n;
        let p1 = counts[1] as f64 / n;
        match self {
            SplitCriterion::Gini => 1.0 - p0 * p0 - p1 * p1,
            SplitCriterion::Entropy => {
                let term = |p: f64| if p > 0.0 { -p * p.log2() } else { 0.0 };
                term(p0) + term(p1)
            }
        }
    }
}

/// Growth configuration.
#[derive(Debug, Clone, Copy)]
pub struct TreeConfig {
    pub criterion: SplitCriterion,
    /// Maximum split depth; `None` grows until nodes are pure or constant.
    pub max_depth: Option<usize>,
    /// Candidate features examined per split; `None` or ≥ m means all.
    pub feature_sample: Option<usize>,
}

impl TreeConfig {
    pub fn unlimited(criterion: SplitCriterion) -> Self {
        Self {
            criterion,
            max_depth: None,
            feature_sample: None,
        }
    }
}

#[derive(Debug, Clone)]
pub enum Node {
    Leaf {
        label: u8,
        counts: [usize; 2],
        depth: usize,
    },
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
        counts: [usize; 2],
        depth: usize,
    },
}

impl Node {
    pub fn depth(&self) -> usize {
        match self {
            Node::Leaf { depth, .. } | Node::Split { depth, .. } => *depth,
        }
    }

    pub fn counts(&self) -> [usize; 2] {
        match self {
            Node::Leaf { counts, .. } | Node::Split { counts, .. } => *counts,
        }
    }
}

fn majority(counts: [usize; 2]) -> u8 {
    // Ties go to class 0.
    u8::from(counts[1] > counts[0])
}

/// A binary decision tree over numeric features, grown top-down with
/// midpoint thresholds. Rows with value ≤ threshold go left. Split ties
/// resolve toward the lower feature index, then the lower threshold.
#[derive(Debug, Clone)]
pub struct DecisionTree {
    nodes: Vec<Node>,
    root: usize,
    n_features: usize,
}

struct BestSplit {
    feature: usize,
    threshold: f64,
    impurity: f64,
}

impl DecisionTree {
    /// Grow a tree on the rows named by `indices` (repeats allowed, so a
    /// bootstrap sample is just a repeated index list). `rng` is consulted
    /// only when `config.feature_sample` keeps fewer than all features.
    pub fn fit(
        features: &Features,
        labels: &[u8],
        indices: &[usize],
        config: TreeConfig,
        rng: Option<&mut Rng>,
    ) -> Self {
        let mut tree = DecisionTree {
            nodes: Vec::new(),
            root: 0,
            n_features: features.n_cols(),
        };
        let mut rng = rng;
        tree.root = tree.grow(features, labels, indices.to_vec(), 0, config, &mut rng);
        tree
    }

    fn grow(
        &mut self,
        features: &Features,
        labels: &[u8],
        indices: Vec<usize>,
        depth: usize,
        config: TreeConfig,
        rng: &mut Option<&mut Rng>,
    ) -> usize {
        let mut counts = [0usize; 2];
        for &i in &indices {
            counts[labels[i] as usize] += 1;
        }
        let pure = counts[0] == 0 || counts[1] == 0;
        let at_limit = config.max_depth.is_some_and(|d| depth >= d);
        let split = if pure || at_limit {
            None
        } else {
            let candidates = self.sample_features(config, rng);
            best_split(features, labels, &indices, &candidates, config.criterion)
        };
        match split {
            None => {
                self.nodes.push(Node::Leaf {
                    label: majority(counts),
                    counts,
                    depth,
                });
                self.nodes.len() - 1
            }
            Some(best) => {
                let (left_idx, right_idx): (Vec<usize>, Vec<usize>) = indices
                    .into_iter()
                    .partition(|&i| features.get(i, best.feature) <= best.threshold);
                let left = self.grow(features, labels, left_idx, depth + 1, config, rng);
                let right = self.grow(features, labels, right_idx, depth + 1, config, rng);
                self.nodes.push(Node::Split {
                    feature: best.feature,
                    threshold: best.threshold,
                    left,
                    right,
                    counts,
                    depth,
                });
                self.nodes.len() - 1
            }
        }
    }

    fn sample_features(&self, config: TreeConfig, rng: &mut Option<&mut Rng>) -> Vec<usize> {
        let m = self.n_features;
        match (config.feature_sample, rng) {
            (Some(k), Some(rng)) if k < m => {
                // Partial Fisher-Yates draw of k distinct features, then
                // sorted so ties still favor the lower feature index.
                let mut all: Vec<usize> = (0..m).collect();
                for pos in 0..k {
                    let j = rng.gen_range(pos..m);
                    all.swap(pos, j);
                }
                let mut picked = all[..k].to_vec();
                picked.sort_unstable();
                picked
            }
            _ => (0..m).collect(),
        }
    }

    pub fn predict_row(&self, row: &[f64]) -> u8 {
        match &self.nodes[self.leaf_index(row)] {
            Node::Leaf { label, .. } => *label,
            Node::Split { .. } => unreachable!(),
        }
    }

    /// Arena index of the leaf `row` is routed to.
    pub fn leaf_index(&self, row: &[f64]) -> usize {
        let mut at = self.root;
        loop {
            match &self.nodes[at] {
                Node::Leaf { .. } => return at,
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                    ..
                } => {
                    at = if row[*feature] <= *threshold { *left } else { *right };
                }
            }
        }
    }

    pub fn node(&self, index: usize) -> &Node {
        &self.nodes[index]
    }

    /// Depth of the deepest reachable leaf (0 for a root-only tree).
    pub fn max_leaf_depth(&self) -> usize {
        let mut best = 0;
        self.visit_leaves(self.root, &mut |node: &Node| best = best.max(node.depth()));
        best
    }

    pub fn n_leaves(&self) -> usize {
        let mut n = 0;
        self.visit_leaves(self.root, &mut |_| n += 1);
        n
    }

    /// Per-feature impurity decrease, summed over reachable split nodes and
    /// weighted by the training mass that reached each node. Normalized to
    /// sum 1; all zeros for a stump-less tree.
    pub fn feature_importances(&self, criterion: SplitCriterion) -> Vec<f64> {
        let mut raw = vec![0.0; self.n_features];
        self.visit_importance(self.root, criterion, &mut raw);
        let total: f64 = raw.iter().sum();
        if total > 0.0 {
            for v in &mut raw {
                *v /= total;
            }
        }
        raw
    }

    fn visit_importance(&self, at: usize, criterion: SplitCriterion, acc: &mut [f64]) {
        if let Node::Split {
            feature,
            left,
            right,
            counts,
            ..
        } = &self.nodes[at]
        {
            let lc = self.nodes[*left].counts();
            let rc = self.nodes[*right].counts();
            let n = (counts[0] + counts[1]) as f64;
            let nl = (lc[0] + lc[1]) as f64;
            let nr = (rc[0] + rc[1]) as f64;
            let decrease = n * criterion.impurity(*counts)
                - nl * criterion.impurity(lc)
                - nr * criterion.impurity(rc);
            acc[*feature] += decrease.max(0.0);
            self.visit_importance(*left, criterion, acc);
            self.visit_importance(*right, criterion, acc);
        }
    }

    fn visit_leaves(&self, at: usize, f: &mut impl FnMut(&Node)) {
        match &self.nodes[at] {
            leaf @ Node::Leaf { .. } => f(leaf),
            Node::Split { left, right, .. } => {
                self.visit_leaves(*left, f);
                self.visit_leaves(*right, f);
            }
        }
    }

    /// Reduced-error pruning: bottom-up, replace a subtree with a majority
    /// leaf (majority of its training counts, ties to class 0) whenever
    /// that does not increase error on the holdout rows.
    pub fn prune_reduced_error(&mut self, holdout: &Features, holdout_labels: &[u8]) {
        let indices: Vec<usize> = (0..holdout.n_rows()).collect();
        self.prune_node(self.root, holdout, holdout_labels, indices);
    }

    /// Returns the holdout error of the (possibly collapsed) subtree.
    fn prune_node(
        &mut self,
        at: usize,
        holdout: &Features,
        labels: &[u8],
        reaching: Vec<usize>,
    ) -> usize {
        let (feature, threshold, left, right, counts) = match &self.nodes[at] {
            Node::Leaf { label, .. } => {
                return reaching.iter().filter(|&&i| labels[i] != *label).count();
            }
            Node::Split {
                feature,
                threshold,
                left,
                right,
                counts,
                ..
            } => (*feature, *threshold, *left, *right, *counts),
        };
        let (go_left, go_right): (Vec<usize>, Vec<usize>) = reaching
            .iter()
            .partition(|&&i| holdout.get(i, feature) <= threshold);
        let subtree_err = self.prune_node(left, holdout, labels, go_left)
            + self.prune_node(right, holdout, labels, go_right);
        let leaf_label = majority(counts);
        let leaf_err = reaching.iter().filter(|&&i| labels[i] != leaf_label).count();
        if leaf_err <= subtree_err {
            let depth = self.nodes[at].depth();
            self.nodes[at] = Node::Leaf {
                label: leaf_label,
                counts,
                depth,
            };
            leaf_err
        } else {
            subtree_err
        }
    }
}

fn best_split(
    features: &Features,
    labels: &[u8],
    indices: &[usize],
    candidates: &[usize],
    criterion: SplitCriterion,
) -> Option<BestSplit> {
    let total = indices.len() as f64;
    let mut best: Option<BestSplit> = None;
    for &f in candidates {
        // Aggregate class counts per distinct value, ascending.
        let mut vals: Vec<(f64, u8)> = indices
            .iter()
            .map(|&i| (features.get(i, f), labels[i]))
            .collect();
        vals.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        let mut groups: Vec<(f64, [usize; 2])> = Vec::new();
        for (v, l) in vals {
            match groups.last_mut() {
                Some((gv, counts)) if *gv == v => counts[l as usize] += 1,
                _ => {
                    let mut counts = [0usize; 2];
                    counts[l as usize] = 1;
                    groups.push((v, counts));
                }
            }
        }
        if groups.len() < 2 {
            continue;
        }
        let mut left = [0usize; 2];
        let mut right = [0usize; 2];
        for (_, c) in &groups {
            right[0] += c[0];
            right[1] += c[1];
        }
        for w in 0..groups.len() - 1 {
            let c = groups[w].1;
            left[0] += c[0];
            left[1] += c[1];
            right[0] -= c[0];
            right[1] -= c[1];
            let threshold = (groups[w].0 + groups[w + 1].0) / 2.0;
            let nl = (left[0] + left[1]) as f64;
            let nr = (right[0] + right[1]) as f64;
            let impurity = (nl * criterion.impurity(left) + nr * criterion.impurity(right)) / total;
            // Strict improvement only: scanning features then thresholds in
            // ascending order makes the first optimum the tie-break winner.
            if best.as_ref().is_none_or(|b| impurity < b.impurity) {
                best = Some(BestSplit {
                    feature: f,
                    threshold,
                    impurity,
                });
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::Dataset;

    fn xor() -> Dataset {
        Dataset::from_rows(
            &[vec![0.0, 0.0], vec![0.0, 1.0], vec![1.0, 0.0], vec![1.0, 1.0]],
            &[0, 1, 1, 0],
            "xor",
        )
        .unwrap()
    }

    #[test]
    fn memorizes_xor() {
        let d = xor();
        let idx: Vec<usize> = (0..4).collect();
        let t = DecisionTree::fit(
            d.features(),
            d.labels(),
            &idx,
            TreeConfig::unlimited(SplitCriterion::Gini),
            None,
        );
        for i in 0..4 {
            assert_eq!(t.predict_row(d.row(i)), d.label(i));
        }
        assert_eq!(t.max_leaf_depth(), 2);
    }

    #[test]
    fn depth_limit_caps_leaves() {
        let d = xor();
        let idx: Vec<usize> = (0..4).collect();
        let t = DecisionTree::fit(
            d.features(),
            d.labels(),
            &idx,
            TreeConfig {
                criterion: SplitCriterion::Gini,
                max_depth: Some(0),
                feature_sample: None,
            },
            None,
        );
        assert_eq!(t.n_leaves(), 1);
        assert_eq!(t.max_leaf_depth(), 0);
        // Root majority tie goes to class 0.
        assert_eq!(t.predict_row(&[0.0, 0.0]), 0);
    }

    #[test]
    fn tie_break_prefers_lower_feature() {
        // Both features split {0,0,1,1} labels equally well; feature 0 wins.
        let d = Dataset::from_rows(
            &[vec![0.0, 0.0], vec![0.0, 0.0], vec![1.0, 1.0], vec![1.0, 1.0]],
            &[0, 0, 1, 1],
            "dup",
        )
        .unwrap();
        let idx: Vec<usize> = (0..4).collect();
        let t = DecisionTree::fit(
            d.features(),
            d.labels(),
            &idx,
            TreeConfig::unlimited(SplitCriterion::Gini),
            None,
        );
        match t.node(t.leaf_index(&[0.0, 1.0])) {
            Node::Leaf { label, .. } => assert_eq!(*label, 0),
            Node::Split { .. } => panic!(),
        }
        match &t.nodes[t.root] {
            Node::Split { feature, threshold, .. } => {
                assert_eq!(*feature, 0);
                assert_eq!(*threshold, 0.5);
            }
            Node::Leaf { .. } => panic!("expected a split at the root"),
        }
    }

    #[test]
    fn pruning_collapses_noise_split() {
        // One mislabeled training point forces a deep split; the holdout
        // says the simple split was right, so pruning removes it.
        let rows: Vec<Vec<f64>> = vec![
            vec![0.1], vec![0.2], vec![0.3], vec![0.35], vec![0.7], vec![0.8], vec![0.9], vec![0.95],
        ];
        let labels = vec![0, 0, 1, 0, 1, 1, 1, 1]; // index 2 is noise
        let d = Dataset::from_rows(&rows, &labels, "noisy").unwrap();
        let idx: Vec<usize> = (0..8).collect();
        let mut t = DecisionTree::fit(
            d.features(),
            d.labels(),
            &idx,
            TreeConfig::unlimited(SplitCriterion::Entropy),
            None,
        );
        let before = t.n_leaves();
        assert!(before > 2);
        let holdout = Dataset::from_rows(
            &[vec![0.15], vec![0.3], vec![0.75], vec![0.92]],
            &[0, 0, 1, 1],
            "holdout",
        )
        .unwrap();
        t.prune_reduced_error(holdout.features(), holdout.labels());
        assert_eq!(t.n_leaves(), 2);
        assert_eq!(t.predict_row(&[0.3]), 0);
        assert_eq!(t.predict_row(&[0.9]), 1);
    }
}
