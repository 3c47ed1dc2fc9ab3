use crate::data::{Dataset, Features};
use crate::learners::tree::SplitCriterion;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone)]
struct Rule {
    feature: usize,
    threshold: f64,
    /// Which side of the threshold this rule captures.
    side: Side,
    label: u8,
}

/// A greedy decision list: repeatedly take the best Gini split, turn the
/// purer child into a rule, and keep refining the other child, up to a
/// fixed depth. Uncaptured rows fall through to a majority default.
#[derive(Debug, Clone)]
pub struct RuleListState {
    rules: Vec<Rule>,
    default_label: u8,
}

fn majority(labels: &[u8], indices: &[usize]) -> u8 {
    let pos = indices.iter().filter(|&&i| labels[i] == 1).count();
    u8::from(2 * pos > indices.len())
}

/// Best (feature, threshold) by weighted Gini, ties toward the lower
/// feature index then lower threshold. Mirrors the tree grower's search
/// but returns the split itself for list building.
fn best_split(
    features: &Features,
    labels: &[u8],
    indices: &[usize],
) -> Option<(usize, f64)> {
    let total = indices.len() as f64;
    let criterion = SplitCriterion::Gini;
    let mut best: Option<(usize, f64, f64)> = None;
    for f in 0..features.n_cols() {
        let mut vals: Vec<(f64, u8)> = indices
            .iter()
            .map(|&i| (features.get(i, f), labels[i]))
            .collect();
        vals.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        let mut left = [0usize; 2];
        let mut right = [0usize; 2];
        for &(_, l) in &vals {
            right[l as usize] += 1;
        }
        for w in 0..vals.len() - 1 {
            left[vals[w].1 as usize] += 1;
            right[vals[w].1 as usize] -= 1;
            if vals[w].0 == vals[w + 1].0 {
                continue;
            }
            let threshold = (vals[w].0 + vals[w + 1].0) / 2.0;
            let nl = (left[0] + left[1]) as f64;
            let nr = (right[0] + right[1]) as f64;
            let score = (nl * criterion.impurity(left) + nr * criterion.impurity(right)) / total;
            if best.is_none_or(|(_, _, s)| score < s) {
                best = Some((f, threshold, score));
            }
        }
    }
    best.map(|(f, t, _)| (f, t))
}

impl RuleListState {
    pub fn fit(train: &Dataset, max_depth: usize) -> Self {
        let features = train.features();
        let labels = train.labels();
        let mut remaining: Vec<usize> = (0..train.n_instances()).collect();
        let mut rules = Vec::new();
        for _ in 0..max_depth {
            let pos = remaining.iter().filter(|&&i| labels[i] == 1).count();
            if pos == 0 || pos == remaining.len() {
                break;
            }
            let Some((feature, threshold)) = best_split(features, labels, &remaining) else {
                break;
            };
            let (left, right): (Vec<usize>, Vec<usize>) = remaining
                .iter()
                .partition(|&&i| features.get(i, feature) <= threshold);
            let imp = |idx: &[usize]| {
                let mut c = [0usize; 2];
                for &i in idx {
                    c[labels[i] as usize] += 1;
                }
                SplitCriterion::Gini.impurity(c)
            };
            // The purer child becomes a rule; ties keep the left child.
            let (side, captured, rest) = if imp(&left) <= imp(&right) {
                (Side::Left, left, right)
            } else {
                (Side::Right, right, left)
            };
            rules.push(Rule {
                feature,
                threshold,
                side,
                label: majority(labels, &captured),
            });
            remaining = rest;
        }
        let default_label = majority(labels, &remaining);
        Self {
            rules,
            default_label,
        }
    }

    pub fn predict_row(&self, row: &[f64]) -> u8 {
        for rule in &self.rules {
            let on_left = row[rule.feature] <= rule.threshold;
            let captured = matches!(rule.side, Side::Left) == on_left;
            if captured {
                return rule.label;
            }
        }
        self.default_label
    }

    #[cfg(test)]
    fn n_rules(&self) -> usize {
        self.rules.len()
    }
}
