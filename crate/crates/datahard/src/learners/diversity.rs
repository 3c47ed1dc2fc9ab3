use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Classifier output difference: the fraction of instances on which two
/// prediction vectors disagree.
pub fn cod_distance(preds_a: &[u8], preds_b: &[u8]) -> Result<f64> {
    if preds_a.len() != preds_b.len() {
        return Err(Error::LengthMismatch(preds_a.len(), preds_b.len()));
    }
    if preds_a.is_empty() {
        return Err(Error::InvalidArgument("cod of empty predictions".into()));
    }
    let disagree = preds_a.iter().zip(preds_b).filter(|(a, b)| a != b).count();
    Ok(disagree as f64 / preds_a.len() as f64)
}

/// Symmetric zero-diagonal matrix of pairwise output differences over a
/// pool of learners.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CodMatrix {
    labels: Vec<String>,
    values: Vec<f64>,
}

impl CodMatrix {
    /// Pairwise distances of per-learner prediction vectors (one vector
    /// per learner, aligned over the same instances).
    pub fn from_predictions(predictions: &[Vec<u8>], labels: Vec<String>) -> Result<Self> {
        let p = predictions.len();
        if labels.len() != p {
            return Err(Error::LengthMismatch(labels.len(), p));
        }
        let mut values = vec![0.0; p * p];
        for i in 0..p {
            for j in (i + 1)..p {
                let d = cod_distance(&predictions[i], &predictions[j])?;
                values[i * p + j] = d;
                values[j * p + i] = d;
            }
        }
        Ok(Self { labels, values })
    }

    pub fn from_values(values: Vec<f64>, labels: Vec<String>) -> Result<Self> {
        let p = labels.len();
        if values.len() != p * p {
            return Err(Error::LengthMismatch(values.len(), p * p));
        }
        for i in 0..p {
            if values[i * p + i] != 0.0 {
                return Err(Error::InvalidArgument("nonzero diagonal".into()));
            }
            for j in 0..p {
                if (values[i * p + j] - values[j * p + i]).abs() > 1e-12 {
                    return Err(Error::InvalidArgument("asymmetric distances".into()));
                }
            }
        }
        Ok(Self { labels, values })
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n() + j]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }
}

/// A binary merge tree with heights, serializable as JSON or Newick.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Dendrogram {
    Leaf {
        index: usize,
        label: String,
    },
    Merge {
        height: f64,
        left: Box<Dendrogram>,
        right: Box<Dendrogram>,
    },
}

impl Dendrogram {
    fn height(&self) -> f64 {
        match self {
            Dendrogram::Leaf { .. } => 0.0,
            Dendrogram::Merge { height, .. } => *height,
        }
    }

    /// Newick string with branch lengths from each child up to its merge.
    pub fn to_newick(&self) -> String {
        fn walk(node: &Dendrogram, parent_height: f64, out: &mut String) {
            match node {
                Dendrogram::Leaf { label, .. } => {
                    out.push_str(&label.replace([' ', ',', '(', ')', ':', ';'], "_"));
                }
                Dendrogram::Merge {
                    height,
                    left,
                    right,
                } => {
                    out.push('(');
                    walk(left, *height, out);
                    out.push(',');
                    walk(right, *height, out);
                    out.push(')');
                }
            }
            let branch = parent_height - node.height();
            out.push_str(&format!(":{branch:.6}"));
        }
        let mut out = String::new();
        walk(self, self.height(), &mut out);
        out.push(';');
        out
    }
}

/// Flat clustering + merge tree from cutting an agglomerative clustering.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PoolClustering {
    /// Member indices per cluster, each sorted; clusters ordered by their
    /// smallest member.
    pub clusters: Vec<Vec<usize>>,
    pub dendrogram: Dendrogram,
    pub cut: f64,
}

/// Average-linkage (UPGMA) agglomerative clustering of a learner pool by
/// output difference. Merge ties resolve toward the pair with the
/// smallest creation indices. Flat clusters keep every merge with height
/// ≤ `cut`.
pub fn cluster_pool(cod: &CodMatrix, cut: f64) -> Result<PoolClustering> {
    let p = cod.n();
    if p < 2 {
        return Err(Error::InvalidArgument(format!(
            "clustering needs at least 2 learners, got {p}"
        )));
    }
    struct Cluster {
        creation: usize,
        members: Vec<usize>,
        node: Dendrogram,
    }
    let mut active: Vec<Cluster> = (0..p)
        .map(|i| Cluster {
            creation: i,
            members: vec![i],
            node: Dendrogram::Leaf {
                index: i,
                label: cod.labels()[i].clone(),
            },
        })
        .collect();
    let mut next_creation = p;
    let mut merges: Vec<(Vec<usize>, Vec<usize>, f64)> = Vec::new();

    let linkage = |a: &Cluster, b: &Cluster| -> f64 {
        let mut sum = 0.0;
        for &i in &a.members {
            for &j in &b.members {
                sum += cod.get(i, j);
            }
        }
        sum / (a.members.len() * b.members.len()) as f64
    };

    while active.len() > 1 {
        let mut best: Option<(f64, usize, usize)> = None;
        for a in 0..active.len() {
            for b in (a + 1)..active.len() {
                let d = linkage(&active[a], &active[b]);
                let (lo, hi) = {
                    let (ca, cb) = (active[a].creation, active[b].creation);
                    (ca.min(cb), ca.max(cb))
                };
                let better = match &best {
                    None => true,
                    Some((bd, ba, bb)) => {
                        let (blo, bhi) = {
                            let (ca, cb) = (active[*ba].creation, active[*bb].creation);
                            (ca.min(cb), ca.max(cb))
                        };
                        d < *bd || (d == *bd && (lo, hi) < (blo, bhi))
                    }
                };
                if better {
                    best = Some((d, a, b));
                }
            }
        }
        let (height, a, b) = best.unwrap();
        // b > a, so removing b first leaves a's element in place.
        let second = active.swap_remove(b);
        let first = active.swap_remove(a);
        merges.push((first.members.clone(), second.members.clone(), height));
        let mut members = first.members;
        members.extend(&second.members);
        members.sort_unstable();
        active.push(Cluster {
            creation: next_creation,
            members,
            node: Dendrogram::Merge {
                height,
                left: Box::new(first.node),
                right: Box::new(second.node),
            },
        });
        next_creation += 1;
    }
    let dendrogram = active.pop().unwrap().node;

    // Union-find over merges at or below the cut.
    let mut parent: Vec<usize> = (0..p).collect();
    fn find(parent: &mut Vec<usize>, i: usize) -> usize {
        if parent[i] != i {
            let root = find(parent, parent[i]);
            parent[i] = root;
        }
        parent[i]
    }
    for (left, right, height) in &merges {
        if *height <= cut {
            let a = find(&mut parent, left[0]);
            let b = find(&mut parent, right[0]);
            parent[a.max(b)] = a.min(b);
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for i in 0..p {
        let root = find(&mut parent, i);
        groups.entry(root).or_default().push(i);
    }
    Ok(PoolClustering {
        clusters: groups.into_values().collect(),
        dendrogram,
        cut,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cod_counts_disagreements() {
        assert_eq!(cod_distance(&[0, 1, 0], &[0, 1, 0]).unwrap(), 0.0);
        assert_eq!(cod_distance(&[0, 1, 0], &[1, 0, 1]).unwrap(), 1.0);
        let a = [0, 0, 0, 0, 0, 1, 1, 1, 1, 1];
        let b = [0, 0, 0, 0, 0, 1, 1, 1, 0, 0];
        assert_eq!(cod_distance(&a, &b).unwrap(), 0.2);
    }

    fn three_learner_matrix() -> CodMatrix {
        // d(A,B)=0.1, d(A,C)=d(B,C)=0.5
        CodMatrix::from_values(
            vec![0.0, 0.1, 0.5, 0.1, 0.0, 0.5, 0.5, 0.5, 0.0],
            vec!["A".into(), "B".into(), "C".into()],
        )
        .unwrap()
    }

    #[test]
    fn average_linkage_by_hand() {
        let clustering = cluster_pool(&three_learner_matrix(), 0.13).unwrap();
        assert_eq!(clustering.clusters, vec![vec![0, 1], vec![2]]);
        match &clustering.dendrogram {
            Dendrogram::Merge { height, .. } => assert!((height - 0.5).abs() < 1e-12),
            Dendrogram::Leaf { .. } => panic!(),
        }
    }

    #[test]
    fn cut_at_max_height_is_one_cluster() {
        let clustering = cluster_pool(&three_learner_matrix(), 0.5).unwrap();
        assert_eq!(clustering.clusters, vec![vec![0, 1, 2]]);
    }

    #[test]
    fn zero_distance_merges_first() {
        let cod = CodMatrix::from_values(
            vec![0.0, 0.0, 0.4, 0.0, 0.0, 0.4, 0.4, 0.4, 0.0],
            vec!["A".into(), "B".into(), "C".into()],
        )
        .unwrap();
        let clustering = cluster_pool(&cod, 0.0).unwrap();
        assert_eq!(clustering.clusters, vec![vec![0, 1], vec![2]]);
    }

    #[test]
    fn newick_has_all_leaves() {
        let clustering = cluster_pool(&three_learner_matrix(), 0.13).unwrap();
        let newick = clustering.dendrogram.to_newick();
        for name in ["A", "B", "C"] {
            assert!(newick.contains(name), "{newick}");
        }
        assert!(newick.ends_with(';'));
    }

    #[test]
    fn single_learner_errors() {
        let cod = CodMatrix::from_values(vec![0.0], vec!["A".into()]).unwrap();
        assert!(cluster_pool(&cod, 0.1).is_err());
    }
}
