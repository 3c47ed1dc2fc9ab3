use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::learners::{forest_feature_importances, train_linear_svm_default};
use crate::stats::spearman_rho;
use serde::{Deserialize, Serialize};

/// Feature-ranking strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SelectMethod {
    Cfs,
    SkbAnova,
    SkbMutual,
    LinsvmImportance,
    TreeImportance,
    None,
}

impl SelectMethod {
    pub const ALL: [SelectMethod; 6] = [
        SelectMethod::Cfs,
        SelectMethod::SkbAnova,
        SelectMethod::SkbMutual,
        SelectMethod::LinsvmImportance,
        SelectMethod::TreeImportance,
        SelectMethod::None,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SelectMethod::Cfs => "cfs",
            SelectMethod::SkbAnova => "skb_anova",
            SelectMethod::SkbMutual => "skb_mutual",
            SelectMethod::LinsvmImportance => "linsvm_importance",
            SelectMethod::TreeImportance => "tree_importance",
            SelectMethod::None => "none",
        }
    }
}

impl std::str::FromStr for SelectMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SelectMethod::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown selection method {s:?}")))
    }
}

/// Which selector to run and how many features to keep. `k = None` defaults
/// to half the features (rounded up); CFS sizes its subset itself.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeatureSelectSpec {
    pub method: SelectMethod,
    pub k: Option<usize>,
    pub seed: u64,
}

impl FeatureSelectSpec {
    pub fn new(method: SelectMethod, seed: u64) -> Self {
        Self {
            method,
            k: None,
            seed,
        }
    }
}

impl std::str::FromStr for FeatureSelectSpec {
    type Err = Error;

    /// Parses `method` or `method:k=10`.
    fn from_str(s: &str) -> Result<Self> {
        let (name, args) = match s.split_once(':') {
            Some((n, a)) => (n, Some(a)),
            None => (s, None),
        };
        let mut spec = FeatureSelectSpec::new(name.parse()?, 0);
        if let Some(args) = args {
            for pair in args.split(',').filter(|p| !p.is_empty()) {
                let (key, value) = pair.split_once('=').ok_or_else(|| {
                    Error::InvalidArgument(format!("expected key=value, got {pair:?}"))
                })?;
                match key {
                    "k" => {
                        let k: usize = value.parse().map_err(|_| {
                            Error::InvalidArgument(format!("bad k value {value:?}"))
                        })?;
                        spec.k = Some(k);
                    }
                    "seed" => {
                        spec.seed = value.parse().map_err(|_| {
                            Error::InvalidArgument(format!("bad seed value {value:?}"))
                        })?;
                    }
                    _ => {
                        return Err(Error::InvalidArgument(format!(
                            "unknown selection option {key:?}"
                        )))
                    }
                }
            }
        }
        Ok(spec)
    }
}

/// A selection result: the reduced dataset, the kept column indices
/// (ascending, relative to the input), and any warnings.
#[derive(Debug, Clone)]
pub struct FeatureSelection {
    pub data: Dataset,
    pub kept: Vec<usize>,
    pub warnings: Vec<String>,
}

/// Keep a subset of columns chosen by the spec's method. Score-based
/// methods rank by score descending (ties to the lower index) and keep the
/// top k; CFS grows its subset greedily by correlation merit.
pub fn select_features(train: &Dataset, spec: &FeatureSelectSpec) -> Result<FeatureSelection> {
    let m = train.n_features();
    let k = spec.k.unwrap_or_else(|| m.div_ceil(2).max(1));
    if k < 1 {
        return Err(Error::FeatureSelection("k must be ≥ 1".into()));
    }
    if k > m {
        return Err(Error::FeatureSelection(format!(
            "cannot keep {k} of {m} features"
        )));
    }
    if spec.method == SelectMethod::None {
        return Ok(FeatureSelection {
            data: train.clone(),
            kept: (0..m).collect(),
            warnings: Vec::new(),
        });
    }
    train.require_both_classes()?;

    let mut warnings = Vec::new();
    let kept = match spec.method {
        SelectMethod::Cfs => cfs_subset(train),
        SelectMethod::None => unreachable!(),
        _ => {
            let scores = match spec.method {
                SelectMethod::SkbAnova => (0..m).map(|j| anova_f(train, j)).collect(),
                SelectMethod::SkbMutual => (0..m).map(|j| mutual_information(train, j)).collect(),
                SelectMethod::LinsvmImportance => {
                    let model = train_linear_svm_default(train);
                    model.weights.iter().map(|w| w.abs()).collect()
                }
                SelectMethod::TreeImportance => forest_feature_importances(train, spec.seed)?,
                SelectMethod::Cfs | SelectMethod::None => unreachable!(),
            };
            top_k(&scores, k)
        }
    };
    if kept
        .iter()
        .all(|&j| column_is_constant(train, j))
    {
        warnings.push("every selected feature is constant".into());
    }
    let data = train.select_features(&kept, format!("{}-{}", train.id(), spec.method.name()))?;
    Ok(FeatureSelection {
        data,
        kept,
        warnings,
    })
}

fn column_is_constant(train: &Dataset, j: usize) -> bool {
    let col = train.features().column(j);
    col.windows(2).all(|w| w[0] == w[1])
}

/// Indices of the k largest scores, score descending then index ascending;
/// returned sorted ascending. Non-finite scores sort as +inf (a zero
/// within-group variance is maximal evidence, not an error).
fn top_k(scores: &[f64], k: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..scores.len()).collect();
    let key = |j: usize| {
        let s = scores[j];
        if s.is_nan() {
            f64::NEG_INFINITY
        } else {
            s
        }
    };
    order.sort_by(|&a, &b| key(b).partial_cmp(&key(a)).unwrap().then(a.cmp(&b)));
    let mut kept: Vec<usize> = order[..k].to_vec();
    kept.sort_unstable();
    kept
}

/// One-way ANOVA F statistic of a feature against the two classes.
/// Constant columns score 0; zero within-class variance with any separation
/// scores +inf.
fn anova_f(train: &Dataset, j: usize) -> f64 {
    let col = train.features().column(j);
    let n = col.len() as f64;
    let grand = col.iter().sum::<f64>() / n;
    let mut ssb = 0.0;
    let mut ssw = 0.0;
    for class in [0u8, 1u8] {
        let members = train.class_indices(class);
        let nc = members.len() as f64;
        let mean = members.iter().map(|&i| col[i]).sum::<f64>() / nc;
        ssb += nc * (mean - grand) * (mean - grand);
        ssw += members.iter().map(|&i| (col[i] - mean) * (col[i] - mean)).sum::<f64>();
    }
    if ssb == 0.0 {
        return 0.0;
    }
    let msw = ssw / (n - 2.0);
    if msw == 0.0 {
        f64::INFINITY
    } else {
        ssb / msw
    }
}

/// Mutual information (nats) between a decile-binned feature and the label.
/// Bin edges are the type-7 quantiles at 0.1, 0.2, ..., 0.9; a value's bin
/// is the count of edges strictly below it, so ties share a bin.
fn mutual_information(train: &Dataset, j: usize) -> f64 {
    const BINS: usize = 10;
    let col = train.features().column(j);
    let n = col.len();
    let mut sorted = col.clone();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let quantile = |q: f64| {
        let pos = q * (n - 1) as f64;
        let lo = pos.floor() as usize;
        let hi = pos.ceil() as usize;
        let frac = pos - lo as f64;
        sorted[lo] + frac * (sorted[hi] - sorted[lo])
    };
    let edges: Vec<f64> = (1..BINS).map(|i| quantile(i as f64 / BINS as f64)).collect();
    let bin_of = |v: f64| edges.iter().filter(|&&e| e < v).count();

    let mut joint = [[0usize; 2]; BINS];
    for (i, &v) in col.iter().enumerate() {
        joint[bin_of(v)][train.label(i) as usize] += 1;
    }
    let class_totals = [
        train.class_indices(0).len() as f64,
        train.class_indices(1).len() as f64,
    ];
    let nf = n as f64;
    let mut mi = 0.0;
    for row in &joint {
        let bin_total = (row[0] + row[1]) as f64;
        if bin_total == 0.0 {
            continue;
        }
        for class in 0..2 {
            let c = row[class] as f64;
            if c > 0.0 {
                let pxy = c / nf;
                mi += pxy * (pxy / (bin_total / nf * (class_totals[class] / nf))).ln();
            }
        }
    }
    mi.max(0.0)
}

/// Correlation-based greedy forward selection. Merit of a subset S is
/// |S|·r̄_cf / sqrt(|S| + |S|(|S|−1)·r̄_ff) where r̄_cf is the mean absolute
/// rank correlation of members with the label and r̄_ff the mean absolute
/// pairwise rank correlation inside S. Grows while merit strictly improves;
/// always keeps at least one feature.
fn cfs_subset(train: &Dataset) -> Vec<usize> {
    let m = train.n_features();
    let label_col: Vec<f64> = train.labels().iter().map(|&l| l as f64).collect();
    let abs_rho = |a: &[f64], b: &[f64]| spearman_rho(a, b).map_or(0.0, |r| r.abs());

    let class_corr: Vec<f64> = (0..m)
        .map(|j| abs_rho(&train.features().column(j), &label_col))
        .collect();
    let mut pair = vec![vec![0.0; m]; m];
    for a in 0..m {
        for b in (a + 1)..m {
            let r = abs_rho(&train.features().column(a), &train.features().column(b));
            pair[a][b] = r;
            pair[b][a] = r;
        }
    }

    let merit = |subset: &[usize]| {
        let k = subset.len() as f64;
        let rcf = subset.iter().map(|&j| class_corr[j]).sum::<f64>() / k;
        let rff = if subset.len() < 2 {
            0.0
        } else {
            let mut total = 0.0;
            for (i, &a) in subset.iter().enumerate() {
                for &b in &subset[i + 1..] {
                    total += pair[a][b];
                }
            }
            total / (k * (k - 1.0) / 2.0)
        };
        k * rcf / (k + k * (k - 1.0) * rff).sqrt()
    };

    let mut chosen: Vec<usize> = Vec::new();
    let mut best_merit = f64::NEG_INFINITY;
    loop {
        let mut candidate: Option<(usize, f64)> = None;
        for j in 0..m {
            if chosen.contains(&j) {
                continue;
            }
            let mut trial = chosen.clone();
            trial.push(j);
            let score = merit(&trial);
            let better = match candidate {
                Some((_, s)) => score > s,
                None => true,
            };
            if better {
                candidate = Some((j, score));
            }
        }
        match candidate {
            Some((j, score)) if score > best_merit || chosen.is_empty() => {
                chosen.push(j);
                best_merit = score;
            }
            _ => break,
        }
    }
    chosen.sort_unstable();
    chosen
}
