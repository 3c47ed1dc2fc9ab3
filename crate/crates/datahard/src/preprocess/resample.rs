use crate::data::{distance_matrix, Dataset, Features};
use crate::error::{Error, Result};
use crate::rng::{rng, Rng};
use rand::Rng as _;
use serde::{Deserialize, Serialize};

/// Class-rebalancing method.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ResampleMethod {
    Smote,
    BorderSmote,
    Rus,
    SmoteTomek,
    SmoteEnn,
}

impl ResampleMethod {
    pub const ALL: [ResampleMethod; 5] = [
        ResampleMethod::Smote,
        ResampleMethod::BorderSmote,
        ResampleMethod::Rus,
        ResampleMethod::SmoteTomek,
        ResampleMethod::SmoteEnn,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ResampleMethod::Smote => "smote",
            ResampleMethod::BorderSmote => "border_smote",
            ResampleMethod::Rus => "rus",
            ResampleMethod::SmoteTomek => "smote_tomek",
            ResampleMethod::SmoteEnn => "smote_enn",
        }
    }
}

impl std::str::FromStr for ResampleMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ResampleMethod::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown resampling method {s:?}")))
    }
}

/// How to rebalance: method, neighborhood size, seed, and the target
/// minority/majority ratio (1.0 balances the classes exactly).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResampleSpec {
    pub method: ResampleMethod,
    pub k: usize,
    pub seed: u64,
    pub target_ratio: f64,
}

impl ResampleSpec {
    pub fn new(method: ResampleMethod, seed: u64) -> Self {
        Self {
            method,
            k: 5,
            seed,
            target_ratio: 1.0,
        }
    }
}

impl std::str::FromStr for ResampleSpec {
    type Err = Error;

    /// Parses `method` or `method:k=5,ratio=1.0`.
    fn from_str(s: &str) -> Result<Self> {
        let (name, args) = match s.split_once(':') {
            Some((n, a)) => (n, Some(a)),
            None => (s, None),
        };
        let mut spec = ResampleSpec::new(name.parse()?, 0);
        if let Some(args) = args {
            for pair in args.split(',').filter(|p| !p.is_empty()) {
                let (key, value) = pair.split_once('=').ok_or_else(|| {
                    Error::InvalidArgument(format!("expected key=value, got {pair:?}"))
                })?;
                match key {
                    "k" => {
                        spec.k = value.parse().map_err(|_| {
                            Error::InvalidArgument(format!("bad k value {value:?}"))
                        })?;
                    }
                    "ratio" => {
                        spec.target_ratio = value.parse().map_err(|_| {
                            Error::InvalidArgument(format!("bad ratio value {value:?}"))
                        })?;
                    }
                    "seed" => {
                        spec.seed = value.parse().map_err(|_| {
                            Error::InvalidArgument(format!("bad seed value {value:?}"))
                        })?;
                    }
                    _ => {
                        return Err(Error::InvalidArgument(format!(
                            "unknown resample option {key:?}"
                        )))
                    }
                }
            }
        }
        if spec.k < 1 {
            return Err(Error::InvalidArgument("resample k must be ≥ 1".into()));
        }
        Ok(spec)
    }
}

/// A resampling result: the new dataset plus any warnings (empty-danger
/// fallbacks, cleaning that would have emptied a class, ...).
#[derive(Debug, Clone)]
pub struct Resampled {
    pub data: Dataset,
    pub warnings: Vec<String>,
}

/// Rebalance a training set. Synthetic points are convex combinations of
/// a minority point and one of its k nearest minority neighbors; cleaning
/// variants then drop points near the class boundary. If cleaning would
/// empty a class the pre-cleaning balanced set is returned with a warning.
pub fn resample(train: &Dataset, spec: &ResampleSpec) -> Result<Resampled> {
    train.require_both_classes()?;
    if spec.k < 1 {
        return Err(Error::InvalidArgument("resample k must be ≥ 1".into()));
    }
    if !(spec.target_ratio > 0.0 && spec.target_ratio <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "target ratio must be in (0, 1], got {}",
            spec.target_ratio
        )));
    }
    let mut rng = rng(spec.seed);
    match spec.method {
        ResampleMethod::Smote => smote(train, spec, &mut rng, false),
        ResampleMethod::BorderSmote => smote(train, spec, &mut rng, true),
        ResampleMethod::Rus => rus(train, spec, &mut rng),
        ResampleMethod::SmoteTomek => {
            let balanced = smote(train, spec, &mut rng, false)?;
            clean(balanced, tomek_majority_removals(train))
        }
        ResampleMethod::SmoteEnn => {
            let balanced = smote(train, spec, &mut rng, false)?;
            clean(balanced, enn_removals)
        }
    }
}

/// The label with fewer members; ties make class 1 the "minority" so an
/// already-balanced set flows through unchanged.
pub(crate) fn minority_label(train: &Dataset) -> u8 {
    let (pos, neg) = train.class_counts();
    u8::from(pos <= neg)
}

fn smote(
    train: &Dataset,
    spec: &ResampleSpec,
    rng: &mut Rng,
    borderline: bool,
) -> Result<Resampled> {
    let minority = minority_label(train);
    let minority_idx = train.class_indices(minority);
    let n_min = minority_idx.len();
    let n_maj = train.n_instances() - n_min;
    let target = (spec.target_ratio * n_maj as f64).round() as usize;
    if target <= n_min {
        return Ok(Resampled {
            data: train.clone(),
            warnings: Vec::new(),
        });
    }
    if n_min < 2 {
        return Err(Error::Resample(format!(
            "minority class of size {n_min} cannot be interpolated"
        )));
    }
    let k = spec.k.min(n_min - 1);

    // k nearest minority neighbors of each minority point, ties by index.
    let neighbor_lists: Vec<Vec<usize>> = minority_idx
        .iter()
        .map(|&i| {
            let mut others: Vec<(f64, usize)> = minority_idx
                .iter()
                .filter(|&&z| z != i)
                .map(|&z| (crate::data::euclidean(train.row(i), train.row(z)), z))
                .collect();
            others.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)));
            others[..k].iter().map(|&(_, z)| z).collect()
        })
        .collect();

    // Borderline variant draws bases only from the danger set: minority
    // points whose k nearest overall neighbors are at least half but not
    // entirely majority.
    let mut warnings = Vec::new();
    let base_pool: Vec<usize> = if borderline {
        let dist = distance_matrix(train);
        let danger: Vec<usize> = (0..n_min)
            .filter(|&p| {
                let x = minority_idx[p];
                let maj = dist.neighbors_of(x)[..spec.k.min(train.n_instances() - 1)]
                    .iter()
                    .filter(|&&z| train.label(z) != minority)
                    .count();
                let k_all = spec.k.min(train.n_instances() - 1);
                2 * maj >= k_all && maj < k_all
            })
            .collect();
        if danger.is_empty() {
            warnings.push("no borderline minority instances; data returned unchanged".into());
            return Ok(Resampled {
                data: train.clone(),
                warnings,
            });
        }
        danger
    } else {
        (0..n_min).collect()
    };

    let mut rows: Vec<Vec<f64>> = (0..train.n_instances())
        .map(|i| train.row(i).to_vec())
        .collect();
    let mut labels = train.labels().to_vec();
    for _ in 0..(target - n_min) {
        let base = base_pool[rng.gen_range(0..base_pool.len())];
        let x = train.row(minority_idx[base]);
        let z = train.row(neighbor_lists[base][rng.gen_range(0..k)]);
        let delta: f64 = rng.gen_range(0.0..=1.0);
        rows.push(x.iter().zip(z).map(|(a, b)| a + delta * (b - a)).collect());
        labels.push(minority);
    }
    let data = Dataset::new(
        Features::from_rows(&rows)?,
        labels,
        train.feature_names().to_vec(),
        format!("{}-{}", train.id(), if borderline { "bsmote" } else { "smote" }),
    )?;
    Ok(Resampled { data, warnings })
}

fn rus(train: &Dataset, spec: &ResampleSpec, rng: &mut Rng) -> Result<Resampled> {
    let minority = minority_label(train);
    let minority_idx = train.class_indices(minority);
    let mut majority_idx = train.class_indices(1 - minority);
    let keep_majority = ((minority_idx.len() as f64) / spec.target_ratio).round() as usize;
    if keep_majority >= majority_idx.len() {
        return Ok(Resampled {
            data: train.clone(),
            warnings: Vec::new(),
        });
    }
    for pos in (1..majority_idx.len()).rev() {
        let j = rng.gen_range(0..=pos);
        majority_idx.swap(pos, j);
    }
    let mut kept: Vec<usize> = minority_idx
        .into_iter()
        .chain(majority_idx.into_iter().take(keep_majority))
        .collect();
    kept.sort_unstable();
    Ok(Resampled {
        data: train.subset(&kept, format!("{}-rus", train.id()))?,
        warnings: Vec::new(),
    })
}

/// Apply a removal rule to a balanced set; fall back with a warning if a
/// class would be emptied.
fn clean(
    balanced: Resampled,
    removals: impl FnOnce(&Dataset) -> Vec<usize>,
) -> Result<Resampled> {
    let drop = removals(&balanced.data);
    if drop.is_empty() {
        return Ok(balanced);
    }
    let dropped: std::collections::HashSet<usize> = drop.into_iter().collect();
    let kept: Vec<usize> = (0..balanced.data.n_instances())
        .filter(|i| !dropped.contains(i))
        .collect();
    let survivors = [0u8, 1u8].map(|c| kept.iter().filter(|&&i| balanced.data.label(i) == c).count());
    if survivors.contains(&0) || kept.len() < 2 {
        let mut warnings = balanced.warnings;
        warnings.push(
            "cleaning would empty a class; returning the pre-cleaning balanced set".into(),
        );
        return Ok(Resampled {
            data: balanced.data,
            warnings,
        });
    }
    let id = format!("{}-cleaned", balanced.data.id());
    Ok(Resampled {
        data: balanced.data.subset(&kept, id)?,
        warnings: balanced.warnings,
    })
}

/// Indices to drop under Tomek-link cleaning: for each pair of mutual
/// nearest neighbors with opposite labels, the member of the originally
/// majority class.
fn tomek_majority_removals(original: &Dataset) -> impl FnOnce(&Dataset) -> Vec<usize> {
    let majority = 1 - minority_label(original);
    move |data: &Dataset| {
        let dist = distance_matrix(data);
        let nn: Vec<usize> = (0..data.n_instances())
            .map(|i| dist.neighbors_of(i)[0])
            .collect();
        let mut drop = Vec::new();
        for a in 0..data.n_instances() {
            let b = nn[a];
            if a < b && nn[b] == a && data.label(a) != data.label(b) {
                let victim = if data.label(a) == majority { a } else { b };
                drop.push(victim);
            }
        }
        drop
    }
}

/// Indices misclassified by a 3-NN vote over the set itself (either class).
fn enn_removals(data: &Dataset) -> Vec<usize> {
    let dist = distance_matrix(data);
    let k = 3.min(data.n_instances() - 1);
    (0..data.n_instances())
        .filter(|&i| {
            let votes = dist.neighbors_of(i)[..k]
                .iter()
                .filter(|&&z| data.label(z) == 1)
                .count();
            let predicted = u8::from(2 * votes > k);
            predicted != data.label(i)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn imbalanced(n_min: usize, n_maj: usize) -> Dataset {
        let rows: Vec<Vec<f64>> = (0..n_min)
            .map(|i| vec![i as f64 * 0.01, 1.0])
            .chain((0..n_maj).map(|i| vec![5.0 + i as f64 * 0.01, -1.0]))
            .collect();
        let labels: Vec<u8> = (0..n_min + n_maj).map(|i| u8::from(i < n_min)).collect();
        Dataset::from_rows(&rows, &labels, "imb").unwrap()
    }

    #[test]
    fn smote_balances_and_keeps_originals() {
        let d = imbalanced(4, 12);
        let spec = ResampleSpec::new(ResampleMethod::Smote, 7);
        let out = resample(&d, &spec).unwrap();
        let (pos, neg) = out.data.class_counts();
        assert_eq!((pos, neg), (12, 12));
        // Original rows lead, in order.
        for i in 0..d.n_instances() {
            assert_eq!(out.data.row(i), d.row(i));
            assert_eq!(out.data.label(i), d.label(i));
        }
    }

    #[test]
    fn smote_synthetic_lies_on_segment() {
        let d = Dataset::from_rows(
            &[vec![0.0, 0.0], vec![1.0, 1.0], vec![9.0, 0.0], vec![9.0, 1.0], vec![9.0, 2.0]],
            &[1, 1, 0, 0, 0],
            "seg",
        )
        .unwrap();
        let spec = ResampleSpec {
            k: 1,
            ..ResampleSpec::new(ResampleMethod::Smote, 3)
        };
        let out = resample(&d, &spec).unwrap();
        for i in 5..out.data.n_instances() {
            let row = out.data.row(i);
            // On the segment (0,0)-(1,1): coordinates equal.
            assert!((row[0] - row[1]).abs() < 1e-12, "{row:?}");
            assert!((0.0..=1.0).contains(&row[0]));
        }
    }

    #[test]
    fn smote_is_seeded() {
        let d = imbalanced(4, 12);
        let spec = ResampleSpec::new(ResampleMethod::Smote, 7);
        let a = resample(&d, &spec).unwrap();
        let b = resample(&d, &spec).unwrap();
        assert_eq!(a.data, b.data);
        let c = resample(
            &d,
            &ResampleSpec::new(ResampleMethod::Smote, 8),
        )
        .unwrap();
        assert_ne!(a.data, c.data);
    }

    #[test]
    fn smote_rejects_singleton_minority() {
        let d = imbalanced(1, 5);
        let spec = ResampleSpec::new(ResampleMethod::Smote, 7);
        assert!(matches!(resample(&d, &spec), Err(Error::Resample(_))));
    }

    #[test]
    fn rus_subsets_majority_only() {
        let d = imbalanced(4, 12);
        let spec = ResampleSpec::new(ResampleMethod::Rus, 7);
        let out = resample(&d, &spec).unwrap();
        let (pos, neg) = out.data.class_counts();
        assert_eq!((pos, neg), (4, 4));
        // Every output row exists in the input.
        for i in 0..out.data.n_instances() {
            assert!((0..d.n_instances()).any(|j| d.row(j) == out.data.row(i)
                && d.label(j) == out.data.label(i)));
        }
    }

    #[test]
    fn border_smote_without_danger_warns() {
        // Well-separated classes: no minority point sees majority neighbors.
        let d = imbalanced(6, 12);
        let spec = ResampleSpec::new(ResampleMethod::BorderSmote, 7);
        let out = resample(&d, &spec).unwrap();
        assert_eq!(out.data, d);
        assert_eq!(out.warnings.len(), 1);
    }

    #[test]
    fn border_smote_draws_from_danger_zone() {
        // Minority points at 0..4 with majority interleaved near 2..4:
        // the boundary minority instances are in danger, the far ones not.
        let rows: Vec<Vec<f64>> = vec![
            vec![0.0], vec![0.2], vec![2.0], vec![2.2],          // minority
            vec![2.1], vec![2.3], vec![2.5], vec![2.7], vec![3.0], vec![3.2], vec![3.4], vec![3.6],
        ];
        let labels: Vec<u8> = (0..12).map(|i| u8::from(i < 4)).collect();
        let d = Dataset::from_rows(&rows, &labels, "danger").unwrap();
        let spec = ResampleSpec::new(ResampleMethod::BorderSmote, 7);
        let out = resample(&d, &spec).unwrap();
        assert!(out.warnings.is_empty());
        let (pos, neg) = out.data.class_counts();
        assert_eq!((pos, neg), (8, 8));
        // Synthetics interpolate from danger points (near 2), never from
        // the isolated pair at 0 exclusively — all lie within minority hull.
        for i in 12..out.data.n_instances() {
            let v = out.data.row(i)[0];
            assert!((0.0..=2.2).contains(&v));
        }
    }

    #[test]
    fn hybrid_cleaning_removes_boundary_points() {
        // Overlapping classes so ENN/Tomek have something to clean.
        let rows: Vec<Vec<f64>> = (0..6)
            .map(|i| vec![i as f64 * 0.3])
            .chain((0..14).map(|i| vec![1.0 + i as f64 * 0.3]))
            .collect();
        let labels: Vec<u8> = (0..20).map(|i| u8::from(i < 6)).collect();
        let d = Dataset::from_rows(&rows, &labels, "overlap").unwrap();
        for method in [ResampleMethod::SmoteTomek, ResampleMethod::SmoteEnn] {
            let out = resample(&d, &ResampleSpec::new(method, 7)).unwrap();
            out.data.require_both_classes().unwrap();
            // Cleaning only ever removes rows from the balanced set.
            assert!(out.data.n_instances() <= 28, "{method:?}");
        }
    }

    #[test]
    fn spec_strings_parse() {
        let spec: ResampleSpec = "smote_enn:k=3,ratio=0.5".parse().unwrap();
        assert_eq!(spec.method, ResampleMethod::SmoteEnn);
        assert_eq!(spec.k, 3);
        assert_eq!(spec.target_ratio, 0.5);
        assert!("smote:k=zero".parse::<ResampleSpec>().is_err());
        assert!("upsample".parse::<ResampleSpec>().is_err());
    }
}
