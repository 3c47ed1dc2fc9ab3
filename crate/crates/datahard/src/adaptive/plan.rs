use crate::complexity::{feature_measures, neighborhood_dataset_measures};
use crate::data::{apply_normalizer, fit_normalizer, Dataset, NormKind};
use crate::error::{Error, Result};
use crate::preprocess::{
    resample, select_features, FeatureSelectSpec, ResampleMethod, ResampleSpec, SelectMethod,
};
use serde::{Deserialize, Serialize};

/// One evaluated candidate of a stage: its name and the complexity
/// measure its output scored.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateScore {
    pub name: String,
    pub value: f64,
}

/// Outcome of one pipeline stage: which candidate won the argmin, at what
/// measure value, and every evaluated alternative.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageDecision {
    /// The complexity measure the stage minimizes (`N2` or `F1`).
    pub measure: String,
    pub chosen: String,
    /// The winning measure value; absent when no candidate could be
    /// evaluated and the stage fell back to the identity.
    pub chosen_value: Option<f64>,
    /// Successfully evaluated candidates, in the order they were tried.
    pub candidates: Vec<CandidateScore>,
}

/// The record of an adaptive preprocessing run: one decision per stage,
/// plus warnings for skipped candidates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PreprocessPlan {
    pub normalization: StageDecision,
    pub feature_selection: StageDecision,
    pub resampling: StageDecision,
    pub warnings: Vec<String>,
}

impl PreprocessPlan {
    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self)
            .map_err(|e| Error::InvalidArgument(format!("plan serialization: {e}")))
    }
}

struct StageOutcome {
    data: Dataset,
    decision: StageDecision,
    warnings: Vec<String>,
}

/// Run one stage: evaluate candidates in order, keep the strict argmin
/// (ties stay with the earlier candidate), skip failures.
fn run_stage(
    measure: &str,
    stage: &str,
    input: &Dataset,
    candidates: Vec<(&str, Result<Dataset>)>,
    score: impl Fn(&Dataset) -> Result<f64>,
) -> StageOutcome {
    let mut warnings = Vec::new();
    let mut scored = Vec::new();
    let mut best: Option<(f64, Dataset, String)> = None;
    for (name, produced) in candidates {
        let outcome = produced.and_then(|data| score(&data).map(|v| (v, data)));
        match outcome {
            Err(e) => warnings.push(format!("{stage} candidate {name} skipped: {e}")),
            Ok((value, data)) => {
                scored.push(CandidateScore { name: name.into(), value });
                if best.as_ref().is_none_or(|(b, _, _)| value < *b) {
                    best = Some((value, data, name.into()));
                }
            }
        }
    }
    match best {
        Some((value, data, chosen)) => StageOutcome {
            data,
            decision: StageDecision {
                measure: measure.into(),
                chosen,
                chosen_value: Some(value),
                candidates: scored,
            },
            warnings,
        },
        None => {
            warnings.push(format!("{stage}: no candidate could be evaluated; passing data through"));
            StageOutcome {
                data: input.clone(),
                decision: StageDecision {
                    measure: measure.into(),
                    chosen: "none".into(),
                    chosen_value: None,
                    candidates: scored,
                },
                warnings,
            }
        }
    }
}

/// Pick a preprocessing pipeline by measuring each candidate's output:
/// normalization by N2, then feature selection and resampling by F1,
/// each stage keeping the argmin over its fixed candidate list. The
/// error-cleaning resamplers are mandatory — there is no "none" in the
/// last stage — so even balanced data gets resampled.
pub fn adaptive_preprocess(train: &Dataset, seed: u64) -> Result<(Dataset, PreprocessPlan)> {
    train.require_both_classes()?;
    let mut warnings = Vec::new();

    let normalization = {
        let candidates = vec![
            (
                "standard",
                apply_normalizer(&fit_normalizer(train, NormKind::Standard), train),
            ),
            ("none", Ok(train.clone())),
        ];
        run_stage("N2", "normalization", train, candidates, |d| {
            Ok(neighborhood_dataset_measures(d, seed)?.n2)
        })
    };
    warnings.extend(normalization.warnings);
    let after_norm = normalization.data;

    let selection = {
        let methods = [
            SelectMethod::SkbAnova,
            SelectMethod::SkbMutual,
            SelectMethod::LinsvmImportance,
            SelectMethod::TreeImportance,
            SelectMethod::None,
        ];
        let candidates = methods
            .iter()
            .map(|&method| {
                let spec = FeatureSelectSpec { method, k: None, seed };
                (method.name(), select_features(&after_norm, &spec).map(|s| s.data))
            })
            .collect();
        run_stage("F1", "feature selection", &after_norm, candidates, |d| {
            Ok(feature_measures(d)?.f1)
        })
    };
    warnings.extend(selection.warnings);
    let after_select = selection.data;

    let resampling = {
        let methods = [
            ResampleMethod::Smote,
            ResampleMethod::BorderSmote,
            ResampleMethod::SmoteTomek,
            ResampleMethod::SmoteEnn,
        ];
        let candidates = methods
            .iter()
            .map(|&method| {
                let spec = ResampleSpec::new(method, seed);
                (method.name(), resample(&after_select, &spec).map(|r| r.data))
            })
            .collect();
        run_stage("F1", "resampling", &after_select, candidates, |d| {
            Ok(feature_measures(d)?.f1)
        })
    };
    warnings.extend(resampling.warnings);
    if resampling.decision.chosen_value.is_none() {
        return Err(Error::Resample(
            "adaptive preprocessing: every resampler failed".into(),
        ));
    }

    let plan = PreprocessPlan {
        normalization: normalization.decision,
        feature_selection: selection.decision,
        resampling: resampling.decision,
        warnings,
    };
    Ok((resampling.data, plan))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Mildly imbalanced overlapping blobs on two informative features.
    fn blobs() -> Dataset {
        let rows: Vec<Vec<f64>> = (0..24)
            .map(|i| {
                let t = i as f64;
                let base = if i < 15 { 0.0 } else { 2.5 };
                vec![base + (t * 1.7).sin(), base + (t * 2.3).cos()]
            })
            .collect();
        let labels: Vec<u8> = (0..24).map(|i| u8::from(i >= 15)).collect();
        Dataset::from_rows(&rows, &labels, "blobs").unwrap()
    }

    #[test]
    fn runs_are_deterministic() {
        let d = blobs();
        let (out_a, plan_a) = adaptive_preprocess(&d, 5).unwrap();
        let (out_b, plan_b) = adaptive_preprocess(&d, 5).unwrap();
        assert_eq!(out_a, out_b);
        assert_eq!(plan_a, plan_b);
        assert_eq!(plan_a.to_json().unwrap(), plan_b.to_json().unwrap());
    }

    #[test]
    fn recorded_values_match_independent_recomputation() {
        let d = blobs();
        let (_, plan) = adaptive_preprocess(&d, 5).unwrap();

        // Stage 1: recompute both normalization candidates.
        for c in &plan.normalization.candidates {
            let data = match c.name.as_str() {
                "standard" => {
                    apply_normalizer(&fit_normalizer(&d, NormKind::Standard), &d).unwrap()
                }
                _ => d.clone(),
            };
            let n2 = neighborhood_dataset_measures(&data, 5).unwrap().n2;
            assert_eq!(n2, c.value, "candidate {}", c.name);
        }
        let min = plan
            .normalization
            .candidates
            .iter()
            .map(|c| c.value)
            .fold(f64::INFINITY, f64::min);
        assert_eq!(plan.normalization.chosen_value, Some(min));

        // Stage 3: recompute the resampler F1 values on the stage input.
        let norm = match plan.normalization.chosen.as_str() {
            "standard" => apply_normalizer(&fit_normalizer(&d, NormKind::Standard), &d).unwrap(),
            _ => d.clone(),
        };
        let method: SelectMethod = plan.feature_selection.chosen.parse().unwrap();
        let spec = FeatureSelectSpec { method, k: None, seed: 5 };
        let selected = select_features(&norm, &spec).unwrap().data;
        for c in &plan.resampling.candidates {
            let method: ResampleMethod = c.name.parse().unwrap();
            let out = resample(&selected, &ResampleSpec::new(method, 5)).unwrap().data;
            let f1 = feature_measures(&out).unwrap().f1;
            assert_eq!(f1, c.value, "resampler {}", c.name);
        }
        let min = plan
            .resampling
            .candidates
            .iter()
            .map(|c| c.value)
            .fold(f64::INFINITY, f64::min);
        assert_eq!(plan.resampling.chosen_value, Some(min));
    }

    #[test]
    fn junk_scale_feature_makes_standardization_win() {
        // Class signal on feature 0; feature 1 is huge-scale noise that
        // drowns raw distances until standardization evens the scales.
        let rows: Vec<Vec<f64>> = (0..20)
            .map(|i| {
                let t = i as f64;
                let base = if i < 10 { 0.0 } else { 4.0 };
                vec![base + (t * 1.7).sin() * 0.3, ((t * 3.1).sin()) * 3000.0]
            })
            .collect();
        let labels: Vec<u8> = (0..20).map(|i| u8::from(i >= 10)).collect();
        let d = Dataset::from_rows(&rows, &labels, "noisy-scale").unwrap();
        let (_, plan) = adaptive_preprocess(&d, 3).unwrap();
        assert_eq!(plan.normalization.chosen, "standard");
        let by_name = |n: &str| {
            plan.normalization
                .candidates
                .iter()
                .find(|c| c.name == n)
                .unwrap()
                .value
        };
        assert!(by_name("standard") < by_name("none"));
    }

    #[test]
    fn dominant_scale_signal_keeps_raw_features() {
        // The separating feature carries the large scale; standardizing
        // promotes the small-scale noise feature and raises N2.
        let rows: Vec<Vec<f64>> = (0..20)
            .map(|i| {
                let t = i as f64;
                let base = if i < 10 { 0.0 } else { 4000.0 };
                vec![base + (t * 1.7).sin() * 100.0, (t * 3.1).sin() * 0.01]
            })
            .collect();
        let labels: Vec<u8> = (0..20).map(|i| u8::from(i >= 10)).collect();
        let d = Dataset::from_rows(&rows, &labels, "raw-scale").unwrap();
        let (_, plan) = adaptive_preprocess(&d, 3).unwrap();
        assert_eq!(plan.normalization.chosen, "none");
    }

    #[test]
    fn selector_tie_goes_to_the_first_candidate() {
        // skb_anova ranks features exactly like F1's discriminant ratio,
        // so it always retains the feature that defines F1 and ties the
        // identity candidate; the argmin then stays with skb_anova.
        let d = blobs();
        let (_, plan) = adaptive_preprocess(&d, 5).unwrap();
        let values: Vec<f64> = plan.feature_selection.candidates.iter().map(|c| c.value).collect();
        let none_value = plan
            .feature_selection
            .candidates
            .iter()
            .find(|c| c.name == "none")
            .unwrap()
            .value;
        let min = values.iter().cloned().fold(f64::INFINITY, f64::min);
        if (none_value - min).abs() < 1e-15 {
            let first_min = &plan
                .feature_selection
                .candidates
                .iter()
                .find(|c| c.value <= min)
                .unwrap()
                .name;
            assert_eq!(&plan.feature_selection.chosen, first_min);
        }
    }

    #[test]
    fn resampler_choice_is_the_argmin_of_the_four() {
        // Overlap noise: majority points planted inside the minority
        // cluster, which cleaning resamplers can remove.
        let mut rows: Vec<Vec<f64>> = (0..26)
            .map(|i| {
                let t = i as f64;
                let base = if i < 16 { 0.0 } else { 3.0 };
                vec![base + (t * 1.7).sin() * 0.6, base + (t * 2.3).cos() * 0.6]
            })
            .collect();
        let mut labels: Vec<u8> = (0..26).map(|i| u8::from(i >= 16)).collect();
        // Two majority intruders deep in minority territory.
        rows.push(vec![3.1, 2.9]);
        labels.push(0);
        rows.push(vec![2.8, 3.2]);
        labels.push(0);
        let d = Dataset::from_rows(&rows, &labels, "noisy-boundary").unwrap();
        let (out, plan) = adaptive_preprocess(&d, 7).unwrap();
        let min = plan
            .resampling
            .candidates
            .iter()
            .map(|c| c.value)
            .fold(f64::INFINITY, f64::min);
        assert_eq!(plan.resampling.chosen_value, Some(min));
        let winner = plan
            .resampling
            .candidates
            .iter()
            .find(|c| c.value == min)
            .unwrap();
        assert_eq!(plan.resampling.chosen, winner.name);
        assert_eq!(out.n_features(), {
            let m: SelectMethod = plan.feature_selection.chosen.parse().unwrap();
            if m == SelectMethod::None { 2 } else { 1 }
        });
        // Cleaning beats plain SMOTE here: the intruders inflate the
        // minority class's apparent spread until they are removed.
        let by_name = |n: &str| {
            plan.resampling
                .candidates
                .iter()
                .find(|c| c.name == n)
                .map(|c| c.value)
        };
        if let (Some(enn), Some(smote)) = (by_name("smote_enn"), by_name("smote")) {
            assert!(enn <= smote, "enn {enn} vs smote {smote}");
        }
    }

    #[test]
    fn plan_serializes_with_candidate_lists() {
        let d = blobs();
        let (_, plan) = adaptive_preprocess(&d, 5).unwrap();
        let json = plan.to_json().unwrap();
        let back: PreprocessPlan = serde_json::from_str(&json).unwrap();
        assert_eq!(back, plan);
        assert_eq!(plan.normalization.measure, "N2");
        assert_eq!(plan.feature_selection.measure, "F1");
        assert_eq!(plan.resampling.measure, "F1");
        assert!(plan.normalization.candidates.len() <= 2);
        assert!(plan.feature_selection.candidates.len() <= 5);
        assert!(!plan.resampling.candidates.is_empty());
        assert!(plan.resampling.candidates.len() <= 4);
    }

    #[test]
    fn resampled_output_is_balanced_for_plain_smote_choice() {
        let d = blobs();
        let (out, plan) = adaptive_preprocess(&d, 5).unwrap();
        if plan.resampling.chosen == "smote" {
            let (p, n) = out.class_counts();
            assert_eq!(p, n);
        }
    }
}
